# config.py
import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from sampling.criteria import TwoPointCriterion
from sampling.errors import DomainError

load_dotenv()

ROOT_DIR = Path(__file__).parent
DATA_DIR = ROOT_DIR / "data"

# Two-point criterion defaults (AQL point p_a/P_a, LQ point p_b/P_b)
P_A = float(os.getenv("SAMPLING_P_A", "0.01"))
BIG_P_A = float(os.getenv("SAMPLING_BIG_P_A", "0.95"))
P_B = float(os.getenv("SAMPLING_P_B", "0.07"))
BIG_P_B = float(os.getenv("SAMPLING_BIG_P_B", "0.05"))

# Search ceilings
N_CEILING = int(os.getenv("SAMPLING_N_CEILING", "1000000"))         # largest sample size tried
LOT_CEILING = int(os.getenv("SAMPLING_LOT_CEILING", "100000000"))   # largest lot size galloped to
ORACLE_MAX_N = int(os.getenv("SAMPLING_ORACLE_MAX_N", "100000"))    # rational oracle size guard

# Data files
SCHEME_FILE = Path(os.getenv("SAMPLING_SCHEME_FILE", str(DATA_DIR / "simplified_scheme.json")))
ISO_FILE = Path(os.getenv("SAMPLING_ISO_FILE", str(DATA_DIR / "iso_reference_plans.json")))

LOG_LEVEL = os.getenv("SAMPLING_LOG_LEVEL", "WARNING").upper()

# Keys accepted in a --config file
CONFIG_KEYS = ("p_a", "P_a", "p_b", "P_b", "n_ceiling")


class Settings(BaseModel):
    """Merged run settings: flags > config file > environment."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    p_a: float = Field(P_A, gt=0, lt=1)
    P_a: float = Field(BIG_P_A, gt=0, lt=1)
    p_b: float = Field(P_B, gt=0, lt=1)
    P_b: float = Field(BIG_P_B, gt=0, lt=1)
    n_ceiling: int = Field(N_CEILING, ge=1)

    def criterion(self) -> TwoPointCriterion:
        return TwoPointCriterion.build(p_a=self.p_a, P_a=self.P_a, p_b=self.p_b, P_b=self.P_b)


def read_config_file(path: Path) -> Dict[str, str]:
    """Parse a `key = value` file; unknown keys are rejected."""
    if not path.is_file():
        raise DomainError(f"config file not found: {path}")
    raw = dotenv_values(path, encoding="utf-8")
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise DomainError(f"unknown config key(s) in {path}: {', '.join(unknown)}")
    return {k: v for k, v in raw.items() if v is not None}


def load_settings(config_file: Optional[Path] = None, **overrides) -> Settings:
    values: Dict[str, object] = {}
    if config_file is not None:
        values.update(read_config_file(Path(config_file)))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        settings = Settings(**values)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(part) for part in err["loc"])
        raise DomainError(f"invalid setting {field}: {err['msg']}") from e
    settings.criterion()
    return settings
