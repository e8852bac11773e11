# tests/test_config.py
import pytest

import config
from sampling.criteria import MID
from sampling.errors import DomainError


class TestLoadSettings:
    def test_defaults(self):
        settings = config.load_settings()
        assert settings.criterion() == MID
        assert settings.n_ceiling == config.N_CEILING

    def test_config_file(self, tmp_path):
        path = tmp_path / "plan.cfg"
        path.write_text("# tighter LQ point\np_b = 0.05\nP_b=0.1\nn_ceiling = 5000\n", encoding="utf-8")
        settings = config.load_settings(path)
        assert (settings.p_b, settings.P_b, settings.n_ceiling) == (0.05, 0.1, 5000)
        assert settings.p_a == config.P_A

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "plan.cfg"
        path.write_text("p_b = 0.05\n", encoding="utf-8")
        assert config.load_settings(path, p_b=0.08).p_b == 0.08

    def test_unset_flags_keep_file(self, tmp_path):
        path = tmp_path / "plan.cfg"
        path.write_text("P_a = 0.9\n", encoding="utf-8")
        assert config.load_settings(path, P_a=None).P_a == 0.9

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "plan.cfg"
        path.write_text("p_c = 0.5\n", encoding="utf-8")
        with pytest.raises(DomainError):
            config.load_settings(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DomainError):
            config.load_settings(tmp_path / "nope.cfg")

    @pytest.mark.parametrize("overrides", [{"p_a": "abc"}, {"p_a": 1.5}, {"n_ceiling": 0}, {"p_a": 0.09}])
    def test_invalid(self, overrides):
        with pytest.raises(DomainError):
            config.load_settings(**overrides)
