"""Command-line front end for attribute single-sampling plans.

All inputs are fractions (0.01, not 1%); table output shows probabilities as
fraction and percent, csv and json emit plain fractions.

    python cli.py oc --model binomial --n 88 --c 2 --pmax 0.12
    python cli.py check --n 15 --c 0 --N 16
    python cli.py minimize --c 2
    python cli.py interval --n 55 --c 1
    python cli.py table --c 0 --format csv
    python cli.py scheme --N 400
    python cli.py recommend --N 5000 --preference min-producer-risk
    python cli.py simulate --M 70 --N 1000 --n 42 --c 0 --trials 100000 --seed 7
    python cli.py audit --N 1947 --n 65 --c 1

Exit status: 0 success or admissible, 1 inadmissible or no plan,
2 usage error, 3 numerical failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

import config
from sampling.criteria import (
    TwoPointCriterion,
    admissible_binomial,
    admissible_discrete,
    admissible_extended,
    admissible_poisson,
)
from sampling.dist import OcKind, OcModel, SamplingPlan
from sampling.errors import (
    DomainError,
    NoRootError,
    NoSolutionError,
    NumericalError,
    SchemeValidationError,
    StructuralInadmissibilityError,
)
from sampling.optimize import (
    interval_table,
    lot_interval,
    min_sample_binomial,
    min_sample_discrete,
    min_sample_extended,
    min_sample_poisson,
)
from sampling.oracle import audit_boundary, monte_carlo_oc
from sampling.report import (
    FORMATS,
    AuditRecord,
    ComparisonRecord,
    IntervalRecord,
    OcPointRecord,
    PlanRecord,
    RecommendationRecord,
    Record,
    SchemeRecord,
    SimulationRecord,
    TableRecord,
    VerdictRecord,
    write_records,
)
from sampling.scheme import compare, recommend_plan, simplified_scheme


log = logging.getLogger("cli")

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _emit(args, records: List[Record]) -> None:
    write_records(records, args.format, sys.stdout)


def _plan(args) -> SamplingPlan:
    return SamplingPlan(args.n, args.c)


# ────────────────────────────────────────────────────────────
# Subcommands
# ────────────────────────────────────────────────────────────

def _quality_grid(args) -> np.ndarray:
    if args.p:
        return np.asarray(args.p, dtype=np.float64)
    if not 0.0 <= args.pmin < args.pmax <= 1.0 or args.step <= 0:
        raise DomainError("need 0 <= pmin < pmax <= 1 and step > 0")
    count = int(np.floor((args.pmax - args.pmin) / args.step + 1e-9)) + 1
    return np.round(args.pmin + args.step * np.arange(count), 12)


def cmd_oc(args, crit: TwoPointCriterion) -> int:
    kind = OcKind(args.model)
    plan = _plan(args)
    if kind in (OcKind.BINOMIAL, OcKind.POISSON):
        if args.N is not None:
            raise DomainError(f"--N does not apply to the {kind.value} model")
        model = OcModel(kind)
        records = [OcPointRecord(p=float(p), oc=model.oc(float(p), plan), kind="curve") for p in _quality_grid(args)]
        _emit(args, records)
        return EXIT_OK

    if args.N is None:
        raise DomainError(f"the {kind.value} model needs --N")
    curve = OcModel.hypergeometric_extended(args.N)
    records = [OcPointRecord(p=float(p), oc=curve.oc(float(p), plan), kind="curve") for p in _quality_grid(args)]
    if kind is OcKind.HYPERGEOMETRIC_EXACT:
        # the lot's actual quality levels M/N, exact model
        exact = OcModel.hypergeometric_exact(args.N)
        lo, hi = (min(args.p), max(args.p)) if args.p else (args.pmin, args.pmax)
        for M in range(args.N + 1):
            p = M / args.N
            if lo - 1e-12 <= p <= hi + 1e-12:
                records.append(OcPointRecord(p=p, oc=exact.oc(p, plan), kind="grid"))
    _emit(args, records)
    return EXIT_OK


def cmd_check(args, crit: TwoPointCriterion) -> int:
    plan = _plan(args)
    if args.discrete and args.N is None:
        raise DomainError("--discrete needs --N")
    if args.N is not None and args.model != "binomial":
        raise DomainError("--model applies only without --N")
    if args.N is None:
        model = args.model
        verdict = (admissible_poisson if model == "poisson" else admissible_binomial)(plan, crit)
    elif args.discrete:
        model = "discrete"
        verdict = admissible_discrete(args.N, plan, crit)
    else:
        model = "extended"
        verdict = admissible_extended(args.N, plan, crit)
    _emit(args, [VerdictRecord.from_verdict(plan.n, plan.c, args.N, model, verdict)])
    return EXIT_OK if verdict.admissible else EXIT_REJECTED


def cmd_minimize(args, crit: TwoPointCriterion) -> int:
    model = args.model or ("extended" if args.N is not None else "binomial")
    if model in ("binomial", "poisson"):
        if args.N is not None:
            raise DomainError(f"--N does not apply to the {model} model")
        fn = min_sample_poisson if model == "poisson" else min_sample_binomial
        plan = fn(args.c, crit, ceiling=args.n_ceiling)
    else:
        if args.N is None:
            raise DomainError(f"the {model} model needs --N")
        fn = min_sample_discrete if model == "discrete" else min_sample_extended
        plan = fn(args.N, args.c, crit)
    _emit(args, [PlanRecord(N=args.N, n=plan.n, c=plan.c, model=model)])
    return EXIT_OK


def cmd_interval(args, crit: TwoPointCriterion) -> int:
    interval = lot_interval(_plan(args), crit)
    _emit(args, [IntervalRecord.from_interval(args.n, args.c, interval)])
    return EXIT_OK if interval is not None else EXIT_REJECTED


def cmd_table(args, crit: TwoPointCriterion) -> int:
    rows = interval_table(args.c, crit, n_max=args.n_max, workers=args.workers)
    _emit(args, [TableRecord.from_row(row) for row in rows])
    return EXIT_OK


def cmd_scheme(args, crit: TwoPointCriterion) -> int:
    if args.N is None:
        records: List[Record] = []
        for row in simplified_scheme(crit):
            records.extend(SchemeRecord.from_row(row))
    else:
        records = list(ComparisonRecord.from_comparison(compare(args.N, crit)))
    _emit(args, records)
    return EXIT_OK


def cmd_recommend(args, crit: TwoPointCriterion) -> int:
    rec = recommend_plan(args.N, args.preference, crit)
    _emit(args, [RecommendationRecord.from_recommendation(rec)])
    return EXIT_OK


def cmd_simulate(args, crit: TwoPointCriterion) -> int:
    plan = _plan(args)
    res = monte_carlo_oc(args.M, args.N, plan, args.trials, args.seed, shards=args.shards, workers=args.workers)
    _emit(args, [SimulationRecord.from_result(args.M, args.N, plan.n, plan.c, res)])
    return EXIT_OK


def cmd_audit(args, crit: TwoPointCriterion) -> int:
    audit = audit_boundary(args.N, _plan(args), crit, dps=args.dps)
    _emit(args, [AuditRecord.from_audit(audit)])
    return EXIT_OK if audit.agrees else EXIT_NUMERICAL


# ────────────────────────────────────────────────────────────
# Parser
# ────────────────────────────────────────────────────────────

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", type=Path, help="key = value file (p_a, P_a, p_b, P_b, n_ceiling)")
    common.add_argument("--pa", dest="p_a", type=float, help="AQL quality level p_a")
    common.add_argument("--Pa", dest="P_a", type=float, help="acceptance bound at the AQL point")
    common.add_argument("--pb", dest="p_b", type=float, help="LQ quality level p_b")
    common.add_argument("--Pb", dest="P_b", type=float, help="acceptance bound at the LQ point")
    common.add_argument("--n-ceiling", dest="n_ceiling", type=int, help="largest sample size searched")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--log-level", default=config.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    return common


def _plan_options(p: argparse.ArgumentParser, n_required: bool = True) -> None:
    p.add_argument("--n", type=int, required=n_required, help="sample size")
    p.add_argument("--c", type=int, required=True, help="acceptance number")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    ap = argparse.ArgumentParser(prog="cli.py", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)
        p.set_defaults(handler=handler)
        return p

    p = add("oc", cmd_oc, "OC curve data series")
    p.add_argument("--model", choices=[k.value for k in OcKind], default="binomial")
    _plan_options(p)
    p.add_argument("--N", type=int, help="lot size (hypergeometric models)")
    p.add_argument("--pmin", type=float, default=0.0)
    p.add_argument("--pmax", type=float, default=0.15)
    p.add_argument("--step", type=float, default=0.001)
    p.add_argument("--p", type=float, nargs="+", help="explicit quality levels instead of a grid")

    p = add("check", cmd_check, "admissibility verdict for a plan")
    _plan_options(p)
    p.add_argument("--N", type=int, help="lot size; uses the gamma-extended predicate")
    p.add_argument("--discrete", action="store_true", help="evaluate on the lot's quality levels M/N")
    p.add_argument("--model", choices=["binomial", "poisson"], default="binomial")

    p = add("minimize", cmd_minimize, "smallest admissible sample size")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--model", choices=["binomial", "poisson", "extended", "discrete"])

    p = add("interval", cmd_interval, "admissible lot sizes of a plan")
    _plan_options(p)

    p = add("table", cmd_table, "lot-size intervals with endpoint risks")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, help="largest sample size tabulated")
    p.add_argument("--workers", type=int, default=1)

    p = add("scheme", cmd_scheme, "simplified scheme, or its comparison with ISO 2859-1 at --N")
    p.add_argument("--N", type=int)

    p = add("recommend", cmd_recommend, "pick a plan from the simplified scheme")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--preference", choices=["min-sample", "min-producer-risk"], default="min-sample")

    p = add("simulate", cmd_simulate, "Monte Carlo acceptance rate")
    p.add_argument("--M", type=int, required=True, help="defectives in the lot")
    p.add_argument("--N", type=int, required=True)
    _plan_options(p)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = add("audit", cmd_audit, "high-precision recheck of both admissibility inequalities")
    p.add_argument("--N", type=int, required=True)
    _plan_options(p)
    p.add_argument("--dps", type=int, default=40, help="decimal digits")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(args.log_level)

    try:
        overrides: Dict[str, object] = {k: getattr(args, k) for k in config.CONFIG_KEYS}
        settings = config.load_settings(args.config, **overrides)
        args.n_ceiling = settings.n_ceiling
        return args.handler(args, settings.criterion())
    except StructuralInadmissibilityError as e:
        log.error("%s (lot-size lower bound N=%d)", e, e.bound)
        return EXIT_REJECTED
    except NoSolutionError as e:
        log.error("%s", e)
        return EXIT_REJECTED
    except DomainError as e:
        log.error("usage: %s", e)
        return EXIT_USAGE
    except (NumericalError, NoRootError, SchemeValidationError) as e:
        log.error("numerical failure: %s", e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
