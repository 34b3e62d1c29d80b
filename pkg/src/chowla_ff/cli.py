"""Command-line front end.

    chowla-ff corr --p 3 --n 2 --alpha 0 --alpha 1 --eps 1,1
    chowla-ff sweep --n 2 --r 2 --eps 1,2 --q 3,5,7,9,11,13
    chowla-ff badset --p 7 --n 3 --alpha 0 --alpha 1 --eps 1,1
    chowla-ff verify --p 3 --k 2 --n 3
    chowla-ff selftest [--quick]

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad configuration,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

from .badset import badset_scan
from .budget import check_budget, default_budget
from .chowla import (
    SWEEP_COLUMNS,
    CorrelationSpec,
    SweepTemplate,
    correlation_charsum,
    correlation_direct,
    sweep,
)
from .errors import BudgetExceeded, ChowlaError
from .ffield import field_from_q, field_make, prime_power
from .verify import run_selftest, run_verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3

COMMANDS = ("corr", "sweep", "badset", "verify", "selftest")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    p: int = None
    k: int = 1
    q: list = field(default_factory=list)
    n: int = None
    r: int = None
    alpha: list = field(default_factory=list)  # coefficient lists
    eps: list = field(default_factory=list)
    alphas_by_q: dict = field(default_factory=dict)
    chosen_i: int = None
    method: str = "both"
    seed: int = 0
    workers: int = 1
    budget: int = None
    output: str = None
    format: str = None
    timing: bool = True
    quick: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.budget is None:
            self.budget = default_budget()
        if self.budget <= 0:
            raise ConfigError("budget must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")

    def make_field(self):
        if self.p is not None:
            return field_make(self.p, self.k)
        if len(self.q) == 1:
            return field_from_q(self.q[0])
        raise ConfigError("need --p (and --k) or a single --q")

    def shifts(self):
        """(alphas, eps) with constants 0..r-1 when no --alpha is given."""
        eps = list(self.eps)
        alphas = [list(a) for a in self.alpha]
        if not alphas:
            r = self.r or len(eps)
            if not r:
                raise ConfigError("need --alpha/--eps or --r")
            alphas = [[j] for j in range(r)]
        if not eps:
            eps = [1] * len(alphas)
        return alphas, eps


# -- parsing --------------------------------------------------------------------


def parse_int_list(text):
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    text = str(text).strip()
    if not text:
        return []
    return [int(x) for x in text.split(",")]


def parse_q_list(text):
    """'3,5,7' or '3-81' (odd prime powers in the range) or a mix."""
    out = []
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    for item in items:
        item = str(item).strip()
        if "-" in item:
            lo, hi = (int(x) for x in item.split("-"))
            out.extend(q for q in range(lo, hi + 1) if q % 2 and prime_power(q))
        elif item:
            out.append(int(item))
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file; keys mirror the flags, flags win")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--budget", type=int, help="max summands (env CHOWLA_FF_BUDGET)")
    common.add_argument("-o", "--output")
    common.add_argument("--format", choices=["csv", "json"])

    fieldp = argparse.ArgumentParser(add_help=False)
    fieldp.add_argument("--p", type=int)
    fieldp.add_argument("--k", type=int)
    fieldp.add_argument("--q")
    fieldp.add_argument("--n", type=int)

    shiftp = argparse.ArgumentParser(add_help=False)
    shiftp.add_argument("--alpha", action="append",
                        help="shift as comma-separated coefficients, low degree first (repeatable)")
    shiftp.add_argument("--eps", help="comma-separated exponents in {1,2}")
    shiftp.add_argument("--r", type=int)

    parser = argparse.ArgumentParser(prog="chowla-ff", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    corr = sub.add_parser("corr", parents=[common, fieldp, shiftp], help="one correlation sum")
    corr.add_argument("--method", choices=["direct", "charsum", "both"])
    sw = sub.add_parser("sweep", parents=[common, fieldp, shiftp], help="C over a list of q, CSV out")
    sw.add_argument("--no-timing", dest="timing", action="store_const", const=False,
                    help="write wall_ms as 0 so output is byte-reproducible")
    bad = sub.add_parser("badset", parents=[common, fieldp, shiftp], help="bad-set census, JSON out")
    bad.add_argument("--chosen-i", dest="chosen_i", type=int)
    sub.add_parser("verify", parents=[common, fieldp], help="identity suite at one (q, n)")
    st = sub.add_parser("selftest", parents=[common], help="curated acceptance matrix")
    st.add_argument("--quick", action="store_const", const=True)
    return parser


def load_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    raw = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    flags = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    merged = {**raw, **flags}
    merged["command"] = args.command
    kw = {}
    try:
        for key in ("p", "k", "n", "r", "chosen_i", "seed", "workers", "budget"):
            if merged.get(key) is not None:
                kw[key] = int(merged[key])
        for key in ("method", "output", "format"):
            if merged.get(key) is not None:
                kw[key] = merged[key]
        for key in ("timing", "quick"):
            if merged.get(key) is not None:
                kw[key] = bool(merged[key])
        if merged.get("q") is not None:
            q = merged["q"]
            kw["q"] = parse_q_list([q] if isinstance(q, int) else q)
        if merged.get("eps") is not None:
            kw["eps"] = parse_int_list(merged["eps"])
        if merged.get("alpha") is not None:
            kw["alpha"] = [parse_int_list(a) for a in merged["alpha"]]
        if merged.get("alphas_by_q"):
            kw["alphas_by_q"] = {
                int(q): [parse_int_list(a) for a in lst] for q, lst in merged["alphas_by_q"].items()
            }
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    unknown = set(raw) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(command=args.command, **kw)


# -- output -------------------------------------------------------------------------


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_sweep_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow(row.cells())


def _dump_json(obj, fh):
    json.dump(obj, fh, indent=2, sort_keys=False)
    fh.write("\n")


# -- commands -------------------------------------------------------------------------


def _spec(cfg: RunConfig) -> CorrelationSpec:
    if cfg.n is None:
        raise ConfigError("need --n")
    alphas, eps = cfg.shifts()
    return CorrelationSpec.build(cfg.make_field(), cfg.n, alphas, eps)


def cmd_corr(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    results = []
    if cfg.method in ("direct", "both"):
        results.append(correlation_direct(spec, cfg.budget, cfg.workers))
    if cfg.method in ("charsum", "both"):
        results.append(correlation_charsum(spec, cfg.budget, cfg.workers))
    agree = len({r.value for r in results}) == 1
    ok = agree and all(r.within_bound for r in results)
    if not ok:
        print(f"failed: {spec.describe()} values {[r.value for r in results]}", file=sys.stderr)
    with _open_out(cfg.output) as fh:
        if cfg.format == "csv":
            cols = ["method", "q", "n", "r", "value", "normalized", "bound", "trivial_bound", "within_bound"]
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in results:
                d = r.as_dict()
                w.writerow([d[c] for c in cols])
        else:
            _dump_json({"spec": spec.describe(), "value": results[0].value, "agree": agree,
                        "results": [r.as_dict() for r in results]}, fh)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ConfigError("need --n")
    if not cfg.q:
        raise ConfigError("need --q list")
    eps = tuple(cfg.eps) if cfg.eps else (1,) * (cfg.r or 1)
    r = cfg.r or len(eps)
    if len(eps) != r:
        raise ConfigError(f"--r {r} but {len(eps)} exponents")
    template = SweepTemplate(cfg.n, r, eps, cfg.alphas_by_q or None)
    # refuse up front: each cell enumerates q^n * r summands per method
    check_budget(max(cfg.q) ** cfg.n * r, cfg.budget, "sweep")
    rows = sweep(template, cfg.q, budget=cfg.budget, workers=cfg.workers, timing=cfg.timing)
    with _open_out(cfg.output) as fh:
        if cfg.format == "json":
            _dump_json([dict(zip(SWEEP_COLUMNS, row.cells())) for row in rows], fh)
        else:
            write_sweep_csv(rows, fh)
    bad = [row for row in rows if row.status not in ("ok", "skipped")]
    if bad:
        print(f"failed row: {dict(zip(SWEEP_COLUMNS, bad[0].cells()))}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_badset(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    rep = badset_scan(spec, cfg.chosen_i, cfg.budget, cfg.workers)
    with _open_out(cfg.output) as fh:
        _dump_json(dict(spec.describe(), report=rep.as_dict()), fh)
    return EXIT_OK if rep.bounds_hold() and rep.cover_holds() else EXIT_FAIL


def _print_checks(checks, fh):
    for c in checks:
        fh.write(c.line() + "\n")
    passed = sum(c.passed for c in checks)
    fh.write(f"{passed}/{len(checks)} checks passed\n")
    return EXIT_OK if passed == len(checks) else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ConfigError("need --n")
    F = cfg.make_field()
    # largest single enumeration: the r = 3 correlation sums at degree n
    check_budget(F.q**cfg.n * 3, cfg.budget, "verify")
    checks = run_verify(F, cfg.n, seed=cfg.seed, workers=cfg.workers, budget=cfg.budget)
    with _open_out(cfg.output) as fh:
        if cfg.format == "json":
            _dump_json([{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks], fh)
            return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL
        return _print_checks(checks, fh)


def cmd_selftest(cfg: RunConfig) -> int:
    checks = run_selftest(quick=cfg.quick, seed=cfg.seed, budget=cfg.budget)
    with _open_out(cfg.output) as fh:
        return _print_checks(checks, fh)


HANDLERS = {
    "corr": cmd_corr,
    "sweep": cmd_sweep,
    "badset": cmd_badset,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        cfg = load_config(argv)
        return run(cfg)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, ChowlaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
