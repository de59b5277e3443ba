"""Command-line surface: reproducible runs and report emission.

Subcommands: coeffs, eval, zeros, count, density, lemmas. Outputs are
deterministic (fixed seeds live in the lemma corpus, floats are emitted at
15 significant digits, JSON is key-sorted and carries `schema: 1`).

Exit codes: 0 all checks passed; 2 usage error; 3 numeric failure;
4 check failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np
from dataclasses import dataclass, field

from . import coefficients, density, expsum, zeros as zeros_mod
from .errors import (
    CheckFailureError,
    CuspZerosError,
    DomainError,
    NumericError,
    UsageError,
)
from .lfunction import TWO_PI, LFunction

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_CHECK = 4

#: desk-scale ceiling on scan/count heights
T_CAP = 256.0


@dataclass
class RunConfig:
    """Resolved per-command configuration (flags plus --config overrides)."""

    weight: int = 12
    n_max: int = 10_000
    t0: float = 0.0
    t1: float = 100.0
    step: float | None = None
    sigmas: list[float] = field(default_factory=lambda: [0.5, 0.6, 0.75, 0.9])
    deltas: list[int] = field(default_factory=lambda: [8])
    tol: float = 1e-10
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        _check_weight(self.weight)
        if self.n_max < 1 or self.n_max > coefficients.MAX_N:
            raise UsageError(
                f"n_max {self.n_max} outside 1..{coefficients.MAX_N}"
            )
        if not 0.0 <= self.t0 <= self.t1 <= T_CAP:
            raise UsageError(
                f"t-range [{self.t0}, {self.t1}] outside desk scale [0, {T_CAP}]"
            )

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            weight=args.weight,
            n_max=args.n_max,
            t0=getattr(args, "t0", 0.0),
            t1=getattr(args, "t1", 100.0),
            step=getattr(args, "step", None),
            tol=getattr(args, "tol", 1e-10),
            out=args.out,
            fmt=getattr(args, "format", "csv"),
        )


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def _round15(obj):
    """Round every float to 15 significant digits for stable output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, float):
        return float(_fmt_float(obj))
    if isinstance(obj, complex):
        return {"re": _round15(obj.real), "im": _round15(obj.imag)}
    if isinstance(obj, dict):
        return {k: _round15(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round15(v) for v in obj]
    return obj


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None):
    _emit(json.dumps(_round15(payload), sort_keys=True, indent=2) + "\n", out)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex literal {text!r}") from exc


def _apply_config_file(args: argparse.Namespace, path: str):
    """key=value lines override already-parsed flags."""
    try:
        text = open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        cur = getattr(args, key)
        if isinstance(cur, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif isinstance(cur, int):
            setattr(args, key, int(value))
        elif isinstance(cur, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)


def _check_weight(weight: int):
    if weight not in coefficients.SUPPORTED_WEIGHTS:
        raise UsageError(
            f"weight {weight} has no one-dimensional eigenform space; "
            f"supported: {coefficients.SUPPORTED_WEIGHTS}"
        )


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad numeric list {text!r}") from exc


# -- commands ------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    table = coefficients.build_table(cfg.weight, args.n)
    if cfg.fmt == "csv":
        _emit(coefficients.table_to_csv(table), cfg.out)
    else:
        rows = [
            {
                "n": n,
                "a": str(table.a[n]),
                "lambda": table.lam[n],
                "mu": table.mu[n],
            }
            for n in range(1, table.n_max + 1)
        ]
        _emit_json({"schema": 1, "weight": cfg.weight, "rows": rows}, cfg.out)
    return EXIT_OK


def _eval_one(lf: LFunction, s: complex, method: str, tol: float, n_terms):
    if method == "dirichlet":
        return lf.dirichlet_eval(s, n_terms)
    if method == "afe":
        return lf.afe_eval(s)
    if method == "exact":
        return lf.exact_eval(s, tol=tol)
    raise UsageError(f"unknown method {method!r}")


def cmd_eval(args) -> int:
    cfg = RunConfig.from_args(args)
    s = parse_complex(args.s)
    lf = LFunction(cfg.weight, cfg.n_max)
    methods: list[str]
    if args.method == "both":
        methods = ["dirichlet", "exact"]
    elif args.method == "auto":
        if s.real > 1.25:
            methods = ["dirichlet"]
        elif abs(s.imag) > 60.0 and 0.0 <= s.real <= 1.0:
            methods = ["afe"]
        else:
            methods = ["exact"]
    else:
        methods = [args.method]
    results = []
    for m in methods:
        r = _eval_one(lf, s, m, cfg.tol, args.n_terms)
        results.append(
            {
                "method": r.method,
                "value": r.value,
                "est_error": r.est_error,
                "est_error_kind": "heuristic-scale" if r.method == "afe" else "bound",
                "terms_used": r.terms_used,
            }
        )
    payload = {
        "schema": 1,
        "weight": cfg.weight,
        "s": s,
        "results": results,
    }
    code = EXIT_OK
    if args.method == "both":
        d, e = results[0], results[1]
        gap = abs(complex(d["value"]) - complex(e["value"]))
        budget = d["est_error"] + e["est_error"]
        payload["agreement"] = {"gap": gap, "budget": budget, "ok": gap <= budget}
        if gap > budget:
            code = EXIT_CHECK
    _emit_json(payload, cfg.out)
    return code


def cmd_zeros(args) -> int:
    cfg = RunConfig.from_args(args)
    lf = LFunction(cfg.weight, cfg.n_max)
    step = cfg.step
    cap = zeros_mod.max_scan_step(cfg.t1)
    if step is None:
        step = min(0.25, 0.9 * cap)
    records = zeros_mod.scan_zeros(lf, cfg.t0, cfg.t1, step)
    code = EXIT_OK
    if not args.no_verify:
        rect = zeros_mod.count_zeros_rect(lf, 0.0, cfg.t0, cfg.t1)
        if rect.count != len(records):
            sys.stderr.write(
                f"check failure: scan found {len(records)} zeros, contour "
                f"counts {rect.count}\n"
            )
            code = EXIT_CHECK
    _emit(zeros_mod.zeros_to_csv(records), cfg.out)
    return code


def cmd_count(args) -> int:
    cfg = RunConfig.from_args(args)
    lf = LFunction(cfg.weight, cfg.n_max)
    rc = zeros_mod.count_zeros_rect(lf, args.sigma0, cfg.t0, cfg.t1)
    _emit_json(
        {
            "schema": 1,
            "weight": cfg.weight,
            "sigma0": rc.sigma0,
            "t0": rc.t0,
            "t1": rc.t1,
            "count": rc.count,
            "winding_residual": rc.winding_residual,
            "main_term": zeros_mod.nf_main_term(cfg.t1) if cfg.t1 > 0 else 0.0,
        },
        cfg.out,
    )
    return EXIT_OK


def cmd_density(args) -> int:
    args.t1 = args.T
    cfg = RunConfig.from_args(args)
    sigmas = _parse_float_list(args.sigmas)
    deltas = [int(v) for v in _parse_float_list(args.delta)]
    lf = LFunction(cfg.weight, cfg.n_max)
    reports = []
    all_ok = True
    for d in deltas:
        mcfg = density.MollifierConfig(args.T, d)
        rep = density.build_density_report(lf, mcfg, sigmas, args.T, step=args.step)
        rows_ok = all(r["consistent"] for r in rep["density_table"])
        recon_ok = all(p["within_bound"] for p in rep["survey"]["per_zero"])
        rep["all_consistent"] = rows_ok and recon_ok
        all_ok = all_ok and rep["all_consistent"]
        reports.append(rep)
    if args.coeffs_out:
        mcfg = density.MollifierConfig(args.T, deltas[0])
        c = density.conv_coeffs(lf.table, mcfg, args.T / TWO_PI)
        _emit(density.sequence_to_csv(c, "c"), args.coeffs_out)
    _emit_json({"schema": 1, "weight": cfg.weight, "reports": reports}, cfg.out)
    return EXIT_OK if all_ok else EXIT_CHECK


def cmd_lemmas(args) -> int:
    if args.corpus == "default":
        specs = expsum.load_default_corpus()
    else:
        specs = expsum.parse_corpus(open(args.corpus).read())
    rep = expsum.run_corpus(specs)
    constants = [
        {
            "name": r["name"],
            "lemma": r["lemma"],
            "constant": r.get("kappa", r.get("ratio", r.get("lhs", 0.0))),
            "cap": r.get("kappa_cap", r.get("cap")),
            "passed": r["passed"],
        }
        for r in rep["instances"]
    ]
    payload = {
        "schema": 1,
        "all_passed": rep["all_passed"],
        "constants": constants,
        "instances": rep["instances"],
    }
    _emit_json(payload, args.out)
    return EXIT_OK if rep["all_passed"] else EXIT_CHECK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cuspzeros",
        description="Hecke eigenform L-functions: coefficients, evaluation, "
        "zeros, density experiments, exponential-sum validators.",
    )
    p.add_argument("--config", help="key=value file overriding flags", default=None)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--weight", type=int, default=12)
        sp.add_argument("--n-max", type=int, default=10_000,
                        help="coefficient table size")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("coeffs", help="export coefficient table")
    common(sp)
    sp.add_argument("--n", type=int, required=True, help="number of rows")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("eval", help="evaluate L(s)")
    common(sp)
    sp.add_argument("--s", required=True, help="complex point, e.g. 0.5+9.2224i")
    sp.add_argument(
        "--method",
        choices=("auto", "dirichlet", "afe", "exact", "both"),
        default="auto",
    )
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--n-terms", type=int, default=None)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("zeros", help="scan critical-line zeros")
    common(sp)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=100.0)
    sp.add_argument("--step", type=float, default=None)
    sp.add_argument("--no-verify", action="store_true",
                    help="skip the contour consistency check")
    sp.set_defaults(func=cmd_zeros)

    sp = sub.add_parser("count", help="argument-principle zero count")
    common(sp)
    sp.add_argument("--sigma0", type=float, default=0.0)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=100.0)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("density", help="mollifier survey and exponent table")
    common(sp)
    sp.add_argument("--T", type=float, default=100.0)
    sp.add_argument("--sigmas", default="0.5,0.6,0.75,0.9")
    sp.add_argument("--delta", default="8", help="comma list of delta values")
    sp.add_argument("--step", type=float, default=0.25)
    sp.add_argument("--coeffs-out", default=None,
                    help="also write the convolution coefficients as CSV")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("lemmas", help="run the exponential-sum corpus")
    sp.add_argument("--corpus", default="default")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_lemmas)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config_file(args, args.config)
        return args.func(args)
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except NumericError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except CheckFailureError as exc:
        sys.stderr.write(f"check failure: {exc}\n")
        return EXIT_CHECK
    except CuspZerosError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
