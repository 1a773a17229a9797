"""Command-line interface: verification suites with CSV/JSON reports.

Commands mirror the harness suites::

    barnorm growth      --model abelian:2 --growth-degree 2 --r-max 10
    barnorm norms       --model free:2 --k 1 --n 1 --p 2 --q 4 --trials 50
    barnorm compare-pq  --model abelian:2 --growth-degree 2 --k 1 --n 0 \
                        --p 2 --q 4 --trials 50
    barnorm pushforward --hom abelian2-to-z --k 1 --n 0 --p 1 --trials 100
    barnorm diffuse     --model free:2 --N 2 --degree 1 --radius 2 --n 1 \
                        --p 2 --q 4 --trials 20
    barnorm f2-vanish   --levels 5 --norms 0:3,0:2
    barnorm all         --seed 42 --outdir reports

Each suite writes ``<outdir>/<suite>.csv`` (schema comment line, header,
one row per trial, floats with 12 significant digits, exact rationals as
``p/q``) plus ``<suite>_summary.json`` with
``{suite, trials, violations, wall_time_ms}``.  CSV rows are deterministic
functions of the configuration; the summary's wall time is the only
non-reproducible output.  Exit status is 0 iff every asserted check held.

A JSON config file may supply any long-option value (keys use underscores);
explicit command-line flags win.  The environment variable
``BARNORM_ENUM_CAP`` overrides the default enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import harness
from .chains import chain_from_records, chain_to_records
from .groups import DEFAULT_ENUM_CAP, parse_model
from .norms import INF, NormParams


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if value == INF:
            return "inf"
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Path, suite: str, schema, rows) -> None:
    lines = [f"# schema: {suite} v1", ",".join(schema)]
    for row in rows:
        lines.append(",".join(_format_value(row[col]) for col in schema))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_summary(path: Path, suite: str, trials: int, violations: int,
                  wall_time_ms: int) -> None:
    payload = {
        "suite": suite,
        "trials": trials,
        "violations": violations,
        "wall_time_ms": wall_time_ms,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _parse_exponent(text: str) -> float:
    if text.strip() in ("inf", "oo"):
        return INF
    return float(Fraction(text))


def _default_cap() -> int:
    env = os.environ.get("BARNORM_ENUM_CAP")
    return int(env) if env else DEFAULT_ENUM_CAP


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barnorm",
        description="exact bar-complex chain computations and norm-estimate "
                    "verification suites",
    )
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file supplying option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--outdir", type=Path, default=Path("reports"))
        p.add_argument("--cap", type=int, default=_default_cap(),
                       help="enumeration element cap")

    p = sub.add_parser("growth", help="sphere/ball counts and the growth constant")
    common(p)
    p.add_argument("--model", default="abelian:2")
    p.add_argument("--growth-degree", type=int, default=2)
    p.add_argument("--r-max", type=int, default=10)

    p = sub.add_parser("norms", help="contractivity checks on random chains")
    common(p)
    p.add_argument("--model", default="free:2")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", type=_parse_exponent, default=2.0)
    p.add_argument("--q", type=_parse_exponent, default=4.0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--support", type=int, default=8)

    p = sub.add_parser("compare-pq", help="polynomial-growth norm comparison")
    common(p)
    p.add_argument("--model", default="abelian:2")
    p.add_argument("--growth-degree", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=_parse_exponent, default=2.0)
    p.add_argument("--q", type=_parse_exponent, default=4.0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--support", type=int, default=10)

    p = sub.add_parser("pushforward", help="functoriality norm estimates")
    common(p)
    p.add_argument("--hom", default="abelian2-to-z",
                   choices=sorted(harness.EXAMPLE_HOMOMORPHISMS))
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=_parse_exponent, default=1.0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--support", type=int, default=8)

    p = sub.add_parser("diffuse", help="diffusion cone homotopy and bound checks")
    common(p)
    p.add_argument("--model", default="free:2")
    p.add_argument("--N", type=int, default=2, dest="annuli_degree",
                   help="annuli degree (values <= 10 are flagged non-conforming)")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", type=_parse_exponent, default=2.0)
    p.add_argument("--q", type=_parse_exponent, default=4.0)
    p.add_argument("--ratio-m", type=int, default=None)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--support", type=int, default=3)
    p.add_argument("--max-diameter", type=int, default=None)
    p.add_argument("--chain", type=Path, default=None,
                   help="verify one chain from a JSON record file instead")
    p.add_argument("--emit-chain", type=Path, default=None,
                   help="write the cone of the (last) input chain as JSON")

    p = sub.add_parser("f2-vanish", help="free-group vanishing construction")
    common(p)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--norms", default="0:3,0:2",
                   help="comma-separated n:p pairs for the decay table")

    p = sub.add_parser("all", help="every suite at a small deterministic scale")
    common(p)

    # config defaults must reach the subparsers: argparse applies a
    # subparser's own argument defaults over parent-level set_defaults
    parser.suite_parsers = dict(sub.choices)
    return parser


def _run_suite(args) -> dict:
    """Dispatch to the harness; returns {suite: (schema, rows, violations)}."""
    cmd = args.command
    if cmd == "growth":
        rows, violations, _ = harness.run_growth(
            args.model, args.growth_degree, args.r_max)
        return {"growth": (harness.GROWTH_SCHEMA, rows, violations)}
    if cmd == "norms":
        rows, violations, _ = harness.run_contractivity(
            args.model, args.k, args.n, args.p, args.q,
            args.trials, args.seed, args.radius, args.support)
        return {"norms": (harness.CONTRACTIVITY_SCHEMA, rows, violations)}
    if cmd == "compare-pq":
        rows, violations, _ = harness.run_compare(
            args.model, args.growth_degree, args.k, args.n, args.p, args.q,
            args.trials, args.seed, args.radius, args.support)
        return {"compare-pq": (harness.COMPARE_SCHEMA, rows, violations)}
    if cmd == "pushforward":
        rows, violations, _ = harness.run_pushforward(
            args.hom, args.k, args.n, args.p, args.trials, args.seed,
            args.radius, args.support)
        return {"pushforward": (harness.PUSHFORWARD_SCHEMA, rows, violations)}
    if cmd == "diffuse":
        input_chain = None
        if args.chain is not None:
            model = parse_model(args.model)
            records = json.loads(args.chain.read_text(encoding="utf-8"))
            input_chain = chain_from_records(model, records, degree=args.degree)
        rows, violations, extras = harness.run_diffuse(
            args.model, args.annuli_degree, args.degree, args.n, args.p,
            args.q, args.trials, args.seed, args.radius, args.support,
            args.ratio_m, args.cap, args.max_diameter, input_chain)
        if args.emit_chain is not None and extras.get("last_cone") is not None:
            args.emit_chain.write_text(
                json.dumps(chain_to_records(extras["last_cone"]), indent=1)
                + "\n",
                encoding="utf-8",
            )
        return {"diffuse": (harness.DIFFUSE_SCHEMA, rows, violations)}
    if cmd == "f2-vanish":
        params = [NormParams.parse(part) for part in args.norms.split(",")]
        level_rows, decay_rows, violations = harness.run_f2(
            args.levels, [(pp.n, pp.p) for pp in params])
        return {
            "f2-levels": (harness.F2_LEVELS_SCHEMA, level_rows, violations),
            "f2-decay": (harness.F2_DECAY_SCHEMA, decay_rows, 0),
        }
    if cmd == "all":
        return harness.run_all(args.seed, args.cap)
    raise AssertionError(f"unhandled command {cmd}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    probe, _ = parser.parse_known_args(argv)
    if probe.config is not None:
        config = json.loads(Path(probe.config).read_text(encoding="utf-8"))
        for key, value in config.items():
            if key in ("outdir", "chain", "emit_chain", "config"):
                config[key] = Path(value)
        parser.set_defaults(**config)
        for suite_parser in parser.suite_parsers.values():
            suite_parser.set_defaults(**config)
    args = parser.parse_args(argv)

    started = time.monotonic()
    try:
        results = _run_suite(args)
    except Exception as exc:  # surfaced caps, bad configs, missing files
        print(f"error: {exc}", file=sys.stderr)
        return 2
    wall_ms = int((time.monotonic() - started) * 1000)

    args.outdir.mkdir(parents=True, exist_ok=True)
    total_violations = 0
    for suite, (schema, rows, violations) in sorted(results.items()):
        total_violations += violations
        write_csv(args.outdir / f"{suite}.csv", suite, schema, rows)
        write_summary(args.outdir / f"{suite}_summary.json", suite,
                      len(rows), violations, wall_ms)
        status = "ok" if not violations else f"{violations} VIOLATIONS"
        print(f"{suite}: {len(rows)} rows, {status}")
    return 0 if total_violations == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
