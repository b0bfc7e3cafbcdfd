"""Command-line entry point: ``discrete-epi <command> [options]``.

Exit status: 0 on success, 1 when verification failures are present,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds, explorer, verify

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2

DEFAULT_SEED = 42
SEED_ENV = "EPI_SEED"


class UsageError(Exception):
    """Invalid flag combination."""


# per-command defaults for (c_max, step)
_GRID_DEFAULTS = {
    "curve": (20.0, 0.05),
    "curve2d": (10.0, 0.5),
    "condcurve": (20.0, 0.05),
}


def fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.12g}"


def _rows_to_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) if not isinstance(v, str) else v for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _positive(kind):
    def parse(s):
        try:
            v = kind(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {s!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return v

    return parse


def _seed(s):
    try:
        v = int(s, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {s!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _support_max(s):
    v = _positive(int)(s)
    if v < 2:
        raise argparse.ArgumentTypeError("support-max must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help=f"RNG seed (fallback ${SEED_ENV}, then {DEFAULT_SEED})")
    common.add_argument("--trials", type=_positive(int), default=None)
    common.add_argument("--support-max", type=_support_max, default=64)
    common.add_argument("--tol", type=_positive(float), default=None, help="refinement tolerance")
    common.add_argument("--grid-step", type=_positive(float), default=None, help="pure-grid oracle step")
    common.add_argument("--c-max", type=float, default=None)
    common.add_argument("--step", type=_positive(float), default=None, help="spacing of the c grid")
    common.add_argument("--out", type=Path, default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(prog="discrete-epi", description="Entropy-gap bounds for integer-valued sums.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("curve", parents=[common], help="g_iid(c) over a c grid")
    sub.add_parser("curve2d", parents=[common], help="g_niid(c, d) over a (c, d) lattice")
    sub.add_parser("condcurve", parents=[common], help="g_cond(c) over a c grid")
    sub.add_parser("verify", parents=[common], help="run the randomized inequality suite")
    ex = sub.add_parser("explore", parents=[common], help="sample the entropy set and probe midpoints")
    ex.add_argument("--pairs", type=_positive(int), default=16, help="midpoint pairs to probe")
    ex.add_argument("--budget", type=_positive(int), default=2000, help="evaluations per midpoint")
    ex.add_argument("--conditional-trials", type=_positive(int), default=200)
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if not env:
        return DEFAULT_SEED
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"${SEED_ENV}: {exc}") from None


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _grid(args):
    c_max, step = _GRID_DEFAULTS[args.command]
    c_max = args.c_max if args.c_max is not None else c_max
    step = args.step if args.step is not None else step
    if c_max < 0:
        raise UsageError("--c-max must be >= 0")
    return bounds.c_grid(c_max, step)


def _bound_kw(args, oracle_default: bool) -> dict:
    kw = {"oracle": oracle_default or args.grid_step is not None}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.grid_step is not None:
        kw["oracle_step"] = args.grid_step
    return kw


def _curve_output(args, header, rows):
    if args.format == "json":
        return json.dumps({"columns": header, "rows": [[float(fmt(v)) if v is not None else None for v in r] for r in rows]}) + "\n"
    return _rows_to_csv(header, rows)


def cmd_curve(args) -> int:
    kw = _bound_kw(args, True)
    rows = []
    for c in _grid(args):
        b = bounds.g_iid(float(c), **kw)
        rows.append((c, b.value, b.minimizer_x, b.oracle_gap))
    _emit(_curve_output(args, ["c", "g", "minimizer_x", "oracle_gap"], rows), args.out)
    return EXIT_OK


def cmd_curve2d(args) -> int:
    # the dense 2-D oracle is expensive, so it only runs when --grid-step is given
    kw = _bound_kw(args, False)
    cs = _grid(args)
    rows = []
    for c in cs:
        for d in cs:
            b = bounds.g_niid(float(c), float(d), **kw)
            rows.append((c, d, b.value, b.minimizer_x, b.minimizer_y, b.oracle_gap))
    _emit(_curve_output(args, ["c", "d", "g", "min_x", "min_y", "oracle_gap"], rows), args.out)
    return EXIT_OK


def cmd_condcurve(args) -> int:
    kw = _bound_kw(args, True)
    rows = []
    for c in _grid(args):
        b = bounds.g_cond(float(c), **kw)
        rows.append((c, b.value, b.minimizer_delta, b.oracle_gap))
    _emit(_curve_output(args, ["c", "g", "minimizer_delta", "oracle_gap"], rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.format == "csv":
        raise UsageError("verify writes JSON only; drop --format csv")
    cfg = verify.SuiteConfig(
        seed=_resolve_seed(args),
        trials=args.trials if args.trials is not None else 1000,
        support_max=args.support_max,
    )
    report = verify.run_suite(cfg)
    _emit(report.to_json(), args.out)
    n_fail = len(report.failures)
    print(f"{len(report.trials)} trials, {n_fail} failures, {len(report.invalid)} invalid", file=sys.stderr)
    return EXIT_FAILURES if n_fail else EXIT_OK


def _point_row(p: explorer.EntropyPoint):
    return (p.h_sum, p.h_p, p.h_q, p.generator, str(p.seed))


def _deficiency_row(r: explorer.DeficiencyRecord):
    return (*r.point_a.as_tuple(), *r.point_b.as_tuple(), *r.midpoint, r.distance)


def cmd_explore(args) -> int:
    seed = _resolve_seed(args)
    n = args.trials if args.trials is not None else 1000
    points = explorer.sample_entropy_set(seed, n, support_max=args.support_max)
    bad = [p for p in points if not p.satisfies_trivial_bounds()]
    records = explorer.probe_convexity(points, budget=args.budget, seed=seed, pairs=args.pairs) if n >= 2 else []
    conj = explorer.run_theorem4(seed, args.conditional_trials, args.support_max)

    point_header = ["h_sum", "h_p", "h_q", "generator", "seed"]
    def_header = ["ax", "ay", "az", "bx", "by", "bz", "mx", "my", "mz", "best_distance"]
    if args.format == "json":
        doc = {
            "seed": seed,
            "entropySet": {"columns": point_header, "rows": [list(_point_row(p)) for p in points]},
            "deficiencies": {"columns": def_header, "rows": [[float(fmt(v)) for v in _deficiency_row(r)] for r in records]},
            "conditional": conj.to_dict(),
        }
        for row in doc["entropySet"]["rows"]:
            row[:3] = [float(fmt(v)) for v in row[:3]]
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(_rows_to_csv(point_header, [_point_row(p) for p in points]), args.out)
        if args.out is not None:
            stem = args.out.with_suffix("")
            Path(f"{stem}.deficiency.csv").write_text(_rows_to_csv(def_header, [_deficiency_row(r) for r in records]))
            Path(f"{stem}.conditional.json").write_text(json.dumps(conj.to_dict(), indent=2) + "\n")

    worst = max((r.distance for r in records), default=0.0)
    print(
        f"{len(points)} points ({len(bad)} outside trivial bounds), "
        f"{len(records)} midpoints (max distance {fmt(worst)}), "
        f"{len(conj.counterevidence)} conditional-bound counterexamples (quarantined)",
        file=sys.stderr,
    )
    return EXIT_FAILURES if bad else EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "curve2d": cmd_curve2d,
    "condcurve": cmd_condcurve,
    "verify": cmd_verify,
    "explore": cmd_explore,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_FAILURES


if __name__ == "__main__":
    sys.exit(main())
