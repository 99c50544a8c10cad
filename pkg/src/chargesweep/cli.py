"""Command-line front end.

Exit status: 0 success, 2 bad input, 3 a schedule failed verification or a
cross-check between solver and oracle broke.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import approximation_bound
from .certify import InvariantBreach, certify, summarize, to_csv
from .generate import ExperimentSpec, SpecError, gen, write_atomic
from .instance import InstanceError, load
from .kernels import KernelConfig, KernelLimitError
from .render import render
from .routes import ContractError, Schedule, Variant
from .solve import solve
from .verify import verify

EXIT_OK, EXIT_INPUT, EXIT_BREACH = 0, 2, 3


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None


def _spec_args(p: argparse.ArgumentParser):
    p.add_argument("--spec", help="JSON file with experiment settings; flags override it")
    p.add_argument("--n", type=int, nargs=2, metavar=("LO", "HI"), help="target count range")
    p.add_argument("--chargers", type=int, choices=(1, 2))
    p.add_argument("--sensors", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--side", type=float)
    p.add_argument("--speed", type=float)
    p.add_argument("--tt", type=float, help="sweep period T_t")
    p.add_argument("--tc", type=float, help="charge period T_c")
    p.add_argument("--count", type=int, help="number of instances")


def _kernel_args(p: argparse.ArgumentParser):
    p.add_argument("--variant", choices=("rcsc", "csc2"), default="rcsc")
    p.add_argument("--kernel", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--exact-limit", type=int, default=14)


def _build_spec(args) -> ExperimentSpec:
    doc = {}
    if args.spec:
        try:
            doc = json.loads(_read(args.spec))
        except json.JSONDecodeError as exc:
            raise SpecError(f"{args.spec}: malformed JSON: {exc}") from None
    for flag, key in (("n", "n_range"), ("chargers", "chargers"), ("sensors", "m_range"),
                      ("side", "side"), ("speed", "speed"), ("tt", "sweep_period"),
                      ("tc", "charge_period"), ("count", "seeds"), ("seed", "base_seed"),
                      ("out", "out")):
        val = getattr(args, flag, None)
        if val is not None:
            doc[key] = val
    for key in ("variant", "kernel"):
        if hasattr(args, key):
            doc[key] = getattr(args, key)
    if hasattr(args, "exact_limit"):
        doc["exact_limit"] = args.exact_limit
    return ExperimentSpec.from_dict(doc)


def cmd_gen(args) -> int:
    for path in gen(_build_spec(args)):
        print(path)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load(_read(args.instance))
    kernels = KernelConfig(mode=args.kernel, exact_node_limit=args.exact_limit,
                           rng_seed=args.seed or 0)
    try:
        schedule, trace = solve(inst, args.variant, kernels)
    except KernelLimitError as exc:
        raise InstanceError(f"{exc}; raise --exact-limit or use --kernel heuristic") from None
    report = verify(inst, schedule)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.instance).stem
    write_atomic(out / f"{stem}.schedule.json", schedule.dumps())
    write_atomic(out / f"{stem}.report.json",
                 json.dumps(report.to_dict(), indent=1).encode("utf-8"))
    print(f"{schedule.variant.value}: covered {len(report.verified_covered)}/"
          f"{inst.n_targets} with {len(schedule.itineraries)} sensors "
          f"({trace.stop_reason})")
    if not report.feasible:
        print("verification failed: " + "; ".join(report.violations), file=sys.stderr)
        return EXIT_BREACH
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load(_read(args.instance))
    schedule = Schedule.loads(_read(args.schedule))
    report = verify(inst, schedule)
    text = json.dumps(report.to_dict(), indent=1) + "\n"
    if args.out:
        write_atomic(Path(args.out), text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.feasible else EXIT_BREACH


def cmd_certify(args) -> int:
    spec = _build_spec(args)
    rows = certify(spec)
    data = to_csv(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_atomic(out / "certify.csv", data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    summary = summarize(rows)
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_BREACH if summary["fail"] else EXIT_OK


def cmd_render(args) -> int:
    inst = load(_read(args.instance))
    schedule = Schedule.loads(_read(args.schedule))
    svg = render(inst, schedule).encode("utf-8")
    if args.out:
        write_atomic(Path(args.out), svg)
    else:
        sys.stdout.write(svg.decode("utf-8"))
    return EXIT_OK


def cmd_bound(args) -> int:
    print(f"{approximation_bound(args.variant, args.q, args.alpha, args.beta, args.gamma):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chargesweep",
                                 description="Chargeable sweep coverage solvers")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write random instance files")
    _spec_args(p)
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve one instance and verify the result")
    p.add_argument("instance")
    _kernel_args(p)
    p.add_argument("--seed", type=int, help="heuristic kernel seed")
    p.add_argument("--out", help="output directory (default: current)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a schedule against an instance")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("--out", help="report file (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="compare greedy coverage with oracle optima")
    _spec_args(p)
    _kernel_args(p)
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--out", help="directory for certify.csv (default: stdout)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("render", help="draw a schedule as SVG")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("--out", help="SVG file (default: stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bound", help="print the guaranteed approximation ratio")
    p.add_argument("variant", choices=[v.value for v in Variant])
    p.add_argument("q", type=int, help="Q or Q_hat")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.set_defaults(func=cmd_bound)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, SpecError, ContractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
