"""Command-line front end.

Four subcommands: run (direct simulation), simulate (the space-efficient
driver), treeval (solve a tree instance file), sweep (space metering at
forced horizons, as CSV). Decision commands print a bare
accept/reject/timeout line followed by one machine-readable key=value
trailer line. The exit code is 0 exactly when a decision, root value, or
CSV output was produced; budget refusals and malformed files exit 1 with
the reason on stderr.
"""

import argparse
import csv
import sys

from .graphs import BudgetExceededError, EncodingError
from .machine import MachineFormatError, parse_machine_file, run_direct
from .reduction import simulate_space_efficient, sweep_row
from .treeval import (
    BudgetError,
    MalformedInstanceError,
    int_to_bits,
    pad_instance,
    parse_instance_file,
    solve_cook_mertz,
    solve_naive,
)

# cmd_sweep column order; sweep forces the horizon, so t_found is the forced t
CSV_HEADER = [
    "machine", "input_len", "t_found", "c", "B", "mode", "catalytic_bits",
    "local_bits_peak", "scratch_bits_peak", "naive_space_bits", "wall_time",
]


def _trailer(pairs) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs)


def cmd_run(args) -> int:
    machine = parse_machine_file(args.machine)
    trace = run_direct(machine, args.input, args.max_steps)
    print(trace.decision)
    print(_trailer([("steps", trace.steps), ("halted", trace.halted)]))
    return 0 if trace.halted else 1


def cmd_simulate(args) -> int:
    machine = parse_machine_file(args.machine)
    result = simulate_space_efficient(
        machine,
        args.input,
        t_max=args.t_max,
        block_policy=args.block_policy,
        solver=args.solver,
        t_growth=args.growth,
        oracle_guided=args.oracle_guided,
        enum_budget=args.enum,
        cm_mode=args.mode,
        backend=args.backend,
    )
    print(result.decision)
    pairs = [
        (key, value)
        for key, value in result.metrics().items()
        if key != "decision" and value is not None
    ]
    print(_trailer(pairs))
    return 0 if result.decided else 1


def cmd_treeval(args) -> int:
    inst = parse_instance_file(args.instance)
    if args.solver == "naive":
        res = solve_naive(inst, memo=args.memo)
        print(int_to_bits(res.value, inst.b))
        print(_trailer([
            ("solver", "naive"),
            ("nodes_visited", res.nodes_visited),
            ("depth_peak", res.depth_peak),
            ("space_bits_peak", res.space_bits_peak),
        ]))
    else:
        res = solve_cook_mertz(pad_instance(inst), mode=args.mode,
                               backend=args.backend)
        print(int_to_bits(res.value, inst.b))
        meter = res.meter
        print(_trailer([
            ("solver", "cm"),
            ("mode", args.mode),
            ("backend", res.backend),
            ("field_bits", res.params.q),
            ("catalytic_bits", meter.catalytic_bits),
            ("local_bits_peak", meter.local_bits_peak),
            ("scratch_bits_peak", meter.scratch_bits_peak),
            ("total_bits", meter.total_bits),
            ("calls", res.stats["calls"]),
            ("sweeps", res.stats["sweeps"]),
        ]))
    return 0


def cmd_sweep(args) -> int:
    machine = parse_machine_file(args.machine)
    writer = csv.writer(sys.stdout)
    writer.writerow(CSV_HEADER)
    for inp in args.inputs:
        for t in args.t_list:
            row = sweep_row(machine, inp, t, block_policy=args.block_policy,
                            cm_mode=args.mode)
            writer.writerow([
                row["machine"], row["input_len"], row["t"], row["c"], row["B"],
                row["mode"], row["catalytic_bits"], row["local_bits_peak"],
                row["scratch_bits_peak"], row["naive_space_bits"],
                f"{row['wall_time']:.6f}",
            ])
    return 0


def _t_list(text: str) -> list[int]:
    if not text.strip():
        return []
    return [int(tok) for tok in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catsim",
        description="simulate multitape machines in far less space than runtime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="direct simulation")
    run.add_argument("machine")
    run.add_argument("input", nargs="?", default="")
    run.add_argument("--max-steps", type=int, default=10_000)
    run.set_defaults(func=cmd_run)

    sim = sub.add_parser("simulate", help="space-efficient simulation")
    sim.add_argument("machine")
    sim.add_argument("input", nargs="?", default="")
    sim.add_argument("--t-max", type=int, default=4096)
    sim.add_argument("--block-policy", default="default",
                     help='"default" or "fixed:<c>"')
    sim.add_argument("--solver", choices=("auto", "naive", "cm"), default="auto")
    sim.add_argument("--mode", choices=("multilinear", "packed"),
                     default="multilinear")
    sim.add_argument("--backend", choices=("auto", "pure", "compiled"),
                     default="auto")
    sim.add_argument("--growth", choices=("linear", "doubling"), default="linear")
    sim.add_argument("--enum", type=int, default=10_000_000,
                     help="candidate enumeration budget")
    sim.add_argument("--oracle-guided", action="store_true",
                     help="take the true encoding from a direct run "
                          "(testing aid: skips the candidate search)")
    sim.set_defaults(func=cmd_simulate)

    tv = sub.add_parser("treeval", help="solve a tree instance file")
    tv.add_argument("instance")
    tv.add_argument("--solver", choices=("naive", "cm"), default="naive")
    tv.add_argument("--mode", choices=("multilinear", "packed"),
                    default="multilinear")
    tv.add_argument("--backend", choices=("auto", "pure", "compiled"),
                    default="auto")
    tv.add_argument("--memo", action="store_true",
                    help="memoize shared subtrees (changes space accounting)")
    tv.set_defaults(func=cmd_treeval)

    sweep = sub.add_parser("sweep", help="CSV space metering at forced horizons")
    sweep.add_argument("machine")
    sweep.add_argument("inputs", nargs="*", default=[])
    sweep.add_argument("--t-list", type=_t_list, default=[],
                       help="comma-separated horizons, e.g. 16,32,64,128")
    sweep.add_argument("--block-policy", default="default")
    sweep.add_argument("--mode", choices=("multilinear", "packed"),
                       default="multilinear")
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MachineFormatError, MalformedInstanceError, EncodingError,
            BudgetError, BudgetExceededError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
