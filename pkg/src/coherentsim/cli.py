"""Command-line entry point.

Subcommands mirror the experiment kinds (`qec-sweep`, `grover-sweep`,
`clifford-heatmap`, `entropy-table`) plus `report`, which re-renders the
figure for an existing CSV.  Every experiment writes a CSV; passing
``--plot`` also renders the matching PNG next to it.  A config file
(``--config``, `key = value` lines) supplies defaults that individual flags
override.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ExperimentConfig,
    config_from_strings,
    load_config,
    log_grid,
    override_config,
    read_csv,
    run_experiment,
)

_KIND_BY_COMMAND = {
    "qec-sweep": "qec_sweep",
    "grover-sweep": "grover_sweep",
    "clifford-heatmap": "clifford_heatmap",
    "entropy-table": "entropy_table",
}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="config file of 'key = value' lines")
    sub.add_argument("--seed", type=int, default=None, help="master seed")
    sub.add_argument("--out", default=None, help="output CSV path")
    sub.add_argument("--instances", type=int, default=None, help="instances per point")
    sub.add_argument("--shots", type=int, default=None, help="shots for the shots metric")
    sub.add_argument(
        "--metric", choices=["overlap", "shots"], default=None, help="error statistic"
    )
    sub.add_argument(
        "--model",
        choices=["continuous", "pauli", "both"],
        default=None,
        help="noise model(s) to sweep",
    )
    sub.add_argument(
        "--grid-points", type=int, default=None, help="size of the log-spaced p grid"
    )
    sub.add_argument(
        "--grid-range",
        default=None,
        metavar="LO,HI",
        help="p range for the grid (default 1e-6/3,1e-1/3)",
    )
    sub.add_argument("--plot", action="store_true", help="render a PNG beside the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherentsim",
        description="Coherent-noise circuit experiments with entropy-matched "
        "Pauli comparison and analytic error propagation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_qec = subs.add_parser("qec-sweep", help="logical error rate of a code circuit")
    p_qec.add_argument("--code", choices=["513", "713"], default=None)
    p_qec.add_argument("--m-list", type=_int_list, default=None, metavar="M1,M2,...")
    p_qec.add_argument("--ec-list", type=_int_list, default=None, metavar="0,1")
    _add_common(p_qec)

    p_gsa = subs.add_parser("grover-sweep", help="Grover failure rate per qubit count")
    p_gsa.add_argument("--n-list", type=_int_list, default=None, metavar="N1,N2,...")
    p_gsa.add_argument("--marked", default=None, help="marked bitstring (default all ones)")
    p_gsa.add_argument(
        "--iterations", choices=["paper", "optimal"], default=None,
        help="iteration-count rule",
    )
    _add_common(p_gsa)

    p_map = subs.add_parser(
        "clifford-heatmap", help="approximation/full infidelity ratio heatmap"
    )
    p_map.add_argument("--qubits", type=int, default=None, help="qubits per circuit")
    p_map.add_argument("--h-grid", type=_int_list, default=None, metavar="H1,H2,...")
    p_map.add_argument("--cnot-grid", type=_int_list, default=None, metavar="C1,C2,...")
    p_map.add_argument("--circuits-per-cell", type=int, default=None)
    p_map.add_argument("--sigma", type=float, default=None, help="per-gate noise width")
    _add_common(p_map)

    p_ent = subs.add_parser("entropy-table", help="matched-channel table for a p grid")
    _add_common(p_ent)

    p_rep = subs.add_parser("report", help="render the figure for an existing CSV")
    p_rep.add_argument("csv", help="CSV produced by an experiment subcommand")
    p_rep.add_argument("--out", default=None, help="PNG path (default: beside the CSV)")

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    kind = _KIND_BY_COMMAND[args.command]
    if args.config:
        config = load_config(args.config)
        if config.kind != kind:
            raise SystemExit(
                f"config kind {config.kind!r} does not match subcommand {args.command!r}"
            )
    else:
        config = config_from_strings({"kind": kind})
    grid = None
    if args.grid_points is not None or args.grid_range is not None:
        lo, hi = 1e-6 / 3.0, 1e-1 / 3.0
        if args.grid_range is not None:
            lo, hi = (float(x) for x in args.grid_range.split(","))
        n = args.grid_points if args.grid_points is not None else 7
        grid = log_grid(lo, hi, n)
    config = override_config(
        config,
        master_seed=args.seed,
        out=args.out,
        n_instances=args.instances,
        n_shots=args.shots,
        metric_mode=args.metric,
        noise_model=args.model,
        grid=grid,
    )
    if args.command == "qec-sweep":
        config = override_config(config, code=args.code, m_list=args.m_list, ec_list=args.ec_list)
    elif args.command == "grover-sweep":
        config = override_config(
            config, n_list=args.n_list, marked=args.marked, iterations=args.iterations
        )
    elif args.command == "clifford-heatmap":
        config = override_config(
            config,
            n_qubits=args.qubits,
            h_grid=args.h_grid,
            cnot_grid=args.cnot_grid,
            circuits_per_cell=args.circuits_per_cell,
            sigma=args.sigma,
        )
    if not config.out:
        config = override_config(config, out=f"{config.kind}.csv")
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    from . import report  # imported lazily: pulls in matplotlib

    if args.command == "report":
        records = read_csv(args.csv)
        out = args.out or report.figure_path_for(args.csv)
        print(f"figure -> {report.render(records, out)}")
        return 0

    config = _config_from_args(args)
    records = run_experiment(config)
    print(f"{len(records)} records -> {config.out}")
    if args.plot:
        out = report.figure_path_for(config.out)
        print(f"figure -> {report.render(records, out)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
