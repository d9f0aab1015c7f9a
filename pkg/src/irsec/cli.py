"""Command-line entry point: seeded experiment runs written as CSV.

Subcommands: validate-gamma, ergodic-sweep, coding-sweep, phase-bench,
offload-sim, all.  Every command accepts --config/--seed/--runs/--out;
exit code is 0 on success and 1 with a stderr diagnostic otherwise.
"""

import argparse
import sys
from pathlib import Path

from .config import ExperimentConfig, load_config
from . import harness

# desk-scale trial counts per command when --runs is not given
_DEFAULT_RUNS = {
    "validate-gamma": 100_000,
    "ergodic-sweep": 500,
    "coding-sweep": 1000,
    "phase-bench": 200,
    "offload-sim": 10_000,
}
_FULL_OFFLOAD_RUNS = 100_000  # restores the study's trial count


def _int_list(text: str):
    return tuple(int(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsec",
        description="IRS-assisted secure uplink and Gas-ranked offloading simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="JSON file mirroring ExperimentConfig fields")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--runs", type=int, default=None, help="Monte Carlo trials")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory for CSV/ledger files")

    p = sub.add_parser("validate-gamma", help="Gamma-fit divergence table")
    add_common(p)

    p = sub.add_parser("ergodic-sweep", help="ergodic secrecy rate vs N, N_e")
    add_common(p)
    p.add_argument("--n-values", type=_int_list,
                   default=harness.ERGODIC_N_VALUES)
    p.add_argument("--n-eve-values", type=_int_list,
                   default=harness.ERGODIC_NE_VALUES)

    p = sub.add_parser("coding-sweep", help="effective secrecy rate vs coding rate")
    add_common(p)
    p.add_argument("--grid-points", type=int, default=1000)

    p = sub.add_parser("phase-bench", help="optimized vs random phase gains")
    add_common(p)
    p.add_argument("--n-values", type=_int_list,
                   default=harness.PHASE_BENCH_N_VALUES)

    p = sub.add_parser("offload-sim", help="offloading energy sweep")
    add_common(p)
    p.add_argument("--sweep", choices=("rb_count", "n_irs", "c_per_bit", "epsilon"),
                   default="rb_count")
    p.add_argument("--full", action="store_true",
                   help="use the study-scale trial count (1e5)")

    p = sub.add_parser("all", help="run every experiment at desk scale")
    add_common(p)
    p.add_argument("--full", action="store_true",
                   help="use the study-scale trial count for offloading")
    return parser


def _load(args, command: str) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    runs = args.runs
    if runs is None:
        runs = _DEFAULT_RUNS[command]
        if getattr(args, "full", False) and command == "offload-sim":
            runs = _FULL_OFFLOAD_RUNS
    return cfg.with_overrides(seed=args.seed, runs=runs)


def _run_offload(cfg: ExperimentConfig, sweep: str, out: Path) -> None:
    result = harness.run_offload_experiments(cfg, sweep=sweep)
    table_path = out / f"offload_{sweep}.csv"
    ledger_path = out / f"ledger_{sweep}.jsonl"
    harness.emit_csv(result.table, table_path)
    result.ledger.export_jsonl(ledger_path)
    print(f"wrote {table_path} ({len(result.table.rows)} rows), "
          f"{ledger_path} ({len(result.ledger)} records); "
          f"ordering_fraction={result.meta['ordering_fraction']:.4f}, "
          f"ledger_ok={result.meta['ledger_ok']}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        command = args.command
        out: Path = args.out
        out.mkdir(parents=True, exist_ok=True)
        if command == "validate-gamma":
            cfg = _load(args, command)
            table = harness.run_gamma_validation(cfg)
            harness.emit_csv(table, out / "gamma_validation.csv")
            print(f"wrote {out / 'gamma_validation.csv'}")
        elif command == "ergodic-sweep":
            cfg = _load(args, command)
            table = harness.run_ergodic_sweep(cfg, args.n_values, args.n_eve_values)
            harness.emit_csv(table, out / "ergodic_sweep.csv")
            print(f"wrote {out / 'ergodic_sweep.csv'}")
        elif command == "coding-sweep":
            cfg = _load(args, command)
            table = harness.run_coding_sweep(cfg, grid_points=args.grid_points)
            harness.emit_csv(table, out / "coding_sweep.csv")
            print(f"wrote {out / 'coding_sweep.csv'}")
        elif command == "phase-bench":
            cfg = _load(args, command)
            table = harness.run_phase_bench(cfg, args.n_values)
            harness.emit_csv(table, out / "phase_bench.csv")
            print(f"wrote {out / 'phase_bench.csv'}")
        elif command == "offload-sim":
            cfg = _load(args, command)
            _run_offload(cfg, args.sweep, out)
        elif command == "all":
            for name in ("validate-gamma", "ergodic-sweep", "coding-sweep",
                         "phase-bench"):
                sub_args = argparse.Namespace(**vars(args))
                sub_args.runs = args.runs
                cfg = _load(sub_args, name)
                if name == "validate-gamma":
                    harness.emit_csv(harness.run_gamma_validation(cfg),
                                     out / "gamma_validation.csv")
                elif name == "ergodic-sweep":
                    harness.emit_csv(harness.run_ergodic_sweep(cfg),
                                     out / "ergodic_sweep.csv")
                elif name == "coding-sweep":
                    harness.emit_csv(harness.run_coding_sweep(cfg),
                                     out / "coding_sweep.csv")
                else:
                    harness.emit_csv(harness.run_phase_bench(cfg),
                                     out / "phase_bench.csv")
                print(f"{name} done")
            cfg = _load(args, "offload-sim")
            for sweep in ("rb_count", "n_irs", "c_per_bit", "epsilon"):
                _run_offload(cfg, sweep, out)
        return 0
    except Exception as exc:  # surfaced as a diagnostic, not a traceback
        print(f"irsec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
