"""Command-line entry point.

Subcommands: run (execute a study), aggregate (mean/CI tables),
winmatrix (hybrid win matrices), validate (oracle suite), figures-data
(all CSVs the plotting package consumes). Exit codes: 0 success,
1 validation/analysis failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from wavebandit import __version__
from wavebandit.analysis import (
    aggregate_means,
    win_matrix_avg,
    win_matrix_per_trial,
    write_aggregate_csv,
    write_winmatrix_csv,
)
from wavebandit.config import ExperimentConfig
from wavebandit.errors import ConfigError, ContractViolation, StoreFormatError
from wavebandit.harness import run_study_to_file
from wavebandit.losses import BASE_MEASURES
from wavebandit.store import read_records
from wavebandit.validate import DEFAULT_SEED, run_checks

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebandit",
        description="Simulate and compare assignment mechanisms for wave-based adaptive experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a replication study from a config file")
    p_run.add_argument("config", help="path to a JSON config file")
    p_run.add_argument("--out", default="runs.jsonl", help="run store path (default: %(default)s)")
    p_run.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_run.add_argument("--threads", type=int, default=None, help="worker count (default: all cores)")
    p_run.add_argument("--progress", action="store_true", help="print a trial counter to stderr")

    p_agg = sub.add_parser("aggregate", help="mean/CI table per mechanism and wave size")
    p_agg.add_argument("--in", dest="store", required=True, help="run store path")
    p_agg.add_argument("--out", required=True, help="output CSV path")
    p_agg.add_argument("--measure", default="all", help="base measure name or 'all'")

    p_win = sub.add_parser("winmatrix", help="hybrid-measure win matrices")
    p_win.add_argument("--in", dest="store", required=True, help="run store path")
    p_win.add_argument("--out", required=True, help="output CSV path")
    p_win.add_argument("--mode", choices=("per-trial", "avg"), default="per-trial")

    p_val = sub.add_parser("validate", help="run the oracle suite")
    p_val.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_val.add_argument("--quad-nodes", type=int, default=256)

    p_fig = sub.add_parser(
        "figures-data", help="write the aggregate and win-matrix CSVs consumed by the figures package"
    )
    p_fig.add_argument("--in", dest="store", required=True, help="run store path")
    p_fig.add_argument("--out-dir", required=True, help="directory for the CSV files")
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        config = ExperimentConfig.from_dict({**config.to_dict(), "master_seed": args.seed})
    manifest = run_study_to_file(config, args.out, workers=args.threads, progress=args.progress)
    print(
        f"wrote {manifest['records']} records to {args.out} "
        f"in {manifest['wall_time_s']}s (backend: {manifest['backend']})"
    )
    return EXIT_OK


def _load_store(path: str):
    records = read_records(path)
    if not records:
        raise ContractViolation(f"run store {path} is empty")
    return records


def cmd_aggregate(args: argparse.Namespace) -> int:
    if args.measure != "all" and args.measure not in BASE_MEASURES:
        print(
            f"error: unknown measure {args.measure!r}; valid names: "
            f"{', '.join(BASE_MEASURES)} or 'all'",
            file=sys.stderr,
        )
        return EXIT_USAGE
    records = _load_store(args.store)
    measures = BASE_MEASURES if args.measure == "all" else (args.measure,)
    rows = []
    for measure in measures:
        rows.extend(aggregate_means(records, measure))
    write_aggregate_csv(rows, args.out)
    print(f"wrote {len(rows)} aggregate rows to {args.out}")
    return EXIT_OK


def cmd_winmatrix(args: argparse.Namespace) -> int:
    records = _load_store(args.store)
    wave_sizes = sorted({rec.wave_size for rec in records})
    build = win_matrix_per_trial if args.mode == "per-trial" else win_matrix_avg
    matrices = [build(records, w) for w in wave_sizes]
    write_winmatrix_csv(matrices, args.out)
    print(f"wrote {sum(len(m.cells) for m in matrices)} win-matrix rows to {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    results = run_checks(seed=args.seed, quad_nodes=args.quad_nodes)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed", file=sys.stderr)
        return EXIT_FAILURE
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_figures_data(args: argparse.Namespace) -> int:
    records = _load_store(args.store)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for measure in BASE_MEASURES:
        rows.extend(aggregate_means(records, measure))
    write_aggregate_csv(rows, out_dir / "aggregate.csv")
    wave_sizes = sorted({rec.wave_size for rec in records})
    write_winmatrix_csv(
        [win_matrix_per_trial(records, w) for w in wave_sizes],
        out_dir / "winmatrix_per_trial.csv",
    )
    write_winmatrix_csv(
        [win_matrix_avg(records, w) for w in wave_sizes],
        out_dir / "winmatrix_avg.csv",
    )
    print(f"wrote aggregate.csv, winmatrix_per_trial.csv, winmatrix_avg.csv to {out_dir}")
    return EXIT_OK


_HANDLERS = {
    "run": cmd_run,
    "aggregate": cmd_aggregate,
    "winmatrix": cmd_winmatrix,
    "validate": cmd_validate,
    "figures-data": cmd_figures_data,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StoreFormatError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
