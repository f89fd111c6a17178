"""Command-line interface: run, analyze, presets.

    spincant run --config sim.cfg [--dry-run] [--check-oracle] [--jobs N]
    spincant analyze <run-dir | snapshot.csv>
    spincant presets

Exit codes: 0 success, 1 configuration or file errors, 2 edge-leak abort,
3 non-finite field abort. The environment variable SPINOR_THREADS caps the
transform parallelism of a single run (absent means single-threaded).
"""

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

import numpy as np

from .errors import SimulationAbort
from .oracle import oracle_evolve
from .params import SimConfig
from .propagator import StepPlan, _step_inplace, evolve
from .recording import RunRecord
from .spinor import initial_state
from .textio import (
    PAPER_PRESET,
    ConfigError,
    MalformedFileError,
    analyze_run_dir,
    analyze_snapshot_file,
    parse_config,
    render_config,
    snapshot_filename,
    summary_text,
    write_provenance,
    write_snapshot,
    write_timeseries,
)

LOCK_NAME = ".lock"


class OutputDirLock:
    """One run per output directory; parallel runs need distinct directories."""

    def __init__(self, out_dir: Path):
        self.path = out_dir / LOCK_NAME
        self._fd = None

    def __enter__(self):
        try:
            self._fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise ConfigError(
                f"output directory {self.path.parent} is locked by another run "
                f"(stale? remove {self.path})"
            ) from None
        os.write(self._fd, f"{os.getpid()}\n".encode())
        return self

    def __exit__(self, *exc):
        if self._fd is not None:
            os.close(self._fd)
            self.path.unlink(missing_ok=True)
        return False


def write_run_dir(record: RunRecord) -> Path:
    out = Path(record.config.output_dir)
    write_timeseries(out / "timeseries.csv", record)
    for tau, f in record.snapshots:
        write_snapshot(out / snapshot_filename(tau), tau, f)
    (out / "config_echo.cfg").write_text(render_config(record.config))
    write_provenance(out / "provenance.txt", record.provenance)
    snapshot = max(record.snapshots, key=lambda item: item[0], default=None)
    phase_input = (
        record.column("tau"), record.column("branch_a_z"), record.column("branch_b_z")
    )
    summary = summary_text(snapshot, phase_input,
                           record.config.peak_threshold, record.config.merge_width)
    (out / "summary.txt").write_text(summary)
    return out


def oracle_gap(cfg: SimConfig) -> float:
    """L2 distance between the fast propagator and the dense oracle at t_final."""
    s = cfg.schedule()
    f0 = initial_state(cfg.grid, cfg.physical.alpha)
    plan = StepPlan(cfg.grid, cfg.dt, cfg.physical.eta)
    fast = f0.copy()
    for k in range(cfg.n_steps()):
        _step_inplace(fast, plan, s, k * cfg.dt)
    ref = oracle_evolve(f0, cfg, s)
    diff = fast.components - ref.components
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * cfg.grid.dz))


def execute_run(cfg: SimConfig, check_oracle: bool = False) -> RunRecord:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with OutputDirLock(out):
        record = evolve(initial_state(cfg.grid, cfg.physical.alpha), cfg, cfg.schedule())
        write_run_dir(record)
        if check_oracle:
            gap = oracle_gap(cfg)
            print(f"oracle L2 gap: {gap:.6e}")
    return record


def _run_one(path: str, check_oracle: bool) -> tuple[int, str]:
    try:
        cfg = parse_config(path)
        execute_run(cfg, check_oracle=check_oracle)
        return 0, f"{path}: run complete -> {cfg.output_dir}"
    except SimulationAbort as exc:
        return exc.exit_code, f"{path}: aborted: {exc}"
    except (ConfigError, ValueError) as exc:
        return 1, f"{path}: error: {exc}"


def cmd_run(args) -> int:
    if args.dry_run:
        for path in args.config:
            try:
                parse_config(path)
            except ConfigError as exc:
                print(f"{path}: invalid: {exc}", file=sys.stderr)
                return 1
            print(f"{path}: config OK")
        return 0

    out_dirs = []
    for path in args.config:
        try:
            out_dirs.append(parse_config(path).output_dir)
        except ConfigError as exc:
            print(f"{path}: invalid: {exc}", file=sys.stderr)
            return 1
    if len(set(out_dirs)) != len(out_dirs):
        print("configs share an output directory; refusing to run", file=sys.stderr)
        return 1

    worst = 0
    if len(args.config) == 1 or args.jobs <= 1:
        results = [_run_one(path, args.check_oracle) for path in args.config]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, args.config,
                                    [args.check_oracle] * len(args.config)))
    for code, message in results:
        print(message, file=sys.stderr if code else sys.stdout)
        worst = max(worst, code)
    return worst


def cmd_analyze(args) -> int:
    target = Path(args.path)
    try:
        if target.is_dir():
            sys.stdout.write(analyze_run_dir(target))
        else:
            sys.stdout.write(analyze_snapshot_file(target))
    except (MalformedFileError, ConfigError, OSError) as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_presets(args) -> int:
    sys.stdout.write(PAPER_PRESET)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincant",
        description="cantilever + entangled spin pair simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a configuration and export results")
    p_run.add_argument("--config", action="append", required=True,
                       help="config file path (repeat for a sweep)")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="parallel runs when several configs are given")
    p_run.add_argument("--dry-run", action="store_true",
                       help="validate the config(s) and exit without writing")
    p_run.add_argument("--check-oracle", action="store_true",
                       help="also run the dense reference propagator and print the L2 gap "
                            "(small grids only)")
    p_run.set_defaults(func=cmd_run)

    p_an = sub.add_parser("analyze", help="recompute the summary from exported files")
    p_an.add_argument("path", help="run directory or snapshot CSV file")
    p_an.set_defaults(func=cmd_analyze)

    p_pre = sub.add_parser("presets", help="print the production preset config")
    p_pre.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
