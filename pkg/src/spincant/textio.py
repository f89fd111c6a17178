"""Plain-text configuration and data formats.

Everything a run writes is decimal text with 17 significant digits, which
round-trips IEEE doubles exactly: downstream tools (the figure scripts in
particular) can consume the outputs with no schema dependency, and offline
re-analysis reproduces the online summary byte for byte.

Files in a run directory:
    timeseries.csv    one row per observable sample (TIMESERIES_COLUMNS order)
    snapshot_*.csv    full field snapshots; a '#' header line carries the
                      exact grid bounds and snapped time
    summary.txt       final peak table, branch spin data, component ratios,
                      windowed phase difference (deterministic content only)
    config_echo.cfg   canonical re-render of the parsed configuration
    provenance.txt    code version, platform, wall time (not deterministic)
"""

import os
from pathlib import Path

import numpy as np

from .grid import make_grid
from .observables import (
    DecompositionUnavailableError,
    InsufficientDataError,
    RatioUndefinedError,
    component_ratio,
    decompose_cat,
    find_peaks,
    position_distribution,
    track_branch_phases,
)
from .params import (
    DEFAULT_MERGE_WIDTH,
    DEFAULT_PEAK_THRESHOLD,
    PhysicalParams,
    SimConfig,
    validate_config,
)
from .recording import TIMESERIES_COLUMNS, Provenance, RunRecord
from .spinor import SpinorField

REQUIRED_KEYS = [
    "eta", "alpha_re", "alpha_im",
    "z_min", "z_max", "n_points",
    "dt", "t_final",
    "schedule", "observable_stride", "output_dir",
]
OPTIONAL_KEYS = ["snapshot_times", "peak_threshold", "merge_width"]
SCHEDULE_PREFIX = "schedule."

# component column order in snapshot files: first index s1, second s2
COMPONENT_NAMES = ["uu", "ud", "du", "dd"]
COMPONENT_INDEX = {"uu": (0, 0), "ud": (0, 1), "du": (1, 0), "dd": (1, 1)}


class ConfigError(ValueError):
    pass


class MalformedFileError(ValueError):
    pass


def _fmt(x: float) -> str:
    """Shortest decimal that round-trips the double exactly."""
    return repr(float(x))


def _csv_fmt(x: float) -> str:
    """17 significant digits: fixed-width exact decimal for data files."""
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# configuration files


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as a number") from None


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as an integer") from None


def parse_config_text(text: str) -> SimConfig:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        raw = raw.strip()
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (line {lineno})")
        entries[key] = raw

    known = set(REQUIRED_KEYS) | set(OPTIONAL_KEYS)
    unknown = [k for k in entries if k not in known and not k.startswith(SCHEDULE_PREFIX)]
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = [k for k in REQUIRED_KEYS if k not in entries]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")

    schedule_params = {
        k[len(SCHEDULE_PREFIX):]: _parse_float(k, v)
        for k, v in entries.items() if k.startswith(SCHEDULE_PREFIX)
    }
    snapshot_times: tuple[float, ...] = ()
    if "snapshot_times" in entries and entries["snapshot_times"]:
        snapshot_times = tuple(
            _parse_float("snapshot_times", tok.strip())
            for tok in entries["snapshot_times"].split(",") if tok.strip()
        )

    physical = PhysicalParams(
        eta=_parse_float("eta", entries["eta"]),
        alpha=complex(_parse_float("alpha_re", entries["alpha_re"]),
                      _parse_float("alpha_im", entries["alpha_im"])),
    )
    grid = make_grid(
        _parse_float("z_min", entries["z_min"]),
        _parse_float("z_max", entries["z_max"]),
        _parse_int("n_points", entries["n_points"]),
    )
    cfg = SimConfig(
        physical=physical,
        grid=grid,
        dt=_parse_float("dt", entries["dt"]),
        t_final=_parse_float("t_final", entries["t_final"]),
        schedule_id=entries["schedule"],
        schedule_params=tuple(sorted(schedule_params.items())),
        snapshot_times=snapshot_times,
        observable_stride=_parse_int("observable_stride", entries["observable_stride"]),
        output_dir=entries["output_dir"],
        peak_threshold=_parse_float("peak_threshold", entries["peak_threshold"])
        if "peak_threshold" in entries else DEFAULT_PEAK_THRESHOLD,
        merge_width=_parse_float("merge_width", entries["merge_width"])
        if "merge_width" in entries else DEFAULT_MERGE_WIDTH,
    )
    try:
        return validate_config(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path: str | os.PathLike) -> SimConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text())


def render_config(cfg: SimConfig) -> str:
    lines = [
        f"eta = {_fmt(cfg.physical.eta)}",
        f"alpha_re = {_fmt(cfg.physical.alpha.real)}",
        f"alpha_im = {_fmt(cfg.physical.alpha.imag)}",
        f"z_min = {_fmt(cfg.grid.z_min)}",
        f"z_max = {_fmt(cfg.grid.z_max)}",
        f"n_points = {cfg.grid.n_points}",
        f"dt = {_fmt(cfg.dt)}",
        f"t_final = {_fmt(cfg.t_final)}",
        f"schedule = {cfg.schedule_id}",
    ]
    for name, value in cfg.schedule_params:
        lines.append(f"schedule.{name} = {_fmt(value)}")
    if cfg.snapshot_times:
        lines.append("snapshot_times = " + ", ".join(_fmt(t) for t in cfg.snapshot_times))
    lines += [
        f"observable_stride = {cfg.observable_stride}",
        f"output_dir = {cfg.output_dir}",
        f"peak_threshold = {_fmt(cfg.peak_threshold)}",
        f"merge_width = {_fmt(cfg.merge_width)}",
    ]
    return "\n".join(lines) + "\n"


PAPER_PRESET = """\
# production preset: entangled-pair readout, cyclic adiabatic inversion drive
# runtime is tens of minutes single-threaded; set SPINOR_THREADS to parallelize
eta = 0.3
alpha_re = -14.142135623730951
alpha_im = 0.0
z_min = -64.0
z_max = 64.0
n_points = 2048
dt = 0.0002
t_final = 216.0
schedule = paper-eq6
observable_stride = 500
snapshot_times = 0.0, 216.0
output_dir = runs/paper-eq6
"""


# ---------------------------------------------------------------------------
# data files


def write_timeseries(path: str | os.PathLike, record: RunRecord) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
        for row in record.rows:
            cells = []
            for name, value in zip(TIMESERIES_COLUMNS, row.values()):
                cells.append(str(int(value)) if name == "n_peaks" else _csv_fmt(value))
            fh.write(",".join(cells) + "\n")


def read_timeseries(path: str | os.PathLike) -> dict[str, np.ndarray]:
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise MalformedFileError(f"cannot read {p}: {exc}") from None
    if not lines:
        raise MalformedFileError(f"{p}: empty file")
    header = lines[0].split(",")
    if header != TIMESERIES_COLUMNS:
        raise MalformedFileError(f"{p}: unexpected column header")
    data = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise MalformedFileError(f"{p}: line {lineno} has {len(cells)} cells, "
                                     f"expected {len(header)}")
        try:
            data.append([float(c) for c in cells])
        except ValueError:
            raise MalformedFileError(f"{p}: line {lineno}: unparsable number") from None
    if not data:
        raise MalformedFileError(f"{p}: no data rows")
    arr = np.asarray(data)
    return {name: arr[:, i] for i, name in enumerate(TIMESERIES_COLUMNS)}


def snapshot_filename(tau: float) -> str:
    return f"snapshot_{tau:.6f}.csv"


def write_snapshot(path: str | os.PathLike, tau: float, f: SpinorField) -> None:
    g = f.grid
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# z_min={_csv_fmt(g.z_min)} z_max={_csv_fmt(g.z_max)} "
            f"n_points={g.n_points} tau={_csv_fmt(tau)}\n"
        )
        fh.write("z," + ",".join(f"re_{n},im_{n}" for n in COMPONENT_NAMES) + "\n")
        cols = [g.z]
        for name in COMPONENT_NAMES:
            u = f.components[COMPONENT_INDEX[name]]
            cols.append(u.real)
            cols.append(u.imag)
        for row in zip(*cols):
            fh.write(",".join(_csv_fmt(x) for x in row) + "\n")


def read_snapshot(path: str | os.PathLike) -> tuple[float, SpinorField]:
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise MalformedFileError(f"cannot read {p}: {exc}") from None
    if len(lines) < 3 or not lines[0].startswith("#"):
        raise MalformedFileError(f"{p}: missing snapshot header")
    meta = {}
    for tok in lines[0].lstrip("#").split():
        if "=" not in tok:
            raise MalformedFileError(f"{p}: malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        meta[k] = v
    try:
        grid = make_grid(float(meta["z_min"]), float(meta["z_max"]), int(meta["n_points"]))
        tau = float(meta["tau"])
    except (KeyError, ValueError) as exc:
        raise MalformedFileError(f"{p}: bad header: {exc}") from None
    expected_header = "z," + ",".join(f"re_{n},im_{n}" for n in COMPONENT_NAMES)
    if lines[1] != expected_header:
        raise MalformedFileError(f"{p}: unexpected column header")
    rows = [line for line in lines[2:] if line.strip()]
    if len(rows) != grid.n_points:
        raise MalformedFileError(
            f"{p}: {len(rows)} data rows, expected {grid.n_points}"
        )
    comp = np.zeros((2, 2, grid.n_points), dtype=np.complex128)
    for j, line in enumerate(rows):
        cells = line.split(",")
        if len(cells) != 1 + 2 * len(COMPONENT_NAMES):
            raise MalformedFileError(f"{p}: row {j} has {len(cells)} cells")
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise MalformedFileError(f"{p}: row {j}: unparsable number") from None
        for i, name in enumerate(COMPONENT_NAMES):
            comp[COMPONENT_INDEX[name]][j] = complex(vals[1 + 2 * i], vals[2 + 2 * i])
    return tau, SpinorField(grid, comp)


def write_provenance(path: str | os.PathLike, prov: Provenance) -> None:
    with open(path, "w") as fh:
        fh.write(f"code_version = {prov.code_version}\n")
        fh.write(f"platform = {prov.platform}\n")
        fh.write(f"wall_seconds = {prov.wall_seconds:.3f}\n")
        fh.write(f"dt = {_fmt(prov.dt)}\n")
        fh.write(f"n_steps = {prov.n_steps}\n")
        fh.write(f"grid = {_fmt(prov.grid[0])}, {_fmt(prov.grid[1])}, {prov.grid[2]}\n")


# ---------------------------------------------------------------------------
# summary


def _bloch_str(bloch) -> str:
    return "(" + ", ".join(_fmt(x) for x in bloch) + ")"


def summary_text(snapshot: tuple[float, SpinorField] | None,
                 phase_input: tuple[np.ndarray, np.ndarray, np.ndarray] | None,
                 peak_threshold: float, merge_width: float) -> str:
    """Deterministic run summary; the offline analyzer regenerates this
    byte-for-byte from the exported files."""
    lines = ["run summary", "==========="]
    if snapshot is None:
        lines.append("no snapshots recorded")
    else:
        tau, f = snapshot
        lines.append(f"snapshot tau = {_fmt(tau)}")
        dist = position_distribution(f)
        peaks = find_peaks(dist, threshold=peak_threshold, merge_width=merge_width)
        lines.append(f"peaks: {len(peaks)}")
        for p in peaks:
            lines.append(
                f"  z = {_fmt(p.position)}  height = {_fmt(p.height)}  mass = {_fmt(p.mass)}"
            )
        try:
            cat = decompose_cat(f, peaks)
        except DecompositionUnavailableError as exc:
            lines.append(f"cat decomposition: unavailable ({exc})")
        else:
            lines.append(f"cat split at z = {_fmt(cat.z_split)}")
            for label, br in (("a", cat.branch_a), ("b", cat.branch_b)):
                lines.append(
                    f"branch {label} ({br.side}): mass = {_fmt(br.mass)}  "
                    f"centroid = {_fmt(br.centroid)}  P(up2) = {_fmt(br.p_up2)}  "
                    f"residual = {_fmt(br.residual)}  S1 = {_bloch_str(br.bloch)}"
                )
        for pair, num, den in (("up2", "u_uu", "u_du"), ("down2", "u_ud", "u_dd")):
            try:
                c, resid = component_ratio(f, pair)
            except RatioUndefinedError as exc:
                lines.append(f"ratio {pair} ({num}/{den}): undefined ({exc})")
            else:
                lines.append(
                    f"ratio {pair} ({num}/{den}): c = {_fmt(c.real)} + {_fmt(c.imag)}i  "
                    f"|c| = {_fmt(abs(c))}  residual = {_fmt(resid)}"
                )
    lines.append("phase difference (windowed):")
    if phase_input is None:
        lines.append("  no time series available")
    else:
        try:
            series = track_branch_phases(*phase_input)
        except InsufficientDataError as exc:
            lines.append(f"  insufficient data ({exc})")
        else:
            lines.append(f"  windows = {series.delta_phi.size}")
            lines.append(f"  first = {_fmt(series.delta_phi[0])}")
            lines.append(f"  final = {_fmt(series.delta_phi[-1])}")
    return "\n".join(lines) + "\n"


def latest_snapshot(run_dir: str | os.PathLike) -> tuple[float, SpinorField] | None:
    paths = sorted(Path(run_dir).glob("snapshot_*.csv"))
    best: tuple[float, SpinorField] | None = None
    for p in paths:
        tau, f = read_snapshot(p)
        if best is None or tau > best[0]:
            best = (tau, f)
    return best


def analyze_run_dir(run_dir: str | os.PathLike) -> str:
    """Recompute the summary from the exported files only."""
    run_dir = Path(run_dir)
    echo = run_dir / "config_echo.cfg"
    if not echo.is_file():
        raise MalformedFileError(f"{run_dir}: missing config_echo.cfg")
    cfg = parse_config(echo)
    snapshot = latest_snapshot(run_dir)
    ts_path = run_dir / "timeseries.csv"
    phase_input = None
    if ts_path.is_file():
        cols = read_timeseries(ts_path)
        phase_input = (cols["tau"], cols["branch_a_z"], cols["branch_b_z"])
    return summary_text(snapshot, phase_input, cfg.peak_threshold, cfg.merge_width)


def analyze_snapshot_file(path: str | os.PathLike) -> str:
    """Summary of a single snapshot file, with default peak parameters."""
    tau, f = read_snapshot(path)
    return summary_text((tau, f), None, DEFAULT_PEAK_THRESHOLD, DEFAULT_MERGE_WIDTH)
