"""Readers for the simulator's exported text files.

Snapshot files: one '#' header line with z_min/z_max/n_points/tau, a CSV
header `z,re_uu,im_uu,...`, then one row per grid point. Component name
order is uu, ud, du, dd (first letter: driven spin s1, second: remote
spin s2). timeseries.csv is a plain CSV with a fixed header. summary.txt
carries the fitted component ratios and windowed phase differences.
"""

import re
from pathlib import Path

import numpy as np

COMPONENT_NAMES = ["uu", "ud", "du", "dd"]


class MissingDataError(RuntimeError):
    """Input files absent or lacking the data a figure needs."""


def _require(path: Path) -> Path:
    if not path.is_file():
        raise MissingDataError(f"required file not found: {path}")
    return path


def load_snapshot(path: Path) -> dict:
    """Returns {'tau', 'z', 'uu', 'ud', 'du', 'dd'} with complex components."""
    path = _require(Path(path))
    lines = path.read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("#"):
        raise MissingDataError(f"{path}: not a snapshot file (missing '#' header)")
    meta = dict(tok.split("=", 1) for tok in lines[0].lstrip("#").split() if "=" in tok)
    try:
        tau = float(meta["tau"])
        n = int(meta["n_points"])
    except (KeyError, ValueError) as exc:
        raise MissingDataError(f"{path}: bad snapshot header: {exc}") from None
    rows = [line.split(",") for line in lines[2:] if line.strip()]
    if len(rows) != n or any(len(r) != 9 for r in rows):
        raise MissingDataError(f"{path}: malformed snapshot body")
    arr = np.array(rows, dtype=float)
    out = {"tau": tau, "z": arr[:, 0]}
    for i, name in enumerate(COMPONENT_NAMES):
        out[name] = arr[:, 1 + 2 * i] + 1j * arr[:, 2 + 2 * i]
    return out


def latest_snapshot_path(run_dir: Path) -> Path:
    run_dir = Path(run_dir)
    candidates = sorted(run_dir.glob("snapshot_*.csv"))
    if not candidates:
        raise MissingDataError(f"no snapshot_*.csv files in {run_dir}")
    return max(candidates, key=lambda p: load_snapshot(p)["tau"])


def load_timeseries(path: Path) -> dict[str, np.ndarray]:
    path = _require(Path(path))
    lines = path.read_text().splitlines()
    if len(lines) < 2:
        raise MissingDataError(f"{path}: empty time series")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:] if line.strip()]
    if any(len(r) != len(header) for r in rows):
        raise MissingDataError(f"{path}: ragged time series rows")
    arr = np.array(rows, dtype=float)
    return {name: arr[:, i] for i, name in enumerate(header)}


_RATIO_LINE = re.compile(
    r"^ratio (?P<pair>\w+) \([^)]*\): c = (?P<re>\S+) \+ (?P<im>\S+)i\s+"
    r"\|c\| = (?P<abs>\S+)\s+residual = (?P<resid>\S+)\s*$"
)


def load_summary_ratios(path: Path) -> dict[str, complex]:
    """Fitted proportionality constants keyed by pair name ('up2', 'down2')."""
    path = _require(Path(path))
    ratios: dict[str, complex] = {}
    for line in path.read_text().splitlines():
        m = _RATIO_LINE.match(line.strip())
        if m:
            ratios[m.group("pair")] = complex(float(m.group("re")), float(m.group("im")))
    if not ratios:
        raise MissingDataError(f"{path}: no fitted component ratios in summary")
    return ratios


def load_summary_phases(path: Path) -> dict[str, float]:
    """First/final windowed phase difference, when the summary has them."""
    path = _require(Path(path))
    out: dict[str, float] = {}
    in_section = False
    for line in path.read_text().splitlines():
        if line.startswith("phase difference"):
            in_section = True
            continue
        if in_section:
            m = re.match(r"^\s+(first|final) = (\S+)\s*$", line)
            if m:
                out[m.group(1)] = float(m.group(2))
    if "first" not in out or "final" not in out:
        raise MissingDataError(f"{path}: no windowed phase difference in summary")
    return out
