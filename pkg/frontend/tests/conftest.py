import numpy as np
import pytest

TIMESERIES_HEADER = (
    "tau,norm2,mass_up2,mass_down2,z_mean,s1_x,s1_y,s1_z,s2_z,n_peaks,"
    "peak1_z,peak1_height,peak1_mass,peak2_z,peak2_height,peak2_mass,"
    "branch_a_z,branch_b_z,branch_a_mass,branch_b_mass,"
    "p_up2_a,p_up2_b,residual_a,residual_b"
)


def _g(x):
    return f"{x:.17g}"


@pytest.fixture
def run_dir(tmp_path):
    """Synthetic run directory in the documented export format: a two-bump
    snapshot with exact component proportionality, a time series with a
    two-peak window, and a matching summary."""
    out = tmp_path / "run"
    out.mkdir()
    n = 64
    z_min, z_max = -16.0, 16.0
    dz = (z_max - z_min) / n
    z = z_min + dz * np.arange(n)
    tau = 5.0

    bump_a = np.exp(-0.5 * (z + 6.0) ** 2) * np.exp(0.3j * z)
    bump_b = np.exp(-0.5 * (z - 6.0) ** 2) * np.exp(-0.2j * z)
    c_up, c_dn = -4.0 + 0.5j, 0.25 + 0.0j
    comps = {
        "du": 0.2 * bump_a,
        "uu": (-4.0 + 0.5j) * 0.2 * bump_a,
        "dd": 0.8 * bump_b,
        "ud": (0.25 + 0.0j) * 0.8 * bump_b,
    }

    lines = [
        f"# z_min={_g(z_min)} z_max={_g(z_max)} n_points={n} tau={_g(tau)}",
        "z," + ",".join(f"re_{c},im_{c}" for c in ("uu", "ud", "du", "dd")),
    ]
    for j in range(n):
        cells = [_g(z[j])]
        for name in ("uu", "ud", "du", "dd"):
            cells += [_g(comps[name][j].real), _g(comps[name][j].imag)]
        lines.append(",".join(cells))
    (out / f"snapshot_{tau:.6f}.csv").write_text("\n".join(lines) + "\n")

    ts_lines = [TIMESERIES_HEADER]
    for k in range(120):
        t = 0.05 * k
        two_peak = t >= 2.0
        za = _g(np.cos(t)) if two_peak else "nan"
        zb = _g(np.cos(t + 2.0)) if two_peak else "nan"
        row = [_g(t), "1", "0.5", "0.5", _g(np.cos(t)), "0", "0", "0", "0",
               "2" if two_peak else "1",
               "-6", "0.2", "0.5", "6", "0.2", "0.5",
               za, zb, "0.5", "0.5", "1", "0", "0.01", "0.01"]
        ts_lines.append(",".join(row))
    (out / "timeseries.csv").write_text("\n".join(ts_lines) + "\n")

    summary = "\n".join([
        "run summary",
        "===========",
        f"snapshot tau = {tau}",
        "peaks: 2",
        "  z = -6.0  height = 0.2  mass = 0.5",
        "  z = 6.0  height = 0.2  mass = 0.5",
        "cat split at z = 0.0",
        "branch a (left): mass = 0.5  centroid = -6.0  P(up2) = 1.0  "
        "residual = 0.0  S1 = (0.0, 0.0, 0.0)",
        "branch b (right): mass = 0.5  centroid = 6.0  P(up2) = 0.0  "
        "residual = 0.0  S1 = (0.0, 0.0, 0.0)",
        f"ratio up2 (u_uu/u_du): c = {c_up.real} + {c_up.imag}i  "
        f"|c| = {abs(c_up)}  residual = 0.001",
        f"ratio down2 (u_ud/u_dd): c = {c_dn.real} + {c_dn.imag}i  "
        f"|c| = {abs(c_dn)}  residual = 0.001",
        "phase difference (windowed):",
        "  windows = 10",
        "  first = 0.5",
        "  final = 2.0",
    ]) + "\n"
    (out / "summary.txt").write_text(summary)
    return out
