import numpy as np
import pytest

import spincant as sc
from spincant import textio
from spincant.propagator import evolve
from spincant.spinor import initial_state

from conftest import toy_config


VALID_CFG = """\
# comment line
eta = 0.3
alpha_re = -1.0
alpha_im = 0.0
z_min = -8.0
z_max = 8.0
n_points = 64
dt = 0.001          # inline comment
t_final = 1.0
schedule = toy-sine
schedule.eps_const = 5.0
observable_stride = 100
output_dir = out
"""


def test_parse_valid_text():
    cfg = textio.parse_config_text(VALID_CFG)
    assert cfg.physical.eta == 0.3
    assert cfg.physical.alpha == -1.0 + 0.0j
    assert cfg.grid.n_points == 64
    assert cfg.dt == 0.001
    assert cfg.schedule_id == "toy-sine"
    assert dict(cfg.schedule_params) == {"eps_const": 5.0}
    assert cfg.snapshot_times == ()
    assert cfg.peak_threshold == 0.1  # default


def test_parse_production_preset():
    cfg = textio.parse_config_text(textio.PAPER_PRESET)
    assert cfg.physical.eta == 0.3
    assert cfg.physical.alpha.real == pytest.approx(-10.0 * np.sqrt(2.0))
    assert cfg.schedule_id == "paper-eq6"
    assert cfg.t_final == 216.0
    assert cfg.dt == 2e-4
    assert cfg.snapshot_times == (0.0, 216.0)
    sched = cfg.schedule()
    assert sched.epsilon(10.0) == 200.0


def test_parse_unknown_key_named():
    bad = VALID_CFG + "etaa = 1.0\n"
    with pytest.raises(textio.ConfigError, match="etaa"):
        textio.parse_config_text(bad)


def test_parse_duplicate_key():
    bad = VALID_CFG + "eta = 0.4\n"
    with pytest.raises(textio.ConfigError, match="duplicate key 'eta'"):
        textio.parse_config_text(bad)


def test_parse_missing_key():
    bad = VALID_CFG.replace("dt = 0.001          # inline comment\n", "")
    with pytest.raises(textio.ConfigError, match="dt"):
        textio.parse_config_text(bad)


def test_parse_zero_dt_rejected():
    bad = VALID_CFG.replace("dt = 0.001          # inline comment", "dt = 0.0")
    with pytest.raises(textio.ConfigError, match="dt"):
        textio.parse_config_text(bad)


def test_parse_bad_number():
    bad = VALID_CFG.replace("eta = 0.3", "eta = zero point three")
    with pytest.raises(textio.ConfigError, match="eta"):
        textio.parse_config_text(bad)


def test_parse_unknown_schedule_param():
    bad = VALID_CFG + "schedule.bogus = 1\n"
    with pytest.raises(textio.ConfigError, match="bogus"):
        textio.parse_config_text(bad)


def test_parse_snapshot_outside_range():
    bad = VALID_CFG + "snapshot_times = 2.0\n"
    with pytest.raises(textio.ConfigError, match="snapshot"):
        textio.parse_config_text(bad)


def test_parse_phase_advance_bound():
    bad = VALID_CFG.replace("dt = 0.001          # inline comment", "dt = 0.01")
    bad = bad.replace("schedule.eps_const = 5.0",
                      "schedule.phidot_amplitude = 400.0")
    with pytest.raises(textio.ConfigError, match="phase advance"):
        textio.parse_config_text(bad)


def test_render_parse_round_trip(tmp_path):
    cfg = toy_config(tmp_path, snapshot_times=(0.0, 0.37), t_final=1.0)
    again = textio.parse_config_text(textio.render_config(cfg))
    assert again == cfg


def test_render_parse_round_trip_awkward_floats(tmp_path):
    cfg = toy_config(tmp_path, alpha=-np.sqrt(2.0), dt=1.0 / 3000.0, t_final=0.9999)
    assert textio.parse_config_text(textio.render_config(cfg)) == cfg


def test_snapshot_round_trip_exact(tmp_path, small_grid):
    rng = np.random.default_rng(1)
    f = sc.zero_field(small_grid)
    f.components[:] = rng.standard_normal(f.components.shape) \
        + 1j * rng.standard_normal(f.components.shape)
    path = tmp_path / "snapshot_1.000000.csv"
    textio.write_snapshot(path, 1.0, f)
    tau, back = textio.read_snapshot(path)
    assert tau == 1.0
    assert back.grid == small_grid
    assert np.array_equal(back.components, f.components)


def test_snapshot_truncated_rejected(tmp_path, small_grid):
    f = sc.initial_state(small_grid, -1.0)
    path = tmp_path / "snapshot_0.000000.csv"
    textio.write_snapshot(path, 0.0, f)
    text = path.read_text().splitlines()
    path.write_text("\n".join(text[:-5]))
    with pytest.raises(textio.MalformedFileError, match="rows"):
        textio.read_snapshot(path)


def test_snapshot_header_required(tmp_path):
    path = tmp_path / "snapshot_bad.csv"
    path.write_text("z,re_uu\n0.0,1.0\n")
    with pytest.raises(textio.MalformedFileError):
        textio.read_snapshot(path)


def test_timeseries_round_trip(tmp_path):
    cfg = toy_config(tmp_path / "run", t_final=0.5, stride=100)
    record = evolve(initial_state(cfg.grid, cfg.physical.alpha), cfg, cfg.schedule())
    path = tmp_path / "timeseries.csv"
    textio.write_timeseries(path, record)
    cols = textio.read_timeseries(path)
    assert np.array_equal(cols["tau"], record.column("tau"))
    assert np.array_equal(cols["norm2"], record.column("norm2"))
    # NaN branch columns survive the round trip as NaN
    assert np.all(np.isnan(cols["branch_a_z"]) == np.isnan(record.column("branch_a_z")))


def test_timeseries_malformed(tmp_path):
    path = tmp_path / "timeseries.csv"
    path.write_text("tau,norm2\n0.0,1.0\n")
    with pytest.raises(textio.MalformedFileError, match="header"):
        textio.read_timeseries(path)


def test_summary_single_peak_initial_state(small_grid):
    f = sc.initial_state(small_grid, -1.0)
    text = textio.summary_text((0.0, f), None, 0.1, 2.0)
    assert "peaks: 1" in text
    assert "cat decomposition: unavailable" in text
    assert "ratio up2 (u_uu/u_du): undefined" in text
    assert "no time series available" in text
