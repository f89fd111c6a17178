import numpy as np
import pytest

import spincant as sc
from spincant.oracle import _kinetic_block
from spincant.propagator import _step_inplace

from conftest import l2_distance, toy_config


def _free_schedule():
    return sc.make_schedule("toy-sine", {"eps_const": 0.0, "phidot_amplitude": 0.0})


def _params(eta=0.3):
    return sc.PhysicalParams(eta=eta, alpha=-1.0)


def test_assemble_hermitian(small_grid):
    h = sc.assemble(small_grid, _params(), sc.make_schedule("toy-sine"), 0.7)
    assert h.hermiticity_residual() <= 1e-12


def test_assemble_free_case_blocks(small_grid):
    n = small_grid.n_points
    h = sc.assemble(small_grid, _params(eta=0.0), _free_schedule(), 0.0).matrix
    assert np.array_equal(h[:n, :n], h[n:, n:])
    assert np.all(h[:n, n:] == 0.0)
    assert np.all(h[n:, :n] == 0.0)


def test_assemble_coupling_blocks(small_grid):
    n = small_grid.n_points
    eps = 5.0
    h = sc.assemble(small_grid, _params(), sc.make_schedule("toy-sine", {"eps_const": eps}), 0.0).matrix
    assert np.array_equal(h[:n, n:], -0.5 * eps * np.eye(n))
    assert np.array_equal(h[n:, :n], -0.5 * eps * np.eye(n))


def test_assemble_kinetic_matches_spectral_semantics(small_grid):
    # applying the dense kinetic block equals FFT -> p^2/2 -> IFFT
    kin = _kinetic_block(small_grid)
    rng = np.random.default_rng(2)
    v = rng.standard_normal(small_grid.n_points) + 1j * rng.standard_normal(small_grid.n_points)
    via_fft = np.fft.ifft(0.5 * small_grid.momenta ** 2 * np.fft.fft(v))
    assert np.allclose(kin @ v, via_fft, atol=1e-11)


def test_assemble_cost_guard():
    big = sc.make_grid(-8.0, 8.0, 512)
    with pytest.raises(ValueError, match="oracle"):
        sc.assemble(big, _params(), sc.make_schedule("toy-sine"), 0.0)


def test_oracle_ground_state_stationary(small_grid):
    # free oscillator: the coherent packet at alpha=0 is the ground state,
    # picking up only the zero-point phase exp(-i tau / 2)
    t_final = 0.5
    cfg = sc.SimConfig(
        physical=sc.PhysicalParams(eta=0.0, alpha=0.0),
        grid=small_grid, dt=2e-3, t_final=t_final,
        schedule_id="toy-sine",
        schedule_params=(("eps_const", 0.0), ("phidot_amplitude", 0.0)),
        observable_stride=100, output_dir="unused")
    f0 = sc.zero_field(small_grid)
    f0.components[0, 0] = sc.spinor.coherent_packet(small_grid, 0.0)
    out = sc.oracle_evolve(f0, cfg, _free_schedule())
    assert np.max(np.abs(np.abs(out.components) - np.abs(f0.components))) < 1e-8
    overlap = np.sum(f0.components.conj() * out.components) * small_grid.dz
    assert abs(overlap * np.exp(0.5j * t_final) - 1.0) < 1e-8
    assert sc.field_norm2(out) == pytest.approx(1.0, abs=1e-10)


def test_oracle_unitary(tmp_path):
    cfg = toy_config(tmp_path, t_final=0.25, dt=1e-3)
    f0 = sc.initial_state(cfg.grid, cfg.physical.alpha)
    out = sc.oracle_evolve(f0, cfg, cfg.schedule())
    assert sc.field_norm2(out) == pytest.approx(1.0, abs=1e-10)


def test_oracle_self_convergence(tmp_path):
    cfg = toy_config(tmp_path, t_final=0.25, dt=1e-3)
    f0 = sc.initial_state(cfg.grid, cfg.physical.alpha)
    s = cfg.schedule()
    coarse = sc.oracle_evolve(f0, cfg, s, dt_oracle=cfg.dt / 4.0)
    fine = sc.oracle_evolve(f0, cfg, s, dt_oracle=cfg.dt / 8.0)
    assert l2_distance(coarse, fine) < 1e-8


def test_oracle_rejects_coarse_substep(tmp_path):
    cfg = toy_config(tmp_path)
    f0 = sc.initial_state(cfg.grid, cfg.physical.alpha)
    with pytest.raises(ValueError, match="dt/4"):
        sc.oracle_evolve(f0, cfg, cfg.schedule(), dt_oracle=cfg.dt / 2.0)


def test_fast_path_matches_oracle(tmp_path):
    # short version of the acceptance check: same toy drive, tau_end = 0.25
    cfg = toy_config(tmp_path, t_final=0.25, dt=1e-3)
    s = cfg.schedule()
    f0 = sc.initial_state(cfg.grid, cfg.physical.alpha)
    fast = f0.copy()
    plan = sc.StepPlan(cfg.grid, cfg.dt, cfg.physical.eta)
    for k in range(cfg.n_steps()):
        _step_inplace(fast, plan, s, k * cfg.dt)
    ref = sc.oracle_evolve(f0, cfg, s)
    assert l2_distance(fast, ref) < 1e-6
