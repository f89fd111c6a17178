import numpy as np
import pytest

import spincant as sc


@pytest.fixture
def small_grid():
    return sc.make_grid(-8.0, 8.0, 64)


def toy_config(output_dir, *, eta=0.3, alpha=-1.0, z_min=-8.0, z_max=8.0,
               n_points=64, dt=1e-3, t_final=1.0, stride=100,
               eps_const=5.0, phidot_amplitude=2.0, snapshot_times=()):
    """Small validation instance; eps_const=0 and phidot_amplitude=0 turn the
    drive off entirely."""
    cfg = sc.SimConfig(
        physical=sc.PhysicalParams(eta=eta, alpha=alpha),
        grid=sc.make_grid(z_min, z_max, n_points),
        dt=dt,
        t_final=t_final,
        schedule_id="toy-sine",
        schedule_params=(
            ("eps_const", eps_const),
            ("phidot_amplitude", phidot_amplitude),
            ("phidot_omega", 1.0),
        ),
        snapshot_times=tuple(snapshot_times),
        observable_stride=stride,
        output_dir=str(output_dir),
    )
    return sc.validate_config(cfg)


def l2_distance(f1, f2):
    diff = f1.components - f2.components
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * f1.grid.dz))
