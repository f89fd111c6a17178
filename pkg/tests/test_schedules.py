import math

import numpy as np
import pytest

import spincant as sc


@pytest.fixture
def drive():
    return sc.make_schedule("paper-eq6")


def test_epsilon_values(drive):
    assert drive.epsilon(10.0) == 200.0
    assert drive.epsilon(0.0) == 0.0
    assert drive.epsilon(100.0) == 400.0


def test_phi_dot_values(drive):
    assert drive.phi_dot(0.0) == -600.0
    assert drive.phi_dot(20.0) == 0.0
    assert drive.phi_dot(20.0 + math.pi / 2) == pytest.approx(1000.0, abs=1e-9)


def test_continuity_at_switch(drive):
    h = 1e-9
    assert drive.epsilon(20.0 - h) == pytest.approx(drive.epsilon(20.0 + h), abs=1e-4)
    assert drive.phi_dot(20.0 - h) == pytest.approx(drive.phi_dot(20.0 + h), abs=1e-4)


def test_periodic_after_switch(drive):
    for tau in [25.0, 31.7, 100.0]:
        assert drive.phi_dot(tau) == pytest.approx(drive.phi_dot(tau + 2 * math.pi), abs=1e-9)


def test_epsilon_nonnegative(drive):
    taus = np.linspace(0.0, 250.0, 5000)
    assert all(drive.epsilon(t) >= 0.0 for t in taus)


def test_effective_field_values(drive):
    assert sc.effective_field(drive, 0.0) == (0.0, 0.0, 600.0)
    assert sc.effective_field(drive, 20.0) == (400.0, 0.0, 0.0)
    bx, by, bz = sc.effective_field(drive, 20.0 + math.pi / 2)
    assert (bx, by) == (400.0, 0.0)
    assert bz == pytest.approx(-1000.0, abs=1e-9)


def test_effective_field_bx_nonnegative(drive):
    taus = np.linspace(0.0, 250.0, 5000)
    assert all(sc.effective_field(drive, t)[0] >= 0.0 for t in taus)


def test_negative_tau_rejected(drive):
    with pytest.raises(ValueError, match="negative"):
        drive.epsilon(-0.1)
    with pytest.raises(ValueError, match="negative"):
        drive.phi_dot(-0.1)


def test_evaluation_is_pure(drive):
    assert drive.epsilon(13.7) == drive.epsilon(13.7)
    assert drive.phi_dot(197.3) == drive.phi_dot(197.3)


def test_max_abs_phi_dot(drive):
    assert drive.max_abs_phi_dot(10.0) == 600.0
    assert drive.max_abs_phi_dot(216.0) == 1000.0
    toy = sc.make_schedule("toy-sine", {"phidot_amplitude": 2.0})
    assert toy.max_abs_phi_dot(1.0) == 2.0


def test_registry_round_trip():
    s = sc.make_schedule("toy-sine", {"eps_const": 3.0})
    assert s.epsilon(5.0) == 3.0
    assert "paper-eq6" in sc.schedule_ids()
    assert "toy-sine" in sc.schedule_ids()


def test_registry_unknown_id():
    with pytest.raises(ValueError, match="unknown schedule"):
        sc.make_schedule("nope")


def test_registry_unknown_param():
    with pytest.raises(ValueError, match="plateu"):
        sc.make_schedule("paper-eq6", {"plateu": 1.0})


def test_negative_amplitude_rejected():
    with pytest.raises(ValueError):
        sc.make_schedule("toy-sine", {"eps_const": -1.0})
    with pytest.raises(ValueError):
        sc.make_schedule("paper-eq6", {"plateau": -5.0})


def test_custom_registration():
    class Flat(sc.DriveSchedule):
        schedule_id = "flat"

        def epsilon(self, tau):
            self._check_tau(tau)
            return 1.0

        def phi_dot(self, tau):
            self._check_tau(tau)
            return 0.0

        def params(self):
            return {}

    sc.register_schedule("flat-test", Flat)
    try:
        s = sc.make_schedule("flat-test")
        assert s.epsilon(2.0) == 1.0
        assert s.max_abs_phi_dot(5.0) == 0.0
    finally:
        sc.schedules._REGISTRY.pop("flat-test", None)
