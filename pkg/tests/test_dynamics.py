import numpy as np
import pytest

from biphoton.dynamics import (DriveParams, closed_form_dsi, dsi_numeric, integrate_amplitudes,
                               oracle_report)
from biphoton.errors import ConfigError, StepTooCoarse, WindowTooShort


@pytest.fixture(scope="module")
def drive():
    return DriveParams(0.1, 0.1, 200.0, 200.0, 0.25)


@pytest.fixture(scope="module")
def traj(drive):
    return integrate_amplitudes(drive)


def test_zero_areas_stay_in_ground_state():
    tr = integrate_amplitudes(DriveParams(0.0, 0.0, 200.0, 200.0, 0.25))
    assert np.all(tr.E == 1.0)
    assert np.all(tr.A == 0.0) and np.all(tr.B == 0.0)


def test_norm_bound(traj):
    assert np.all(traj.norm2() <= 1 + 1e-6)


def test_adiabatic_upper_state(traj, drive):
    assert drive.adiabatic_ok
    assert traj.adiabatic_deviation() < 0.05


def test_ground_population(traj):
    assert np.min(np.abs(traj.E) ** 2) > 0.99


def test_origin_matches_closed_form(params, drive):
    num = dsi_numeric(params, drive, 0.0, 0.0)
    ref = closed_form_dsi(params, drive, 0.0, 0.0)
    assert abs(num / ref - 1) < 1e-6


@pytest.mark.parametrize("x", [-15.0, -4.0, 2.5, 10.0])
def test_ridge_ratio(params, drive, x):
    r = dsi_numeric(params, drive, x, -x) / dsi_numeric(params, drive, 0.0, 0.0)
    h = params.gamma3N / 2
    assert abs(r / (h / (h + 1j * x)) - 1) < 1e-6


def test_oracle_scan(params, drive):
    rep = oracle_report(params, drive, span=20.0, points=11)
    assert rep["max_pointwise_relative"] < 1e-5
    assert rep["max_normalized_abs_deviation"] < 1e-5


def test_linear_in_source(params, drive):
    doubled = DriveParams(0.2, 0.2, drive.delta1, drive.delta2, drive.tau)
    for ws, wi in [(0.0, 0.0), (3.0, -7.0), (-12.0, 5.0)]:
        a = dsi_numeric(params, drive, ws, wi)
        b = dsi_numeric(params, doubled, ws, wi)
        assert b == pytest.approx(4 * a, rel=1e-12)


def test_step_too_coarse(drive):
    with pytest.raises(StepTooCoarse):
        integrate_amplitudes(drive, dt=0.01)


def test_window_too_short(params, drive):
    with pytest.raises(WindowTooShort):
        dsi_numeric(params, drive, 0.0, 0.0, t_start=-0.5)
    with pytest.raises(WindowTooShort):
        dsi_numeric(params, drive, 0.0, 0.0, t_final=2.0)


def test_drive_validation():
    with pytest.raises(ConfigError):
        DriveParams(0.1, 0.1, 0.0, 200.0, 0.25)
    with pytest.raises(ConfigError):
        DriveParams(0.1, 0.1, 200.0, 200.0, -0.25)
    assert not DriveParams(5.0, 0.1, 10.0, 200.0, 0.25).adiabatic_ok
