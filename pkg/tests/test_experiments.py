import math

import numpy as np
import pytest

from coldplasma.certifier import certify
from coldplasma.errors import DomainError, SimpleWaveError
from coldplasma.experiments import (
    InitialDataField, PhiTracker, condition_dynamics, default_half_width,
    density_diagnostics, detect_simple_wave, dynamics_from_series,
    eulerian_profiles, excess_charge, find_blowup, gaussian_pulse, is_rest_state,
    label_grid, sign_changes,
)
from coldplasma.sweep import Sweep

V3 = gaussian_pulse(0.4761, 0.0, 6.0)
REST = gaussian_pulse(0.0, 0.0, 3.0)


def test_gaussian_pulse_derivatives():
    f = gaussian_pulse(0.3, -0.2, 2.0)
    r = np.linspace(-4, 4, 41)
    h = 1e-6
    assert np.allclose(f.e0(r), (f.E0(r + h) - f.E0(r - h)) / (2 * h), atol=1e-8)
    assert np.allclose(f.p0(r), (f.P0(r + h) - f.P0(r - h)) / (2 * h), atol=1e-8)
    with pytest.raises(DomainError):
        gaussian_pulse(0.1, 0.0, 0.0)


def test_grid_and_half_width():
    assert default_half_width(gaussian_pulse(0.1, 0, 3.0)) == 13.5
    assert default_half_width(gaussian_pulse(0.1, 0, 1.0)) == 10.0
    g = label_grid(1.0, 0.25)
    assert g.tolist() == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]
    assert np.all(g == -g[::-1])


def test_simple_wave_detection():
    const = InitialDataField(lambda r: 0 * r, lambda r: 0.5 + 0 * r,
                             lambda r: 0 * r, lambda r: 0 * r)
    grid = label_grid(5.0, 0.1)
    assert detect_simple_wave(const.sample(grid))
    assert not detect_simple_wave(gaussian_pulse(0.4761, 0, 3).sample(grid))
    assert is_rest_state(REST.sample(grid))
    with pytest.raises(SimpleWaveError):
        find_blowup(const, 5.0)


def test_rest_state_never_breaks():
    rep = find_blowup(REST, 5.0, theta_cap=2.0)
    assert not rep.detected and rep.T_br is None


def test_find_blowup_variant3():
    rep = find_blowup(V3)
    assert rep.detected and rep.refined
    assert rep.T_br == pytest.approx(16.999, abs=0.05)
    assert rep.rho_br[0] == pytest.approx(-rep.rho_br[1], abs=1e-12)
    assert abs(rep.rho_br[0]) == pytest.approx(0.20376, abs=5e-3)
    assert rep.coarse_min >= rep.T_br - 1e-3


def test_sign_changes():
    th = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    ph = np.array([-1.0, 1.0, 1.0, -1.0, -3.0])
    assert sign_changes(th, ph) == [(0.5, 1), (2.5, -1)]
    cd = dynamics_from_series(2, th, ph, np.zeros(5))
    assert cd.theta_n == 2.5 and cd.T_n_sm == pytest.approx(2.5 + 2 * math.pi)
    assert dynamics_from_series(1, th, -np.abs(ph), np.zeros(5)).T_n_sm is None


def test_condition_dynamics_variant3():
    cd = condition_dynamics(V3, n=3)
    # negative at the start, positive episode, then negative around theta 2.6
    assert cd.phi[0] < 0
    assert [d for _, d in cd.sign_changes[:2]] == [1, -1]
    assert cd.theta_n == pytest.approx(2.6, abs=0.3)


def test_tracker_matches_certify_at_start():
    grid = label_grid(27.0, 1e-2)
    tracker = PhiTracker([1, 2])
    tracker(Sweep(grid, V3))
    for n in (1, 2):
        assert tracker.phi[n][0] == pytest.approx(certify(V3.sample(grid), n).infimum,
                                                  abs=1e-15)


def test_density_diagnostics():
    ds = density_diagnostics(V3, theta_cap=5.0)
    assert ds.N_origin[0] == pytest.approx(1 - 0.4761)
    assert np.all(ds.N_max >= ds.N_origin - 1e-12)
    assert not ds.nonpositive


def test_profiles_symmetry_and_charge():
    grid = label_grid(27.0, 1e-2)
    pr = eulerian_profiles(V3, grid, 1e-3, 10.0)
    assert np.all(np.diff(pr.rho) > 0)
    assert np.max(np.abs(pr.P + pr.P[::-1])) < 1e-3
    assert np.max(np.abs(pr.E + pr.E[::-1])) < 1e-3
    assert abs(excess_charge(pr)) < 1e-6
    assert np.allclose(pr.N, 1 - pr.e)
    assert pr.table().shape == (grid.size, 6)


def test_profile_at_zero_is_initial_data():
    grid = label_grid(3.0, 0.5)
    pr = eulerian_profiles(V3, grid, 1e-3, 0.0)
    assert np.array_equal(pr.rho, grid)
    assert np.allclose(pr.E, V3.E0(grid)) and np.allclose(pr.e, V3.e0(grid))
