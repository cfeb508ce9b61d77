"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import qdcascade as qdc


def test_constants():
    assert qdc.PLANCK_UEV_NS == pytest.approx(2 * math.pi * qdc.HBAR_UEV_NS, rel=1e-9)


def test_basis_and_projectors():
    h = qdc.basis_ket(qdc.Basis.H)
    assert np.allclose(h, [1.0, 0.0])
    rl = qdc.projector(qdc.Basis.R, qdc.Basis.L)
    assert np.allclose(rl, [0.5, 0.5j, -0.5j, 0.5])


def test_concurrence_of_bell_state():
    bell = qdc.psi(0.0, 0.0)
    rho = np.outer(bell, bell.conj())
    assert qdc.concurrence(rho) == pytest.approx(1.0, abs=1e-10)
    assert qdc.fidelity(rho, bell) == pytest.approx(1.0, abs=1e-10)


def test_tomography_round_trip():
    state = qdc.psi(0.37, 12.0)
    rho = np.outer(state, state.conj())
    rates = qdc.measure_projections(rho, total_rate=2.5)
    assert len(rates) == 36
    back = qdc.reconstruct(rates)
    assert np.abs(back - rho).max() < 1e-9


def test_rf_frequency_anchor():
    assert qdc.rf_frequency_MHz(10.0) == pytest.approx(604.5, abs=0.1)


def test_erase_is_time_independent():
    target = qdc.bell_rl_plus_lr()
    for t in (0.0, 0.3, 2.7):
        out = qdc.erase(t, 20.0)
        assert abs(np.vdot(target, out)) == pytest.approx(1.0, abs=1e-10)
    assert qdc.which_path_distinguishability(20.0, qdc.compensating_omega(20.0)) == 0.0


def test_cbar_anchor():
    params = qdc.CascadeParams(delta_ueV=qdc.PLANCK_UEV_NS)  # delta/h = 1 GHz
    det = qdc.DetectorModel(0.02)
    assert qdc.cbar(params, det) == pytest.approx(0.999, abs=0.003)
    assert qdc.cbar_erased(params, qdc.DetectorModel(1.0)) == pytest.approx(1.0, abs=1e-6)


def test_rho_of_t_floor():
    params = qdc.CascadeParams(delta_ueV=1.0)
    det = qdc.DetectorModel(0.0)
    assert qdc.rho_of_t(-1.0, params, det) is None
    rho, total = qdc.rho_of_t(0.5, params, det)
    assert total == pytest.approx(qdc.envelope(0.5, params), rel=1e-12)
    assert qdc.concurrence(rho) == pytest.approx(1.0, abs=1e-10)


def test_small_sweep_and_contour():
    taus = list(np.geomspace(0.01, 1.0, 5))
    deltas = list(np.geomspace(0.5, 20.0, 4))
    values = qdc.sweep(taus, deltas, t_steps=400, workers=2)
    assert values.shape == (5, 4)
    assert np.all(values >= 0.0) and np.all(values <= 1.0)
    lines = qdc.contour(taus, deltas, values, 0.99)
    assert len(lines) >= 1
