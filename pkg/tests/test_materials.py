import math

import numpy as np
import pytest

from casph import materials
from casph.materials import fresnel, fresnel_zero_frequency, permittivity

PEC = materials.perfect_reflector()
PLASMA = materials.plasma(0.136)
DRUDE = materials.drude(0.136, 0.136 * 250.0)


def test_permittivity_drude_at_gamma():
    # eps(i gamma) = 1 + omega_P^2/(2 gamma^2) = 1 + 250^2/2 for this ratio
    eps = permittivity(DRUDE, DRUDE.q_gamma)
    assert eps == pytest.approx(1.0 + 250.0**2 / 2.0, rel=1e-12)


def test_permittivity_plasma_at_omega_p():
    assert permittivity(PLASMA, PLASMA.q_plasma) == pytest.approx(2.0)


def test_permittivity_high_frequency_transparency():
    assert permittivity(DRUDE, 1e7) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("model", [PLASMA, DRUDE])
def test_permittivity_monotone_decreasing(model):
    qs = np.logspace(-3, 3, 40)
    eps = np.array([permittivity(model, q) for q in qs])
    assert np.all(eps >= 1.0)
    assert np.all(np.diff(eps) < 0.0)


def test_permittivity_rejects_perfect_and_zero():
    with pytest.raises(ValueError):
        permittivity(PEC, 1.0)
    with pytest.raises(ValueError, match="diverges"):
        permittivity(DRUDE, 0.0)
    with pytest.raises(ValueError, match="diverges"):
        permittivity(PLASMA, 0.0)


def test_fresnel_perfect_reflector():
    r_te, r_tm = fresnel(PEC, 2.0, np.array([0.0, 1.0, 10.0]))
    assert np.all(r_te == -1.0)
    assert np.all(r_tm == 1.0)


@pytest.mark.parametrize("model", [PEC, PLASMA, DRUDE])
def test_fresnel_amplitude_ranges(model):
    ks = np.logspace(-3, 3, 25)
    for q in (1e-3, 0.5, 30.0):
        r_te, r_tm = fresnel(model, q, ks)
        assert np.all((r_tm >= 0.0) & (r_tm <= 1.0))
        assert np.all((-r_te >= 0.0) & (-r_te <= 1.0))


def test_drude_to_plasma_at_finite_frequency():
    # lambda_gamma -> infinity restores the plasma amplitudes for fixed
    # xi > 0; the residual scales like gamma/xi
    nearly_plasma = materials.drude(0.136, 0.136 * 1e6)
    ks = np.logspace(-2, 2, 10)
    for q in (0.5, 1.0, 10.0):
        r1 = np.array(fresnel(nearly_plasma, q, ks))
        r2 = np.array(fresnel(PLASMA, q, ks))
        assert np.max(np.abs(r1 - r2) / np.abs(r2)) < 1e-4


def test_zero_frequency_limits():
    ks = np.array([0.5, 3.0, 40.0])
    r_te, r_tm = fresnel_zero_frequency(DRUDE, ks)
    assert np.all(r_te == 0.0) and np.all(r_tm == 1.0)
    r_te, r_tm = fresnel_zero_frequency(PEC, ks)
    assert np.all(r_te == -1.0) and np.all(r_tm == 1.0)
    qp = PLASMA.q_plasma
    r_te, r_tm = fresnel_zero_frequency(PLASMA, ks)
    expect = (ks - np.hypot(ks, qp)) / (ks + np.hypot(ks, qp))
    assert np.allclose(r_te, expect, rtol=1e-14)
    assert np.all(r_tm == 1.0)


def test_plasma_zero_frequency_large_k_expansion():
    qp = PLASMA.q_plasma
    k = 80.0 * qp
    r_te, _ = fresnel_zero_frequency(PLASMA, np.array([k]))
    lead = -qp**2 / (4.0 * k**2)
    assert r_te[0] == pytest.approx(lead, rel=5e-4)
    assert r_te[0] < 0.0


def test_zero_frequency_matches_small_frequency_limit():
    # exact static limits agree with Richardson extrapolation of the full
    # form from xi -> 0+ (the Drude TE amplitude vanishes linearly in xi)
    ks = np.array([0.3, 2.0, 20.0])
    for model in (PLASMA, DRUDE):
        q1 = 1e-10 * model.q_plasma
        r1 = np.array(fresnel(model, q1, ks))
        r2 = np.array(fresnel(model, 0.5 * q1, ks))
        extrap = 2.0 * r2 - r1
        r_zero = np.array(fresnel_zero_frequency(model, ks))
        assert np.max(np.abs(extrap - r_zero)) < 1e-6


def test_zero_frequency_drude_plasma_discontinuity():
    # at xi = 0 exactly, the Drude TE amplitude is 0 while plasma stays finite
    k = np.array([1.0])
    assert fresnel_zero_frequency(DRUDE, k)[0][0] == 0.0
    assert fresnel_zero_frequency(PLASMA, k)[0][0] < -0.5


def test_material_validation():
    with pytest.raises(ValueError):
        materials.MaterialModel("metal")
    with pytest.raises(ValueError):
        materials.plasma(-1.0)
    with pytest.raises(ValueError):
        materials.drude(0.1, 0.0)
    assert DRUDE.sigma0 == pytest.approx(DRUDE.q_plasma**2 / DRUDE.q_gamma)
