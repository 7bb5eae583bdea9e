import math

import numpy as np
import pytest
from scipy.integrate import quad

from casph import materials
from casph.mie import mie_ab
from casph.roundtrip import (
    QuadratureSpec,
    assemble_block,
    assemble_block_static,
    log_det_one_minus,
    logdet_and_distance_derivative,
    logdet_one_minus_matrix,
    spectral_radius,
)
from casph.thermodynamics import Geometry

PEC = materials.perfect_reflector()
PLASMA = materials.plasma(0.136)
DRUDE = materials.drude(0.136, 0.136 * 250.0)


def dipole_trace_reference(model, q, radius, dist):
    """Independent oracle: the single-round-trip trace of the lmax = 1
    pipeline equals the dipole coupling to the plane's reflected Green
    function, evaluated here by adaptive quadrature."""
    a1, b1 = mie_ab(model, 1, q, radius)

    def integrand(k, electric):
        r_te, r_tm = materials.fresnel(model, q, np.array([k]))
        kap = math.hypot(k, q)
        combo = ((k * k + kap * kap) * r_tm[0] - q * q * r_te[0]
                 if electric else
                 (k * k + kap * kap) * r_te[0] - q * q * r_tm[0])
        return k / kap * math.exp(-2.0 * kap * dist) * combo

    i_e = quad(lambda k: integrand(k, True), 0.0, np.inf, limit=400)[0]
    i_m = quad(lambda k: integrand(k, False), 0.0, np.inf, limit=400)[0]
    return -(3.0 / (2.0 * q**3)) * (a1 * i_e + b1 * i_m)


@pytest.mark.parametrize("model", [PEC, PLASMA, DRUDE])
@pytest.mark.parametrize("q", [0.3, 1.0, 4.0])
def test_dipole_trace_identity(model, q):
    geom = Geometry(1.08, 0.02)
    total = 0.0
    for m in (0, 1):
        blk = assemble_block(m, q, geom, model, 1)
        total += (2.0 if m else 1.0) * np.trace(blk.matrix)
    ref = dipole_trace_reference(model, q, geom.radius,
                                 geom.center_distance)
    assert total == pytest.approx(ref, rel=1e-10)


def test_static_dipole_traces():
    geom = Geometry(1.08, 0.02)
    radius, dist = geom.radius, geom.center_distance
    tr_e = tr_m = 0.0
    for m in (0, 1):
        blk = assemble_block_static(m, geom, PEC, 1)
        w = 2.0 if m else 1.0
        tr_e += w * blk.matrix[0, 0]
        tr_m += w * blk.matrix[1, 1]
    # static polarizabilities R^3 and -R^3/2 against the image dipole
    assert tr_e == pytest.approx(radius**3 / (2.0 * dist**3), rel=1e-12)
    assert tr_m == pytest.approx(radius**3 / (4.0 * dist**3), rel=1e-12)


def test_static_drude_magnetic_rows_vanish():
    geom = Geometry(0.8, 0.4)
    blk = assemble_block_static(0, geom, DRUDE, 4)
    n = blk.lmax - blk.lmin + 1
    assert np.all(blk.matrix[n:, :] == 0.0)
    assert np.any(blk.matrix[:n, :n] != 0.0)


def test_static_perfect_both_polarizations():
    blk = assemble_block_static(1, Geometry(0.8, 0.4), PEC, 4)
    n = blk.lmax - blk.lmin + 1
    assert np.all(np.diag(blk.matrix)[:n] > 0.0)
    assert np.all(np.diag(blk.matrix)[n:] > 0.0)


@pytest.mark.parametrize("model", [PEC, PLASMA, DRUDE])
def test_static_matches_small_frequency_extrapolation(model):
    # the finite-frequency block converges elementwise onto the static
    # block as x = q R -> 0: the polarization-diagonal blocks reach it to
    # 1e-6 directly, while the cross-polarization couplings (exactly zero
    # at xi = 0) and the Drude magnetic rows vanish like x and x**2
    geom = Geometry(0.9, 0.45)
    blk0 = assemble_block_static(1, geom, model, 3)
    static = blk0.matrix
    scale = np.max(np.abs(static))
    n = blk0.lmax - blk0.lmin + 1
    diffs = {}
    mm_mag = {}
    for x in (1e-6, 3e-7):
        q = x / geom.radius
        mat = assemble_block(1, q, geom, model, 3).matrix
        diag_dev = max(np.max(np.abs((mat - static)[:n, :n])),
                       np.max(np.abs((mat - static)[n:, n:])))
        if model.kind == "drude":
            # magnetic rows are zero at this order; they die like x**2
            diag_dev = np.max(np.abs((mat - static)[:n, :n]))
            mm_mag[x] = np.max(np.abs(mat[n:, n:]))
            assert mm_mag[x] <= 1e-5 * scale
        assert diag_dev <= 1e-6 * scale
        cross = max(np.max(np.abs(mat[:n, n:])), np.max(np.abs(mat[n:, :n])))
        assert cross <= 20.0 * x * scale
        diffs[x] = np.max(np.abs(mat - static))
    assert diffs[3e-7] < 0.9 * diffs[1e-6]
    if mm_mag:
        assert mm_mag[3e-7] <= 0.2 * mm_mag[1e-6]


def test_m0_block_is_polarization_diagonal():
    geom = Geometry(0.5, 1.0)
    blk = assemble_block(0, 1.3, geom, PLASMA, 6)
    n = blk.lmax - blk.lmin + 1
    assert np.all(blk.matrix[:n, n:] == 0.0)
    assert np.all(blk.matrix[n:, :n] == 0.0)


def test_quadrature_doubling_converged():
    geom = Geometry(0.5, 1.0)
    base = assemble_block(1, 2.0, geom, PEC, 8,
                          QuadratureSpec(order=200)).matrix
    fine = assemble_block(1, 2.0, geom, PEC, 8,
                          QuadratureSpec(order=400)).matrix
    scale = np.max(np.abs(base))
    assert np.max(np.abs(fine - base)) < 1e-10 * scale


def test_balanced_block_is_symmetric():
    geom = Geometry(0.5, 1.0)
    for m in (0, 1, 3):
        mat = assemble_block(m, 1.0, geom, PEC, 8).matrix
        assert np.allclose(mat, mat.T, rtol=0, atol=1e-13 * np.max(np.abs(mat)))


def test_logdet_trivial_cases():
    assert logdet_one_minus_matrix(np.zeros((4, 4))) == 0.0
    mu = 0.37
    assert logdet_one_minus_matrix(np.array([[mu]])) == pytest.approx(
        math.log(1.0 - mu), rel=1e-14)


def test_logdet_against_eigenvalue_sum():
    rng = np.random.default_rng(11)
    basis, _ = np.linalg.qr(rng.standard_normal((70, 70)))
    eigs = rng.uniform(-0.9, 0.9, 70)
    mat = (basis * eigs) @ basis.T
    ref = float(np.sum(np.log1p(-np.linalg.eigvalsh(mat))))
    assert logdet_one_minus_matrix(mat) == pytest.approx(ref, rel=1e-10)


def test_logdet_rejects_expanding_matrix():
    with pytest.raises(RuntimeError, match="spectral radius"):
        logdet_one_minus_matrix(np.array([[1.5]]))
    with pytest.raises(FloatingPointError):
        logdet_one_minus_matrix(np.array([[np.nan]]))


@pytest.mark.parametrize("model", [PEC, DRUDE])
def test_block_contraction_and_negativity(model):
    # passivity: spectral radius < 1 and ln det(1 - M) < 0
    geom = Geometry(0.2, 1.0)  # R/L = 5
    for m in (0, 2):
        blk = assemble_block(m, 1.0, geom, model, 16)
        assert spectral_radius(blk) < 1.0
        assert log_det_one_minus(blk) < 0.0


def test_logdet_monotone_in_lmax():
    geom = Geometry(0.4, 1.2)
    prev = 0.0
    for lmax in (6, 12, 18, 24):
        total = sum((2.0 if m else 1.0)
                    * log_det_one_minus(assemble_block(m, 1.5, geom, PEC,
                                                       lmax))
                    for m in range(0, lmax + 1))
        assert abs(total) >= abs(prev)
        prev = total


def test_m_contributions_decay():
    geom = Geometry(0.5, 1.0)
    vals = [abs(log_det_one_minus(assemble_block(m, 1.0, geom, PEC, 12)))
            for m in range(0, 13)]
    heads = vals[6:]
    assert all(heads[i + 1] < heads[i] for i in range(len(heads) - 1))


def test_distance_derivative_matches_fd():
    geom = Geometry(1.0, 0.5)
    blk = assemble_block(1, 1.0, geom, PEC, 8, with_deriv=True)
    ld, dld = logdet_and_distance_derivative(blk)
    h = 1e-5
    up = log_det_one_minus(assemble_block(1, 1.0, Geometry(1.0 + h, 0.5),
                                          PEC, 8))
    dn = log_det_one_minus(assemble_block(1, 1.0, Geometry(1.0 - h, 0.5),
                                          PEC, 8))
    assert dld == pytest.approx((up - dn) / (2.0 * h), rel=1e-7)
    assert ld == pytest.approx(log_det_one_minus(blk), rel=1e-14)


def test_mutated_mie_sign_breaks_dipole_oracle(monkeypatch):
    # flipping the magnetic Mie sign must break the trace identity
    import casph.roundtrip as rt
    orig = rt.mie_ab_log

    def flipped(model, q, radius, lmax):
        sa, la, sb, lb = orig(model, q, radius, lmax)
        return sa, la, -sb, lb

    monkeypatch.setattr(rt, "mie_ab_log", flipped)
    geom = Geometry(1.08, 0.02)
    q = 1.0
    total = sum((2.0 if m else 1.0)
                * np.trace(assemble_block(m, q, geom, PEC, 1).matrix)
                for m in (0, 1))
    ref = dipole_trace_reference(PEC, q, geom.radius, geom.center_distance)
    assert abs(total / ref - 1.0) > 1e-2
