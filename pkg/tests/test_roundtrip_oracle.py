"""Field-reflection oracle for the round-trip plane operator.

Independent construction: an outgoing vector multipole is reflected in a
perfectly conducting plane by the exact image map E -> S E(S r) (S flips
the tangential components), and the reflected field is re-expanded in
regular multipoles by least squares on sample points.  The resulting
operator must agree with the module's quadrature-built block up to the
basis conversion constant -2/pi per scattering event and diagonal phase
freedom, so diagonals, symmetric pair products and 3-cycles are compared.
This pins every relative sign in the polarization kernels, including the
cross-polarization couplings that no trace-level oracle can see.
"""

import itertools
import math

import numpy as np
import pytest
from scipy.special import sph_harm_y, spherical_in, spherical_kn

from casph import materials
from casph.roundtrip import QuadratureSpec, _block_core

Q = 1.1          # reduced frequency, rad/um
DIST = 0.9       # center-to-plane distance, um
L_CMP = 3        # compared multipole orders
L_FIT = 11       # fit basis size (covers re-expansion tails)


def ylm(l, m, theta, phi):
    if abs(m) > l:
        return np.zeros_like(theta, dtype=complex)
    return sph_harm_y(l, m, theta, phi)


def x_cart(l, m, theta, phi):
    lp = math.sqrt(max(0.0, (l - m) * (l + m + 1))) * ylm(l, m + 1, theta,
                                                          phi)
    lm = math.sqrt(max(0.0, (l + m) * (l - m + 1))) * ylm(l, m - 1, theta,
                                                          phi)
    lz = m * ylm(l, m, theta, phi)
    lx = 0.5 * (lp + lm)
    ly = (lp - lm) / 2j
    return np.stack([lx, ly, lz], axis=-1) / math.sqrt(l * (l + 1))


def m_field(kind, l, m, pts):
    r = np.linalg.norm(pts, axis=1)
    theta = np.arccos(np.clip(pts[:, 2] / r, -1.0, 1.0))
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    f = spherical_in(l, Q * r) if kind == "I" else spherical_kn(l, Q * r)
    return f[:, None] * x_cart(l, m, theta, phi)


def curl(fn, pts, h=2e-4):
    out = np.zeros((pts.shape[0], 3), dtype=complex)

    def deriv(axis, comp):
        e = np.zeros(3)
        e[axis] = h
        return (-fn(pts + 2 * e)[:, comp] + 8 * fn(pts + e)[:, comp]
                - 8 * fn(pts - e)[:, comp]
                + fn(pts - 2 * e)[:, comp]) / (12 * h)

    out[:, 0] = deriv(1, 2) - deriv(2, 1)
    out[:, 1] = deriv(2, 0) - deriv(0, 2)
    out[:, 2] = deriv(0, 1) - deriv(1, 0)
    return out


def basis_field(kind, pol, l, m, pts):
    if pol == "M":
        return m_field(kind, l, m, pts)
    return curl(lambda p: m_field(kind, l, m, p), pts) / Q


def reflected_field(pol, l, m, pts):
    mirrored = pts.copy()
    mirrored[:, 2] = -2.0 * DIST - pts[:, 2]
    field = basis_field("K", pol, l, m, mirrored)
    field[:, 0] *= -1.0
    field[:, 1] *= -1.0
    return field


def fitted_operator(m, pts):
    lmin = max(1, m)
    labels = [(pol, l) for pol in ("E", "M") for l in range(lmin, L_FIT + 1)]
    columns = [basis_field("I", pol, l, m, pts).reshape(-1)
               for pol, l in labels]
    design = np.stack(columns, axis=1)
    keep = [i for i, (pol, l) in enumerate(labels) if l <= L_CMP]
    nc = len(keep)
    fitted = np.zeros((nc, nc), dtype=complex)
    sources = [(pol, l) for pol in ("E", "M") for l in range(lmin,
                                                             L_CMP + 1)]
    for j, (pol, l) in enumerate(sources):
        rhs = reflected_field(pol, l, m, pts).reshape(-1)
        sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
        assert (np.linalg.norm(design @ sol - rhs)
                < 1e-3 * np.linalg.norm(rhs))
        fitted[:, j] = sol[keep]
    return fitted


def module_operator(m):
    lmin = max(1, m)
    ones = np.ones(L_CMP + 1)
    zeros = np.zeros(L_CMP + 1)
    mats = _block_core(m, Q, DIST, materials.perfect_reflector(), lmin,
                       L_CMP, QuadratureSpec(order=300), ones, zeros, ones,
                       zeros, False)
    return mats[0]


@pytest.fixture(scope="module")
def sample_points():
    rng = np.random.default_rng(7)
    n = 800
    radius = 0.3 * DIST + 0.2 * DIST * rng.uniform(size=n)
    costh = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    sinth = np.sqrt(1.0 - costh**2)
    return np.stack([radius * sinth * np.cos(phi),
                     radius * sinth * np.sin(phi),
                     radius * costh], axis=1)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_block_matches_field_reflection(m, sample_points):
    fitted = fitted_operator(m, sample_points) * (-2.0 / math.pi)
    module = module_operator(m)
    n = module.shape[0]

    # diagonals are invariant under any diagonal similarity
    ratio = np.diag(fitted) / np.diag(module)
    assert np.max(np.abs(np.imag(ratio))) < 1e-6
    assert np.max(np.abs(np.real(ratio) - 1.0)) < 0.01

    # symmetric pair products pin the relative signs of off-diagonals
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            ref = module[i, j] * module[j, i]
            if abs(ref) < 1e-13 * np.max(np.abs(module))**2:
                continue
            got = fitted[i, j] * fitted[j, i]
            assert abs(np.imag(got / ref)) < 1e-4
            assert abs(np.real(got / ref) - 1.0) < 0.03, (m, i, j)
            checked += 1
    assert checked >= (3 if m == 2 else 6)

    # 3-cycles pin everything a similarity cannot reach
    for i, j, k in itertools.combinations(range(n), 3):
        ref = module[i, j] * module[j, k] * module[k, i]
        if abs(ref) < 1e-15 * np.max(np.abs(module))**3:
            continue
        got = fitted[i, j] * fitted[j, k] * fitted[k, i]
        assert abs(np.imag(got / ref)) < 1e-4
        assert abs(np.real(got / ref) - 1.0) < 0.05, (m, i, j, k)
