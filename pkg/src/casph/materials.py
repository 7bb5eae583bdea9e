"""Dielectric functions at imaginary frequency and plane-mirror reflection.

Three mirror models are supported: a perfect reflector, the lossless plasma
model and the dissipative Drude model with

    eps(i*xi) = 1 + omega_P**2 / (xi*(xi + gamma)) .

Frequencies enter as the reduced wavenumber q = xi/c in rad/um, wavevectors
as k in rad/um (see :mod:`casph.constants`).  At imaginary frequency all
reflection amplitudes are real, r_TM in [0, 1] and r_TE in [-1, 0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PERFECT = "perfect"
PLASMA = "plasma"
DRUDE = "drude"


@dataclass(frozen=True)
class MaterialModel:
    """Mirror material description.

    Parameters
    ----------
    kind : str
        one of "perfect", "plasma", "drude"
    lambda_plasma : float, optional
        plasma wavelength 2*pi*c/omega_P in um (plasma and Drude)
    lambda_gamma : float, optional
        relaxation wavelength 2*pi*c/gamma in um (Drude only)
    """

    kind: str
    lambda_plasma: float | None = None
    lambda_gamma: float | None = None

    def __post_init__(self):
        if self.kind not in (PERFECT, PLASMA, DRUDE):
            raise ValueError(f"unknown material kind {self.kind!r}")
        if self.kind in (PLASMA, DRUDE):
            if self.lambda_plasma is None or self.lambda_plasma <= 0.0:
                raise ValueError("lambda_plasma must be positive")
        if self.kind == DRUDE:
            if self.lambda_gamma is None or self.lambda_gamma <= 0.0:
                raise ValueError("lambda_gamma must be positive")

    @property
    def q_plasma(self):
        """omega_P/c = 2*pi/lambda_P in rad/um."""
        return 2.0 * math.pi / self.lambda_plasma

    @property
    def q_gamma(self):
        """gamma/c = 2*pi/lambda_gamma in rad/um."""
        return 2.0 * math.pi / self.lambda_gamma

    @property
    def sigma0(self):
        """Reduced dc conductivity sigma_0/c = (omega_P/c)**2/(gamma/c), rad/um."""
        return self.q_plasma**2 / self.q_gamma

    def label(self):
        return self.kind


def perfect_reflector():
    return MaterialModel(PERFECT)


def plasma(lambda_plasma_um):
    return MaterialModel(PLASMA, lambda_plasma=lambda_plasma_um)


def drude(lambda_plasma_um, lambda_gamma_um):
    return MaterialModel(DRUDE, lambda_plasma=lambda_plasma_um,
                         lambda_gamma=lambda_gamma_um)


def permittivity(model, q):
    """Dielectric function eps(i*xi) evaluated at q = xi/c > 0.

    The perfect reflector bypasses eps entirely and is rejected here; q = 0
    is rejected as well because eps diverges there for plasma and Drude
    mirrors (the static Matsubara term has a dedicated code path).
    """
    if model.kind == PERFECT:
        raise ValueError("perfect reflector has no dielectric function")
    q = float(q)
    if q <= 0.0:
        raise ValueError("eps(i*xi) diverges as xi -> 0; use the "
                         "zero-frequency limit path instead")
    qp2 = model.q_plasma**2
    if model.kind == PLASMA:
        return 1.0 + qp2 / q**2
    return 1.0 + qp2 / (q * (q + model.q_gamma))


def fresnel(model, q, k):
    """Fresnel reflection amplitudes (r_TE, r_TM) at imaginary frequency.

    Parameters
    ----------
    model : MaterialModel
    q : float
        reduced frequency xi/c > 0 in rad/um
    k : float or ndarray
        transverse wavevector in rad/um, k >= 0

    Returns
    -------
    (r_TE, r_TM) : ndarray or float
        real amplitudes with kappa = sqrt(k**2 + q**2) and
        kappa_t = sqrt(k**2 + eps*q**2):
        r_TE = (kappa - kappa_t)/(kappa + kappa_t),
        r_TM = (eps*kappa - kappa_t)/(eps*kappa + kappa_t).
    """
    k = np.asarray(k, dtype=float)
    if model.kind == PERFECT:
        shape = np.broadcast_shapes(k.shape, ())
        return -np.ones(shape), np.ones(shape)
    if q <= 0.0:
        raise ValueError("q must be positive; use fresnel_zero_frequency")
    eps = permittivity(model, q)
    kappa = np.hypot(k, q)
    kappa_t = np.hypot(k, math.sqrt(eps) * q)
    # subtraction-free forms, exact rewrites of the defining ratios
    r_te = -(eps - 1.0) * q**2 / (kappa + kappa_t) ** 2
    r_tm = (eps - 1.0) * (kappa * kappa_t + k**2) / (
        (kappa + kappa_t) * (eps * kappa + kappa_t))
    return r_te, r_tm


def fresnel_zero_frequency(model, k):
    """Exact xi -> 0 limits of the Fresnel amplitudes at fixed k > 0.

    Perfect reflector keeps (-1, 1), the Drude TE amplitude vanishes while
    the plasma one stays finite; r_TM -> 1 for all three models.
    """
    k = np.asarray(k, dtype=float)
    ones = np.ones(np.broadcast_shapes(k.shape, ()))
    if model.kind == PERFECT:
        return -ones, ones
    if model.kind == DRUDE:
        return np.zeros_like(ones), ones
    qp = model.q_plasma
    r_te = -qp**2 / (k + np.hypot(k, qp)) ** 2
    return r_te, ones
