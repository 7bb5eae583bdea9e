"""Plane-plane Lifshitz free energy and the proximity force approximation.

The plane-plane free energy per unit area at gap L is

    E_pp(L, T) = k_B T sum'_n (1/2pi) int k dk sum_p ln(1 - r_p^2 e^{-2 kappa L})

with the primed Matsubara sum (n = 0 at half weight, where the Drude TE
amplitude vanishes exactly).  The PFA force for a sphere of radius R is the
Derjaguin energy form F = 2 pi R |E_pp|, which reproduces the factor-2
plasma/Drude ratio at large distance in the plane-plane geometry.

Public functions return SI (J/m^2 and N); force is positive for attraction.
"""

from __future__ import annotations

import math

import numpy as np

from .constants import HBAR_C_JUM, boltzmann_energy_j, thermal_wavelength_um
from .materials import DRUDE, PERFECT, fresnel, fresnel_zero_frequency

ZETA3 = 1.2020569031595943


def _gauss(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _finite_n_integral(model, q, gap, order=200, span=40.0):
    """(1/(2L)^2) int_{t0}^inf t dt sum_p ln(1 - r_p^2 e^{-t}), t = 2 kappa L."""
    t0 = 2.0 * q * gap
    t, w = _gauss(order, t0, t0 + span)
    kappa = t / (2.0 * gap)
    k = np.sqrt(np.maximum(kappa * kappa - q * q, 0.0))
    r_te, r_tm = fresnel(model, q, k)
    et = np.exp(-t)
    val = np.sum(w * t * (np.log1p(-r_te**2 * et) + np.log1p(-r_tm**2 * et)))
    return val / (2.0 * gap) ** 2


def _static_integral(model, gap, order=800, span=60.0):
    """n = 0 term of the t-integral (t0 = 0); TM gives -zeta(3) exactly."""
    total = -ZETA3  # TM channel, all models
    if model.kind == PERFECT:
        total += -ZETA3
    elif model.kind == DRUDE:
        pass  # TE vanishes at zero frequency
    else:
        # TE amplitude -> -1 as k -> 0 gives a weak t*log t end-point;
        # map t = y^2 to smooth it out
        y, w = _gauss(order, 0.0, math.sqrt(span))
        t = y * y
        r_te, _ = fresnel_zero_frequency(model, t / (2.0 * gap))
        total += np.sum(2.0 * y * w * t * np.log1p(-r_te**2 * np.exp(-t)))
    return total / (2.0 * gap) ** 2


def lifshitz_energy_per_area(gap_um, temperature, model, tol=1e-10,
                             order=200):
    """Plane-plane Casimir free energy per unit area, J/m^2 (negative).

    Parameters
    ----------
    gap_um : float
        separation in um
    temperature : float
        in K; 0 selects the zero-temperature energy
    model : MaterialModel
    tol : float
        relative tail target of the Matsubara sum
    """
    if gap_um <= 0.0:
        raise ValueError("gap must be positive")
    if temperature == 0.0:
        return _zero_temperature_energy_per_area(gap_um, model, order)
    lam_t = thermal_wavelength_um(temperature)
    total = 0.5 * _static_integral(model, gap_um)
    n = 1
    n_min = max(1, math.ceil(lam_t / (2.0 * math.pi * gap_um)))
    while True:
        q = 2.0 * math.pi * n / lam_t
        term = _finite_n_integral(model, q, gap_um, order=order)
        total += term
        if n >= n_min and abs(term) < tol * abs(total):
            break
        if n > 200000:
            raise RuntimeError("plane-plane Matsubara sum did not converge")
        n += 1
    # k dk/(2 pi) measure and J/um^2 -> J/m^2
    return boltzmann_energy_j(temperature) * total / (2.0 * math.pi) * 1e12


def _zero_temperature_energy_per_area(gap_um, model, order=200):
    """T = 0 plane-plane energy per area by a double Gauss rule."""
    tq, wq = _gauss(order, 0.0, 42.0)
    total = 0.0
    for tqi, wqi in zip(tq, wq):
        q = tqi / (2.0 * gap_um)
        total += wqi * _finite_n_integral(model, q, gap_um, order=order) \
            / (2.0 * gap_um)
    # (hbar c / 2 pi) dq integral, then 1/(2 pi) from k dk
    return HBAR_C_JUM * total / (4.0 * math.pi**2) * 1e12


def pfa_force(gap_um, radius_um, temperature, model, tol=1e-10):
    """PFA force 2 pi R |E_pp| in newtons (positive = attraction)."""
    e_pp = lifshitz_energy_per_area(gap_um, temperature, model, tol=tol)
    # J/m^2 * m = J/m = N
    return -2.0 * math.pi * (radius_um * 1e-6) * e_pp


def pfa_theta(gap_um, temperature, model, tol=1e-10):
    """PFA force ratio F(L,T)/F(L,0); independent of the sphere radius."""
    return (lifshitz_energy_per_area(gap_um, temperature, model, tol=tol)
            / lifshitz_energy_per_area(gap_um, 0.0, model, tol=tol))
