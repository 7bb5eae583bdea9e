"""Closed-form large-distance (dipole) limits used as oracles.

Valid for L >> R: the sphere responds through its lowest multipole and the
Matsubara sum collapses to

    F_perf(L, R, T) = -(3 hbar c R^3 / 4 lambda_T L^3) phi(nu),
    phi(nu) = (nu sinh nu + cosh nu (nu^2 + sinh^2 nu)) / (2 sinh^3 nu),

with nu = 2 pi L/lambda_T.  The plasma and Drude variants hold additionally
for L >> lambda_T.  phi switches to a series branch at small nu where the
sinh^3 cancellation destroys precision.
"""

from __future__ import annotations

import math

from scipy.constants import Boltzmann

from .constants import HBAR_C_JUM, thermal_wavelength_um

_NU_BRANCH = 0.05
# phi(nu)*(2 nu/3) = 1 - nu^4/135 + 4 nu^6/945 - nu^8/945 + 8 nu^10/40095 ...
_PHI_SERIES = ((4, -1.0 / 135.0), (6, 4.0 / 945.0), (8, -1.0 / 945.0),
               (10, 8.0 / 40095.0), (12, -1382.0 / 42567525.0))

_ALPHA_BRANCH = 0.2
# 1 + 1/a^2 - coth(a)/a = 2/3 + a^2/45 - 2 a^4/945 + a^6/4725 ...
_BRACKET_SERIES = ((0, 2.0 / 3.0), (2, 1.0 / 45.0), (4, -2.0 / 945.0),
                   (6, 1.0 / 4725.0), (8, -2.0 / 93555.0),
                   (10, 1382.0 / 638512875.0))


def phi(nu):
    """Reduced dipole free energy phi(nu); phi -> 3/(2 nu) at small nu and
    1/2 at large nu."""
    if nu <= 0.0:
        raise ValueError("nu must be positive")
    if nu < _NU_BRANCH:
        acc = 1.0
        for p, c in _PHI_SERIES:
            acc += c * nu**p
        return 1.5 * acc / nu
    s = math.sinh(nu)
    c = math.cosh(nu)
    return (nu * s + c * (nu * nu + s * s)) / (2.0 * s**3)


def phi_prime(nu):
    """d phi/d nu, analytic on both branches."""
    if nu <= 0.0:
        raise ValueError("nu must be positive")
    if nu < _NU_BRANCH:
        acc = -1.0 / nu**2
        for p, c in _PHI_SERIES:
            acc += (p - 1) * c * nu ** (p - 2)
        return 1.5 * acc
    s = math.sinh(nu)
    c = math.cosh(nu)
    num = nu * s + c * (nu * nu + s * s)
    dnum = s + 3.0 * nu * c + s * (nu * nu + s * s) + 2.0 * s * c * c
    return (s * dnum - 3.0 * c * num) / (2.0 * s**4)


def plasma_bracket(alpha):
    """1 + 1/alpha^2 - coth(alpha)/alpha, stable for small alpha.

    Tends to 2/3 for alpha -> 0 (small sphere: the magnetic response dies
    and the Drude value is recovered) and to 1 for alpha -> infinity.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if alpha < _ALPHA_BRANCH:
        acc = 0.0
        for p, c in _BRACKET_SERIES:
            acc += c * alpha**p
        return acc
    return 1.0 + 1.0 / alpha**2 - 1.0 / (math.tanh(alpha) * alpha)


def _nu(distance_um, temperature):
    return 2.0 * math.pi * distance_um / thermal_wavelength_um(temperature)


def free_energy_perfect_dipole(distance_um, radius_um, temperature):
    """Dipole-limit free energy for perfect mirrors, in joules."""
    lam_t = thermal_wavelength_um(temperature)
    nu = _nu(distance_um, temperature)
    return -(3.0 * HBAR_C_JUM * radius_um**3
             / (4.0 * lam_t * distance_um**3)) * phi(nu)


def force_perfect_dipole(distance_um, radius_um, temperature):
    """Dipole-limit force magnitude (attraction positive), in newtons."""
    lam_t = thermal_wavelength_um(temperature)
    nu = _nu(distance_um, temperature)
    # d/dL of the free energy; 3 phi - nu phi' > 0
    val = (3.0 * HBAR_C_JUM * radius_um**3 / (4.0 * lam_t * distance_um**4)
           * (3.0 * phi(nu) - nu * phi_prime(nu)))
    return val * 1e6


def theta_perfect_dipole(distance_um, temperature):
    """Dipole-limit force ratio F(T)/F(0) = nu (3 phi - nu phi')/6."""
    nu = _nu(distance_um, temperature)
    return nu * (3.0 * phi(nu) - nu * phi_prime(nu)) / 6.0


def entropy_perfect_dipole(distance_um, radius_um, temperature):
    """Dipole-limit entropy (3 k_B R^3/4 L^3)(phi + nu phi'), in J/K.

    Negative below nu ~ 1.49, positive beyond.
    """
    nu = _nu(distance_um, temperature)
    return (3.0 * Boltzmann * radius_um**3 / (4.0 * distance_um**3)
            * (phi(nu) + nu * phi_prime(nu)))


def free_energy_plasma_dipole(distance_um, radius_um, temperature,
                              lambda_plasma_um):
    """Large-distance plasma free energy, valid L >> lambda_T, R."""
    lam_t = thermal_wavelength_um(temperature)
    alpha = 2.0 * math.pi * radius_um / lambda_plasma_um
    return -(3.0 * HBAR_C_JUM * radius_um**3
             / (8.0 * lam_t * distance_um**3)) * plasma_bracket(alpha)


def free_energy_drude_dipole(distance_um, radius_um, temperature):
    """Large-distance Drude free energy -hbar c R^3/(4 lambda_T L^3);
    independent of lambda_P and gamma."""
    lam_t = thermal_wavelength_um(temperature)
    return -HBAR_C_JUM * radius_um**3 / (4.0 * lam_t * distance_um**3)
