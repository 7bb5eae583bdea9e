"""Physical constants and the internal unit system.

All internal computations use micrometres for lengths and carry imaginary
frequencies as the reduced wavenumber q = xi/c in rad/um.  Energies are
accumulated in units of hbar*c/um and converted to SI only where a public
function documents SI output.  This keeps every intermediate O(1) and avoids
hbar/k_B round-off.
"""

import math

from scipy.constants import Boltzmann, c, hbar

# hbar*c expressed in J*um; the natural internal energy unit is hbar*c/um.
HBAR_C_JUM = hbar * c * 1e6

METER_PER_UM = 1e-6


def thermal_wavelength_um(T):
    """Thermal wavelength hbar*c/(k_B T) in micrometres (7.63 um at 300 K)."""
    if T <= 0.0:
        raise ValueError("temperature must be positive")
    return hbar * c / (Boltzmann * T) * 1e6


def boltzmann_energy_j(T):
    """k_B T in joules."""
    return Boltzmann * T


def matsubara_q_um(T, n):
    """Reduced Matsubara wavenumber xi_n/c = 2*pi*n/lambda_T in rad/um."""
    return 2.0 * math.pi * n / thermal_wavelength_um(T)
