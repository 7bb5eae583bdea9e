"""Mie scattering coefficients of a sphere at imaginary frequency.

At imaginary frequency xi the standard Mie coefficients a_l, b_l [Bohren &
Huffman 1983] become real.  They are built here from the modified
Riccati-Bessel pair

    S_l(x) = x i_l(x)   (exponentially growing),
    C_l(x) = x k_l(x)   (exponentially decaying),

with i_l, k_l the modified spherical Bessel functions (k_l carries the
conventional pi/2 factor, so S_l C_l' - S_l' C_l = -pi/2).  All magnitudes
are handled in log space, which keeps the module exact for size parameters
up to ~1e3 and l up to ~60.

Sign conventions are fixed so that a_l < 0 and b_l > 0 for a perfect
reflector at every positive frequency; the electric dipole limit is
a_1 -> -(2/3) x**3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import DRUDE, PERFECT, PLASMA, permittivity

LOG_HALF_PI = math.log(math.pi / 2.0)


@dataclass(frozen=True)
class RiccatiTable:
    """Log-scaled modified Riccati-Bessel values for l = 0..lmax.

    Attributes
    ----------
    x : float
        argument
    log_s, log_c : ndarray
        log S_l(x) and log C_l(x); both functions are positive
    dlog_s, dlog_c : ndarray
        logarithmic derivatives S_l'/S_l (> 0) and C_l'/C_l (< 0)
    """

    x: float
    log_s: np.ndarray
    dlog_s: np.ndarray
    log_c: np.ndarray
    dlog_c: np.ndarray


def riccati_pair(lmax, x):
    """Stable evaluation of the modified Riccati-Bessel pair.

    The growing solution is obtained from a downward ratio recurrence
    (Miller's algorithm seeded lmax + 20 orders above, or higher for large
    x), the decaying one from the upward recurrence which is stable for it.

    Parameters
    ----------
    lmax : int
        highest order, lmax >= 0
    x : float
        argument, x > 0

    Returns
    -------
    RiccatiTable
    """
    if x <= 0.0:
        raise ValueError("x must be positive")
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    lmax = int(lmax)

    # growing solution: ratios r[l] = S_l/S_{l-1} by downward recurrence
    lstart = max(lmax + 20, int(1.2 * x) + 20)
    r = np.empty(lstart + 1)
    r[lstart] = x / (2.0 * lstart + 1.0)
    for l in range(lstart - 1, 0, -1):
        r[l] = x / ((2.0 * l + 1.0) + x * r[l + 1])

    log_s = np.empty(lmax + 1)
    dlog_s = np.empty(lmax + 1)
    # S_0 = sinh x, written to avoid overflow
    log_s[0] = x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)
    dlog_s[0] = 1.0 / math.tanh(x)
    for l in range(1, lmax + 1):
        log_s[l] = log_s[l - 1] + math.log(r[l])
        # S_l' = S_{l-1} - (l/x) S_l
        dlog_s[l] = 1.0 / r[l] - l / x

    log_c = np.empty(lmax + 1)
    dlog_c = np.empty(lmax + 1)
    log_c[0] = LOG_HALF_PI - x
    dlog_c[0] = -1.0
    rho = 1.0 + 1.0 / x  # C_1/C_0
    for l in range(1, lmax + 1):
        log_c[l] = log_c[l - 1] + math.log(rho)
        # C_l' = -C_{l-1} - (l/x) C_l
        dlog_c[l] = -1.0 / rho - l / x
        rho = 1.0 / rho + (2.0 * l + 1.0) / x
    if not (np.all(np.isfinite(log_s)) and np.all(np.isfinite(log_c))):
        raise OverflowError("Riccati-Bessel scaling failed")
    return RiccatiTable(x=x, log_s=log_s, dlog_s=dlog_s,
                        log_c=log_c, dlog_c=dlog_c)


def mie_ab_log(model, q, radius, lmax):
    """Mie coefficients for l = 1..lmax as signs and log magnitudes.

    Parameters
    ----------
    model : MaterialModel
    q : float
        reduced frequency xi/c > 0 in rad/um
    radius : float
        sphere radius in um
    lmax : int

    Returns
    -------
    (sign_a, log_a, sign_b, log_b) : ndarrays of length lmax + 1
        index l; entry 0 is unused and set to (0, -inf)
    """
    x = q * radius
    tab = riccati_pair(lmax, x)

    sign_a = np.zeros(lmax + 1)
    sign_b = np.zeros(lmax + 1)
    log_a = np.full(lmax + 1, -np.inf)
    log_b = np.full(lmax + 1, -np.inf)

    base = LOG_HALF_PI + tab.log_s - tab.log_c

    if model.kind == PERFECT:
        num_a = tab.dlog_s
        den_a = tab.dlog_c
        with np.errstate(divide="ignore"):
            log_a[1:] = base[1:] + np.log(num_a[1:]) - np.log(-den_a[1:])
        sign_a[1:] = -1.0
        log_b[1:] = base[1:]
        sign_b[1:] = 1.0
        return sign_a, log_a, sign_b, log_b

    eps = permittivity(model, q)
    mr = math.sqrt(eps)
    tab_t = riccati_pair(lmax, mr * x)
    lt = tab_t.dlog_s

    num_a = mr * tab.dlog_s - lt
    den_a = mr * tab.dlog_c - lt
    num_b = tab.dlog_s - mr * lt
    den_b = tab.dlog_c - mr * lt

    with np.errstate(divide="ignore", invalid="ignore"):
        log_a[1:] = (base[1:] + np.log(np.abs(num_a[1:]))
                     - np.log(np.abs(den_a[1:])))
        log_b[1:] = (base[1:] + np.log(np.abs(num_b[1:]))
                     - np.log(np.abs(den_b[1:])))
    sign_a[1:] = np.sign(num_a[1:]) * np.sign(den_a[1:])
    sign_b[1:] = np.sign(num_b[1:]) * np.sign(den_b[1:])
    return sign_a, log_a, sign_b, log_b


def mie_ab(model, l, q, radius):
    """Mie coefficients (a_l, b_l) as plain real numbers.

    Convenience scalar form of :func:`mie_ab_log`; underflows to signed
    zero when the log magnitude drops below the double range.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if q <= 0.0 or radius <= 0.0:
        raise ValueError("q and radius must be positive")
    sa, la, sb, lb = mie_ab_log(model, q, radius, l)
    return sa[l] * math.exp(la[l]), sb[l] * math.exp(lb[l])


def _log_double_factorial_pair(l):
    """log of (2l+1)!!(2l-1)!! via lgamma."""
    # (2l+1)!! = (2l+1)!/(2^l l!),  (2l-1)!! = (2l)!/(2^l l!)
    return (math.lgamma(2 * l + 2) + math.lgamma(2 * l + 1)
            - l * math.log(4.0) - 2.0 * math.lgamma(l + 1))


def mie_ab_zero_frequency(model, l, radius):
    """Leading low-frequency coefficients (abar_l, bbar_l).

    These are the coefficients of x**(2l+1) in a_l and b_l as x = xi R/c
    goes to zero.  The Drude magnetic coefficient vanishes identically at
    this order; the plasma one depends on alpha = 2*pi*R/lambda_P and
    reduces to the perfect-reflector value 1/((2l+1)!!(2l-1)!!) for
    alpha -> infinity.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    sa, la, sb, lb = _zero_frequency_log_table(model, radius, l)
    return sa[l] * math.exp(la[l]), sb[l] * math.exp(lb[l])


def _zero_frequency_log_table(model, radius, lmax):
    """Signs and log magnitudes of the zero-frequency Mie coefficients."""
    ls = np.arange(lmax + 1, dtype=float)
    logdf = np.array([0.0] + [_log_double_factorial_pair(int(l))
                              for l in range(1, lmax + 1)])

    sign_a = np.zeros(lmax + 1)
    log_a = np.full(lmax + 1, -np.inf)
    sign_b = np.zeros(lmax + 1)
    log_b = np.full(lmax + 1, -np.inf)

    # electric: all three models share the perfectly screening limit
    with np.errstate(divide="ignore", invalid="ignore"):
        log_a[1:] = np.log((ls[1:] + 1.0) / ls[1:]) - logdf[1:]
    sign_a[1:] = -1.0

    if model.kind in (PERFECT,):
        log_b[1:] = -logdf[1:]
        sign_b[1:] = 1.0
    elif model.kind == DRUDE:
        pass  # magnetic response is O(x**(2l+2)), exactly zero at this order
    else:  # plasma
        alpha = model.q_plasma * radius
        tab = riccati_pair(lmax, alpha)
        al = alpha * tab.dlog_s
        num = al - (ls + 1.0)
        den = ls + al
        with np.errstate(divide="ignore", invalid="ignore"):
            log_b[1:] = (np.log(np.abs(num[1:])) - np.log(den[1:])
                         - logdf[1:])
        sign_b[1:] = np.sign(num[1:])
    return sign_a, log_a, sign_b, log_b
