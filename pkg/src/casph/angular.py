"""Mie angular functions at hyperbolic argument.

Plane waves at imaginary frequency reach the multipole expansion at the
argument u = kappa*c/xi >= 1, where the associated Legendre functions grow
like u**l.  This module evaluates the standard angular functions

    pi_l^m(u)  = P_l^m(u)/sqrt(u**2 - 1),
    tau_l^m(u) = sqrt(u**2 - 1) * dP_l^m(u)/du,

(real branch, no Condon-Shortley phase) scaled by exp(-l*arccosh(u)) and by
the multipole normalization

    N_lm = sqrt((2l+1)(l-m)! / (l(l+1)(l+m)!)) ,

which keeps every stored value bounded for l up to ~60 and u up to ~1e3.
The removed exponential is restored in the round-trip translation factor.
"""

from __future__ import annotations

import math

import numpy as np


def norm_lm(l, m):
    """Multipole overlap normalization N_lm (log form used internally)."""
    return math.exp(log_norm_lm(l, m))


def log_norm_lm(l, m):
    if m > l:
        raise ValueError("m must be <= l")
    return 0.5 * (math.log(2 * l + 1.0) - math.log(l * (l + 1.0))
                  + math.lgamma(l - m + 1) - math.lgamma(l + m + 1))


def angular_functions(lmax, m, u):
    """Scaled angular function arrays for one angular momentum channel m.

    Parameters
    ----------
    lmax : int
        highest multipole order, 1 <= lmax <= ~60
    m : int
        angular momentum channel, 0 <= m <= lmax
    u : ndarray
        hyperbolic arguments, u >= 1

    Returns
    -------
    (pibar, taubar) : ndarray, shape (lmax + 1, len(u))
        pibar[l] = N_lm * pi_l^m(u) * exp(-l*theta) with theta = arccosh(u),
        taubar likewise; rows with l < max(1, m) are zero.  For m = 0 the
        pibar rows are identically zero (they only ever enter multiplied
        by m).

    Raises
    ------
    OverflowError
        if the scaled recurrence leaves the double range (outside the
        declared l, u domain).
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u < 1.0):
        raise ValueError("u must be >= 1")
    if not 0 <= m <= lmax:
        raise ValueError("need 0 <= m <= lmax")
    n = u.shape[0]
    theta = np.arccosh(u)
    e = np.exp(-theta)          # = 1/(u + s)
    s = np.sinh(theta)          # = sqrt(u**2 - 1)
    v = u * e                   # u*exp(-theta), in (1/2, 1]

    pibar = np.zeros((lmax + 1, n))
    taubar = np.zeros((lmax + 1, n))

    if m == 0:
        # tau only; recurrence on scaled (P_l, tau_l) pair
        p_prev = np.ones(n)     # P_0 * e^0
        p_cur = v.copy()        # P_1 * e^-theta
        t_prev = np.zeros(n)
        t_cur = s * e           # tau_1 * e^-theta
        taubar[1] = math.exp(log_norm_lm(1, 0)) * t_cur
        for l in range(1, lmax):
            p_next = ((2 * l + 1) * v * p_cur - l * e**2 * p_prev) / (l + 1)
            t_next = ((2 * l + 1) * (s * e * p_cur + v * t_cur)
                      - l * e**2 * t_prev) / (l + 1)
            p_prev, p_cur = p_cur, p_next
            t_prev, t_cur = t_cur, t_next
            taubar[l + 1] = math.exp(log_norm_lm(l + 1, 0)) * t_cur
        if not np.all(np.isfinite(taubar)):
            raise OverflowError("angular recurrence left the double range")
        return pibar, taubar

    # m >= 1: recurrence on scaled unnormalized pi, normalization applied per l
    # seed pi_m^m = (2m-1)!! s^(m-1), scaled by e^{-m theta}
    if m == 1:
        pi_cur = np.exp(-theta)  # s^0 exactly, incl. u = 1
    else:
        log_df = (math.lgamma(2 * m + 1) - m * math.log(2.0)
                  - math.lgamma(m + 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            expo = log_df + (m - 1) * np.log(s) - m * theta
        pi_cur = np.where(s > 0.0, np.exp(expo), 0.0)
    pi_prev = np.zeros(n)

    pibar[m] = math.exp(log_norm_lm(m, m)) * pi_cur
    taubar[m] = math.exp(log_norm_lm(m, m)) * (m * u * pi_cur)
    for l in range(m, lmax):
        pi_next = ((2 * l + 1) * v * pi_cur
                   - (l + m) * e**2 * pi_prev) / (l + 1 - m)
        pi_prev, pi_cur = pi_cur, pi_next
        nl = math.exp(log_norm_lm(l + 1, m))
        pibar[l + 1] = nl * pi_cur
        taubar[l + 1] = nl * ((l + 1) * u * pi_cur - (l + 1 + m) * e * pi_prev)
    if not (np.all(np.isfinite(pibar)) and np.all(np.isfinite(taubar))):
        raise OverflowError("angular recurrence left the double range")
    return pibar, taubar
