import math

import numpy as np
import pytest

from casph import asymptotics, materials
from casph.constants import HBAR_C_JUM
from casph.roundtrip import QuadratureSpec
from casph.thermodynamics import (
    Geometry,
    SummationPolicy,
    ThermalState,
    _matsubara_sum,
    entropy,
    force,
    free_energy,
    theta_ratio,
    zero_temperature_energy,
    zero_temperature_force,
)

PEC = materials.perfect_reflector()
PLASMA = materials.plasma(0.136)
DRUDE = materials.drude(0.136, 0.136 * 250.0)
T_ROOM = 300.0


def test_thermal_wavelength_sanity():
    # 7.6 um at 300 K to 1 percent
    assert ThermalState(300.0).lambda_thermal == pytest.approx(7.6, rel=0.01)


def test_geometry_invariants():
    g = Geometry(1.5, 0.5)
    assert g.center_distance == 2.0
    with pytest.raises(ValueError):
        Geometry(0.0, 1.0)
    with pytest.raises(ValueError):
        Geometry(1.0, -1.0)


def test_free_energy_matches_dipole_closed_form():
    # R/L = 1e-3 leaves only O((R/D)^2) corrections to the dipole formula
    gap, radius = 2.0, 2e-3
    g = Geometry(gap, radius)
    f_num, rep = free_energy(g, PEC, ThermalState(T_ROOM), tol=1e-10,
                             lmax=4)
    dip = asymptotics.free_energy_perfect_dipole(g.center_distance, radius,
                                                 T_ROOM)
    assert f_num == pytest.approx(dip, rel=3e-6)
    assert f_num < 0.0
    assert rep.rel_error < 1e-8


def test_free_energy_negative_and_decaying():
    th = ThermalState(T_ROOM)
    vals = []
    for gap in (0.5, 1.0, 2.0):
        val, _ = free_energy(Geometry(gap, 0.3), PEC, th, tol=1e-8, lmax=10)
        assert val < 0.0
        vals.append(abs(val))
    assert vals[0] > vals[1] > vals[2]


@pytest.mark.parametrize("model", [PEC, DRUDE])
def test_force_matches_finite_difference(model):
    # frozen policy so both sides share identical truncations
    gap, radius = 0.7, 0.7
    th = ThermalState(T_ROOM)
    policy = SummationPolicy(lmax=10, quad=QuadratureSpec(), n_cutoff=1e-11)
    _, dtotal, rep = _matsubara_sum(Geometry(gap, radius), model, th,
                                    policy, with_deriv=True)
    frozen = SummationPolicy(lmax=10, quad=QuadratureSpec(),
                             n_fixed=rep.n_max)
    h = 1e-4 * gap
    up, _, _ = _matsubara_sum(Geometry(gap + h, radius), model, th, frozen)
    dn, _, _ = _matsubara_sum(Geometry(gap - h, radius), model, th, frozen)
    assert dtotal == pytest.approx((up - dn) / (2.0 * h), rel=1e-6)


def test_force_positive_attraction():
    val, _ = force(Geometry(1.0, 0.5), PEC, ThermalState(T_ROOM),
                   tol=1e-8, lmax=10)
    assert val > 0.0


def test_matsubara_tail_bound_honored():
    # pushing the cutoff 50 percent further changes F by less than the
    # reported remainder estimate
    g = Geometry(1.0, 0.3)
    th = ThermalState(T_ROOM)
    policy = SummationPolicy(lmax=8, quad=QuadratureSpec(), n_cutoff=1e-8)
    total, _, rep = _matsubara_sum(g, PEC, th, policy)
    longer = SummationPolicy(lmax=8, quad=QuadratureSpec(),
                             n_fixed=int(1.5 * rep.n_max) + 1)
    total2, _, _ = _matsubara_sum(g, PEC, th, longer)
    assert abs(total2 - total) <= max(rep.rel_error * abs(total), 1e-16)


def test_low_temperature_sum_approaches_integral():
    g = Geometry(1.0, 0.3)
    f_cold, _ = free_energy(g, PEC, ThermalState(1.0), tol=1e-12, lmax=10)
    e_zero, _ = zero_temperature_energy(g, PEC, tol=1e-12, lmax=10)
    assert f_cold == pytest.approx(e_zero, rel=1e-4)
    assert e_zero < 0.0


def test_zero_temperature_dipole_limit():
    gap, radius = 1.0, 1e-3
    g = Geometry(gap, radius)
    e_num, _ = zero_temperature_energy(g, PEC, tol=1e-12, lmax=4)
    ref = -9.0 * HBAR_C_JUM * radius**3 / (16.0 * math.pi
                                           * g.center_distance**4)
    assert e_num == pytest.approx(ref, rel=5e-6)


def test_zero_temperature_force_consistent():
    g = Geometry(1.0, 0.5)
    f0, _ = zero_temperature_force(g, PEC, tol=1e-10, lmax=8)
    h = 1e-4
    up, _ = zero_temperature_energy(Geometry(1.0 + h, 0.5), PEC,
                                    tol=1e-12, lmax=8)
    dn, _ = zero_temperature_energy(Geometry(1.0 - h, 0.5), PEC,
                                    tol=1e-12, lmax=8)
    assert f0 == pytest.approx((up - dn) / (2.0 * h) * 1e6, rel=1e-6)


def test_theta_limits_and_shape():
    # theta -> 1 at small gap; dips below 1 at intermediate gaps
    th_small, _ = theta_ratio(Geometry(0.01, 0.05), PEC, T_ROOM,
                              tol=1e-8, lmax=12)
    assert th_small == pytest.approx(1.0, abs=1e-3)
    th_mid, _ = theta_ratio(Geometry(2.0, 0.5), PEC, T_ROOM, tol=1e-8,
                            lmax=18)
    assert th_mid < 1.0
    th_far, _ = theta_ratio(Geometry(6.0, 0.5), PEC, T_ROOM, tol=1e-8,
                            lmax=14)
    assert th_far > 1.0


def test_entropy_signs_and_closed_form():
    g = Geometry(1.0, 0.01)
    s_num, rep = entropy(g, PEC, T_ROOM, tol=1e-10, lmax=8)
    assert s_num < 0.0
    dip = asymptotics.entropy_perfect_dipole(g.center_distance, g.radius,
                                             T_ROOM)
    assert s_num == pytest.approx(dip, rel=1e-2)
    s_far, _ = entropy(Geometry(20.0, 0.2), PEC, T_ROOM, tol=1e-9, lmax=8)
    assert s_far > 0.0


def test_free_energy_rejects_zero_temperature():
    with pytest.raises(ValueError):
        free_energy(Geometry(1.0, 0.5), PEC, ThermalState(0.0))
