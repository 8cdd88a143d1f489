"""Structural checks of the built-in flux families."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ductwave import (FluxSystem, axial_jacobians, built_in_systems,
                      check_hypotheses, coupled_family, gas_family,
                      scalar_family)
from ductwave._linalg import fd_jacobian
from ductwave.errors import InputDomainError

# (gamma, a) pairs with a*gamma between 1.2 and 3, used again by the
# acceptance suite
GAS_SETS = [(1.4, 1.0), (5.0 / 3.0, 1.2), (2.0, 1.4), (1.2, 1.1), (3.0, 0.5)]


def test_burgers_axial_jacobians():
    # df1 = u at u = +-1, derived by substitution
    A_minus, A_plus = axial_jacobians(scalar_family(), 0.0)
    assert np.allclose(A_minus, [[1.0]], atol=1e-14)
    assert np.allclose(A_plus, [[-1.0]], atol=1e-14)


def test_equal_endpoints_give_equal_jacobians():
    sys = scalar_family()
    same = FluxSystem(
        n=1, f1=sys.f1, f2=sys.f2, df1=sys.df1, df2=sys.df2,
        u_minus=lambda e: np.array([0.7]), u_plus=lambda e: np.array([0.7]),
        speed=lambda e: 0.0, epsilon_range=(-1, 1))
    A_minus, A_plus = axial_jacobians(same, 0.0)
    assert np.array_equal(A_minus, A_plus)


@pytest.mark.parametrize("gamma,a", GAS_SETS)
def test_gas_characteristic_speeds(gamma, a):
    # closed forms: speeds u - c, u, u + c with u = m1/rho and
    # c = sqrt(a*gamma*rho^(gamma-1)), both sides
    sys = gas_family(gamma=gamma, a=a)
    A_minus, A_plus = axial_jacobians(sys, 0.0)
    for A, state in ((A_minus, sys.u_minus(0.0)), (A_plus, sys.u_plus(0.0))):
        rho, m1, _ = state
        u = m1 / rho
        cs = np.sqrt(a * gamma * rho ** (gamma - 1.0))
        expect = np.sort([u - cs, u, u + cs])
        got = np.sort(np.linalg.eigvals(A).real)
        assert np.max(np.abs(got - expect)) <= 1e-10


def test_burgers_hypotheses():
    rep = check_hypotheses(scalar_family(), 0.0)
    assert rep.h1_ok
    assert rep.lax_type_c == 1
    assert rep.h2_dimension_check
    # n = 1: determinant reduces to the single entry u_+ - u_-
    assert abs(rep.h3_value - (-2.0)) <= 1e-12


def test_zero_characteristic_speed_flags_h1():
    sys = scalar_family()
    bad = FluxSystem(
        n=1, f1=sys.f1, f2=sys.f2, df1=sys.df1, df2=sys.df2,
        u_minus=lambda e: np.array([1.0]), u_plus=lambda e: np.array([0.0]),
        speed=lambda e: 0.0, epsilon_range=(-1, 1))
    rep = check_hypotheses(bad, 0.0)
    assert not rep.h1_ok
    assert "zero" in rep.notes


def test_defective_jacobian_reports_not_raises():
    J = np.array([[1.0, 1.0], [0.0, 1.0]])

    def f1(eps, u):
        return J @ np.asarray(u, dtype=float)

    bad = FluxSystem(
        n=2, f1=f1, f2=f1, df1=lambda e, u: J, df2=lambda e, u: J,
        u_minus=lambda e: np.array([0.3, 0.1]),
        u_plus=lambda e: np.array([0.3, 0.1]),
        speed=lambda e: 0.0, epsilon_range=(-1, 1))
    rep = check_hypotheses(bad, 0.0)
    assert not rep.h1_ok
    assert "repeated" in rep.notes


@pytest.mark.parametrize("gamma,a", GAS_SETS)
def test_gas_is_lax_one_shock(gamma, a):
    sys = gas_family(gamma=gamma, a=a)
    rep = check_hypotheses(sys, 0.0)
    assert rep.h1_ok
    assert rep.lax_type_c == 1
    assert rep.h2_dimension_check
    rho_minus = sys.u_minus(0.0)[0]
    assert 0.0 < rho_minus < 1.0
    # upstream supersonic
    assert a * gamma * rho_minus ** (gamma + 1.0) < 1.0


def test_coupled_hypotheses():
    rep = check_hypotheses(coupled_family(), 0.0)
    assert rep.h1_ok and rep.h2_dimension_check and rep.lax_type_c == 1
    assert abs(rep.h3_value) > 1e-8


def _sample_states(name, rng, count):
    if name == "gas":
        for _ in range(count):
            yield np.array([rng.uniform(0.5, 2.0), rng.uniform(-2, 2),
                            rng.uniform(-2, 2)])
    else:
        n = 1 if name == "scalar" else 2
        for _ in range(count):
            yield rng.uniform(-2, 2, size=n)


@pytest.mark.parametrize("name", ["scalar", "coupled", "gas"])
def test_jacobians_match_finite_differences(name):
    sys = built_in_systems()[name]
    rng = np.random.default_rng(0)
    lo, hi = sys.epsilon_range
    for u in _sample_states(name, rng, 100):
        eps = rng.uniform(lo, hi)
        for f, df in ((sys.f1, sys.df1), (sys.f2, sys.df2)):
            J_fd = fd_jacobian(lambda v: f(eps, v), u)
            J = np.asarray(df(eps, u), dtype=float)
            scale = max(1.0, np.max(np.abs(J)))
            assert np.max(np.abs(J - J_fd)) <= 1e-6 * scale


@pytest.mark.parametrize("name", ["scalar", "coupled", "gas"])
def test_rankine_hugoniot_residual(name):
    sys = built_in_systems()[name]
    lo, hi = sys.epsilon_range
    for eps in np.linspace(lo, hi, 20):
        r = (np.asarray(sys.f1(eps, sys.u_plus(eps)))
             - np.asarray(sys.f1(eps, sys.u_minus(eps))))
        assert np.max(np.abs(r)) <= 1e-12


def test_scalar_h3_two_ways():
    for eps in (-0.3, 0.0, 0.4):
        rep = check_hypotheses(scalar_family(), eps)
        sys = scalar_family()
        jump = sys.u_plus(eps)[0] - sys.u_minus(eps)[0]
        assert abs(rep.h3_value - jump) <= 1e-12


def test_eps_outside_range_rejected():
    with pytest.raises(InputDomainError):
        axial_jacobians(scalar_family(), 0.9)
    with pytest.raises(InputDomainError):
        check_hypotheses(gas_family(), 1.5)


def test_gas_needs_supersonic_closure():
    with pytest.raises(InputDomainError):
        gas_family(gamma=1.4, a=0.5)   # a*gamma = 0.7 <= 1


@settings(max_examples=60, deadline=None)
@given(u1=st.floats(-2, 2), u2=st.floats(-2, 2),
       eps=st.floats(-0.5, 0.5))
def test_coupled_jacobian_property(u1, u2, eps):
    sys = coupled_family()
    u = np.array([u1, u2])
    for f, df in ((sys.f1, sys.df1), (sys.f2, sys.df2)):
        J_fd = fd_jacobian(lambda v: f(eps, v), u)
        assert np.max(np.abs(np.asarray(df(eps, u)) - J_fd)) <= 1e-5
