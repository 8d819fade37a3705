import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etcs.eta import (
    EtaError,
    EtaParams,
    F_contribution,
    F_small,
    UnsupportedConstant,
    c_constant,
    dedekind_log,
    dedekind_log_direct,
    dedekind_log_many,
    sigma_minus_one,
    tail_bound,
)
from etcs import _kernels

TWISTED_CLOSED_FORM = 0.5 * math.acos(1 / 3) - math.pi / 9

upper = st.builds(complex, st.floats(-5, 5), st.floats(0.02, 4))


def test_sigma_minus_one():
    assert sigma_minus_one(1) == 1
    assert sigma_minus_one(6) == 2
    for p in (2, 3, 5, 97):
        assert sigma_minus_one(p) == 1 + Fraction(1, p)
    with pytest.raises(EtaError):
        sigma_minus_one(0)


def test_tail_bound_dominates():
    im, n = 0.3, 12
    r = math.exp(-2 * math.pi * im)
    brute = sum(k * r**k for k in range(n + 1, 4000))
    assert tail_bound(n, im) == pytest.approx(brute, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(upper)
def test_functional_equations(tau):
    l0 = dedekind_log(tau).value
    assert abs(dedekind_log(tau + 1).value - l0 - math.pi * 1j / 12) <= 1e-10
    assert abs(dedekind_log(-1 / tau).value - l0 - 0.5 * cmath.log(tau / 1j)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(upper)
def test_matches_mpmath_eta(tau):
    v = dedekind_log(tau)
    ref = complex(mpmath.eta(mpmath.mpc(tau.real, tau.imag)))
    assert abs(cmath.exp(v.value) - ref) <= 1e-10 * max(1, abs(ref))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 6))
def test_imaginary_axis(t):
    v = dedekind_log(1j * t).value
    assert abs((v - math.pi * 1j * (1j * t) / 12).imag) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(2, 6))
def test_direct_path_agrees(x, y):
    tau = complex(x, y)
    assert abs(dedekind_log_direct(tau).value - dedekind_log(tau).value) <= 1e-12


def test_error_bound_reported():
    v = dedekind_log(0.3 + 0.01j, tol=1e-8)
    assert 0 < v.error <= 1e-8
    with pytest.raises(EtaError):
        dedekind_log(0.3 - 0.1j)
    with pytest.raises(EtaError):
        dedekind_log(1j, tol=0)


@pytest.mark.parametrize("backend", _kernels.available_backends())
def test_many_matches_scalar(backend):
    rng = np.random.default_rng(7)
    taus = rng.uniform(-2, 2, 50) + 1j * rng.uniform(0.05, 2, 50)
    many = dedekind_log_many(taus, backend=backend)
    single = np.array([dedekind_log(t).value for t in taus])
    assert np.allclose(many, single, atol=1e-11)


def test_c_constant():
    assert c_constant(3, -1) == pytest.approx(math.pi / 18, abs=1e-16)
    assert c_constant(2, 1) == pytest.approx(math.pi / 12, abs=1e-16)
    assert c_constant(5, 2) == pytest.approx(math.pi / 15, abs=1e-16)
    assert c_constant(1, 0) == 0
    with pytest.raises(UnsupportedConstant):
        c_constant(7, 2)


def test_F_small_examples():
    assert F_small(EtaParams(1, 0, Fraction(5, 7))).value == 0
    assert F_small(EtaParams(3, -1, 2)).value == pytest.approx(TWISTED_CLOSED_FORM, abs=1e-10)
    assert F_contribution(EtaParams(3, -1, 2)).value == pytest.approx(144 / math.pi * TWISTED_CLOSED_FORM, abs=1e-9)
    assert F_contribution(EtaParams(1, 0, 3)).value == 0


@pytest.mark.parametrize("s_sq", [Fraction(i, 7) for i in range(1, 21)])
def test_F_small_rhombic_vanishes(s_sq):
    assert abs(F_small(EtaParams(2, 1, s_sq)).value) <= 1e-10
    assert abs(F_contribution(EtaParams(2, 1, s_sq)).value) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(3, 1), (4, 1), (5, 2), (5, 1), (10, 3), (13, 5)]), st.fractions(Fraction(1, 20), 20))
def test_F_small_antisymmetric_in_eps(ke, s_sq):
    k, e = ke
    a = F_small(EtaParams(k, e, s_sq)).value
    b = F_small(EtaParams(k, -e, s_sq)).value
    assert a == pytest.approx(-b, abs=1e-10)


def test_params_validation():
    with pytest.raises(EtaError):
        EtaParams(3, 2, 1)  # representative outside (-k/2, k/2]
    with pytest.raises(EtaError):
        EtaParams(4, 2, 1)
    with pytest.raises(EtaError):
        EtaParams(1, 1, 1)
    with pytest.raises(EtaError):
        EtaParams(3, 1, 0)
