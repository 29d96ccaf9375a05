import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from getzler.exterior import DimensionError, FormElement
from getzler.sampling import rand_symbol
from getzler.symbolic import (
    GaussSymbol,
    IntegrabilityError,
    ScalarResult,
    gaussian_moment,
    sym_add,
    sym_antiderivative_tau,
    sym_eval,
    sym_integrate_xi,
    sym_mul,
    sym_partial_tau,
    sym_partial_xi,
    sym_scale,
)
import random

G = GaussSymbol
E2 = G.gaussian(2)


def xi(i, n=2):
    return G.xi(n, i)


def test_add_scale_examples():
    assert sym_add(E2, E2) == E2.scale(2)
    assert sym_add(xi(1), -xi(1)).is_zero()
    lhs = sym_scale(FormElement.basis(2, 1), xi(2) * FormElement.basis(2, 2))
    assert lhs == xi(2) * FormElement.basis(2, 1, 2)


def test_mul_examples():
    assert sym_mul(xi(1), xi(2)) == G.monomial(2, (1, 1))
    assert sym_mul(E2, E2) == G.gaussian(2, 2)
    a = xi(1) * FormElement.basis(2, 1)
    assert sym_mul(a, a).is_zero()


def test_partial_xi_examples():
    assert sym_partial_xi(sym_mul(xi(1), xi(1)), 1) == xi(1).scale(2)
    assert sym_partial_xi(E2, 1) == (xi(1) * G.tau(2) * E2).scale(-2)
    assert sym_partial_xi(xi(2) * E2, 1) == (xi(1) * xi(2) * G.tau(2) * E2).scale(-2)
    with pytest.raises(ValueError):
        sym_partial_xi(E2, 3)


def test_partial_tau_examples():
    assert sym_partial_tau(E2) == -(G.xi_norm_sq(2) * E2)
    assert sym_partial_tau(G.tau(2) * G.tau(2)) == G.tau(2).scale(2)
    assert sym_partial_tau(G.constant(2, 1)).is_zero()


def test_antiderivative_examples():
    tau = G.tau(2)
    assert sym_antiderivative_tau(tau) == (tau * tau).scale(Fraction(1, 2))
    assert sym_antiderivative_tau(xi(1) * xi(1)) == xi(1) * xi(1) * tau
    assert sym_antiderivative_tau(G.zero(2)).is_zero()
    with pytest.raises(ValueError):
        sym_antiderivative_tau(E2)


def test_integrate_examples():
    assert sym_integrate_xi(E2) == {(): ScalarResult({-1: 1}, 1, 0)}
    assert sym_integrate_xi(xi(1) * E2) == {}
    assert sym_integrate_xi(xi(1) * xi(1) * E2) == {(): ScalarResult({-2: Fraction(1, 2)}, 1, 0)}
    with pytest.raises(IntegrabilityError):
        sym_integrate_xi(xi(1))


def _quad(fn, lim=12.0):
    val, _ = integrate.dblquad(lambda y, x: fn(x, y), -lim, lim, -lim, lim, epsabs=1e-13, epsrel=1e-13)
    return val


@pytest.mark.parametrize("alpha,q,tau", [((2, 0), 1, 1.0), ((2, 2), 1, 1.0), ((4, 0), 2, 1.0),
                                         ((0, 0), 3, 1.0), ((2, 0), 1, 0.5)])
def test_moments_against_quadrature(alpha, q, tau):
    # oracle: direct numerical quadrature over R^2
    num = _quad(lambda x, y: x ** alpha[0] * y ** alpha[1] * math.exp(-q * tau * (x * x + y * y)))
    exact = gaussian_moment(2, Fraction(q), alpha, 0).to_complex(tau)
    assert abs(num - exact.real) < 1e-10 * max(1.0, abs(num))
    assert exact.imag == 0


def test_moment_n3_perfect_square_weight():
    # n = 3 needs q^(-3/2): q = 4 is a perfect square
    val = gaussian_moment(3, Fraction(4), (0, 0, 0), 0)
    assert val == ScalarResult({Fraction(-3, 2): Fraction(1, 8)}, Fraction(3, 2), 0)
    with pytest.raises(ValueError):
        gaussian_moment(3, Fraction(2), (0, 0, 0), 0)


def test_eval_examples():
    assert sym_eval(E2, [0, 0], 5)[0] == 1.0
    assert sym_eval(xi(1), [2, 0], 1)[0] == 2.0
    assert sym_eval(xi(1) * xi(1) * E2, [1, 0], 1)[0] == pytest.approx(math.exp(-1), rel=1e-15)
    with pytest.raises(DimensionError):
        sym_eval(E2, [1, 2, 3], 1)


def test_strata_view():
    a = E2 * FormElement.basis(2, 1) + xi(1)
    s = a.strata
    assert set(s) == {0, 1}
    assert s[Fraction(1)][((0, 0), 0)] == FormElement.basis(2, 1)


def test_scalar_result_arithmetic():
    a = ScalarResult({0: 1}, 1, 1)
    b = ScalarResult({0: 2}, 1, 3)  # i^3 = -i
    assert a + b == ScalarResult({0: -1}, 1, 1)
    with pytest.raises(ValueError):
        a + ScalarResult({0: 1}, 2, 1)
    assert ScalarResult({1: 3, 0: 0}).terms == {1: 3}
    assert ScalarResult({-1: 2}).at_tau(Fraction(1, 2)) == ScalarResult({0: 4})
    assert ScalarResult({Fraction(1, 2): 1}).at_tau(4) == ScalarResult({0: 2})


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_mul_associative_and_even_commutative(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3, 4))
    a, b, c = (rand_symbol(rng, n) for _ in range(3))
    assert sym_mul(sym_mul(a, b), c) == sym_mul(a, sym_mul(b, c))
    x, y = rand_symbol(rng, n, even=True), rand_symbol(rng, n, even=True)
    assert sym_mul(x, y) == sym_mul(y, x)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_partials_commute(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3, 4))
    a = rand_symbol(rng, n, max_tau=2)
    i, j = rng.randint(1, n), rng.randint(1, n)
    assert sym_partial_xi(sym_partial_xi(a, i), j) == sym_partial_xi(sym_partial_xi(a, j), i)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tau_derivative_inverts_antiderivative(seed):
    rng = random.Random(seed)
    a = rand_symbol(rng, rng.choice((2, 4)), weights=(0,), max_tau=3)
    assert sym_partial_tau(sym_antiderivative_tau(a)) == a


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_integration_by_parts(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 4))
    a = rand_symbol(rng, n, weights=(1, 2), max_xi=3)
    for i in range(1, n + 1):
        assert sym_integrate_xi(sym_partial_xi(a, i)) == {}


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_eval_multiplicative(seed):
    rng = random.Random(seed)
    n = 2
    a, b = rand_symbol(rng, n, even=True), rand_symbol(rng, n, even=True)
    p = np.array([rng.uniform(-2, 2) for _ in range(n)])
    tau = rng.uniform(0, 2)
    va, vb, vab = sym_eval(a, p, tau), sym_eval(b, p, tau), sym_eval(sym_mul(a, b), p, tau)
    # even forms in n = 2: basis {1, e12}, product (a0 + a3 e12)(b0 + b3 e12)
    expected = np.zeros(4)
    expected[0] = va[0] * vb[0]
    expected[3] = va[0] * vb[3] + va[3] * vb[0]
    scale = max(1.0, np.max(np.abs(expected)))
    assert np.max(np.abs(vab - expected)) <= 1e-12 * scale
