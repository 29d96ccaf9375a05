import random
from fractions import Fraction

import pytest

from oracles import form_det, form_sqrt_one_plus
from getzler.exterior import FormElement
from getzler.heat import solve_expansion
from getzler.index import a_hat_oracle, log_sinhc_coefficients, mckean_singer_check, supertrace_heat
from getzler.product import build_model, flat_model
from getzler.sampling import rand_model
from getzler.symbolic import GaussSymbol
from getzler.taylor import TaylorSymbol

# x / sinh x = 1 - x^2/6 + 7 x^4/360 - 31 x^6/15120 + ...
X_OVER_SINH = (Fraction(1), Fraction(-1, 6), Fraction(7, 360), Fraction(-31, 15120))


def a_hat_by_determinant(M):
    """det((k/2)/sinh(k/2))^(1/2) via a Leibniz determinant and a binomial square root."""
    n = M.n
    ident = [[FormElement.scalar(n, int(i == j)) for j in range(n)] for i in range(n)]

    def mat_mul(a, b):
        return [[sum((a[i][p] ^ b[p][j] for p in range(n)), FormElement.zero(n)) for j in range(n)]
                for i in range(n)]

    half = [[f.scale(Fraction(1, 2)) for f in row] for row in M.kappa]
    sq = mat_mul(half, half)
    power = ident
    f = [[FormElement.zero(n) for _ in range(n)] for _ in range(n)]
    for c in X_OVER_SINH:
        f = [[f[i][j] + power[i][j].scale(c) for j in range(n)] for i in range(n)]
        power = mat_mul(power, sq)
    det = form_det(f, n)
    return form_sqrt_one_plus(det - FormElement.scalar(n, 1))


def family(theta, theta_p):
    e12, e34 = FormElement.basis(4, 1, 2), FormElement.basis(4, 3, 4)
    return build_model(4, 0, {(1, 2): e12.scale(theta) + e34.scale(theta_p),
                              (3, 4): e12.scale(theta_p) + e34.scale(theta)})


def test_log_sinhc_series():
    assert log_sinhc_coefficients(3) == [0, Fraction(1, 6), Fraction(-1, 180), Fraction(1, 2835)]


def test_a_hat_flat_and_decoupled_blocks():
    assert a_hat_oracle(flat_model(4)) == FormElement.scalar(4, 1)
    # k_12 = a e12, k_34 = b e34: every (k^2)_ii is a square of a 2-form in one plane, hence zero
    M = build_model(4, 0, {(1, 2): FormElement.basis(4, 1, 2, coeff=3),
                           (3, 4): FormElement.basis(4, 3, 4, coeff=5)})
    assert a_hat_oracle(M) == FormElement.scalar(4, 1)


def test_a_hat_top_is_minus_trace_over_48():
    for theta in (Fraction(1), Fraction(2, 3), Fraction(-5)):
        M = family(theta, theta)
        tr = sum((M.kappa_sq[i][i] for i in range(4)), FormElement.zero(4))
        assert tr.top_coefficient() != 0
        assert a_hat_oracle(M).top_coefficient() == -tr.top_coefficient() / 48


@pytest.mark.parametrize("n", [4, 6])
def test_a_hat_matches_determinant_oracle(n):
    rng = random.Random(n)
    for _ in range(3 if n == 4 else 1):
        M = rand_model(rng, n, density=0.6)
        assert a_hat_oracle(M) == a_hat_by_determinant(M)


def test_a_hat_multiplicative_on_block_sums():
    rng = random.Random(8)
    A, B = rand_model(rng, 4, density=1.0), rand_model(rng, 4, density=1.0)
    entries = {}
    for i in range(4):
        for j in range(i + 1, 4):
            entries[(i + 1, j + 1)] = A.kappa[i][j].embed(8, 0)
            entries[(i + 5, j + 5)] = B.kappa[i][j].embed(8, 4)
    M = build_model(8, 0, entries)
    assert a_hat_oracle(M) == a_hat_oracle(A).embed(8, 0) ^ a_hat_oracle(B).embed(8, 4)


def test_a_hat_truncation():
    M = family(Fraction(2), Fraction(1))
    assert a_hat_oracle(M, max_degree=2) == FormElement.scalar(4, 1)
    with pytest.raises(ValueError):
        a_hat_oracle(M, max_degree=6)


def test_supertrace_flat_is_zero():
    R = supertrace_heat(solve_expansion(flat_model(4), 2))
    assert all(v.is_zero() for v in R.per_order.values())
    assert R.match_ratio is None


def test_supertrace_matches_a_hat():
    ratios = set()
    for th, tp in ((1, 1), (3, 3), (Fraction(1, 2), 2), (2, Fraction(-3, 4))):
        R = supertrace_heat(solve_expansion(family(Fraction(th), Fraction(tp)), 0))
        assert R.tau_independent[0]
        assert R.per_order[0].pi_power == -2
        ratios.add(R.match_ratio)
    assert ratios == {Fraction(1)}


def test_mckean_singer():
    taus = [Fraction(1, 2), 1, 2]
    rng = random.Random(41)
    for _ in range(3):
        M = rand_model(rng, 4, s=0)
        assert mckean_singer_check(M, 3, taus).passed
    # s != 0 makes the higher orders genuinely tau-dependent
    M = family(Fraction(1), Fraction(1)).with_s(Fraction(2))
    rep = mckean_singer_check(M, 2, taus)
    assert not rep.passed and rep.failing_orders == (2,)


def test_mckean_singer_detects_corruption():
    M = family(Fraction(2), Fraction(1))
    H = solve_expansion(M, 1)
    tau = GaussSymbol.monomial(4, (0, 0, 0, 0), 1, 0, 1)
    bad = TaylorSymbol(4, 0, (H.expansion.coeffs[0] * tau, H.expansion.coeffs[1]))
    rep = mckean_singer_check(M, 1, [Fraction(1, 2), 1, 2], expansion=bad)
    assert not rep.passed and 0 in rep.failing_orders
    with pytest.raises(ValueError):
        mckean_singer_check(M, 1, [0, 1])
