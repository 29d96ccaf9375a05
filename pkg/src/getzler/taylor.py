"""Truncated Taylor expansions in t of full symbols.

``coeffs[k]`` holds the k-th t-derivative at t = 0, i.e. the coefficient of
t^k / k!.  With this convention the product is a binomial-weighted Cauchy
product of twisted products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .exterior import DimensionError
from .symbolic import GaussSymbol, ScalarResult, integrated_top
from .product import CurvatureModel, getzler_product


@dataclass(frozen=True)
class TaylorSymbol:
    """Truncated expansion sum_k t^k/k! coeffs[k], nominal symbol order ``order``.

    Each ``coeffs[k]`` is declared of order ``order - k``; this is metadata
    only and is never checked analytically.
    """

    n: int
    order: int
    coeffs: tuple[GaussSymbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("TaylorSymbol needs at least one coefficient")
        for c in self.coeffs:
            if c.n != self.n:
                raise DimensionError(f"coefficient of dimension {c.n} in a dimension-{self.n} expansion")

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def coefficient_order(self, k: int) -> int:
        return self.order - k

    @classmethod
    def unit(cls, n: int, K: int) -> TaylorSymbol:
        return cls.from_coeffs(n, 0, K, {0: GaussSymbol.constant(n, 1)})

    @classmethod
    def zero(cls, n: int, K: int, order: int = 0) -> TaylorSymbol:
        return cls(n, order, (GaussSymbol.zero(n),) * (K + 1))

    @classmethod
    def from_coeffs(cls, n: int, order: int, K: int, coeffs: dict[int, GaussSymbol]) -> TaylorSymbol:
        return cls(n, order, tuple(coeffs.get(k, GaussSymbol.zero(n)) for k in range(K + 1)))

    @classmethod
    def from_power_coeffs(cls, n: int, order: int, power: Sequence[GaussSymbol]) -> TaylorSymbol:
        """From plain t^k coefficients (multiplies by k!)."""
        return cls(n, order, tuple(c.scale(factorial(k)) for k, c in enumerate(power)))

    def power_coeffs(self) -> list[GaussSymbol]:
        """Plain t^k coefficients (divides by k!)."""
        return [c.scale(Fraction(1, factorial(k))) for k, c in enumerate(self.coeffs)]

    def truncate(self, K: int) -> TaylorSymbol:
        if K > self.K:
            raise ValueError(f"cannot extend truncation {self.K} to {K}")
        return TaylorSymbol(self.n, self.order, self.coeffs[:K + 1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def map(self, fn) -> TaylorSymbol:
        return TaylorSymbol(self.n, self.order, tuple(fn(c) for c in self.coeffs))

    def __add__(self, other: TaylorSymbol) -> TaylorSymbol:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        K = min(self.K, other.K)
        return TaylorSymbol(self.n, max(self.order, other.order),
                            tuple(self.coeffs[k] + other.coeffs[k] for k in range(K + 1)))

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)


def taylor_product(A: TaylorSymbol, B: TaylorSymbol, model: CurvatureModel) -> TaylorSymbol:
    """(AB)_k = sum_j C(k, j) A_j # B_{k-j}, truncated at min(A.K, B.K)."""
    if A.n != B.n or A.n != model.n:
        raise DimensionError(f"dimension mismatch: {A.n}, {B.n}, model {model.n}")
    K = min(A.K, B.K)
    out = []
    for k in range(K + 1):
        acc = GaussSymbol.zero(A.n)
        for j in range(k + 1):
            a, b = A.coeffs[j], B.coeffs[k - j]
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + getzler_product(a, b, model).scale(comb(k, j))
        out.append(acc)
    return TaylorSymbol(A.n, A.order + B.order, tuple(out))


def dirac_squared_symbol(model: CurvatureModel, K: int) -> TaylorSymbol:
    """Expansion of -|xi|^2 + (s/4) t^2: coeffs[0] = -|xi|^2, coeffs[2] = s/2."""
    if K < 0:
        raise ValueError("truncation must be nonnegative")
    n = model.n
    coeffs = {0: -GaussSymbol.xi_norm_sq(n)}
    if K >= 2:
        coeffs[2] = GaussSymbol.constant(n, model.s / 2)
    return TaylorSymbol.from_coeffs(n, 2, K, coeffs)


def supertrace_prefactor(n: int) -> ScalarResult:
    """(2 pi)^(-n) (2/i)^(n/2), even n only."""
    if n % 2:
        raise ValueError("(2/i)^(n/2) is only exact for even n")
    return ScalarResult({0: Fraction(2 ** (n // 2), 2 ** n)}, -n, -(n // 2))


def taylor_supertrace(A: TaylorSymbol, model: CurvatureModel | None = None) -> dict[int, ScalarResult]:
    """k -> (2 pi)^(-n) (2/i)^(n/2) / k! * top component of the fiber integral of coeffs[k]."""
    if model is not None and model.n != A.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs model {model.n}")
    pref = supertrace_prefactor(A.n)
    out = {}
    for k, c in enumerate(A.coeffs):
        if c.is_zero():
            out[k] = ScalarResult.zero()
            continue
        out[k] = (pref * integrated_top(c)).scale(Fraction(1, factorial(k)))
    return out

