"""Form-valued Gaussian-polynomial symbols in the fiber variables xi and tau.

A :class:`GaussSymbol` is a finite sum of terms

    c * e_I * xi^alpha * tau^m * exp(-q * tau * |xi|^2)

with ``c`` rational, ``q >= 0`` rational.  Terms sharing ``q`` form a stratum.
Internally everything is kept in one flat dict keyed by
``(q, alpha, m, mask)``; :attr:`GaussSymbol.strata` gives the nested view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .exterior import DimensionError, FormElement, Rational, index_from_mask, wedge_sign

Key = tuple  # (q: Fraction, alpha: tuple[int, ...], m: int, mask: int)


class IntegrabilityError(ValueError):
    """A stratum with q = 0 was handed to the fiber integral."""


def _acc(t: dict, key, c) -> None:
    v = t.get(key, 0) + c
    if v:
        t[key] = v
    else:
        t.pop(key, None)


def _bump(alpha: tuple[int, ...], i: int, d: int) -> tuple[int, ...]:
    return alpha[:i] + (alpha[i] + d,) + alpha[i + 1:]


class GaussSymbol:
    """Immutable exact symbol; see the module docstring for the term shape."""

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, terms: Mapping[Key, Rational] | None = None):
        self.n = n
        t: dict = {}
        for (q, alpha, m, mask), c in (terms or {}).items():
            q = Fraction(q)
            alpha = tuple(int(a) for a in alpha)
            if q < 0 or m < 0 or len(alpha) != n or min(alpha, default=0) < 0:
                raise ValueError(f"bad term key {(q, alpha, m, mask)}")
            if mask >> n:
                raise ValueError("form mask outside dimension")
            _acc(t, (q, alpha, int(m), int(mask)), Fraction(c))
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, n: int, t: dict) -> GaussSymbol:
        obj = cls.__new__(cls)
        obj.n = n
        obj._t = t
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, n: int) -> GaussSymbol:
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Rational | FormElement = 1) -> GaussSymbol:
        if isinstance(c, FormElement):
            return cls.from_form(c)
        c = Fraction(c)
        return cls._raw(n, {(Fraction(0), (0,) * n, 0, 0): c} if c else {})

    @classmethod
    def from_form(cls, f: FormElement, q: Rational = 0) -> GaussSymbol:
        q = Fraction(q)
        z = (0,) * f.n
        return cls._raw(f.n, {(q, z, 0, m): c for m, c in f.masks.items()})

    @classmethod
    def monomial(cls, n: int, alpha: Sequence[int] = None, tau: int = 0, q: Rational = 0,
                 coeff: Rational | FormElement = 1) -> GaussSymbol:
        alpha = tuple(alpha) if alpha is not None else (0,) * n
        if isinstance(coeff, FormElement):
            return cls._raw(n, {(Fraction(q), alpha, tau, m): c for m, c in coeff.masks.items()})
        return cls(n, {(Fraction(q), alpha, tau, 0): coeff})

    @classmethod
    def xi(cls, n: int, i: int) -> GaussSymbol:
        """The coordinate function xi_i (1-based)."""
        if not 1 <= i <= n:
            raise ValueError(f"axis {i} out of range 1..{n}")
        alpha = [0] * n
        alpha[i - 1] = 1
        return cls.monomial(n, alpha)

    @classmethod
    def tau(cls, n: int) -> GaussSymbol:
        return cls.monomial(n, tau=1)

    @classmethod
    def gaussian(cls, n: int, q: Rational = 1) -> GaussSymbol:
        """exp(-q tau |xi|^2)."""
        return cls.monomial(n, q=q)

    @classmethod
    def xi_norm_sq(cls, n: int) -> GaussSymbol:
        t = {}
        for i in range(n):
            alpha = [0] * n
            alpha[i] = 2
            t[(Fraction(0), tuple(alpha), 0, 0)] = Fraction(1)
        return cls._raw(n, t)

    # views

    @property
    def strata(self) -> dict[Fraction, dict[tuple[tuple[int, ...], int], FormElement]]:
        """``{q: {(alpha, m): FormElement}}``."""
        raw: dict = {}
        for (q, alpha, m, mask), c in self._t.items():
            raw.setdefault(q, {}).setdefault((alpha, m), {})[index_from_mask(mask)] = c
        return {q: {k: FormElement(self.n, f) for k, f in sorted(poly.items())}
                for q, poly in sorted(raw.items())}

    def items(self):
        return self._t.items()

    def weights(self) -> set[Fraction]:
        return {k[0] for k in self._t}

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self):
        return len(self._t)

    # linear structure

    def _check(self, other: GaussSymbol) -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussSymbol.constant(self.n, other)
        if not isinstance(other, GaussSymbol):
            return NotImplemented
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            _acc(t, k, c)
        return GaussSymbol._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return GaussSymbol._raw(self.n, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> GaussSymbol:
        c = Fraction(c)
        if not c:
            return GaussSymbol.zero(self.n)
        return GaussSymbol._raw(self.n, {k: c * v for k, v in self._t.items()})

    def wedge_left(self, f: FormElement) -> GaussSymbol:
        """``f ^ self`` with ``f`` a constant form."""
        if f.n != self.n:
            raise DimensionError(f"dimension mismatch: {f.n} vs {self.n}")
        t: dict = {}
        for fm, fc in f.masks.items():
            for (q, alpha, m, mask), c in self._t.items():
                if fm & mask:
                    continue
                _acc(t, (q, alpha, m, fm | mask), wedge_sign(fm, mask) * fc * c)
        return GaussSymbol._raw(self.n, t)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, FormElement):
            return sym_mul(self, GaussSymbol.from_form(other))
        if isinstance(other, GaussSymbol):
            return sym_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, FormElement):
            return self.wedge_left(other)
        return NotImplemented

    # structural helpers

    def map_coefficients(self, fn) -> GaussSymbol:
        """Apply ``fn(FormElement) -> FormElement`` to each (q, alpha, m) coefficient."""
        out = GaussSymbol.zero(self.n)
        for q, poly in self.strata.items():
            for (alpha, m), f in poly.items():
                out = out + GaussSymbol.monomial(self.n, alpha, m, q, fn(f))
        return out

    def degree_component(self, d: int) -> GaussSymbol:
        return GaussSymbol._raw(self.n, {k: c for k, c in self._t.items() if k[3].bit_count() == d})

    def max_form_degree(self) -> int:
        return max((k[3].bit_count() for k in self._t), default=-1)

    def with_weight(self, q: Rational) -> GaussSymbol:
        """Replace every stratum weight by ``q`` (keeping polynomial parts)."""
        q = Fraction(q)
        t: dict = {}
        for (_, alpha, m, mask), c in self._t.items():
            _acc(t, (q, alpha, m, mask), c)
        return GaussSymbol._raw(self.n, t)

    def stratum(self, q: Rational) -> GaussSymbol:
        q = Fraction(q)
        return GaussSymbol._raw(self.n, {k: c for k, c in self._t.items() if k[0] == q})

    def at_tau_zero(self) -> GaussSymbol:
        """Substitute tau = 0 (Gaussians become 1)."""
        t: dict = {}
        for (q, alpha, m, mask), c in self._t.items():
            if m == 0:
                _acc(t, (Fraction(0), alpha, 0, mask), c)
        return GaussSymbol._raw(self.n, t)

    def xi_degree(self) -> int:
        return max((sum(k[1]) for k in self._t), default=-1)

    def tau_degree(self) -> int:
        return max((k[2] for k in self._t), default=-1)

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussSymbol.constant(self.n, other)
        if not isinstance(other, GaussSymbol):
            return NotImplemented
        return self.n == other.n and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        return f"GaussSymbol({self.n}, {self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for q, poly in self.strata.items():
            inner = []
            for (alpha, m), f in poly.items():
                mono = "".join(f"*xi{i + 1}^{a}" for i, a in enumerate(alpha) if a)
                if m:
                    mono += f"*tau^{m}"
                inner.append(f"({f}){mono}")
            body = " + ".join(inner)
            parts.append(body if q == 0 else f"[{body}]*exp(-{q}*tau*|xi|^2)")
        return " + ".join(parts)


def sym_add(a: GaussSymbol, b: GaussSymbol) -> GaussSymbol:
    return a + b


def sym_scale(c: FormElement | Rational, a: GaussSymbol) -> GaussSymbol:
    """Left wedge-scaling ``c ^ a``."""
    if isinstance(c, FormElement):
        return a.wedge_left(c)
    return a.scale(c)


def sym_mul(a: GaussSymbol, b: GaussSymbol) -> GaussSymbol:
    """Pointwise product: weights add, polynomials multiply, coefficients wedge."""
    a._check(b)
    t: dict = {}
    for (qa, aa, ma, fa), ca in a._t.items():
        for (qb, ab, mb, fb), cb in b._t.items():
            if fa & fb:
                continue
            alpha = tuple(x + y for x, y in zip(aa, ab))
            _acc(t, (qa + qb, alpha, ma + mb, fa | fb), wedge_sign(fa, fb) * ca * cb)
    return GaussSymbol._raw(a.n, t)


def sym_partial_xi(a: GaussSymbol, i: int) -> GaussSymbol:
    """d/dxi_i, 1-based axis."""
    if not 1 <= i <= a.n:
        raise ValueError(f"axis {i} out of range 1..{a.n}")
    i -= 1
    t: dict = {}
    for (q, alpha, m, mask), c in a._t.items():
        if alpha[i]:
            _acc(t, (q, _bump(alpha, i, -1), m, mask), alpha[i] * c)
        if q:
            _acc(t, (q, _bump(alpha, i, 1), m + 1, mask), -2 * q * c)
    return GaussSymbol._raw(a.n, t)


def sym_partial_tau(a: GaussSymbol) -> GaussSymbol:
    t: dict = {}
    for (q, alpha, m, mask), c in a._t.items():
        if m:
            _acc(t, (q, alpha, m - 1, mask), m * c)
        if q:
            for i in range(a.n):
                _acc(t, (q, _bump(alpha, i, 2), m, mask), -q * c)
    return GaussSymbol._raw(a.n, t)


def sym_antiderivative_tau(a: GaussSymbol) -> GaussSymbol:
    """Antiderivative in tau vanishing at tau = 0; pure polynomials only."""
    t: dict = {}
    for (q, alpha, m, mask), c in a._t.items():
        if q:
            raise ValueError("tau-antiderivative needs a pure polynomial (q = 0) symbol; "
                             "factor the Gaussian out first")
        t[(q, alpha, m + 1, mask)] = c / (m + 1)
    return GaussSymbol._raw(a.n, t)


# --------------------------------------------------------------------- scalars

def _half(x) -> Fraction:
    x = Fraction(x)
    if (2 * x).denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    return x


@dataclass(frozen=True)
class ScalarResult:
    """Exact scalar  sum_b c_b tau^b  *  pi^pi_power  *  i^i_power.

    ``terms`` maps half-integer tau-exponents to nonzero rationals.
    """

    terms: Mapping[Fraction, Fraction] = field(default_factory=dict)
    pi_power: Fraction = Fraction(0)
    i_power: int = 0

    def __post_init__(self):
        terms = {_half(b): Fraction(c) for b, c in self.terms.items() if Fraction(c)}
        object.__setattr__(self, "terms", dict(sorted(terms.items())))
        if terms:
            object.__setattr__(self, "pi_power", _half(self.pi_power))
            object.__setattr__(self, "i_power", int(self.i_power) % 4)
        else:
            object.__setattr__(self, "pi_power", Fraction(0))
            object.__setattr__(self, "i_power", 0)

    @classmethod
    def zero(cls) -> ScalarResult:
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ScalarResult):
            return NotImplemented
        return (self.terms == other.terms and self.pi_power == other.pi_power
                and self.i_power == other.i_power)

    def __hash__(self):
        return hash((tuple(self.terms.items()), self.pi_power, self.i_power))

    def __add__(self, other: ScalarResult) -> ScalarResult:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.pi_power != self.pi_power:
            raise ValueError("cannot add scalars with different powers of pi")
        delta = (other.i_power - self.i_power) % 4
        if delta % 2:
            raise ValueError("cannot add real and imaginary multiples exactly")
        sign = -1 if delta == 2 else 1
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, 0) + sign * c
        return ScalarResult(terms, self.pi_power, self.i_power)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Rational) -> ScalarResult:
        return ScalarResult({b: c * v for b, v in self.terms.items()}, self.pi_power, self.i_power)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ScalarResult):
            return NotImplemented
        terms: dict = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                terms[b1 + b2] = terms.get(b1 + b2, 0) + c1 * c2
        return ScalarResult(terms, self.pi_power + other.pi_power, self.i_power + other.i_power)

    __rmul__ = __mul__

    def is_tau_independent(self) -> bool:
        return set(self.terms) <= {Fraction(0)}

    def rational_part(self) -> Fraction:
        """Coefficient of tau^0 with pi and i powers stripped."""
        return self.terms.get(Fraction(0), Fraction(0))

    def at_tau(self, tau: Rational) -> ScalarResult:
        """Substitute a positive rational tau; exact (tau must be a square for half powers)."""
        tau = Fraction(tau)
        if tau <= 0:
            raise ValueError("tau must be positive")
        total = Fraction(0)
        for b, c in self.terms.items():
            total += c * rational_power(tau, b)
        return ScalarResult({0: total}, self.pi_power, self.i_power)

    def to_complex(self, tau: float = 1.0) -> complex:
        val = sum(float(c) * tau ** float(b) for b, c in self.terms.items())
        return val * math.pi ** float(self.pi_power) * (1j) ** self.i_power

    def __str__(self):
        if not self.terms:
            return "0"
        poly = " + ".join(f"{c}*tau^({b})" if b else str(c) for b, c in self.terms.items())
        return f"({poly}) * pi^({self.pi_power}) * i^{self.i_power}"


def exact_sqrt(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p != x.numerator or q * q != x.denominator:
        raise ValueError(f"sqrt({x}) is irrational")
    return Fraction(p, q)


def rational_power(x: Fraction, e: Fraction) -> Fraction:
    """x**e for half-integer e, exact or ValueError."""
    e = _half(e)
    if e.denominator == 1:
        return Fraction(x) ** int(e)
    return exact_sqrt(x) ** int(2 * e)


def _double_factorial_odd(k: int) -> int:
    """(k - 1)!! for even k >= 0."""
    out = 1
    for j in range(k - 1, 0, -2):
        out *= j
    return out


def gaussian_moment(n: int, q: Fraction, alpha: tuple[int, ...], m: int) -> ScalarResult:
    """Integral over R^n of xi^alpha tau^m exp(-q tau |xi|^2) d xi."""
    if q <= 0:
        raise IntegrabilityError("stratum with q = 0 is not integrable over the fiber")
    if any(a & 1 for a in alpha):
        return ScalarResult.zero()
    total = sum(alpha)
    coeff = Fraction(1)
    for a in alpha:
        coeff *= _double_factorial_odd(a)
    coeff *= rational_power(2 * q, Fraction(-total, 2)) * rational_power(q, Fraction(-n, 2))
    return ScalarResult({Fraction(m) - Fraction(total, 2) - Fraction(n, 2): coeff},
                        Fraction(n, 2), 0)


def sym_integrate_xi(a: GaussSymbol) -> dict[tuple[int, ...], ScalarResult]:
    """Fiber integral; returns ``{multi-index: ScalarResult}`` per form basis element."""
    per_mask: dict[int, ScalarResult] = {}
    for (q, alpha, m, mask), c in a.items():
        if q == 0:
            raise IntegrabilityError("polynomial stratum (q = 0) is not integrable over the fiber")
        val = gaussian_moment(a.n, q, alpha, m)
        if val.is_zero():
            continue
        per_mask[mask] = per_mask.get(mask, ScalarResult.zero()) + val.scale(c)
    return {index_from_mask(mk): v for mk, v in sorted(per_mask.items()) if not v.is_zero()}


def integrated_top(a: GaussSymbol) -> ScalarResult:
    """Top-degree (Berezin) component of the fiber integral."""
    return sym_integrate_xi(a).get(tuple(range(1, a.n + 1)), ScalarResult.zero())


def sym_eval(a: GaussSymbol, xi: Sequence[float], tau: float) -> np.ndarray:
    """Evaluate in double precision.

    Returns a dense vector of length 2**n; entry ``mask`` is the coefficient
    of the basis form with that bitmask.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (a.n,):
        raise DimensionError(f"xi must have length {a.n}")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    r2 = float(xi @ xi)
    out = np.zeros(1 << a.n)
    for (q, alpha, m, mask), c in a.items():
        v = float(c) * tau ** m * math.exp(-float(q) * tau * r2)
        for x, k in zip(xi, alpha):
            if k:
                v *= x ** k
        out[mask] += v
    return out


def dense_to_terms(vec: np.ndarray) -> dict[tuple[int, ...], float]:
    return {index_from_mask(m): float(v) for m, v in enumerate(vec) if v != 0.0}
