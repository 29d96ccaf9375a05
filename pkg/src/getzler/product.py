"""Curvature model at a point and the curvature-twisted product of symbols.

The twisted product is

    (a # b)(xi) = exp(-1/2 * sum_ij k_ij d/dxi_i d/deta_j) a(xi) ^ b(eta) |_{eta = xi}

with k an antisymmetric matrix of 2-forms.  Each coupling step raises form
degree by two, so the exponential series stops after n/2 + 1 terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .exterior import DimensionError, FormElement, Rational, wedge_sign
from .symbolic import GaussSymbol, _acc, _bump, sym_mul, sym_partial_xi


class ModelError(ValueError):
    """Invalid curvature model."""


@dataclass(frozen=True)
class CurvatureModel:
    """Frozen curvature data: even dimension, scalar curvature, 2-form matrix.

    ``kappa`` is a 0-based n x n tuple of tuples; use :func:`build_model` to
    construct validated instances from upper-triangle data.
    """

    n: int
    s: Fraction
    kappa: tuple[tuple[FormElement, ...], ...]

    def __post_init__(self):
        n = self.n
        if n <= 0 or n % 2:
            raise ModelError(f"dimension must be a positive even integer, got {n}")
        if len(self.kappa) != n or any(len(row) != n for row in self.kappa):
            raise ModelError("kappa must be n x n")
        for i in range(n):
            for j in range(n):
                k = self.kappa[i][j]
                if k.n != n:
                    raise ModelError(f"kappa[{i + 1}][{j + 1}] has dimension {k.n}, expected {n}")
                if not k.is_homogeneous(2):
                    raise ModelError(f"kappa[{i + 1}][{j + 1}] = {k} is not a 2-form")
                if k != -self.kappa[j][i]:
                    raise ModelError(f"kappa is not antisymmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "s", Fraction(self.s))

    def entry(self, i: int, j: int) -> FormElement:
        """kappa_ij with 1-based indices."""
        return self.kappa[i - 1][j - 1]

    @cached_property
    def pairs(self) -> tuple[tuple[int, int, tuple[tuple[int, Fraction], ...]], ...]:
        """Nonzero entries as (i, j, ((mask, coeff), ...)), 0-based."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                k = self.kappa[i][j]
                if not k.is_zero():
                    out.append((i, j, tuple(k.masks.items())))
        return tuple(out)

    @cached_property
    def kappa_sq(self) -> tuple[tuple[FormElement, ...], ...]:
        """(k^2)_ij = sum_p k_ip ^ k_pj; symmetric since 2-forms commute."""
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = FormElement.zero(n)
                for p in range(n):
                    acc = acc + self.kappa[i][p].wedge(self.kappa[p][j])
                row.append(acc)
            rows.append(tuple(row))
        return tuple(rows)

    def is_flat(self) -> bool:
        return not self.pairs

    def with_s(self, s: Rational) -> CurvatureModel:
        return CurvatureModel(self.n, Fraction(s), self.kappa)


def build_model(n: int, s: Rational, entries: Mapping[tuple[int, int], FormElement] | None = None
                ) -> CurvatureModel:
    """Validated model from 1-based entries; the antisymmetric partner is filled in.

    Entries may be given for (i, j) with i < j, i > j, or both (then they must
    agree up to sign).
    """
    if n <= 0 or n % 2:
        raise ModelError(f"dimension must be a positive even integer, got {n}")
    zero = FormElement.zero(n)
    grid = [[zero] * n for _ in range(n)]
    given: dict[tuple[int, int], FormElement] = {}
    for (i, j), form in (entries or {}).items():
        if not (1 <= i <= n and 1 <= j <= n):
            raise ModelError(f"entry ({i},{j}) outside 1..{n}")
        if form.n != n:
            raise ModelError(f"entry ({i},{j}) has dimension {form.n}, expected {n}")
        if not form.is_homogeneous(2):
            raise ModelError(f"entry ({i},{j}) = {form} is not homogeneous of degree 2")
        if i == j:
            if not form.is_zero():
                raise ModelError(f"diagonal entry ({i},{i}) must vanish")
            continue
        a, b, f = (i, j, form) if i < j else (j, i, -form)
        if (a, b) in given and given[(a, b)] != f:
            raise ModelError(f"inconsistent antisymmetric pair ({a},{b})")
        given[(a, b)] = f
    for (i, j), f in given.items():
        grid[i - 1][j - 1] = f
        grid[j - 1][i - 1] = -f
    return CurvatureModel(n, Fraction(s), tuple(tuple(row) for row in grid))


def flat_model(n: int, s: Rational = 0) -> CurvatureModel:
    return build_model(n, s, {})


# ------------------------------------------------------------------- product

def _tensor(a: GaussSymbol, b: GaussSymbol) -> dict:
    """a(xi) ^ b(eta) in doubled variables, keyed (qa, qb, alpha_xi, alpha_eta, m, mask)."""
    t: dict = {}
    for (qa, aa, ma, fa), ca in a.items():
        for (qb, ab, mb, fb), cb in b.items():
            if fa & fb:
                continue
            _acc(t, (qa, qb, aa, ab, ma + mb, fa | fb), wedge_sign(fa, fb) * ca * cb)
    return t


def _d_left(q, alpha, m, i):
    """d/dxi_i of xi^alpha tau^m exp(-q tau |xi|^2): list of (factor, alpha, m)."""
    out = []
    if alpha[i]:
        out.append((alpha[i], _bump(alpha, i, -1), m))
    if q:
        out.append((-2 * q, _bump(alpha, i, 1), m + 1))
    return out


def _couple(t: dict, model: CurvatureModel, factor: Fraction) -> dict:
    """factor * sum_ij k_ij d/dxi_i d/deta_j applied to a doubled-variable symbol."""
    n = model.n
    out: dict = {}
    for (qa, qb, ax, ay, m, mask), c in t.items():
        left = [_d_left(qa, ax, m, i) for i in range(n)]
        right = [_d_left(qb, ay, 0, j) for j in range(n)]
        for i, j, kterms in model.pairs:
            li, rj = left[i], right[j]
            if not li or not rj:
                continue
            for km, kc in kterms:
                if km & mask:
                    continue
                sgn = wedge_sign(km, mask) * kc * c * factor
                new_mask = km | mask
                for fl, axl, ml in li:
                    for fr, ayr, mr in rj:
                        _acc(out, (qa, qb, axl, ayr, ml + mr, new_mask), sgn * fl * fr)
    return out


def _diagonal(t: dict, n: int) -> GaussSymbol:
    """Substitute eta = xi."""
    out: dict = {}
    for (qa, qb, ax, ay, m, mask), c in t.items():
        _acc(out, (qa + qb, tuple(x + y for x, y in zip(ax, ay)), m, mask), c)
    return GaussSymbol._raw(n, out)


def coupling_terms(a: GaussSymbol, b: GaussSymbol, model: CurvatureModel,
                   r_max: int | None = None) -> list[GaussSymbol]:
    """The summands (-1/2)^r / r! [k(d_xi, d_eta)]^r (a ^ b)|_{eta=xi}, r = 0..r_max.

    ``r_max`` defaults to n/2 + 1 so the caller can see the first term that
    must vanish.
    """
    if a.n != b.n or a.n != model.n:
        raise DimensionError(f"dimension mismatch: {a.n}, {b.n}, model {model.n}")
    if r_max is None:
        r_max = model.n // 2 + 1
    t = _tensor(a, b)
    out = [_diagonal(t, a.n)]
    for r in range(1, r_max + 1):
        t = _couple(t, model, Fraction(-1, 2 * r)) if t else {}
        out.append(_diagonal(t, a.n))
    return out


def getzler_product(a: GaussSymbol, b: GaussSymbol, model: CurvatureModel) -> GaussSymbol:
    """Curvature-twisted product a # b."""
    if a.n != b.n or a.n != model.n:
        raise DimensionError(f"dimension mismatch: {a.n}, {b.n}, model {model.n}")
    if model.is_flat() or a.is_zero() or b.is_zero():
        return sym_mul(a, b)
    t = _tensor(a, b)
    acc = dict(_diagonal(t, a.n).items())
    r = 0
    while t:
        r += 1
        t = _couple(t, model, Fraction(-1, 2 * r))
        if t and 2 * r > model.n:
            raise AssertionError(f"coupling term r={r} nonzero in dimension {model.n}")
        for k, c in _diagonal(t, a.n).items():
            _acc(acc, k, c)
    return GaussSymbol._raw(a.n, acc)


def oscillator_apply(a: GaussSymbol, model: CurvatureModel) -> GaussSymbol:
    """|xi|^2 a - sum k_ij xi_i d_j a - 1/4 sum (k^2)_ij d_i d_j a."""
    n = model.n
    if a.n != n:
        raise DimensionError(f"dimension mismatch: {a.n} vs model {n}")
    out = sym_mul(GaussSymbol.xi_norm_sq(n), a)
    first = [sym_partial_xi(a, j) for j in range(1, n + 1)]
    for i, j, _ in model.pairs:
        term = sym_mul(GaussSymbol.xi(n, i + 1), first[j]).wedge_left(model.kappa[i][j])
        out = out - term
    k2 = model.kappa_sq
    for i in range(n):
        for j in range(n):
            if k2[i][j].is_zero():
                continue
            second = sym_partial_xi(first[j], i + 1)
            out = out - second.wedge_left(k2[i][j]).scale(Fraction(1, 4))
    return out
