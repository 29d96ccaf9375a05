"""Exact exterior algebra over Q^n.

Basis monomials e_{i1} ^ ... ^ e_{ik} (1 <= i1 < ... < ik <= n) are stored
internally as bitmasks, bit ``i - 1`` standing for ``e_i``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

Rational = Fraction | int


class DimensionError(ValueError):
    """Operands live in exterior algebras of different dimension."""


def mask_from_index(index: Iterable[int], n: int) -> int:
    """Bitmask for a strictly increasing 1-based multi-index."""
    mask = 0
    prev = 0
    for i in index:
        i = int(i)
        if i <= prev or i > n:
            raise ValueError(f"multi-index {tuple(index)} not strictly increasing within 1..{n}")
        mask |= 1 << (i - 1)
        prev = i
    return mask


def index_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def wedge_sign(a: int, b: int) -> int:
    """Koszul sign of e_A ^ e_B for disjoint masks (0 if they overlap)."""
    if a & b:
        return 0
    swaps = 0
    rest = b
    while rest:
        low = rest & -rest
        # generators of A sitting above this generator of B must hop over it
        swaps += (a & ~((low << 1) - 1)).bit_count()
        rest ^= low
    return -1 if swaps & 1 else 1


class FormElement:
    """Element of the exterior algebra with exact rational coefficients.

    ``terms`` maps sorted 1-based multi-indices to nonzero Fractions; an empty
    map is the zero form.  Instances are immutable.
    """

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Rational] | None = None):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        self.n = n
        t: dict[int, Fraction] = {}
        for index, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                m = mask_from_index(index, n)
                t[m] = t.get(m, 0) + c
                if not t[m]:
                    del t[m]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, n: int, t: dict[int, Fraction]) -> FormElement:
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj.n = n
        obj._t = t
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, n: int) -> FormElement:
        return cls._raw(n, {})

    @classmethod
    def scalar(cls, n: int, c: Rational) -> FormElement:
        c = Fraction(c)
        return cls._raw(n, {0: c} if c else {})

    @classmethod
    def basis(cls, n: int, *index: int, coeff: Rational = 1) -> FormElement:
        """``coeff * e_{i1} ^ e_{i2} ^ ...``; the indices may be given in any order."""
        sign = 1
        idx = list(index)
        if len(set(idx)) != len(idx):
            return cls.zero(n)
        # bubble sort, counting transpositions
        for i in range(len(idx)):
            for j in range(len(idx) - 1 - i):
                if idx[j] > idx[j + 1]:
                    idx[j], idx[j + 1] = idx[j + 1], idx[j]
                    sign = -sign
        return cls(n, {tuple(idx): sign * Fraction(coeff)})

    @classmethod
    def top(cls, n: int, coeff: Rational = 1) -> FormElement:
        return cls.basis(n, *range(1, n + 1), coeff=coeff)

    # views

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {index_from_mask(m): c for m, c in sorted(self._t.items())}

    @property
    def masks(self) -> dict[int, Fraction]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self._t}

    def is_homogeneous(self, d: int) -> bool:
        return all(m.bit_count() == d for m in self._t)

    def coefficient(self, *index: int) -> Fraction:
        return self._t.get(mask_from_index(index, self.n), Fraction(0))

    # arithmetic

    def _check(self, other: FormElement) -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormElement.scalar(self.n, other)
        if not isinstance(other, FormElement):
            return NotImplemented
        self._check(other)
        t = dict(self._t)
        for m, c in other._t.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return FormElement._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return FormElement._raw(self.n, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> FormElement:
        c = Fraction(c)
        if not c:
            return FormElement.zero(self.n)
        return FormElement._raw(self.n, {m: c * v for m, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other: FormElement) -> FormElement:
        self._check(other)
        t: dict[int, Fraction] = {}
        for ma, ca in self._t.items():
            for mb, cb in other._t.items():
                if ma & mb:
                    continue
                m = ma | mb
                v = t.get(m, 0) + wedge_sign(ma, mb) * ca * cb
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return FormElement._raw(self.n, t)

    __xor__ = wedge

    def degree_component(self, d: int) -> FormElement:
        return FormElement._raw(self.n, {m: c for m, c in self._t.items() if m.bit_count() == d})

    def top_coefficient(self) -> Fraction:
        return self._t.get((1 << self.n) - 1, Fraction(0))

    def embed(self, n: int, offset: int = 0) -> FormElement:
        """Image under e_i -> e_{i+offset} in a larger algebra."""
        if offset < 0 or self.n + offset > n:
            raise DimensionError("embedding does not fit")
        return FormElement._raw(n, {m << offset: c for m, c in self._t.items()})

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormElement.scalar(self.n, other)
        if not isinstance(other, FormElement):
            return NotImplemented
        return self.n == other.n and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        if not self._t:
            return f"FormElement({self.n}, 0)"
        return f"FormElement({self.n}, {self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for index, c in self.terms.items():
            name = "^".join(f"e{i}" for i in index)
            if not name:
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")


def form_wedge(a: FormElement, b: FormElement) -> FormElement:
    return a.wedge(b)


def form_add(a: FormElement, b: FormElement) -> FormElement:
    return a + b


def form_scale(c: Rational, a: FormElement) -> FormElement:
    return a.scale(c)


def degree_component(a: FormElement, d: int) -> FormElement:
    """Projection of ``a`` onto its degree-``d`` part."""
    return a.degree_component(d)


def berezin_top(a: FormElement) -> Fraction:
    """Coefficient of e_1 ^ ... ^ e_n."""
    return a.top_coefficient()
