"""Seeded random generators for forms, symbols and curvature models.

Used by the self-check command and the test-suite; sizes are kept small so
exact arithmetic stays fast.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .exterior import FormElement
from .product import CurvatureModel, build_model
from .symbolic import GaussSymbol
from .taylor import TaylorSymbol


def rand_rational(rng: random.Random, span: int = 5, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_nonzero_rational(rng: random.Random, span: int = 5, den: int = 3) -> Fraction:
    while True:
        r = rand_rational(rng, span, den)
        if r:
            return r


def rand_form(rng: random.Random, n: int, max_terms: int = 3, degrees=None) -> FormElement:
    degrees = list(range(n + 1)) if degrees is None else list(degrees)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.choice(degrees)
        idx = tuple(sorted(rng.sample(range(1, n + 1), d)))
        terms[idx] = rand_rational(rng)
    return FormElement(n, terms)


def rand_two_form(rng: random.Random, n: int, max_terms: int = 2) -> FormElement:
    return rand_form(rng, n, max_terms, degrees=[2])


def rand_symbol(rng: random.Random, n: int, max_terms: int = 3, max_xi: int = 2, max_tau: int = 1,
                weights=(0, 1), even: bool = False) -> GaussSymbol:
    """Random Gaussian-polynomial symbol; ``even`` restricts coefficients to even degree."""
    degrees = [d for d in range(n + 1) if d % 2 == 0] if even else None
    out = GaussSymbol.zero(n)
    for _ in range(rng.randint(1, max_terms)):
        alpha = [0] * n
        for _ in range(rng.randint(0, max_xi)):
            alpha[rng.randrange(n)] += 1
        coeff = rand_form(rng, n, 2, degrees)
        out = out + GaussSymbol.monomial(n, alpha, rng.randint(0, max_tau), rng.choice(weights), coeff)
    return out


def rand_model(rng: random.Random, n: int, density: float = 0.5, s=None) -> CurvatureModel:
    entries = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        if rng.random() < density:
            entries[(i, j)] = rand_two_form(rng, n)
    if s is None:
        s = rand_rational(rng)
    return build_model(n, s, entries)


def rand_taylor(rng: random.Random, n: int, K: int, order: int = 0, **kw) -> TaylorSymbol:
    coeffs = [rand_symbol(rng, n, **kw) if rng.random() < 0.8 else GaussSymbol.zero(n)
              for _ in range(K + 1)]
    return TaylorSymbol(n, order, tuple(coeffs))
