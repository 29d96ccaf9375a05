"""Fixed-seed invariant checks run by ``getzler selfcheck``."""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Callable

import numpy as np

from .borel import active_terms, borel_build, borel_taylor_check
from .exterior import FormElement
from .heat import heat_residual, initial_values, solve_expansion
from .index import mckean_singer_check, supertrace_heat
from .product import build_model, flat_model, getzler_product
from .sampling import rand_form, rand_model, rand_symbol, rand_taylor
from .symbolic import GaussSymbol, sym_integrate_xi, sym_mul, sym_partial_xi
from .taylor import taylor_product

DEFAULT_SEED = 20240611
TAU_SAMPLES = (Fraction(1, 2), Fraction(1), Fraction(2))


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("GETZLER_SEED")
    return int(raw) if raw else default


def _wedge_assoc(rng):
    for n in (2, 4, 6):
        for _ in range(10):
            a, b, c = (rand_form(rng, n) for _ in range(3))
            if (a ^ b) ^ c != a ^ (b ^ c):
                return False
    return True


def _graded_commutativity(rng):
    for _ in range(20):
        n = rng.choice((3, 4, 5))
        da, db = rng.randint(0, n), rng.randint(0, n)
        a, b = rand_form(rng, n, degrees=[da]), rand_form(rng, n, degrees=[db])
        if a ^ b != (b ^ a).scale((-1) ** (da * db)):
            return False
    return True


def _symbol_identities(rng):
    for n in (2, 4):
        for _ in range(5):
            a = rand_symbol(rng, n, weights=(1,))
            for i in range(1, n + 1):
                if any(not v.is_zero() for v in sym_integrate_xi(sym_partial_xi(a, i)).values()):
                    return False
            b = rand_symbol(rng, n)
            if sym_partial_xi(sym_partial_xi(b, 1), 2) != sym_partial_xi(sym_partial_xi(b, 2), 1):
                return False
    return True


def _twisted_algebra(rng):
    for n in (2, 4, 6):
        for _ in range(8):
            M = rand_model(rng, n)
            a, b, c = (rand_symbol(rng, n) for _ in range(3))
            if getzler_product(getzler_product(a, b, M), c, M) != getzler_product(a, getzler_product(b, c, M), M):
                return False
            one = GaussSymbol.constant(n, 1)
            if getzler_product(one, a, M) != a or getzler_product(a, one, M) != a:
                return False
            if getzler_product(a, b, flat_model(n)) != sym_mul(a, b):
                return False
    return True


def _taylor_assoc(rng):
    for _ in range(5):
        n = rng.choice((2, 4))
        M = rand_model(rng, n)
        A, B, C = (rand_taylor(rng, n, 2, max_terms=2) for _ in range(3))
        if taylor_product(taylor_product(A, B, M), C, M) != taylor_product(A, taylor_product(B, C, M), M):
            return False
    return True


def _heat(rng):
    for n in (2, 4):
        for _ in range(3):
            M = rand_model(rng, n)
            H = solve_expansion(M, 4)
            if not heat_residual(H.expansion, M).is_zero():
                return False
            init = initial_values(H)
            if init[0] != GaussSymbol.constant(n, 1) or any(not c.is_zero() for c in init[1:]):
                return False
    return True


def _index(rng):
    ratios = set()
    for _ in range(3):
        th, tp = (Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(2))
        M = build_model(4, 0, {(1, 2): FormElement(4, {(1, 2): th, (3, 4): tp}),
                               (3, 4): FormElement(4, {(1, 2): tp, (3, 4): th})})
        R = supertrace_heat(solve_expansion(M, 0))
        if not R.tau_independent[0] or R.match_ratio is None:
            return False
        ratios.add(R.match_ratio)
        if not mckean_singer_check(M, 2, TAU_SAMPLES).passed:
            return False
    return len(ratios) == 1


def _borel(rng):
    coeffs = [rand_symbol(rng, 2, max_tau=0) for _ in range(3)]
    B = borel_build(coeffs, order=2)
    if any(borel_taylor_check(B, k).max_rel_error >= 1e-4 for k in range(3)):
        return False
    for _ in range(20):
        xi = np.array([rng.uniform(-3, 3), rng.uniform(-3, 3)])
        t = rng.uniform(1e-3, 2.0)
        r = float(np.linalg.norm(xi))
        predicted = sum(1 for e in B.epsilons if e > (t * r + t) ** 2)
        if len(active_terms(B, xi, t)) != predicted:
            return False
    return True


CHECKS: dict[str, Callable[[random.Random], bool]] = {
    "wedge associativity": _wedge_assoc,
    "graded commutativity": _graded_commutativity,
    "symbol calculus identities": _symbol_identities,
    "twisted product algebra": _twisted_algebra,
    "taylor product associativity": _taylor_assoc,
    "heat residual and initial conditions": _heat,
    "supertrace / A-hat constancy": _index,
    "borel recovery and local finiteness": _borel,
}


def run_selfcheck(seed: int | None = None) -> list[tuple[str, bool]]:
    seed = seed_from_env() if seed is None else seed
    results = []
    for k, (name, check) in enumerate(CHECKS.items()):
        rng = random.Random(seed + k)
        try:
            ok = bool(check(rng))
        except Exception:  # a crash counts as a failed invariant
            ok = False
        results.append((name, ok))
    return results
