"""Numeric resummation of a truncated Taylor series into a genuine symbol.

Given coefficients a_0..a_K (plain t^k coefficients) the constructed symbol is

    a(xi, t) = sum_k t^k phi(eps_k (t|xi| + t)^-2) a_k(xi),

with phi a smooth step (0 below 1, 1 above 2) and eps_k chosen from symbol
bounds C_k.  This module is floating point throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exterior import DimensionError
from .symbolic import GaussSymbol, sym_eval, sym_partial_xi

GRID_RADII = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0)


def _psi(u: float) -> float:
    return math.exp(-1.0 / u) if u > 0 else 0.0


def smooth_step(x: float) -> float:
    """C^infinity step: 0 for x <= 1, 1 for x >= 2."""
    if x <= 1.0:
        return 0.0
    if x >= 2.0:
        return 1.0
    a, b = _psi(x - 1.0), _psi(2.0 - x)
    return a / (a + b)


@dataclass(frozen=True)
class BorelSpec:
    n: int
    coefficients: tuple[GaussSymbol, ...]
    bounds: tuple[float, ...]
    epsilons: tuple[float, ...]
    tau: float = 1.0
    order: int = 0

    @property
    def K(self) -> int:
        return len(self.coefficients) - 1


def grid_points(n: int) -> list[np.ndarray]:
    """Origin plus +-r e_i for every grid radius r > 0."""
    pts = [np.zeros(n)]
    for r in GRID_RADII:
        if r == 0:
            continue
        for i in range(n):
            for sgn in (1.0, -1.0):
                p = np.zeros(n)
                p[i] = sgn * r
                pts.append(p)
    return pts


def estimate_bound(a: GaussSymbol, k: int, order: int = 0, tau: float = 1.0) -> float:
    """Grid estimate of max_{|beta|<=k} sup (1+|xi|)^(|beta|-order) |d^beta a|."""
    n = a.n
    best = 0.0
    pts = grid_points(n)
    for size in range(k + 1):
        for beta in itertools.combinations_with_replacement(range(1, n + 1), size):
            d = a
            for i in beta:
                d = sym_partial_xi(d, i)
            if d.is_zero():
                continue
            for p in pts:
                w = (1.0 + float(np.linalg.norm(p))) ** (size - order)
                best = max(best, w * float(np.max(np.abs(sym_eval(d, p, tau)))))
    return best


def borel_build(coefficients: Sequence[GaussSymbol], bounds: Sequence[float] | None = None, *,
                order: int = 0, tau: float = 1.0) -> BorelSpec:
    """Choose eps_k = min(eps_{k-1}, (k! 2^k C_k)^-2); C_k estimated on the grid if not given."""
    coefficients = tuple(coefficients)
    if not coefficients:
        raise ValueError("need at least one coefficient")
    n = coefficients[0].n
    if any(c.n != n for c in coefficients):
        raise DimensionError("coefficients have mixed dimensions")
    if bounds is None:
        bounds = [estimate_bound(a, k, order, tau) for k, a in enumerate(coefficients)]
        # a vanishing coefficient imposes no constraint; keep the bound positive
        bounds = [b if b > 0 else 1.0 for b in bounds]
    else:
        bounds = [float(b) for b in bounds]
        if len(bounds) != len(coefficients):
            raise ValueError("one bound per coefficient required")
        if any(not b > 0 for b in bounds):
            raise ValueError("bounds must be positive")
    eps = []
    for k, C in enumerate(bounds):
        e = (math.factorial(k) * 2.0 ** k * C) ** -2
        eps.append(min(eps[-1], e) if eps else e)
    return BorelSpec(n, coefficients, tuple(bounds), tuple(eps), float(tau), order)


def _cutoff_arg(B: BorelSpec, k: int, r: float, t: float) -> float:
    return B.epsilons[k] / (t * r + t) ** 2


def active_terms(B: BorelSpec, xi: Sequence[float], t: float) -> list[int]:
    """Indices k whose cutoff is nonzero at (xi, t), t != 0."""
    if t == 0:
        return list(range(B.K + 1))
    r = float(np.linalg.norm(np.asarray(xi, dtype=float)))
    return [k for k in range(B.K + 1) if _cutoff_arg(B, k, r, t) > 1.0]


def borel_eval(B: BorelSpec, xi: Sequence[float], t: float) -> np.ndarray:
    """Value of the resummed symbol as a dense form vector (index = basis bitmask)."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (B.n,):
        raise DimensionError(f"xi must have length {B.n}")
    if t == 0:
        return sym_eval(B.coefficients[0], xi, B.tau)
    r = float(np.linalg.norm(xi))
    out = np.zeros(1 << B.n)
    for k in range(B.K + 1):
        x = _cutoff_arg(B, k, r, t)
        if x <= 1.0:
            continue
        out += t ** k * smooth_step(x) * sym_eval(B.coefficients[k], xi, B.tau)
    return out


def partial_sum(B: BorelSpec, xi: Sequence[float], t: float, upto: int | None = None) -> np.ndarray:
    """sum_{k <= upto} t^k a_k(xi) without cutoffs."""
    upto = B.K if upto is None else upto
    out = np.zeros(1 << B.n)
    for k in range(upto + 1):
        out += t ** k * sym_eval(B.coefficients[k], np.asarray(xi, dtype=float), B.tau)
    return out


def saturation_time(B: BorelSpec, xi: Sequence[float]) -> float:
    """Largest t > 0 below which every cutoff equals 1 at this xi."""
    r = float(np.linalg.norm(np.asarray(xi, dtype=float)))
    return math.sqrt(min(B.epsilons) / 2.0) / (1.0 + r)


def _central_derivative(f, k: int, h: float) -> np.ndarray:
    """k-th central difference quotient with step h (k <= 4)."""
    stencils = {
        0: {0: 1.0},
        1: {-1: -0.5, 1: 0.5},
        2: {-1: 1.0, 0: -2.0, 1: 1.0},
        3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
        4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
    }
    if k not in stencils:
        raise ValueError("finite differences implemented for k <= 4")
    return sum(w * f(j * h) for j, w in stencils[k].items()) / h ** k


def richardson_derivative(f, k: int, steps: Sequence[float]) -> np.ndarray:
    """Richardson-extrapolated k-th derivative at 0 from central differences (error series in h^2)."""
    steps = sorted((float(h) for h in steps), reverse=True)
    table = [_central_derivative(f, k, h) for h in steps]
    for level in range(1, len(steps)):
        new = []
        for i in range(len(table) - 1):
            ratio = (steps[i] / steps[i + level]) ** 2
            new.append((ratio * table[i + 1] - table[i]) / (ratio - 1.0))
        table = new
    return table[-1]


@dataclass(frozen=True)
class TaylorCheck:
    k: int
    max_abs_error: float
    max_rel_error: float
    points: int


def default_steps(B: BorelSpec, xi_points: Sequence[Sequence[float]], k: int = 4,
                  levels: int = 3) -> list[float]:
    """Largest steps whose k-th order stencil stays inside the saturation regime.

    Roundoff in a k-th difference grows like h^-k, so the step uses most of the
    saturated window rather than a small fraction of it.
    """
    t_sat = min(saturation_time(B, xi) for xi in xi_points)
    reach = 1 if k <= 2 else 2
    h = 0.9 * t_sat / reach
    return [h / 2 ** j for j in range(levels)]


def borel_taylor_check(B: BorelSpec, k: int, steps: Sequence[float] | None = None,
                       xi_points: Sequence[Sequence[float]] | None = None) -> TaylorCheck:
    """Compare the k-th t-derivative at 0 against k! a_k on test points."""
    if not 0 <= k <= B.K:
        raise ValueError(f"k must lie in 0..{B.K}")
    if xi_points is None:
        xi_points = [np.zeros(B.n)] + [p for p in grid_points(B.n) if 0 < np.linalg.norm(p) <= 2]
    if steps is None:
        steps = default_steps(B, xi_points, k)
    worst_abs = worst_rel = 0.0
    for xi in xi_points:
        xi = np.asarray(xi, dtype=float)
        expected = math.factorial(k) * sym_eval(B.coefficients[k], xi, B.tau)
        if k == 0:
            got = borel_eval(B, xi, 0.0)
        else:
            got = richardson_derivative(lambda t: borel_eval(B, xi, t), k, steps)
        err = float(np.max(np.abs(got - expected)))
        scale = float(np.max(np.abs(expected)))
        worst_abs = max(worst_abs, err)
        worst_rel = max(worst_rel, err / scale if scale > 0 else err)
    return TaylorCheck(k, worst_abs, worst_rel, len(xi_points))
