"""Symbol-level heat equation, solved order by order in t and in form degree.

The equation is  d/dtau F = D2 # F  with D2 the expansion of -|xi|^2 + (s/4)t^2,
equivalently d/dtau F + L F = (lower t-orders), where

    L a = |xi|^2 a - k(xi, d_xi) a - 1/4 (k^2)(d_xi, d_xi) a

is the operator produced by -(-|xi|^2 # a).  Every coefficient of the
solution lies in the single stratum exp(-tau |xi|^2).  Writing
f = exp(-tau|xi|^2) c, the transport equation for c is

    d/dtau c + N c = g,

where N strictly raises form degree.  Solving degree by degree therefore only
needs tau-antiderivatives of polynomials and terminates at degree n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .exterior import DimensionError
from .product import CurvatureModel, oscillator_apply
from .symbolic import GaussSymbol, sym_antiderivative_tau, sym_partial_tau
from .taylor import TaylorSymbol, dirac_squared_symbol, taylor_product

log = logging.getLogger(__name__)

HEAT_WEIGHT = Fraction(1)


class HeatSolveError(RuntimeError):
    """The solver left its closed-form class (should not happen for valid models)."""


@dataclass(frozen=True)
class SourceAudit:
    """Machine-derived source of the order-``order`` transport equation.

    ``factor_per_s`` is read off from ``taylor_product`` with a probe, so that
    source = factor_per_s * s * F[order - 2].  ``proportional`` records that
    the actual source equals that multiple exactly.
    """

    order: int
    factor_per_s: Fraction
    proportional: bool
    printed_factor_per_s: Fraction | None = None

    @property
    def matches_printed(self) -> bool | None:
        if self.printed_factor_per_s is None:
            return None
        return self.printed_factor_per_s == self.factor_per_s


@dataclass(frozen=True)
class HeatExpansion:
    model: CurvatureModel
    K: int
    expansion: TaylorSymbol
    audit: tuple[SourceAudit, ...] = ()

    def coefficient(self, k: int) -> GaussSymbol:
        return self.expansion.coeffs[k]


def printed_recursion_factor(k: int) -> Fraction:
    """Reference factor (k - 1)(k - 1/2) per s for the order-2k source, kept for comparison with the derived one."""
    return (k - 1) * (k - Fraction(1, 2))


# ---------------------------------------------------------------- transport

def _strip(f: GaussSymbol) -> GaussSymbol:
    """exp(+tau|xi|^2) f for f in the heat stratum, as a q = 0 polynomial."""
    if f.weights() - {HEAT_WEIGHT}:
        raise HeatSolveError(f"symbol left the exp(-tau|xi|^2) stratum: weights {sorted(f.weights())}")
    return f.with_weight(0)


def conjugated_generator(c: GaussSymbol, model: CurvatureModel) -> GaussSymbol:
    """N c = exp(tau|xi|^2) (d_tau + L)(exp(-tau|xi|^2) c) - d_tau c for polynomial c."""
    f = c.with_weight(HEAT_WEIGHT)
    return _strip(sym_partial_tau(f) + oscillator_apply(f, model)) - sym_partial_tau(c)


def solve_transport(source: GaussSymbol, initial: GaussSymbol, model: CurvatureModel) -> GaussSymbol:
    """Solve d_tau f + L f = source with f(tau=0) = initial (a constant form).

    ``source`` must be zero or lie in the exp(-tau|xi|^2) stratum.
    """
    n = model.n
    if source.n != n or initial.n != n:
        raise DimensionError("dimension mismatch in transport equation")
    if initial.weights() - {Fraction(0)} or initial.tau_degree() > 0 or initial.xi_degree() > 0:
        raise HeatSolveError("initial datum must be a constant form")
    g = _strip(source) if not source.is_zero() else GaussSymbol.zero(n)
    c = GaussSymbol.zero(n)
    for d in range(n + 1):
        # N raises degree, so the degree-d part of N c only sees the parts already fixed
        rhs = (g - conjugated_generator(c, model)).degree_component(d)
        c = c + initial.degree_component(d) + sym_antiderivative_tau(rhs)
    return c.with_weight(HEAT_WEIGHT)


def solve_leading(model: CurvatureModel) -> GaussSymbol:
    """Leading heat coefficient: d_tau a + L a = 0, a(tau=0) = 1."""
    return solve_transport(GaussSymbol.zero(model.n), GaussSymbol.constant(model.n, 1), model)


# ---------------------------------------------------------------- expansion

def _derived_factor_per_s(model: CurvatureModel, order: int) -> Fraction:
    """Coefficient of s * F[order-2] in the order-``order`` source, read off from taylor_product."""
    n = model.n
    probe_model = model.with_s(1)
    probe = TaylorSymbol.from_coeffs(n, 0, order, {order - 2: GaussSymbol.constant(n, 1)})
    prod = taylor_product(dirac_squared_symbol(probe_model, order), probe, probe_model).coeffs[order]
    if prod.is_zero():
        return Fraction(0)
    if prod.xi_degree() != 0 or prod.tau_degree() != 0 or len(prod) != 1:
        raise HeatSolveError("order-raising part of D2 is not a constant")
    return next(iter(prod.items()))[1]


def solve_expansion(model: CurvatureModel, K: int) -> HeatExpansion:
    """Heat coefficients F[0..K] (t^k/k! convention) with F[0](0) = 1, F[k](0) = 0."""
    if K < 0:
        raise ValueError("truncation must be nonnegative")
    n = model.n
    D2 = dirac_squared_symbol(model, K)
    coeffs: list[GaussSymbol] = []
    audit = []
    for m in range(K + 1):
        # order-m residual with the unknown set to zero: -(sum_{j>=1} C(m,j) D2[j] # F[m-j])
        trial = TaylorSymbol(n, 0, tuple(coeffs) + (GaussSymbol.zero(n),))
        partial = taylor_product(D2.truncate(m), trial, model).coeffs[m]
        source = partial  # d_tau F[m] + L F[m] = source
        initial = GaussSymbol.constant(n, 1 if m == 0 else 0)
        coeffs.append(solve_transport(source, initial, model))
        if m >= 2:
            factor = _derived_factor_per_s(model, m)
            proportional = source == coeffs[m - 2].scale(factor * model.s)
            printed = printed_recursion_factor(m // 2) if m % 2 == 0 else None
            audit.append(SourceAudit(m, factor, proportional, printed))
            log.debug("order %d: source = %s * s * F[%d] (proportional=%s)", m, factor, m - 2, proportional)
    return HeatExpansion(model, K, TaylorSymbol(n, 0, tuple(coeffs)), tuple(audit))


def heat_residual(F: TaylorSymbol, model: CurvatureModel) -> TaylorSymbol:
    """d_tau F - D2 # F, truncated at F.K; zero iff F solves the heat equation to that order."""
    if F.n != model.n:
        raise DimensionError(f"dimension mismatch: {F.n} vs model {model.n}")
    D2F = taylor_product(dirac_squared_symbol(model, F.K), F, model)
    return TaylorSymbol(F.n, F.order, tuple(sym_partial_tau(c) for c in F.coeffs)) - D2F


def initial_values(H: HeatExpansion) -> list[GaussSymbol]:
    """Each coefficient with tau = 0 substituted."""
    return [c.at_tau_zero() for c in H.expansion.coeffs]
