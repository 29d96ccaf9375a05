"""Supertraces of heat expansions and the A-hat form used to cross-check them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exterior import FormElement
from .heat import HeatExpansion, solve_expansion
from .product import CurvatureModel
from .symbolic import ScalarResult
from .taylor import TaylorSymbol, taylor_supertrace

FormMatrix = list[list[FormElement]]


def _matmul(a: FormMatrix, b: FormMatrix, n: int) -> FormMatrix:
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = FormElement.zero(n)
            for p in range(size):
                if a[i][p].is_zero() or b[p][j].is_zero():
                    continue
                acc = acc + a[i][p].wedge(b[p][j])
            row.append(acc)
        out.append(row)
    return out


def _trace(a: FormMatrix, n: int) -> FormElement:
    acc = FormElement.zero(n)
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def log_sinhc_coefficients(order: int) -> list[Fraction]:
    """Coefficients c_k of log(sinh(x)/x) = sum_{k>=1} c_k x^(2k), k = 0..order (c_0 = 0)."""
    # series in y = x^2: sinh(x)/x = sum y^k / (2k+1)!
    u = [Fraction(0)] + [Fraction(1, factorial(2 * k + 1)) for k in range(1, order + 1)]
    log = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for j in range(1, order + 1):
        nxt = [Fraction(0)] * (order + 1)
        for a, pa in enumerate(power):
            if not pa:
                continue
            for b in range(1, order + 1 - a):
                nxt[a + b] += pa * u[b]
        power = nxt
        sign = 1 if j % 2 else -1
        for k in range(order + 1):
            log[k] += sign * power[k] / j
    return log


def _exp_nilpotent(w: FormElement) -> FormElement:
    """exp of a form without degree-0 part (the series terminates)."""
    out = FormElement.scalar(w.n, 1)
    term = FormElement.scalar(w.n, 1)
    j = 0
    while True:
        j += 1
        term = term.wedge(w).scale(Fraction(1, j))
        if term.is_zero():
            return out
        out = out + term


def a_hat_oracle(model: CurvatureModel, max_degree: int | None = None) -> FormElement:
    """det^(1/2)((k/2)/sinh(k/2)) = exp(1/2 tr log((k/2)/sinh(k/2))), truncated at max_degree."""
    n = model.n
    if max_degree is None:
        max_degree = n
    if max_degree > n:
        raise ValueError(f"max_degree {max_degree} exceeds dimension {n}")
    kappa = [list(row) for row in model.kappa]
    k2 = _matmul(kappa, kappa, n)
    kmax = n // 4
    coeffs = log_sinhc_coefficients(kmax)
    half_trace_log = FormElement.zero(n)
    power = k2
    for k in range(1, kmax + 1):
        if k > 1:
            power = _matmul(power, k2, n)
        # log(x/sinh x) = -log(sinh x / x), with x = k/2 contributing 4^-k
        half_trace_log = half_trace_log + _trace(power, n).scale(-coeffs[k] / (2 * 4 ** k))
    value = _exp_nilpotent(half_trace_log)
    out = FormElement.zero(n)
    for d in range(max_degree + 1):
        out = out + value.degree_component(d)
    return out


@dataclass(frozen=True)
class IndexReport:
    model: CurvatureModel
    per_order: dict[int, ScalarResult]
    tau_independent: dict[int, bool]
    a_hat_top: Fraction
    match_ratio: Fraction | None

    @property
    def leading(self) -> ScalarResult:
        return self.per_order[0]


def supertrace_heat(H: HeatExpansion) -> IndexReport:
    """Supertrace of every order of a heat expansion plus the A-hat comparison.

    ``match_ratio`` is (tau^0 coefficient of the k=0 supertrace, with pi and i
    powers stripped) / (top coefficient of the A-hat form); ``None`` when
    either side is degenerate.
    """
    per_order = taylor_supertrace(H.expansion, H.model)
    flags = {k: v.is_tau_independent() for k, v in per_order.items()}
    top = a_hat_oracle(H.model).top_coefficient()
    ratio = None
    lead = per_order[0]
    if top and flags[0] and not lead.is_zero():
        ratio = lead.rational_part() / top
    return IndexReport(H.model, per_order, flags, top, ratio)


@dataclass(frozen=True)
class McKeanSingerReport:
    passed: bool
    tau_samples: tuple[Fraction, ...]
    values: dict[int, tuple[ScalarResult, ...]] = field(default_factory=dict)
    failing_orders: tuple[int, ...] = ()


def mckean_singer_check(model: CurvatureModel, K: int, tau_samples: Sequence,
                        expansion: TaylorSymbol | None = None) -> McKeanSingerReport:
    """Exact tau-independence of every per-order supertrace across ``tau_samples``.

    ``expansion`` overrides the solved heat expansion (used to inject failures).
    """
    samples = tuple(Fraction(t) for t in tau_samples)
    if not samples or any(t <= 0 for t in samples):
        raise ValueError("tau samples must be a nonempty list of positive rationals")
    if expansion is None:
        expansion = solve_expansion(model, K).expansion
    per_order = taylor_supertrace(expansion, model)
    values = {}
    failing = []
    for k, v in per_order.items():
        vals = tuple(v.at_tau(t) for t in samples)
        values[k] = vals
        if any(x != vals[0] for x in vals[1:]):
            failing.append(k)
    return McKeanSingerReport(not failing, samples, values, tuple(failing))
