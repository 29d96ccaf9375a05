"""JSON encoding of forms, symbols, models, scalars and reports.

Exact data is written with rationals as canonical strings ("p/q", or "p" for
integers); floats only appear in Borel outputs, as 17-significant-digit
strings.  Parsers raise :class:`InputError` carrying a field path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .borel import BorelSpec, borel_build
from .exterior import FormElement
from .heat import HeatExpansion
from .index import IndexReport, McKeanSingerReport
from .product import CurvatureModel, ModelError, build_model
from .symbolic import GaussSymbol, ScalarResult
from .taylor import TaylorSymbol


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


# ---------------------------------------------------------------- primitives

def rational_str(x) -> str:
    return str(Fraction(x))


def float_str(x: float) -> str:
    return format(float(x), ".17g")


def parse_rational(value: Any, path: str = "$") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{path}: expected a rational string 'p/q', got {value!r}")
    text = str(value).strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise InputError(f"{path}: malformed rational {value!r}") from None
    if q == 0:
        raise InputError(f"{path}: zero denominator in {value!r}")
    return Fraction(p, q)


def parse_float(value: Any, path: str = "$") -> float:
    if isinstance(value, bool):
        raise InputError(f"{path}: expected a number")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InputError(f"{path}: expected a decimal number, got {value!r}") from None


def _int(value: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InputError(f"{path}: must be >= {minimum}, got {value}")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{path}: expected a list")
    return value


def _obj(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise InputError(f"{path}: expected an object")
    return value


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise InputError(f"{path}: missing field '{key}'")
    return obj[key]


# --------------------------------------------------------------------- forms

def form_to_json(f: FormElement) -> list[dict]:
    items = sorted(f.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [{"coeff": rational_str(c), "index": list(idx)} for idx, c in items]


def form_from_json(data: Any, n: int, path: str = "$") -> FormElement:
    out = FormElement.zero(n)
    for k, term in enumerate(_list(data, path)):
        p = f"{path}[{k}]"
        term = _obj(term, p)
        c = parse_rational(_get(term, "coeff", p), p + ".coeff")
        idx = [_int(i, f"{p}.index[{j}]") for j, i in enumerate(_list(_get(term, "index", p), p + ".index"))]
        if any(not 1 <= i <= n for i in idx):
            raise InputError(f"{p}.index: entries must lie in 1..{n}")
        out = out + FormElement.basis(n, *idx, coeff=c)
    return out


# ------------------------------------------------------------------- symbols

def symbol_to_json(a: GaussSymbol) -> dict:
    strata = []
    for q, poly in a.strata.items():
        terms = [{"xi": list(alpha), "tau": m, "form": form_to_json(f)}
                 for (alpha, m), f in poly.items()]
        strata.append({"q": rational_str(q), "terms": terms})
    return {"n": a.n, "strata": strata}


def symbol_from_json(data: Any, path: str = "$", n: int | None = None) -> GaussSymbol:
    data = _obj(data, path)
    dim = _int(_get(data, "n", path), path + ".n", 1)
    if n is not None and dim != n:
        raise InputError(f"{path}.n: expected dimension {n}, got {dim}")
    out = GaussSymbol.zero(dim)
    for s, stratum in enumerate(_list(_get(data, "strata", path), path + ".strata")):
        sp = f"{path}.strata[{s}]"
        stratum = _obj(stratum, sp)
        q = parse_rational(_get(stratum, "q", sp), sp + ".q")
        if q < 0:
            raise InputError(f"{sp}.q: Gaussian weight must be nonnegative")
        for t, term in enumerate(_list(_get(stratum, "terms", sp), sp + ".terms")):
            tp = f"{sp}.terms[{t}]"
            term = _obj(term, tp)
            alpha = [_int(x, f"{tp}.xi[{i}]", 0) for i, x in enumerate(_list(_get(term, "xi", tp), tp + ".xi"))]
            if len(alpha) != dim:
                raise InputError(f"{tp}.xi: expected {dim} exponents")
            m = _int(term.get("tau", 0), tp + ".tau", 0)
            f = form_from_json(_get(term, "form", tp), dim, tp + ".form")
            out = out + GaussSymbol.monomial(dim, alpha, m, q, f)
    return out


def taylor_to_json(A: TaylorSymbol) -> dict:
    return {"n": A.n, "order": A.order, "K": A.K, "coeffs": [symbol_to_json(c) for c in A.coeffs]}


def taylor_from_json(data: Any, path: str = "$") -> TaylorSymbol:
    data = _obj(data, path)
    n = _int(_get(data, "n", path), path + ".n", 1)
    order = _int(data.get("order", 0), path + ".order")
    coeffs = [symbol_from_json(c, f"{path}.coeffs[{k}]", n)
              for k, c in enumerate(_list(_get(data, "coeffs", path), path + ".coeffs"))]
    if not coeffs:
        raise InputError(f"{path}.coeffs: need at least one coefficient")
    if "K" in data and _int(data["K"], path + ".K", 0) != len(coeffs) - 1:
        raise InputError(f"{path}.K: does not match number of coefficients")
    return TaylorSymbol(n, order, tuple(coeffs))


def is_taylor_json(data: Any) -> bool:
    return isinstance(data, dict) and "coeffs" in data


# -------------------------------------------------------------------- models

def model_to_json(M: CurvatureModel) -> dict:
    entries = []
    for i in range(1, M.n + 1):
        for j in range(i + 1, M.n + 1):
            f = M.entry(i, j)
            if not f.is_zero():
                entries.append({"i": i, "j": j, "form": form_to_json(f)})
    return {"n": M.n, "s": rational_str(M.s), "kappa": entries}


def model_from_json(data: Any, path: str = "$") -> CurvatureModel:
    data = _obj(data, path)
    n = _int(_get(data, "n", path), path + ".n", 1)
    s = parse_rational(data.get("s", "0"), path + ".s")
    entries = {}
    for k, e in enumerate(_list(data.get("kappa", []), path + ".kappa")):
        p = f"{path}.kappa[{k}]"
        e = _obj(e, p)
        i = _int(_get(e, "i", p), p + ".i", 1)
        j = _int(_get(e, "j", p), p + ".j", 1)
        if i >= j:
            raise InputError(f"{p}: only upper-triangle entries (i < j) are accepted")
        if (i, j) in entries:
            raise InputError(f"{p}: duplicate entry ({i},{j})")
        entries[(i, j)] = form_from_json(_get(e, "form", p), n, p + ".form")
    try:
        return build_model(n, s, entries)
    except ModelError as exc:
        raise InputError(f"{path}: {exc}") from None


# ------------------------------------------------------------------- scalars

def scalar_to_json(x: ScalarResult) -> dict:
    return {"terms": {rational_str(b): rational_str(c) for b, c in x.terms.items()},
            "piPower": rational_str(x.pi_power), "iPower": x.i_power}


def scalar_from_json(data: Any, path: str = "$") -> ScalarResult:
    data = _obj(data, path)
    terms = {parse_rational(b, f"{path}.terms.{b}"): parse_rational(c, f"{path}.terms.{b}")
             for b, c in _obj(_get(data, "terms", path), path + ".terms").items()}
    pi = parse_rational(data.get("piPower", "0"), path + ".piPower")
    ip = _int(data.get("iPower", 0), path + ".iPower")
    try:
        return ScalarResult(terms, pi, ip)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# --------------------------------------------------------------------- borel

def borel_to_json(B: BorelSpec) -> dict:
    return {
        "n": B.n,
        "order": B.order,
        "tau": float_str(B.tau),
        "coefficients": [symbol_to_json(c) for c in B.coefficients],
        "bounds": [float_str(b) for b in B.bounds],
        "epsilons": [float_str(e) for e in B.epsilons],
    }


def borel_from_json(data: Any, path: str = "$") -> BorelSpec:
    """Coefficients are required; bounds are optional, epsilons are re-derived if absent."""
    data = _obj(data, path)
    coeffs = [symbol_from_json(c, f"{path}.coefficients[{k}]")
              for k, c in enumerate(_list(_get(data, "coefficients", path), path + ".coefficients"))]
    if not coeffs:
        raise InputError(f"{path}.coefficients: need at least one coefficient")
    bounds = None
    if "bounds" in data:
        bounds = [parse_float(b, f"{path}.bounds[{k}]")
                  for k, b in enumerate(_list(data["bounds"], path + ".bounds"))]
    order = _int(data.get("order", 0), path + ".order")
    tau = parse_float(data.get("tau", 1.0), path + ".tau")
    try:
        B = borel_build(coeffs, bounds, order=order, tau=tau)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if "epsilons" in data:
        eps = tuple(parse_float(e, f"{path}.epsilons[{k}]")
                    for k, e in enumerate(_list(data["epsilons"], path + ".epsilons")))
        if len(eps) != len(coeffs) or any(not e > 0 for e in eps):
            raise InputError(f"{path}.epsilons: need one positive value per coefficient")
        B = BorelSpec(B.n, B.coefficients, B.bounds, eps, B.tau, B.order)
    return B


# ------------------------------------------------------------------- reports

def heat_to_json(H: HeatExpansion, residual_zero: bool, initial_ok: bool) -> dict:
    return {
        "model": model_to_json(H.model),
        "K": H.K,
        "expansion": taylor_to_json(H.expansion),
        "residual_zero": residual_zero,
        "initial_conditions_ok": initial_ok,
        "source_audit": [
            {
                "order": a.order,
                "factor_per_s": rational_str(a.factor_per_s),
                "proportional": a.proportional,
                "printed_factor_per_s": None if a.printed_factor_per_s is None
                else rational_str(a.printed_factor_per_s),
                "matches_printed": a.matches_printed,
            }
            for a in H.audit
        ],
    }


def index_to_json(R: IndexReport, K: int, ms: McKeanSingerReport, a_hat: FormElement) -> dict:
    return {
        "model": model_to_json(R.model),
        "K": K,
        "perOrder": {str(k): scalar_to_json(v) for k, v in R.per_order.items()},
        "tauIndependent": {str(k): v for k, v in R.tau_independent.items()},
        "aHat": form_to_json(a_hat),
        "aHatTop": rational_str(R.a_hat_top),
        "matchRatio": "undefined" if R.match_ratio is None else rational_str(R.match_ratio),
        "tauSamples": [rational_str(t) for t in ms.tau_samples],
        "mckeanSinger": {"passed": ms.passed, "failingOrders": list(ms.failing_orders)},
    }


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
