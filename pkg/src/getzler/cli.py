"""Command-line front end.

Exit codes: 0 success, 1 selfcheck failure, 2 input error, 3 semantic error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import jsonio
from .borel import active_terms, borel_eval, partial_sum
from .exterior import DimensionError, index_from_mask
from .heat import heat_residual, initial_values, solve_expansion
from .index import a_hat_oracle, mckean_singer_check, supertrace_heat
from .product import getzler_product
from .selfcheck import run_selfcheck, seed_from_env
from .symbolic import GaussSymbol, IntegrabilityError
from .taylor import taylor_product

log = logging.getLogger("getzler")

EXIT_OK, EXIT_SELFCHECK, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    model_path: str | None = None
    K: int = 4
    tau_samples: list[Fraction] = field(default_factory=lambda: [Fraction(1, 2), Fraction(1), Fraction(2)])
    output_format: str = "json"
    output_path: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [jsonio.parse_rational(x, "--tau") for x in text.split(",") if x.strip()]
    except jsonio.InputError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="getzler", description="Exact rescaled symbol calculus at a model point.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True, help="curvature model JSON")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("product", help="twisted product of two symbols (or Taylor symbols)")
    common(p)
    p.add_argument("--a", required=True, help="left operand JSON")
    p.add_argument("--b", required=True, help="right operand JSON")

    p = sub.add_parser("heat", help="solve the symbol-level heat equation")
    common(p)
    p.add_argument("--K", type=int, default=4, help="truncation order in t")

    p = sub.add_parser("index", help="supertraces of the heat expansion")
    common(p)
    p.add_argument("--K", type=int, default=4)
    p.add_argument("--tau", type=_rational_list, default="1/2,1,2", help="comma-separated positive rationals")

    p = sub.add_parser("borel", help="evaluate a resummed symbol")
    common(p, model=False)
    p.add_argument("--spec", required=True, help="Borel spec JSON")
    p.add_argument("--xi", type=_float_list, required=True, help="comma-separated fiber point")
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("selfcheck", help="run the invariant suite at fixed seeds")
    p.add_argument("--seed", type=int, default=None, help="overrides GETZLER_SEED")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out")
    return parser


def _emit(payload: dict, text: str, args) -> None:
    body = jsonio.dumps(payload) if args.format == "json" else text
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def cmd_product(args) -> int:
    model = jsonio.model_from_json(jsonio.load_json(args.model), "model")
    a_raw, b_raw = jsonio.load_json(args.a), jsonio.load_json(args.b)
    if jsonio.is_taylor_json(a_raw) or jsonio.is_taylor_json(b_raw):
        A, B = jsonio.taylor_from_json(a_raw, "a"), jsonio.taylor_from_json(b_raw, "b")
        result = taylor_product(A, B, model)
        payload = jsonio.taylor_to_json(result)
        text = "\n".join(f"[{k}] {c}" for k, c in enumerate(result.coeffs)) + "\n"
    else:
        a, b = jsonio.symbol_from_json(a_raw, "a"), jsonio.symbol_from_json(b_raw, "b")
        result = getzler_product(a, b, model)
        payload = jsonio.symbol_to_json(result)
        text = f"{result}\n"
    _emit(payload, text, args)
    return EXIT_OK


def _check_K(K: int) -> None:
    if K < 0:
        raise jsonio.InputError(f"--K must be nonnegative, got {K}")


def cmd_heat(args) -> int:
    _check_K(args.K)
    model = jsonio.model_from_json(jsonio.load_json(args.model), "model")
    H = solve_expansion(model, args.K)
    residual_zero = heat_residual(H.expansion, model).is_zero()
    init = initial_values(H)
    init_ok = init[0] == GaussSymbol.constant(model.n, 1) and all(c.is_zero() for c in init[1:])
    lines = [f"[{k}] {c}" for k, c in enumerate(H.expansion.coeffs)]
    lines.append(f"residual_zero: {residual_zero}")
    lines.append(f"initial_conditions_ok: {init_ok}")
    for a in H.audit:
        lines.append(f"order {a.order}: source = {a.factor_per_s} * s * F[{a.order - 2}]"
                     f" (printed factor: {a.printed_factor_per_s})")
    _emit(jsonio.heat_to_json(H, residual_zero, init_ok), "\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_index(args) -> int:
    _check_K(args.K)
    taus = args.tau if isinstance(args.tau, list) else _rational_list(args.tau)
    if not taus or any(t <= 0 for t in taus):
        raise jsonio.InputError("--tau must be a nonempty list of positive rationals")
    model = jsonio.model_from_json(jsonio.load_json(args.model), "model")
    H = solve_expansion(model, args.K)
    R = supertrace_heat(H)
    ms = mckean_singer_check(model, args.K, taus, expansion=H.expansion)
    a_hat = a_hat_oracle(model)
    lines = [f"k={k}: {v}  tau-independent={R.tau_independent[k]}" for k, v in R.per_order.items()]
    lines.append(f"A-hat: {a_hat}")
    lines.append(f"match ratio: {'undefined' if R.match_ratio is None else R.match_ratio}")
    lines.append(f"McKean-Singer over {[str(t) for t in taus]}: {ms.passed}")
    _emit(jsonio.index_to_json(R, args.K, ms, a_hat), "\n".join(lines) + "\n", args)
    return EXIT_OK


def _dense_json(vec: np.ndarray) -> list[dict]:
    return [{"index": list(index_from_mask(m)), "value": jsonio.float_str(v)}
            for m, v in enumerate(vec) if v != 0.0]


def cmd_borel(args) -> int:
    B = jsonio.borel_from_json(jsonio.load_json(args.spec), "spec")
    if len(args.xi) != B.n:
        raise DimensionError(f"--xi has {len(args.xi)} entries, spec dimension is {B.n}")
    value = borel_eval(B, args.xi, args.t)
    active = active_terms(B, args.xi, args.t)
    payload = {
        "spec": jsonio.borel_to_json(B),
        "xi": [jsonio.float_str(x) for x in args.xi],
        "t": jsonio.float_str(args.t),
        "value": _dense_json(value),
        "activeTerms": active,
        "partialSum": _dense_json(partial_sum(B, args.xi, args.t)),
    }
    text = f"value: {jsonio.dumps(_dense_json(value))}active terms: {active}\n"
    _emit(payload, text, args)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    seed = args.seed if args.seed is not None else seed_from_env()
    results = run_selfcheck(seed)
    ok = all(passed for _, passed in results)
    payload = {"seed": seed, "passed": ok, "checks": {name: passed for name, passed in results}}
    text = "".join(f"{'PASS' if p else 'FAIL'}  {name}\n" for name, p in results)
    _emit(payload, text + f"seed {seed}: {'ok' if ok else 'FAILED'}\n", args)
    return EXIT_OK if ok else EXIT_SELFCHECK


COMMANDS = {
    "product": cmd_product,
    "heat": cmd_heat,
    "index": cmd_index,
    "borel": cmd_borel,
    "selfcheck": cmd_selfcheck,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except jsonio.InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionError, IntegrabilityError) as exc:
        print(f"semantic error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
