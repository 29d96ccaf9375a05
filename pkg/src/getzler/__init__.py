"""Exact calculus of rescaled form-valued symbols at a model point."""

from .exterior import (
    DimensionError,
    FormElement,
    berezin_top,
    degree_component,
    form_add,
    form_scale,
    form_wedge,
)
from .symbolic import (
    GaussSymbol,
    IntegrabilityError,
    ScalarResult,
    sym_add,
    sym_antiderivative_tau,
    sym_eval,
    sym_integrate_xi,
    sym_mul,
    sym_partial_tau,
    sym_partial_xi,
    sym_scale,
)
from .product import CurvatureModel, ModelError, build_model, flat_model, getzler_product, oscillator_apply
from .taylor import TaylorSymbol, dirac_squared_symbol, taylor_product, taylor_supertrace
from .heat import HeatExpansion, heat_residual, solve_expansion, solve_leading
from .index import IndexReport, a_hat_oracle, mckean_singer_check, supertrace_heat
from .borel import BorelSpec, borel_build, borel_eval, borel_taylor_check

__version__ = "0.1.0"
