"""Level-3 Ramanujan-type series for 1/pi from singular values.

The public surface is re-exported here; see the submodules for details.
"""

__version__ = "0.1.0"

from .algebraic import AlgebraicNumber, certify_vanishing, identify, surd_of_quadratic
from .bigreal import BigReal
from .builder import (
    DerivationRecord,
    b_unreduced,
    build_series,
    build_x,
    recover_r,
    solve_y,
)
from .catalog import Catalog, CatalogEntry, load
from .elliptic import Modulus, agm, dk_dk, ell_e, ell_e_prime, ell_k, ell_k_prime
from .errors import *
from .expr import SurdExpr, surd_parse
from .series import SeriesParams, eval_series, gf_A, gf_B, gf_C, gf_D
from .singular import (
    GInvariant,
    SingularArgument,
    alpha_9r,
    alpha_from_sigma,
    alpha_numeric,
    g9n_step,
    g_from_lambda,
    lambda_from_g,
    lambda_star_numeric,
    rho_eleven,
)

__all__ = [
    "AlgebraicNumber", "BigReal", "Catalog", "CatalogEntry", "DerivationRecord", "GInvariant",
    "Modulus", "SeriesParams", "SingularArgument", "SurdExpr", "agm", "alpha_9r",
    "alpha_from_sigma", "alpha_numeric", "b_unreduced", "build_series", "build_x",
    "certify_vanishing", "dk_dk", "ell_e", "ell_e_prime", "ell_k", "ell_k_prime", "eval_series",
    "g9n_step", "g_from_lambda", "gf_A", "gf_B", "gf_C", "gf_D", "identify", "lambda_from_g",
    "lambda_star_numeric", "load", "recover_r", "rho_eleven", "solve_y", "surd_of_quadratic",
    "surd_parse",
]
