"""Exact symbolic workbench for the Duflo map of finite-dimensional Lie algebras."""

from .duflo import (
    StarFlavor,
    duflo_coefficients,
    duflo_inverse,
    duflo_map,
    extract_c,
    star_product,
    strange_inverse,
    strange_map,
    trace_element,
)
from .envalg import EnvElement, FreeWordExpression, enveloping, pbw_inverse, pbw_symmetrize
from .liealg import LieAlgebra, catalog, direct_sum, resolve_algebra, validate
from .sympoly import DualPolynomial, SymPolynomial, poisson_bracket

__version__ = "0.1.0"
