"""Zero-set geometry of complex polynomials.

Gauss-Lucas checks, classification and refutation of diameter-nonexpansive
linear operators, and numerical lower bounds for the constants d(n,k).
"""

from .extremal import ExtremalEstimate, dnk_table, estimate_dnk, exact_dnk, ratio
from .geometry import (
    HullPolygon,
    convex_hull,
    diameter,
    gauss_lucas_check,
    hull_contains,
    zero_set_diameter,
)
from .operators import (
    LinearFunctional,
    MonomialOperator,
    apply,
    claim_solutions,
    classify,
    make_form1,
    make_form2,
    make_form3,
    shifted_power_basis_matrix,
    single_zero_probe,
    test_nonexpansive,
)
from .poly import (
    AffineMap,
    Polynomial,
    compose_affine,
    degree,
    derivative,
    evaluate,
    from_roots,
    linear_combination,
)
from .roots import RootConfig, ZeroSet, distinct_zero_count, find_roots

__version__ = "0.1.0"
