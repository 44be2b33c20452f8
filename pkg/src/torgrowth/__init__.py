"""Torsion growth of modules over integer Laurent polynomial rings.

A desk-scale laboratory for the identity between the exponential growth rate
of homology torsion along finite-index subgroups of Z^n and the Mahler
measure of the first non-vanishing Alexander polynomial.
"""

__version__ = "0.1.0"

from .laurent import (
    LaurentPoly,
    UnitNormalForm,
    div_exact,
    gcd,
    normalize_unit,
    parse_poly,
    variables,
)
from .lattices import (
    Direction,
    FinAbGroup,
    Subgroup,
    converging_k_sequence,
    coordinate_order,
    gamma_sj,
    min_norm,
    perp,
    quotient,
)
from .groupalg import (
    Character,
    GroupAlgElem,
    SubLattice,
    alpha_ideal,
    beta_ideal,
    characters,
    mult_matrix,
    project_poly,
)
from .presmod import (
    ChainComplex,
    GroupPresentation,
    PresentedModule,
    alexander,
    alexander_complex,
    alexander_module,
    branched_module,
    delta,
    fox_derivative,
    is_pseudo_zero_torsion,
    parse_presentation,
    rank,
)
from .torsion import (
    GrowthSample,
    SnfResult,
    betti,
    chain_torsion,
    cyclic_branched_oracle,
    expand,
    fixed_components,
    growth_sample,
    snf,
    torsion_order,
)
from .mahler import (
    MahlerEstimate,
    is_kronecker,
    mahler_lawton,
    mahler_quadrature,
    mahler_univariate,
)
from .growthlab import ExperimentConfig, ExperimentReport, run

__all__ = [
    "LaurentPoly", "UnitNormalForm", "div_exact", "gcd", "normalize_unit",
    "parse_poly", "variables",
    "Direction", "FinAbGroup", "Subgroup", "converging_k_sequence",
    "coordinate_order", "gamma_sj", "min_norm", "perp", "quotient",
    "Character", "GroupAlgElem", "SubLattice", "alpha_ideal", "beta_ideal",
    "characters", "mult_matrix", "project_poly",
    "ChainComplex", "GroupPresentation", "PresentedModule", "alexander",
    "alexander_complex", "alexander_module", "branched_module", "delta",
    "fox_derivative", "is_pseudo_zero_torsion", "parse_presentation", "rank",
    "GrowthSample", "SnfResult", "betti", "chain_torsion",
    "cyclic_branched_oracle", "expand", "fixed_components", "growth_sample",
    "snf", "torsion_order",
    "MahlerEstimate", "is_kronecker", "mahler_lawton", "mahler_quadrature",
    "mahler_univariate",
    "ExperimentConfig", "ExperimentReport", "run",
]
