"""Rigorous-computation engine for five-point Riesz energy minimization.

The package certifies, with exact integer/rational arithmetic and validated
interval enclosures, every computational step needed to show that the
triangular bi-pyramid minimizes the Riesz s-energy among five points on the
sphere for s in (-2,0) and (0, shin), shin = 15.04807739..., and to locate
the phase-transition exponent shin itself.
"""

from .arith import (
    BigRat,
    FloatInterval,
    PrecInterval,
    QuadNum,
    RatInterval,
    default_precision,
    float_interval_op,
    quad_sign,
    rat_interval_op,
    validated_exp,
    validated_log,
    validated_pow,
    validated_sqrt,
)
from .energy import (
    COMBOS,
    BlockBound,
    block_lower_bound,
    combo_tbp,
    config_energy,
    eps,
    err_block,
    gk_tbp,
    radial_poly,
    radial_value,
    riesz_energy,
    riesz_pair,
    tbp_planar,
)
from .forcing import CASES, CaseReport, ForcingCase, verify_case
from .geometry import (
    INFINITY,
    Configuration,
    DyadicBlock,
    DyadicSegment,
    DyadicSquare,
    SpherePoint,
    base_block,
    classify_block,
    dot_max,
    dot_min,
    hull_metrics,
    stereo,
    stereo_inv,
    totally_normalized,
)
from .poly import IntervalPoly, MultiPoly, RationalFn
from .posdom import (
    PositivityCertificate,
    is_pd,
    is_weak_pd,
    is_wpd,
    isolate_roots,
    parallel_pda,
    pda,
)
from .powercombo import ComboCoeffs, PowerApprox, build_power_approx, eval_combo
from .search import (
    Partition,
    SearchParams,
    combo_of,
    gilded_grade,
    grade,
    load_partition,
    resume,
    run,
    save_partition,
)

__all__ = [
    "base_block",
    "BigRat",
    "block_lower_bound",
    "BlockBound",
    "build_power_approx",
    "CaseReport",
    "CASES",
    "classify_block",
    "combo_of",
    "combo_tbp",
    "ComboCoeffs",
    "COMBOS",
    "config_energy",
    "Configuration",
    "default_precision",
    "dot_max",
    "dot_min",
    "DyadicBlock",
    "DyadicSegment",
    "DyadicSquare",
    "eps",
    "err_block",
    "eval_combo",
    "float_interval_op",
    "FloatInterval",
    "ForcingCase",
    "gilded_grade",
    "gk_tbp",
    "grade",
    "hull_metrics",
    "INFINITY",
    "IntervalPoly",
    "is_pd",
    "is_weak_pd",
    "is_wpd",
    "isolate_roots",
    "load_partition",
    "MultiPoly",
    "parallel_pda",
    "Partition",
    "pda",
    "PositivityCertificate",
    "PowerApprox",
    "PrecInterval",
    "quad_sign",
    "QuadNum",
    "radial_poly",
    "radial_value",
    "rat_interval_op",
    "RatInterval",
    "RationalFn",
    "resume",
    "riesz_energy",
    "riesz_pair",
    "run",
    "save_partition",
    "SearchParams",
    "SpherePoint",
    "stereo",
    "stereo_inv",
    "tbp_planar",
    "totally_normalized",
    "validated_exp",
    "validated_log",
    "validated_pow",
    "validated_sqrt",
    "verify_case",
]

__version__ = "0.1.0"
