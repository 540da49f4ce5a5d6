"""High-precision evaluation and convergence acceleration of two-variant continued fractions."""
from .accel import AccelResult, TailTable, accelerate, build_table, delta_table, iterate_once
from .cf import (
    TwoVariantCF, classical_approximant, modified_approximant, odd_tail_residual,
    regroup_one_variant, u_plus,
)
from .classifier import SubclassTag, classify, classify_cf, shifted_coeffs
from .errors import TVCFError
from .numerics import Poly, PrecisionContext, QComplex, acc, parse_number
from .tails import TailModel, eval_initial, initial_tail, tail_model

__version__ = "0.1.0"

__all__ = [
    "AccelResult", "Poly", "PrecisionContext", "QComplex", "SubclassTag", "TVCFError",
    "TailModel", "TailTable", "TwoVariantCF", "acc", "accelerate", "build_table",
    "classical_approximant", "classify", "classify_cf", "delta_table", "eval_initial",
    "initial_tail", "iterate_once", "modified_approximant", "odd_tail_residual",
    "parse_number", "regroup_one_variant", "shifted_coeffs", "tail_model", "u_plus",
]
