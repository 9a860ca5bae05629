"""Cayley-Dickson algebras, twisted groups, bar constructions and nonassociative
connections, with numerical holonomy, curvature and finite cochain cohomology."""
from .algebra import (
    CdNumber,
    cd_exp,
    cd_inverse,
    cd_ln,
    cd_mul,
    format_cd,
    k_defect,
    p_defect,
    parse_cd,
)
from .bar import BarWord, parse_word, format_word
from .cochain import Cochain, check_exactness, coboundary, cohomology_dims
from .config import DEFAULT_CONFIG, Config, load_config
from .connection import (
    DiscreteBundle,
    DiscreteLoop,
    curvature_estimate,
    curvature_form,
    holonomy,
)
from .errors import (
    BranchCutError,
    CayleyWrapError,
    ContractViolation,
    CoverageError,
    NumericError,
)
from .twisted import PureState, ZCrElement

__version__ = "0.1.0"

__all__ = [
    "BarWord", "BranchCutError", "CayleyWrapError", "CdNumber", "Cochain", "Config",
    "ContractViolation", "CoverageError", "DEFAULT_CONFIG", "DiscreteBundle", "DiscreteLoop",
    "NumericError", "PureState", "ZCrElement", "cd_exp", "cd_inverse", "cd_ln", "cd_mul",
    "check_exactness", "coboundary", "cohomology_dims", "curvature_estimate", "curvature_form",
    "format_cd", "format_word", "holonomy", "k_defect", "load_config", "p_defect", "parse_cd",
    "parse_word",
]
