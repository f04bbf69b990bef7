"""Exact forms, pencil algebra and classification."""
from .classify import (
    CANONICAL_TEXT,
    ClassReport,
    FormClass,
    PairTransform,
    apply_transform,
    canonical_pair,
    classify,
    transform_residual,
)
from .forms import FormPair, LinearForm, QuadForm, evaluate, parse_form, parse_pair
from .pencil import (
    common_kernel,
    common_linear_factor,
    det_condition,
    det_condition_matrix,
    linear_dependence,
    square_combination,
)

__all__ = [
    "CANONICAL_TEXT", "ClassReport", "FormClass", "FormPair", "LinearForm",
    "PairTransform", "QuadForm", "apply_transform", "canonical_pair", "classify",
    "common_kernel", "common_linear_factor", "det_condition", "det_condition_matrix",
    "evaluate", "linear_dependence", "parse_form", "parse_pair", "square_combination",
    "transform_residual",
]
