"""Complex hyperbolic triangle groups and their C-Fuchsian subgroups."""

from .config import DEFAULT, Tolerances, default_tolerances
from .groups import (
    FAMILIES,
    TriangleGroup,
    braid_holds,
    eval_word,
    family,
    sporadic_group,
    thompson_group,
    verify_presentation,
)
from .isometry import Isometry, classify_isometry, proj_equal, projective_order
from .linalg import STANDARD_FORM, HermitianForm, box_product, herm_inner
from .words import Word, parse_word

__all__ = [
    "DEFAULT",
    "FAMILIES",
    "HermitianForm",
    "Isometry",
    "STANDARD_FORM",
    "Tolerances",
    "TriangleGroup",
    "Word",
    "box_product",
    "braid_holds",
    "classify_isometry",
    "default_tolerances",
    "eval_word",
    "family",
    "herm_inner",
    "parse_word",
    "proj_equal",
    "projective_order",
    "sporadic_group",
    "thompson_group",
    "verify_presentation",
]
