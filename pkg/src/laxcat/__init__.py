"""Classifiers for lax, oplax and Frobenius monoidal functors.

The package computes in the categories whose strict monoidal functors are the
weak monoidal functors out of a finitely presented strict monoidal category.
"""

from .classifier import (
    ClassifierPresentation, Compose, Env, Id, J, K, L, Q, Tensor, Term, build_frob, build_lax,
    build_oplax, embed, parse_laxword, parse_term, seq, tensor,
)
from .model import (
    FrobeniusAlgebraData, ModelFunctor, evaluate, evaluate_diagram, extract_weak_structure,
    make_frobenius_algebra, random_model, validate_model,
)
from .presentation import (
    CCompose, CGen, CId, CTensor, Presentation, c_equal, infer_type, parse_cterm, parse_presentation,
)
from .rewrite import Diagram, Distinct, Equal, Unknown, check_equal, normalize, to_sliced

__all__ = [
    "ClassifierPresentation", "Compose", "Env", "Id", "J", "K", "L", "Q", "Tensor", "Term",
    "build_frob", "build_lax", "build_oplax", "embed", "parse_laxword", "parse_term", "seq", "tensor",
    "FrobeniusAlgebraData", "ModelFunctor", "evaluate", "evaluate_diagram", "extract_weak_structure",
    "make_frobenius_algebra", "random_model", "validate_model",
    "CCompose", "CGen", "CId", "CTensor", "Presentation", "c_equal", "infer_type", "parse_cterm",
    "parse_presentation",
    "Diagram", "Distinct", "Equal", "Unknown", "check_equal", "normalize", "to_sliced",
]
