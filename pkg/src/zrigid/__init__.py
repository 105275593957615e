"""Exact models of Presburger arithmetic: profinite integers, Z-groups and rigidity."""

from .errors import ZRigidError
from .profinite import ProfiniteElement
from .realspan import Gamma, SpanElement
from .rigidity import (Automorphism, Verdict, build_f_gamma, decide_rigidity, extract_gh,
                       verify_automorphism)
from .zgroup import Element, Model, ModelSpec, build_model

__version__ = "0.1.0"

__all__ = [
    "ZRigidError", "ProfiniteElement", "Gamma", "SpanElement", "Automorphism", "Verdict",
    "build_f_gamma", "decide_rigidity", "extract_gh", "verify_automorphism", "Element", "Model",
    "ModelSpec", "build_model",
]
