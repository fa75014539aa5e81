"""Exact operator calculus on partial affine injections."""

from .coefficient import I_UNIT, ONE, ZERO, Coefficient
from .injection import (
    IDENTITY_LAW,
    AffinePiece,
    Law,
    PartialInjection,
    compose_injection,
    invert_injection,
    piece,
    validate_injection,
)
from .operator import (
    DEFAULT_BOUND,
    Classification,
    NotScalar,
    Operator,
    PrefixOperator,
    Scalar,
    apply,
    apply_adjoint,
    classify,
    linear_combine,
    op_adjoint,
    op_mul,
    scalar_test,
)

__all__ = [
    "AffinePiece", "Classification", "Coefficient", "DEFAULT_BOUND", "IDENTITY_LAW", "I_UNIT",
    "Law", "NotScalar", "ONE", "Operator", "PartialInjection", "PrefixOperator", "Scalar",
    "ZERO", "apply", "apply_adjoint", "classify", "compose_injection", "invert_injection",
    "linear_combine", "op_adjoint", "op_mul", "piece", "scalar_test", "validate_injection",
]
