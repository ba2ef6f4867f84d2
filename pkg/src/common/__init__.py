"""Shared configuration, records and helpers for grassvol."""

from .basemodel import (
    CircuitPayload,
    ConvergenceEntry,
    FlagDescriptor,
    FlagReport,
    GatePayload,
    GrassvolBaseModel,
    HolonomyReport,
    MatrixPayload,
    VerificationRecord,
    VolumeEstimate,
    VolumeReport,
)
from .context import ConfigError, Context
from .utils import (
    ComplexMatrix,
    haar_unitary,
    make_rng,
    matrix_from_json,
    matrix_from_payload,
    matrix_to_json,
    matrix_to_payload,
    random_hermitian,
)

__all__ = [
    "CircuitPayload",
    "ComplexMatrix",
    "ConfigError",
    "Context",
    "ConvergenceEntry",
    "FlagDescriptor",
    "FlagReport",
    "GatePayload",
    "GrassvolBaseModel",
    "HolonomyReport",
    "MatrixPayload",
    "VerificationRecord",
    "VolumeEstimate",
    "VolumeReport",
    "haar_unitary",
    "make_rng",
    "matrix_from_json",
    "matrix_from_payload",
    "matrix_to_json",
    "matrix_to_payload",
    "random_hermitian",
]
