"""Shared Pydantic base classes for serialized verification outputs."""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GrassvolBaseModel(BaseModel):
    """Base model for every record written to or read from JSON.

    This class centralizes common configuration for payloads exchanged with the
    command line, ensuring consistent serialization and validation rules.
    Downstream models should inherit from this base rather than directly from
    ``pydantic.BaseModel``.
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid", strict=True)


class MatrixPayload(GrassvolBaseModel):
    """Dense complex matrix as ``{rows, cols, entries: [[re, im], ...]}``."""

    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    entries: list[tuple[float, float]]

    @field_validator("entries")
    @classmethod
    def _finite(cls, entries: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for re, im in entries:
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError("matrix entries must be finite")
        return entries

    @model_validator(mode="after")
    def _shape(self) -> MatrixPayload:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        return self


class VolumeEstimate(GrassvolBaseModel):
    """Monte-Carlo estimate of a Grassmannian volume integral.

    ``max_weight_share`` is the largest single importance weight divided by the
    sum of all weights. Values far above ``1 / samples`` mean a handful of draws
    dominate the estimate and the reported standard error is not trustworthy.
    """

    mean: float
    standard_error: float = Field(ge=0.0)
    samples: int = Field(ge=1)
    seed: int = Field(ge=0)
    law: Literal["haar", "entrywise"] = "haar"
    max_weight_share: float = Field(default=0.0, ge=0.0, le=1.0)


class VolumeReport(GrassvolBaseModel):
    """Closed form against Monte-Carlo estimate for one ``(k, n)`` shape."""

    k: int
    n: int
    closed_form: float
    mc_mean: float
    mc_stderr: float
    z_score: float
    samples: int
    seed: int
    law: Literal["haar", "entrywise"] = "haar"
    max_weight_share: float = Field(default=0.0, ge=0.0, le=1.0)

class FlagDescriptor(GrassvolBaseModel):
    """Block sizes of ``U(n)/(U(d_1) x ... x U(d_j))`` and its complex dimension."""

    quotient: list[int]
    complex_dimension: int = Field(ge=0)


class FlagReport(GrassvolBaseModel):
    """Classification of one Hermitian matrix against the exponential kernel."""

    in_kernel: bool
    spectral_type: list[tuple[int, int]] | None = None
    blocks: list[int] | None = None
    complex_dimension: int | None = None
    flag_volume: float | None = None


class GatePayload(GrassvolBaseModel):
    """One circuit element: a controlled single-qubit unitary or a CNOT."""

    kind: Literal["cu", "cnot"]
    control: int = Field(ge=1)
    target: int = Field(ge=1)
    u: MatrixPayload | None = None

    @model_validator(mode="after")
    def _operand(self) -> GatePayload:
        if self.kind == "cu" and self.u is None:
            raise ValueError("controlled-unitary gates need a 'u' matrix")
        if self.kind == "cnot" and self.u is not None:
            raise ValueError("cnot gates take no 'u' matrix")
        return self


class CircuitPayload(GrassvolBaseModel):
    """Circuit JSON: ``{t, gates: [...]}`` with gates in temporal order."""

    t: int = Field(ge=1)
    gates: list[GatePayload] = Field(default_factory=list)


class ConvergenceEntry(GrassvolBaseModel):
    """Holonomy diagnostics at one loop resolution."""

    steps: int = Field(ge=2)
    unitarity_deviation: float = Field(ge=0.0)
    euler_deviation: float = Field(ge=0.0)
    distance_to_finest: float = Field(ge=0.0)


class HolonomyReport(GrassvolBaseModel):
    """Holonomy of a built-in family around one loop."""

    family: str
    loop: Literal["circle", "rectangle"]
    steps: int = Field(ge=2)
    gamma: MatrixPayload
    unitarity_deviation: float = Field(ge=0.0)
    euler_deviation: float = Field(ge=0.0)
    max_residue: float = Field(ge=0.0)
    convergence: list[ConvergenceEntry] = Field(default_factory=list)


class VerificationRecord(GrassvolBaseModel):
    """Outcome of a single verification check."""

    check_id: str
    paper_anchor: str
    status: Literal["pass", "fail"]
    max_error: float
    runtime_ms: float = Field(ge=0.0)
    seed: int | None = None


__all__ = [
    "CircuitPayload",
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
]
