"""Request/response models and the JSON codecs for states and matrices.

Region descriptors ride as plain JSON objects in their canonical form and
are decoded by the region modules, which own that format; complex numbers
appear as plain numbers or [re, im] pairs.
"""

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field

from .. import __version__
from ..conventions import ledger
from ..errors import InvalidRegionError
from ..fock import QuantumState, coherent_state, number_state, squeezed_vacuum


def complex_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace("i", "j"))
    raise InvalidRegionError(f"cannot read complex number from {value!r}")


def state_from_json(data: dict, dim: int) -> QuantumState:
    """Decode a state descriptor: fock coefficients, coherent alpha,
    squeezed r, or a bare number state."""
    if not isinstance(data, dict) or "type" not in data:
        raise InvalidRegionError("state descriptor needs a 'type' field")
    kind = data["type"]
    try:
        if kind == "fock":
            coeffs = np.array([complex_from_json(c) for c in data["coefficients"]])
            if coeffs.shape[0] > dim:
                raise InvalidRegionError("more coefficients than basis states")
            vec = np.zeros(dim, dtype=complex)
            vec[: coeffs.shape[0]] = coeffs
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise InvalidRegionError("zero state vector")
            return QuantumState.pure(vec / norm)
        if kind == "number":
            return QuantumState.pure(number_state(int(data["n"]), dim))
        if kind == "coherent":
            return QuantumState.pure(coherent_state(complex_from_json(data["alpha"]), dim))
        if kind == "squeezed":
            return QuantumState.pure(squeezed_vacuum(float(data["r"]), dim))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidRegionError(f"malformed state descriptor: {exc}") from exc
    raise InvalidRegionError(f"unknown state type {kind!r}")


def matrix_to_json(mat: np.ndarray) -> dict:
    return {
        "shape": list(mat.shape),
        "re": np.round(mat.real, 15).tolist(),
        "im": np.round(mat.imag, 15).tolist(),
    }


def provenance(dim: int | None = None, **extra) -> dict:
    out = {"package": "phaseovm", "version": __version__, "conventions": ledger()}
    if dim is not None:
        out["dim"] = dim
    out.update({k: v for k, v in extra.items() if v is not None})
    return out


# ---------------------------------------------------------------------------
# requests


class BuildRequest(BaseModel):
    region: dict[str, Any]
    dim: int = Field(default=48, ge=8, le=256)
    path: Literal["analytic", "smeared", "oracle"] = "analytic"
    quadrature_points: int = 64
    grid: dict[str, Any] | None = None


class MassRequest(BaseModel):
    region: dict[str, Any]
    state: dict[str, Any]
    dim: int = Field(default=32, ge=8, le=256)
    grid: dict[str, Any] | None = None
    s: float = 0.0
    convention: Literal["bare", "two_over_pi"] = "bare"


class VerifyRequest(BaseModel):
    target: str
    params: dict[str, Any] = Field(default_factory=dict)


class FieldRequest(BaseModel):
    state: dict[str, Any]
    dim: int = Field(default=32, ge=8, le=256)
    grid: dict[str, Any] | None = None
    s: float = 0.0
    convention: Literal["bare", "two_over_pi"] = "bare"


# ---------------------------------------------------------------------------
# responses


class BuildResponse(BaseModel):
    provenance: dict[str, Any]
    region: dict[str, Any]
    path: str
    dim: int
    hermitian: bool
    complex_valued: bool
    symbol_complex: bool
    parity_commutes: bool
    eigenvalues: list[float] | None
    matrix: dict[str, Any]


class MassResponse(BaseModel):
    provenance: dict[str, Any]
    region: dict[str, Any]
    s: float
    convention: str
    operator_trace: float | None
    field_integral: float
    deviation: float | None
    note: str | None = None


class VerifyResponse(BaseModel):
    provenance: dict[str, Any]
    target: str
    passed: bool
    reports: list[dict[str, Any]]


class FieldResponse(BaseModel):
    provenance: dict[str, Any]
    s: float
    convention: str
    q: list[float]
    p: list[float]
    values: list[list[float]]


class ErrorBody(BaseModel):
    kind: str
    detail: str
