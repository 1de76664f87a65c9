"""Ordering-parametrized quasi-probability functions and region masses.

The family F(alpha; s) interpolates Wigner (s = 0) and Husimi Q (s = -1).
Its point kernel splits into a diagonal ratio operator with entries
((s+1)/(s-1))^n, which hits the parity matrix exactly at s = 0 and the
vacuum projector exactly at s = -1, and a scalar weight 1/(1-s) carried by
the kernel so that the series values match the weighted entries
(1+s)^n/(1-s)^{n+1} (-1)^n.

Two field conventions coexist and every result is tagged with one:
"bare" is Tr(rho D kernel D^dag) (the parity expectation at s = 0) and
"two_over_pi" is 2/pi times that.  Masses integrate fields against
d^2 alpha = dq dp / 2.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, SingularParameterError
from .fock import QuantumState, displacement, displacement_pair_values
from .regions2d import PhaseGrid, region_mask

CONVENTIONS = ("bare", "two_over_pi")

_RASTER_MAGIC = b"QFR1"


@dataclass(frozen=True)
class SParity:
    """Point kernel data at ordering parameter s.

    op is the diagonal ratio operator ((s+1)/(s-1))^N; weight is the scalar
    1/(1-s).  kernel() multiplies them back together.
    """

    s: float
    op: np.ndarray
    weight: float

    def kernel(self) -> np.ndarray:
        return self.weight * self.op


def parity_kernel(s: float, dim: int) -> SParity:
    """Ratio-form parity kernel; rejects s at or above 1, where the
    normally-ordered kernel stops being an operator."""
    if s >= 1.0 - 1e-9:
        raise SingularParameterError(
            "s = 1 has no operator kernel here; only the label is documented"
        )
    ratio = (s + 1.0) / (s - 1.0)
    entries = ratio ** np.arange(dim)
    op = np.diag(entries.astype(complex))
    return SParity(s, op, 1.0 / (1.0 - s))


def displaced_kernel(alpha: complex, s: float, dim: int) -> np.ndarray:
    """Building block D(alpha) kernel(s) D(alpha)^dag for geometric maps."""
    d = displacement(alpha, dim)
    return d @ parity_kernel(s, dim).kernel() @ d.conj().T


def _real_guard(values: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > tol:
        raise NumericalError(f"imaginary residue {worst:.3e} exceeds {tol}")
    return values.real


def quasiprob_value(state: QuantumState, alpha: complex, s: float = 0.0) -> float:
    """F(alpha; s) = (2/pi) Tr(rho D(alpha) kernel(s) D(alpha)^dag).

    Computed through the displaced kernel and through the power series over
    displaced matrix elements; the two must agree within 1e-8 or the
    truncation is too small for this point.
    """
    dim = state.dim
    rho = state.density()
    d = displacement(alpha, dim)

    kernel = displaced_kernel(alpha, s, dim)
    via_kernel = (2.0 / np.pi) * np.trace(rho @ kernel)

    pulled = d.conj().T @ rho @ d
    k = np.arange(dim)
    weights = (1.0 + s) ** k / (1.0 - s) ** (k + 1) * (-1.0) ** k
    via_series = (2.0 / np.pi) * np.sum(weights * np.diag(pulled))

    if abs(via_kernel - via_series) > 1e-8:
        raise NumericalError(
            f"kernel and series paths disagree: {via_kernel} vs {via_series}"
        )
    value = _real_guard(np.array([via_kernel]))
    return float(value[0])


# ---------------------------------------------------------------------------
# fields on a grid


@dataclass(frozen=True)
class QuasiField:
    grid: PhaseGrid
    values: np.ndarray  # (nq, np) real
    s: float
    convention: str
    state_label: str = ""


def _pair_iter(rho: np.ndarray, cutoff: float = 1e-18):
    for m in range(rho.shape[0]):
        for n in range(rho.shape[0]):
            if abs(rho[n, m]) > cutoff:
                yield m, n, rho[n, m]


def _field_values_wigner(rho: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Bare Wigner values Tr(rho D(2 alpha) Pi), accumulated pair by pair
    over closed-form displacement elements."""
    dim = rho.shape[0]
    flat = alphas.ravel()
    acc = np.zeros(flat.shape, dtype=complex)
    signs = (-1.0) ** np.arange(dim)
    for m, n, coeff in _pair_iter(rho):
        acc += coeff * signs[n] * displacement_pair_values(m, n, 2.0 * flat)
    return acc.reshape(alphas.shape)


def _field_values_husimi(rho: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Bare s = -1 values (1/2) <alpha|rho|alpha> via coherent components."""
    dim = rho.shape[0]
    flat = alphas.ravel()
    comps = np.array([displacement_pair_values(n, 0, flat) for n in range(dim)])
    acc = np.einsum("mk,mn,nk->k", comps.conj(), rho, comps)
    return 0.5 * acc.reshape(alphas.shape)


def _field_values_generic(rho: np.ndarray, alphas: np.ndarray, s: float) -> np.ndarray:
    from .fock import displacement_closed_form

    dim = rho.shape[0]
    kernel = parity_kernel(s, dim)
    diag = kernel.weight * np.diag(kernel.op)
    flat = alphas.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i, alpha in enumerate(flat):
        d = displacement_closed_form(alpha, dim)
        pulled = d.conj().T @ rho @ d
        out[i] = np.sum(diag * np.diag(pulled))
    return out.reshape(alphas.shape)


def field_values(state: QuantumState, alphas: np.ndarray, s: float = 0.0, convention: str = "bare") -> np.ndarray:
    """Quasi-probability values at an array of phase points."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if s >= 1.0 - 1e-9:
        raise SingularParameterError("no operator kernel at s = 1")
    rho = state.density()
    if s == 0.0:
        raw = _field_values_wigner(rho, np.asarray(alphas, dtype=complex))
    elif s == -1.0:
        raw = _field_values_husimi(rho, np.asarray(alphas, dtype=complex))
    else:
        raw = _field_values_generic(rho, np.asarray(alphas, dtype=complex), s)
    values = _real_guard(raw)
    if convention == "two_over_pi":
        values = (2.0 / np.pi) * values
    return values


def quasiprob_field(
    state: QuantumState,
    grid: PhaseGrid,
    s: float = 0.0,
    convention: str = "bare",
    state_label: str = "",
) -> QuasiField:
    values = field_values(state, grid.alphas(), s, convention)
    return QuasiField(grid, values, s, convention, state_label)


def quasiprob_mass(
    state: QuantumState,
    region,
    grid: PhaseGrid,
    s: float = 0.0,
    convention: str = "bare",
) -> float:
    """Grid integral of the s-field over an area region, measure
    d^2 alpha = dq dp / 2; empty regions give exactly zero."""
    mask = region_mask(region, grid)
    if not mask.any():
        return 0.0
    alphas = grid.alphas()[mask]
    values = field_values(state, alphas, s, convention)
    return float(values.sum() * grid.cell_area_alpha)


# ---------------------------------------------------------------------------
# exports: CSV and compact binary raster


def write_field_csv(path, field: QuasiField) -> None:
    """Rows q,p,value at cell centers, with a provenance comment line."""
    q = field.grid.q_centers()
    p = field.grid.p_centers()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# s={field.s} convention={field.convention} state={field.state_label}\n")
        fh.write("q,p,value\n")
        for i, qi in enumerate(q):
            for j, pj in enumerate(p):
                fh.write(f"{qi:.12g},{pj:.12g},{field.values[i, j]:.15g}\n")


def write_field_raster(path, field: QuasiField) -> None:
    """Compact binary raster: magic, counts, ranges, s, convention flag,
    then row-major (q-major) float64 values."""
    g = field.grid
    header = _RASTER_MAGIC + struct.pack(
        "<II5dB",
        g.nq,
        g.npt,
        g.qmin,
        g.qmax,
        g.pmin,
        g.pmax,
        field.s,
        CONVENTIONS.index(field.convention),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(field.values, dtype=np.float64).tobytes())


def read_field_raster(path) -> QuasiField:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != _RASTER_MAGIC:
        raise ValueError("not a quasi-probability raster file")
    head_size = 4 + struct.calcsize("<II5dB")
    nq, npts, qmin, qmax, pmin, pmax, s, conv = struct.unpack("<II5dB", raw[4:head_size])
    values = np.frombuffer(raw[head_size:], dtype=np.float64).reshape(nq, npts)
    grid = PhaseGrid(qmin, qmax, pmin, pmax, nq, npts)
    return QuasiField(grid, values, s, CONVENTIONS[conv], "")
