"""Phase-averaging map and region operators for 2D phase-space shapes.

The rotated constructions (circle, segment, disc) parameterize displacement
by the coherent amplitude x: the smearing kernel is D(-x) times parity,
whose diagonal gives the Gaussian-Laguerre profile e^{-x^2/2} L_n(x^2).
Arbitrary shapes go through the midpoint-rule oracle, which integrates the
literal point operator D(alpha) Pi D(alpha)^dag over the region with the
phase-space measure d^2 alpha = dq dp / 2.
"""

import io
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    GridResolutionError,
    InvalidQuadratureError,
    InvalidRegionError,
)
from .fock import basic_operators, laguerre, momentum_function
from .linalg import gauss_legendre
from .regions1d import RegionOperator


# ---------------------------------------------------------------------------
# grid


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform cell-centered grid in quadrature coordinates (q, p).

    alpha = (q + ip)/sqrt(2); the phase-space measure of one cell is
    dq dp / 2, exposed as cell_area_alpha.  Counts below 32 per axis do not
    resolve Gaussian-scale features and are rejected.
    """

    qmin: float = -6.0
    qmax: float = 6.0
    pmin: float = -6.0
    pmax: float = 6.0
    nq: int = 200
    npt: int = 200

    def __post_init__(self):
        if not (self.qmin < self.qmax and self.pmin < self.pmax):
            raise InvalidRegionError("grid ranges must be increasing")
        if self.nq < 32 or self.npt < 32:
            raise InvalidRegionError("grid needs at least 32 cells per axis")

    @property
    def dq(self) -> float:
        return (self.qmax - self.qmin) / self.nq

    @property
    def dp(self) -> float:
        return (self.pmax - self.pmin) / self.npt

    @property
    def cell_area(self) -> float:
        """Cell area in quadrature coordinates, dq * dp."""
        return self.dq * self.dp

    @property
    def cell_area_alpha(self) -> float:
        """Phase-space measure of one cell, d^2 alpha = dq dp / 2."""
        return 0.5 * self.cell_area

    def q_centers(self) -> np.ndarray:
        return self.qmin + (np.arange(self.nq) + 0.5) * self.dq

    def p_centers(self) -> np.ndarray:
        return self.pmin + (np.arange(self.npt) + 0.5) * self.dp

    def meshes(self):
        """(Q, P) cell-center meshes of shape (nq, np)."""
        return np.meshgrid(self.q_centers(), self.p_centers(), indexing="ij")

    def alphas(self) -> np.ndarray:
        q, p = self.meshes()
        return (q + 1j * p) / np.sqrt(2.0)

    def to_json(self) -> dict:
        return {
            "qmin": self.qmin,
            "qmax": self.qmax,
            "pmin": self.pmin,
            "pmax": self.pmax,
            "nq": self.nq,
            "np": self.npt,
        }

    @staticmethod
    def from_json(data: dict) -> "PhaseGrid":
        try:
            return PhaseGrid(
                float(data.get("qmin", -6.0)),
                float(data.get("qmax", 6.0)),
                float(data.get("pmin", -6.0)),
                float(data.get("pmax", 6.0)),
                int(data.get("nq", 200)),
                int(data.get("np", 200)),
            )
        except (TypeError, ValueError) as exc:
            raise InvalidRegionError(f"malformed grid: {exc}") from exc


# ---------------------------------------------------------------------------
# region descriptors


@dataclass(frozen=True)
class Circle:
    """Ring swept by rotating the kernel D(-a) Pi; coherent radius a/2."""

    a: float

    def __post_init__(self):
        if self.a < 0:
            raise InvalidRegionError("circle parameter must be nonnegative")


@dataclass(frozen=True)
class Segment:
    """Line segment swept by kernels D(-x), x in [-a/2, a/2]."""

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise InvalidRegionError("segment parameter must be positive")


@dataclass(frozen=True)
class Disc:
    """Rotated segment of width a; covers coherent radii up to a/4."""

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise InvalidRegionError("disc parameter must be positive")


@dataclass(frozen=True)
class Rectangle:
    q0: float
    q1: float
    p0: float
    p1: float

    def __post_init__(self):
        if not (self.q0 < self.q1 and self.p0 < self.p1):
            raise InvalidRegionError("rectangle needs q0 < q1 and p0 < p1")


class Indicator:
    """Grid-sampled boolean membership field with its own grid."""

    def __init__(self, grid: PhaseGrid, cells: np.ndarray):
        cells = np.asarray(cells, dtype=bool)
        if cells.shape != (grid.nq, grid.npt):
            raise InvalidRegionError(
                f"indicator field shape {cells.shape} does not match grid "
                f"({grid.nq}, {grid.npt})"
            )
        cells.flags.writeable = False
        self.grid = grid
        self.cells = cells

    def __eq__(self, other):
        return (
            isinstance(other, Indicator)
            and self.grid == other.grid
            and bool(np.array_equal(self.cells, other.cells))
        )


Region2D = Circle | Segment | Disc | Rectangle | Indicator
AREA_REGIONS = (Disc, Rectangle, Indicator)


def region_mask(region, grid: PhaseGrid) -> np.ndarray:
    """Boolean cell-membership field of an area region on a grid."""
    q, p = grid.meshes()
    if isinstance(region, Rectangle):
        return (
            (q >= region.q0) & (q <= region.q1) & (p >= region.p0) & (p <= region.p1)
        )
    if isinstance(region, Disc):
        # coherent radius a/4: |alpha|^2 = (q^2 + p^2)/2 <= (a/4)^2
        return (q * q + p * p) <= 2.0 * (region.a / 4.0) ** 2
    if isinstance(region, Indicator):
        if region.grid != grid:
            raise InvalidRegionError("indicator field carries its own grid")
        return region.cells
    raise InvalidRegionError(f"{type(region).__name__} has no area mask")


def _check_resolution(region, grid: PhaseGrid):
    if isinstance(region, Rectangle):
        feature = min(region.q1 - region.q0, region.p1 - region.p0)
    elif isinstance(region, Disc):
        feature = 2.0 * np.sqrt(2.0) * region.a / 4.0  # quadrature diameter
    else:
        return
    if feature < 10.0 * max(grid.dq, grid.dp):
        raise GridResolutionError(
            f"grid spacing {max(grid.dq, grid.dp):.3f} too coarse for feature "
            f"size {feature:.3f}; need >= 10 cells across it"
        )


# ---------------------------------------------------------------------------
# phase averaging


def phase_average(x: np.ndarray) -> np.ndarray:
    """Full-turn rotation average: integral over phi of
    e^{-i phi N} X e^{i phi N}.

    The angle integral kills every Fock off-diagonal, leaving 2 pi times
    the diagonal.
    """
    return 2.0 * np.pi * np.diag(np.diag(x))


def phase_average_quadrature(x: np.ndarray, nodes: int = 256) -> np.ndarray:
    """Trapezoid cross-check of phase_average; exact once nodes exceed the
    largest Fock-index difference."""
    dim = x.shape[0]
    n = np.arange(dim)
    out = np.zeros_like(x, dtype=complex)
    for k in range(nodes):
        phase = np.exp(-1j * (2 * np.pi * k / nodes) * n)
        out += (phase[:, None] * x * phase.conj()[None, :])
    return out * (2 * np.pi / nodes)


# ---------------------------------------------------------------------------
# analytic constructions


def displaced_parity_kernel(x: float, dim: int) -> np.ndarray:
    """The rotated constructions' smearing kernel at amplitude x: the
    momentum phase whose diagonal is e^{-x^2/2} L_n(x^2), i.e. D(-x)."""
    ops = basic_operators(dim)
    return expm(x * ops.annihilation - x * ops.creation)


def circle_operator(a: float, dim: int) -> RegionOperator:
    """Diagonal circle operator: entries 2 pi (-1)^n e^{-a^2/2} L_n(a^2).

    Equals the phase average of parity times the displaced kernel D(-a).
    """
    region = Circle(a)
    x = a * a
    entries = np.array([np.exp(-0.5 * x) * laguerre(n, x) for n in range(dim)])
    signs = (-1.0) ** np.arange(dim)
    op = np.diag((2.0 * np.pi * signs * entries).astype(complex))
    return RegionOperator(op, region, "analytic")


def segment_operator(a: float, dim: int) -> RegionOperator:
    """Segment operator: scalar kernel sin(a u)/u on the paper-normalized
    momentum u = p/sqrt(2), times parity; value a at u = 0.

    Realizes the integral of D(-x) over x in [-a/2, a/2].
    """
    region = Segment(a)

    def kernel(p):
        u = np.asarray(p, dtype=float) / np.sqrt(2.0)
        return a * np.sinc(a * u / np.pi)

    op = momentum_function(dim, kernel) @ basic_operators(dim).parity
    return RegionOperator(op, region, "analytic")


def disc_operator(a: float, dim: int, quadrature_points: int = 64) -> RegionOperator:
    """Disc operator: diagonal entries 2 pi (-1)^n times the Gauss-Legendre
    integral of e^{-x^2/2} L_n(x^2) over x in [-a/2, a/2].

    Equals the phase average of the segment operator of the same width.
    """
    if quadrature_points < 16:
        raise InvalidQuadratureError("disc quadrature needs at least 16 points")
    region = Disc(a)
    nodes, weights = gauss_legendre(-a / 2.0, a / 2.0, quadrature_points)
    x = nodes * nodes
    entries = np.array(
        [np.sum(weights * np.exp(-0.5 * x) * laguerre(n, x)) for n in range(dim)]
    )
    signs = (-1.0) ** np.arange(dim)
    op = np.diag((2.0 * np.pi * signs * entries).astype(complex))
    return RegionOperator(op, region, "analytic")


# ---------------------------------------------------------------------------
# ground-truth oracle


def point_operator(alpha: complex, dim: int) -> np.ndarray:
    """Literal point operator D(alpha) Pi D(alpha)^dag via the matrix
    exponential; deliberately the dumbest faithful build."""
    ops = basic_operators(dim)
    d = expm(alpha * ops.creation - np.conj(alpha) * ops.annihilation)
    return d @ ops.parity @ d.conj().T


def region_operator_oracle(
    region: Region2D,
    dim: int,
    grid: PhaseGrid | None = None,
    curve_nodes: int = 512,
) -> RegionOperator:
    """Riemann/midpoint integral of point operators over the region.

    Area regions sum D(alpha) Pi D(alpha)^dag * cell_area_alpha over cell
    centers inside the region; curve regions (circle, segment) integrate
    their one-dimensional parameterization.  This path shares no code with
    the analytic constructors beyond fock-core primitives.
    """
    if isinstance(region, Circle):
        radius = region.a / 2.0
        out = np.zeros((dim, dim), dtype=complex)
        for k in range(curve_nodes):
            out += point_operator(radius * np.exp(2j * np.pi * k / curve_nodes), dim)
        return RegionOperator(out * (2 * np.pi / curve_nodes), region, "oracle")
    if isinstance(region, Segment):
        nodes, weights = gauss_legendre(-region.a / 2.0, region.a / 2.0, min(curve_nodes, 128))
        out = np.zeros((dim, dim), dtype=complex)
        for x, w in zip(nodes, weights):
            out += w * point_operator(x / 2.0, dim)
        return RegionOperator(out, region, "oracle")
    if isinstance(region, Indicator):
        grid = region.grid
    if grid is None:
        raise InvalidRegionError("area regions need a grid")
    _check_resolution(region, grid)
    mask = region_mask(region, grid)
    alphas = grid.alphas()[mask]
    out = np.zeros((dim, dim), dtype=complex)
    for alpha in alphas:
        out += point_operator(alpha, dim)
    return RegionOperator(out * grid.cell_area_alpha, region, "oracle")


def reliable_disk(dim: int, grid: PhaseGrid) -> Indicator:
    """Indicator of the disk q^2 + p^2 <= dim, the finite surrogate of the
    whole plane.

    Its rim has coherent amplitude sqrt(dim/2), i.e. mean excitation half
    the cutoff; beyond that the truncated point operator no longer tracks
    the true one, so larger disks integrate truncation noise.
    """
    q, p = grid.meshes()
    cells = (q * q + p * p) <= float(dim)
    return Indicator(grid, cells)


# ---------------------------------------------------------------------------
# canonical JSON and the portable indicator file


def region2d_to_json(region: Region2D) -> dict:
    if isinstance(region, Circle):
        return {"type": "circle", "a": region.a}
    if isinstance(region, Segment):
        return {"type": "segment", "a": region.a}
    if isinstance(region, Disc):
        return {"type": "disc", "a": region.a}
    if isinstance(region, Rectangle):
        return {
            "type": "rectangle",
            "q0": region.q0,
            "q1": region.q1,
            "p0": region.p0,
            "p1": region.p1,
        }
    if isinstance(region, Indicator):
        return {
            "type": "indicator",
            "grid": region.grid.to_json(),
            "cells": ["".join("1" if c else "0" for c in row) for row in region.cells],
        }
    raise InvalidRegionError(f"unknown 2D region {type(region).__name__}")


def region2d_from_json(data: dict) -> Region2D:
    try:
        kind = data["type"]
        if kind == "circle":
            return Circle(float(data["a"]))
        if kind == "segment":
            return Segment(float(data["a"]))
        if kind == "disc":
            return Disc(float(data["a"]))
        if kind == "rectangle":
            return Rectangle(
                float(data["q0"]), float(data["q1"]), float(data["p0"]), float(data["p1"])
            )
        if kind == "indicator":
            grid = PhaseGrid.from_json(data["grid"])
            cells = np.array([[ch == "1" for ch in row] for row in data["cells"]])
            return Indicator(grid, cells)
        if kind == "reliable_disk":
            grid = PhaseGrid.from_json(data.get("grid", {}))
            return reliable_disk(int(data["dim"]), grid)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidRegionError(f"malformed 2D region descriptor: {exc}") from exc
    raise InvalidRegionError(f"unknown 2D region type {data.get('type')!r}")


def write_indicator(path, indicator: Indicator) -> None:
    """Portable grid file: one ASCII header line with ranges and counts,
    then row-major 0/1 bytes (q-major rows)."""
    g = indicator.grid
    header = f"{g.qmin} {g.qmax} {g.pmin} {g.pmax} {g.nq} {g.npt}\n".encode("ascii")
    body = np.where(indicator.cells, 1, 0).astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)


def read_indicator(path) -> Indicator:
    with open(path, "rb") as fh:
        raw = fh.read()
    buf = io.BytesIO(raw)
    header = buf.readline().decode("ascii").split()
    if len(header) != 6:
        raise InvalidRegionError("indicator header needs 6 fields")
    qmin, qmax, pmin, pmax = (float(x) for x in header[:4])
    nq, npts = int(header[4]), int(header[5])
    body = np.frombuffer(buf.read(), dtype=np.uint8)
    if body.size != nq * npts:
        raise InvalidRegionError(
            f"indicator body has {body.size} cells, expected {nq * npts}"
        )
    grid = PhaseGrid(qmin, qmax, pmin, pmax, nq, npts)
    return Indicator(grid, body.reshape(nq, npts) != 0)
