"""Truncated Fock-space operators and the special functions built on them.

Everything here is a pure function of immutable inputs; cached arrays are
returned read-only so values can be shared across threads.
"""

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .conventions import reliable_momentum
from .errors import InvalidDimensionError, ReliableBandWarning, TruncationError
from .linalg import central_block, max_abs


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class BasicOperators:
    """Ladder, quadrature, number and parity matrices at one truncation."""

    dim: int
    number: np.ndarray
    annihilation: np.ndarray
    creation: np.ndarray
    position: np.ndarray
    momentum: np.ndarray
    parity: np.ndarray


@lru_cache(maxsize=64)
def basic_operators(dim: int) -> BasicOperators:
    """Build N, a, a†, Q, P and the parity matrix for a given truncation.

    a|n> = sqrt(n)|n-1>; Q = (a + a†)/sqrt(2); P = (a - a†)/(i sqrt(2));
    parity is diagonal with entries (-1)^n.  [Q, P] = i holds exactly except
    on the last row/column.
    """
    if dim < 2:
        raise InvalidDimensionError(f"truncation dimension must be >= 2, got {dim}")
    n = np.arange(dim)
    number = np.diag(n.astype(complex))
    lower = np.diag(np.sqrt(n[1:]).astype(complex), k=1)
    raise_ = lower.conj().T
    position = (lower + raise_) / np.sqrt(2.0)
    momentum = (lower - raise_) / (1j * np.sqrt(2.0))
    parity = np.diag(((-1.0) ** n).astype(complex))
    for m in (number, lower, raise_, position, momentum, parity):
        _readonly(m)
    return BasicOperators(dim, number, lower, raise_, position, momentum, parity)


@lru_cache(maxsize=64)
def momentum_frame(dim: int):
    """Eigenvalues and eigenvectors of the truncated momentum operator."""
    vals, vecs = np.linalg.eigh(basic_operators(dim).momentum)
    return _readonly(vals), _readonly(vecs)


@lru_cache(maxsize=64)
def position_frame(dim: int):
    vals, vecs = np.linalg.eigh(basic_operators(dim).position)
    return _readonly(vals), _readonly(vecs)


def momentum_function(dim: int, func) -> np.ndarray:
    """Scalar function of the truncated momentum, via its eigenframe."""
    vals, vecs = momentum_frame(dim)
    fvals = np.asarray(func(vals), dtype=complex)
    return (vecs * fvals) @ vecs.conj().T


def position_function(dim: int, func) -> np.ndarray:
    vals, vecs = position_frame(dim)
    fvals = np.asarray(func(vals), dtype=complex)
    return (vecs * fvals) @ vecs.conj().T


def laguerre(n: int, x: float):
    """Laguerre polynomial L_n(x) by the stable upward recurrence."""
    if n < 0:
        raise ValueError("Laguerre order must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.shape else float(prev)
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if cur.shape else float(cur)


def hermite_functions(x, count: int) -> np.ndarray:
    """Orthonormal oscillator eigenfunctions psi_0..psi_{count-1} at x.

    Three-term recurrence; no factorials, stable far past n = 85.
    Returns shape (count,) + shape(x).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((count,) + x.shape, dtype=float)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if count > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, count - 1):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def momentum_ket(p: float, dim: int) -> np.ndarray:
    """Truncated momentum eigenvector surrogate, components i^n psi_n(p).

    Delta-normalized continuum kets restricted to the basis: the exact
    n-th component of |p>.  Satisfies (P - p)v = 0 on every row except the
    last, so residuals are judged on the central block.
    """
    if abs(p) > reliable_momentum(dim):
        warnings.warn(
            f"momentum {p} outside the reliable band |p| <= sqrt(2*{dim})",
            ReliableBandWarning,
            stacklevel=2,
        )
    psi = hermite_functions(float(p), dim)
    return (1j ** np.arange(dim)) * psi


def _displacement_expm(alpha: complex, dim: int) -> np.ndarray:
    ops = basic_operators(dim)
    return expm(alpha * ops.creation - np.conj(alpha) * ops.annihilation)


def displacement_closed_form(alpha: complex, dim: int) -> np.ndarray:
    """D(alpha) from the associated-Laguerre matrix elements."""
    x = abs(alpha) ** 2
    gauss = np.exp(-0.5 * x)
    mat = np.zeros((dim, dim), dtype=complex)
    for d in range(dim):
        n = np.arange(dim - d)
        ratio = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + d + 1)))
        lag = eval_genlaguerre(n, d, x)
        upper = gauss * ratio * lag  # row n, column n + d
        mat[n, n + d] = upper * (-np.conj(alpha)) ** d
        if d:
            mat[n + d, n] = upper * alpha**d
    return mat


def displacement_pair_values(m: int, n: int, alphas: np.ndarray) -> np.ndarray:
    """<m|D(alpha)|n> vectorized over an array of displacement amplitudes."""
    alphas = np.asarray(alphas, dtype=complex)
    x = np.abs(alphas) ** 2
    gauss = np.exp(-0.5 * x)
    if m >= n:
        ratio = np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
        return gauss * ratio * alphas ** (m - n) * eval_genlaguerre(n, m - n, x)
    ratio = np.exp(0.5 * (gammaln(m + 1) - gammaln(n + 1)))
    return gauss * ratio * (-np.conj(alphas)) ** (n - m) * eval_genlaguerre(m, n - m, x)


def displacement(alpha: complex, dim: int, check_tol: float = 1e-9) -> np.ndarray:
    """Displacement operator D(alpha), computed two independent ways.

    The matrix exponential and the closed-form element build must agree
    within check_tol on the central half-dimension block; if the truncation
    corrupts even the center, the dimension is too small for this alpha.
    """
    if not np.isfinite(alpha):
        raise ValueError("displacement amplitude must be finite")
    via_expm = _displacement_expm(alpha, dim)
    via_elements = displacement_closed_form(alpha, dim)
    gap = max_abs(central_block(via_expm) - central_block(via_elements))
    if gap > check_tol:
        raise TruncationError(
            f"displacement paths disagree by {gap:.3e} at dim={dim}, "
            f"alpha={alpha}; increase the truncation"
        )
    return via_expm


def squeeze(zeta: complex, dim: int) -> np.ndarray:
    """Squeezing operator exp(zeta a†² - conj(zeta) a²).

    For real zeta = r/2 this scales the quadratures: S† Q S = Q e^r and
    S† P S = P e^{-r}, up to truncation on the central block.
    """
    if not np.isfinite(zeta):
        raise ValueError("squeeze parameter must be finite")
    ops = basic_operators(dim)
    a2 = ops.annihilation @ ops.annihilation
    return expm(zeta * a2.conj().T - np.conj(zeta) * a2)


def rotation(theta: float, dim: int) -> np.ndarray:
    """Phase rotation exp(i theta N); exactly unitary diagonal phases."""
    return np.diag(np.exp(1j * theta * np.arange(dim)))


def number_state(n: int, dim: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise InvalidDimensionError(f"Fock level {n} outside truncation {dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return vec


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Normalized truncated coherent state D(alpha)|0>."""
    vec = displacement(alpha, dim)[:, 0].copy()
    return vec / np.linalg.norm(vec)


def squeezed_vacuum(r: float, dim: int) -> np.ndarray:
    """Squeezed vacuum with quadrature scaling e^{±r} (zeta = r/2)."""
    vec = squeeze(r / 2.0, dim)[:, 0].copy()
    return vec / np.linalg.norm(vec)


class QuantumState:
    """Pure state (coefficient vector) or density matrix at one truncation."""

    def __init__(self, vector: np.ndarray | None = None, rho: np.ndarray | None = None):
        if (vector is None) == (rho is None):
            raise ValueError("provide exactly one of vector, rho")
        if vector is not None:
            vector = np.asarray(vector, dtype=complex)
            norm = np.linalg.norm(vector)
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"pure state norm {norm} differs from 1")
            self.vector = vector
            self.dim = vector.shape[0]
        else:
            rho = np.asarray(rho, dtype=complex)
            if max_abs(rho - rho.conj().T) > 1e-10:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(rho).real - 1.0) > 1e-10:
                raise ValueError("density matrix trace differs from 1")
            if np.linalg.eigvalsh(rho).min() < -1e-10:
                raise ValueError("density matrix has a negative eigenvalue")
            self.vector = None
            self.rho = rho
            self.dim = rho.shape[0]

    @classmethod
    def pure(cls, vector: np.ndarray) -> "QuantumState":
        return cls(vector=vector)

    @classmethod
    def mixed(cls, rho: np.ndarray) -> "QuantumState":
        return cls(rho=rho)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.vector, self.vector.conj())
        return self.rho

    def parity_eigenvalue(self, tol: float = 1e-10) -> int | None:
        """+1 or -1 if the state is a pure parity eigenstate, else None."""
        if not self.is_pure:
            return None
        flipped = (-1.0) ** np.arange(self.dim) * self.vector
        if np.linalg.norm(flipped - self.vector) <= tol:
            return 1
        if np.linalg.norm(flipped + self.vector) <= tol:
            return -1
        return None
