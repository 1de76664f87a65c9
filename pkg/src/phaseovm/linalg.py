"""Dense linear-algebra helpers shared across modules.

All operators are dense complex square ndarrays indexed by Fock occupation
number starting at 0.  Comparisons between analytic and numeric paths are
always evaluated on the central block (low-excitation rows/columns), since
ladder truncation corrupts the high-n entries.
"""

import numpy as np


def central_block(mat: np.ndarray, size: int | None = None) -> np.ndarray:
    """Top-left block of a square matrix; defaults to half the dimension."""
    n = mat.shape[0]
    if size is None:
        size = n // 2
    size = min(size, n)
    return mat[:size, :size]


def max_abs(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def hermiticity_defect(mat: np.ndarray) -> float:
    """max |M - M^dag|."""
    return max_abs(mat - mat.conj().T)


def unitarity_defect(mat: np.ndarray) -> float:
    """max |M^dag M - 1|."""
    eye = np.eye(mat.shape[0])
    return max_abs(mat.conj().T @ mat - eye)


def is_hermitian(mat: np.ndarray, tol: float = 1e-10) -> bool:
    return hermiticity_defect(mat) <= tol


def commutator_defect(a: np.ndarray, b: np.ndarray) -> float:
    return max_abs(a @ b - b @ a)


def frobenius(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat))


def operator_function(hermitian: np.ndarray, func) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix via eigendecomposition."""
    vals, vecs = np.linalg.eigh(hermitian)
    fvals = np.asarray(func(vals), dtype=complex)
    return (vecs * fvals) @ vecs.conj().T


def gauss_legendre(lo: float, hi: float, points: int):
    """Nodes and weights of the Gauss-Legendre rule on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(points)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid + half * x, half * w


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (normalized Ginibre square)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)
