"""Kraus maps, their duals, and the two-mode parity-sum construction.

A positive trace-increasing map is given by a plain generator list; no
normalization of sum A_i† A_i is assumed.  The two-mode machinery builds
the mode-swap unitary from the beam-splitter generator, the block dilation
of the dual map, and the three computation routes for displaced parity-sum
expectations.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatchError, InvalidDimensionError
from .fock import _displacement_expm, basic_operators
from .linalg import max_abs


@dataclass(frozen=True)
class KrausMap:
    """Finite generator list A_i defining X -> sum_i A_i X A_i†."""

    generators: tuple
    label: str = ""

    def __post_init__(self):
        if not self.generators:
            raise DimensionMismatchError("a Kraus map needs at least one generator")
        dims = {g.shape for g in self.generators}
        if len(dims) != 1 or any(s[0] != s[1] for s in dims):
            raise DimensionMismatchError("generators must be square and uniform")

    @property
    def dim(self) -> int:
        return self.generators[0].shape[0]


def apply_map(kraus: KrausMap, x: np.ndarray) -> np.ndarray:
    """sum_i A_i X A_i†."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (kraus.dim, kraus.dim):
        raise DimensionMismatchError(
            f"operand shape {x.shape} does not match generator dim {kraus.dim}"
        )
    out = np.zeros_like(x)
    for g in kraus.generators:
        out += g @ x @ g.conj().T
    return out


def dual_map(kraus: KrausMap) -> KrausMap:
    """Adjoint map rho -> sum_i A_i† rho A_i (generators conjugated)."""
    return KrausMap(tuple(g.conj().T for g in kraus.generators), f"dual({kraus.label})")


def trace_increase_defect(kraus: KrausMap) -> float:
    """Most negative eigenvalue of sum A_i†A_i - 1 (>= 0 means increasing)."""
    total = sum(g.conj().T @ g for g in kraus.generators)
    return float(np.linalg.eigvalsh(total - np.eye(kraus.dim)).min())


def phase_average_map(dim: int, nodes: int = 256) -> KrausMap:
    """Discretized full-turn phase averaging: generators
    sqrt(2 pi / nodes) e^{-i phi_k N}."""
    n = np.arange(dim)
    weight = np.sqrt(2 * np.pi / nodes)
    generators = tuple(
        weight * np.diag(np.exp(-1j * (2 * np.pi * k / nodes) * n))
        for k in range(nodes)
    )
    return KrausMap(generators, "phase averaging")


# ---------------------------------------------------------------------------
# two-mode machinery


@dataclass(frozen=True)
class TwoModeSystem:
    """Composite operators on two modes, mode-1-major index |n1>|n2>."""

    dim: int
    lower1: np.ndarray
    lower2: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    exchange_generator: np.ndarray


@lru_cache(maxsize=16)
def two_mode_system(dim: int) -> TwoModeSystem:
    """Build a1, a2, the mode parities, and J = (a1†a2 - a2†a1)/(2i)."""
    if dim < 2:
        raise InvalidDimensionError("two-mode system needs dim >= 2 per mode")
    ops = basic_operators(dim)
    eye = np.eye(dim, dtype=complex)
    a1 = np.kron(ops.annihilation, eye)
    a2 = np.kron(eye, ops.annihilation)
    parity1 = np.kron(ops.parity, eye)
    parity2 = np.kron(eye, ops.parity)
    j = (a1.conj().T @ a2 - a2.conj().T @ a1) / 2j
    for m in (a1, a2, parity1, parity2, j):
        m.flags.writeable = False
    return TwoModeSystem(dim, a1, a2, parity1, parity2, j)


@lru_cache(maxsize=16)
def mode_swap_unitary(dim: int) -> np.ndarray:
    """V = exp(-i pi J / 2); V^2 permutes the mode parities on the sector
    the truncation protects (total excitation below the cutoff)."""
    if dim < 4:
        raise InvalidDimensionError("mode swap needs dim >= 4 per mode")
    system = two_mode_system(dim)
    v = expm(-1j * np.pi / 2 * system.exchange_generator)
    v.flags.writeable = False
    return v


def swap_defect(dim: int, max_total_excitation: int | None = None) -> float:
    """max |Pi2 - V^2 Pi1 V†2| restricted to the protected sector."""
    if max_total_excitation is None:
        max_total_excitation = dim // 2
    system = two_mode_system(dim)
    v2 = np.linalg.matrix_power(mode_swap_unitary(dim), 2)
    swapped = v2 @ system.parity1 @ v2.conj().T
    n1, n2 = np.divmod(np.arange(dim * dim), dim)
    keep = (n1 + n2) <= max_total_excitation
    diff = (system.parity2 - swapped)[np.ix_(keep, keep)]
    return max_abs(diff)


def parity_sum_map(dim: int) -> KrausMap:
    """The two-generator map with Kraus operators (1, V^2): its image of the
    mode-1 parity is the parity sum."""
    v2 = np.linalg.matrix_power(mode_swap_unitary(dim), 2)
    eye = np.eye(dim * dim, dtype=complex)
    return KrausMap((eye, v2), "parity sum")


# ---------------------------------------------------------------------------
# unitary dilation of the dual map


def dilation_matrix(dim: int) -> np.ndarray:
    """Block matrix [[1, -V^2], [V†2, 1]] on ancilla (x) mode1 (x) mode2.

    Satisfies W†W = 2*1 exactly, so W/sqrt(2) is the properly unitary
    dilation; the partial-trace identity below holds for W as written.
    """
    v2 = np.linalg.matrix_power(mode_swap_unitary(dim), 2)
    eye = np.eye(dim * dim, dtype=complex)
    return np.block([[eye, -v2], [v2.conj().T, eye]])


def ancilla_trace(mat: np.ndarray, system_dim: int) -> np.ndarray:
    """Partial trace over the leftmost two-level ancilla slot."""
    blocks = mat.reshape(2, system_dim, 2, system_dim)
    return blocks[0, :, 0, :] + blocks[1, :, 1, :]


def apply_dilation(rho: np.ndarray, normalized: bool = False) -> np.ndarray:
    """Tr_A W† (|0><0| (x) rho) W, which equals rho + V†2 rho V^2.

    With normalized=True the unitary W/sqrt(2) is used instead, yielding
    half the dual-map image.
    """
    d2 = rho.shape[0]
    dim = int(round(np.sqrt(d2)))
    if dim * dim != d2:
        raise DimensionMismatchError("dilation expects a two-mode density matrix")
    w = dilation_matrix(dim)
    if normalized:
        w = w / np.sqrt(2.0)
    lifted = np.zeros((2 * d2, 2 * d2), dtype=complex)
    lifted[:d2, :d2] = rho
    return ancilla_trace(w.conj().T @ lifted @ w, d2)


def random_protected_state(dim: int, rng: np.random.Generator, max_total: int = 2) -> np.ndarray:
    """Random two-mode density matrix supported on the truncation-protected
    sector (total excitation <= max_total).

    Route identities that go through the mode swap hold exactly only on
    complete excitation sectors, so cross-route comparisons draw from here.
    """
    from .linalg import random_density_matrix

    n1, n2 = np.divmod(np.arange(dim * dim), dim)
    keep = np.where((n1 + n2) <= max_total)[0]
    small = random_density_matrix(len(keep), rng)
    rho = np.zeros((dim * dim, dim * dim), dtype=complex)
    rho[np.ix_(keep, keep)] = small
    return rho


# ---------------------------------------------------------------------------
# displaced parity-sum expectation, three routes


def displaced_parity(alpha: complex, dim: int) -> np.ndarray:
    """Point operator D(alpha) Pi D(alpha)† on one mode.

    Uses the plain matrix-exponential displacement: the expectation routes
    need a displacement consistent across routes, and the dual-path
    tolerance of the checked builder would reject the small per-mode
    truncations these workspaces use.
    """
    d = _displacement_expm(alpha, dim)
    return d @ basic_operators(dim).parity @ d.conj().T


def parity_sum_expectation(rho: np.ndarray, alpha: complex, beta: complex, dim: int) -> dict:
    """<Pi1_alpha + Pi2_beta> on a two-mode state, by three routes:

    direct assembly of the displaced parities; the Kraus image of the
    mode-1 parity conjugated by D_alpha (x) D_beta; and the dual map moved
    onto the state.  All three must agree within truncation roundoff.
    """
    if rho.shape != (dim * dim, dim * dim):
        raise DimensionMismatchError("state must live on the two-mode space")
    system = two_mode_system(dim)
    d_pair = np.kron(_displacement_expm(alpha, dim), _displacement_expm(beta, dim))

    pi1_alpha = np.kron(displaced_parity(alpha, dim), np.eye(dim))
    pi2_beta = np.kron(np.eye(dim), displaced_parity(beta, dim))
    direct = np.trace(rho @ (pi1_alpha + pi2_beta))

    kraus = parity_sum_map(dim)
    displaced_sum = d_pair @ apply_map(kraus, system.parity1) @ d_pair.conj().T
    via_map = np.trace(rho @ displaced_sum)

    pulled_back = d_pair.conj().T @ rho @ d_pair
    via_dual = np.trace(apply_map(dual_map(kraus), pulled_back) @ system.parity1)

    values = {"direct": direct, "map": via_map, "dual": via_dual}
    spread = max(abs(a - b) for a in values.values() for b in values.values())
    return {
        "routes": {k: float(v.real) for k, v in values.items()},
        "max_imag": max(abs(v.imag) for v in values.values()),
        "route_spread": float(spread),
        "value": float(direct.real),
    }
