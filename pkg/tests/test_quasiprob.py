import numpy as np
import pytest

from phaseovm.errors import SingularParameterError
from phaseovm.fock import (
    QuantumState,
    coherent_state,
    number_state,
    squeezed_vacuum,
)
from phaseovm.linalg import max_abs
from phaseovm.quasiprob import (
    field_values,
    parity_kernel,
    quasiprob_field,
    quasiprob_mass,
    quasiprob_value,
    read_field_raster,
    write_field_csv,
    write_field_raster,
)
from phaseovm.regions2d import Indicator, PhaseGrid, Rectangle, reliable_disk


def vacuum(dim=32):
    return QuantumState.pure(number_state(0, dim))


# ---------------------------------------------------------------------------
# ordering kernels


def test_kernel_s0_is_parity_exactly():
    sp = parity_kernel(0.0, 16)
    assert np.array_equal(np.diag(sp.op).real, (-1.0) ** np.arange(16))
    assert sp.weight == 1.0


def test_kernel_sm1_is_vacuum_projector_exactly():
    sp = parity_kernel(-1.0, 16)
    expected = np.zeros(16)
    expected[0] = 1.0
    assert np.array_equal(np.diag(sp.op).real, expected)


def test_weighted_kernel_entries():
    # weighted entries follow (1+s)^n / (1-s)^(n+1) (-1)^n
    sp = parity_kernel(-0.5, 8)
    kernel = sp.kernel()
    assert kernel[0, 0].real == pytest.approx(1.0 / 1.5)
    assert kernel[1, 1].real == pytest.approx(-2.0 / 9.0)
    for n in range(8):
        s = -0.5
        expected = (1 + s) ** n / (1 - s) ** (n + 1) * (-1) ** n
        assert kernel[n, n].real == pytest.approx(expected)


@pytest.mark.parametrize("s", [0.0, -0.3, -0.9])
def test_weighted_entries_bounded_for_nonpositive_s(s):
    kernel = parity_kernel(s, 32).kernel()
    assert max_abs(kernel) <= 1.0 / (1.0 - s) + 1e-14


def test_kernel_rejects_singular_parameter():
    with pytest.raises(SingularParameterError):
        parity_kernel(1.0, 8)
    with pytest.raises(SingularParameterError):
        parity_kernel(1.0 - 1e-12, 8)


# ---------------------------------------------------------------------------
# point values


def test_wigner_values_at_origin():
    assert quasiprob_value(vacuum(24), 0.0, 0.0) == pytest.approx(2 / np.pi, abs=1e-12)
    one = QuantumState.pure(number_state(1, 24))
    assert quasiprob_value(one, 0.0, 0.0) == pytest.approx(-2 / np.pi, abs=1e-12)


def test_husimi_profile_of_vacuum():
    # Q(alpha) = e^{-|alpha|^2} / pi
    state = vacuum(32)
    for alpha in (0.0, 0.5, 0.5 + 0.5j, 1.2j):
        value = quasiprob_value(state, alpha, -1.0)
        assert value == pytest.approx(np.exp(-abs(alpha) ** 2) / np.pi, abs=1e-9)


def test_kernel_and_series_paths_agree_random():
    rng = np.random.default_rng(12)
    states = [vacuum(28), QuantumState.pure(coherent_state(0.6, 28))]
    for _ in range(20):
        state = states[rng.integers(len(states))]
        alpha = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        s = float(rng.uniform(-1.0, 0.5))
        quasiprob_value(state, alpha, s)  # raises beyond 1e-8 disagreement


# ---------------------------------------------------------------------------
# fields


def test_bare_field_values_at_origin():
    grid = PhaseGrid(-6, 6, -6, 6, 64, 64)
    origin = np.array([0.0 + 0.0j])
    assert field_values(vacuum(), origin, 0.0, "bare")[0] == pytest.approx(1.0, abs=1e-12)
    one = QuantumState.pure(number_state(1, 32))
    assert field_values(one, origin, 0.0, "bare")[0] == pytest.approx(-1.0, abs=1e-12)


def test_conventions_differ_by_two_over_pi():
    grid = PhaseGrid(-3, 3, -3, 3, 40, 40)
    state = QuantumState.pure(coherent_state(0.4, 24))
    bare = quasiprob_field(state, grid, 0.0, "bare").values
    scaled = quasiprob_field(state, grid, 0.0, "two_over_pi").values
    assert max_abs(scaled - (2 / np.pi) * bare) < 1e-14


def test_normalization_whole_plane():
    grid = PhaseGrid(-6, 6, -6, 6, 200, 200)
    field = quasiprob_field(vacuum(), grid, 0.0, "two_over_pi")
    total = field.values.sum() * grid.cell_area_alpha
    assert total == pytest.approx(1.0, abs=2e-2)


def test_coherent_peak_near_displacement():
    grid = PhaseGrid(-3, 3, -3, 3, 60, 60)
    state = QuantumState.pure(coherent_state(0.7, 32))
    field = quasiprob_field(state, grid, 0.0, "bare")
    i, j = np.unravel_index(np.argmax(field.values), field.values.shape)
    peak_alpha = field.grid.alphas()[i, j]
    assert abs(peak_alpha - 0.7) <= 1.5 * max(grid.dq, grid.dp)


def test_generic_s_matches_pointwise_route():
    state = QuantumState.pure(coherent_state(0.5, 24))
    alphas = np.array([0.2 + 0.1j, -0.4j])
    vals = field_values(state, alphas, -0.5, "two_over_pi")
    for alpha, val in zip(alphas, vals):
        assert val == pytest.approx(quasiprob_value(state, alpha, -0.5), abs=1e-10)


def test_husimi_nonnegative_for_test_states():
    grid = PhaseGrid(-6, 6, -6, 6, 64, 64)
    states = [vacuum(48)]
    states += [QuantumState.pure(number_state(n, 48)) for n in range(1, 5)]
    states.append(QuantumState.pure(coherent_state(0.7, 48)))
    states.append(QuantumState.pure(squeezed_vacuum(0.3, 48)))
    for state in states:
        vals = field_values(state, grid.alphas(), -1.0, "two_over_pi")
        assert vals.min() >= -1e-12


# ---------------------------------------------------------------------------
# masses


def test_mass_of_empty_region_is_zero():
    grid = PhaseGrid(-6, 6, -6, 6, 64, 64)
    empty = Indicator(grid, np.zeros((64, 64), dtype=bool))
    assert quasiprob_mass(vacuum(), empty, grid) == 0.0


def test_half_plane_mass_is_half_by_symmetry():
    grid = PhaseGrid(-6, 6, -6, 6, 200, 200)
    whole = Indicator(grid, np.ones((200, 200), dtype=bool))
    q, _ = grid.meshes()
    half = Indicator(grid, q > 0)
    m_whole = quasiprob_mass(vacuum(), whole, grid)
    m_half = quasiprob_mass(vacuum(), half, grid)
    assert m_half == pytest.approx(0.5 * m_whole, abs=1e-3)


def test_mass_additive_over_disjoint_regions():
    grid = PhaseGrid(-4, 4, -4, 4, 100, 100)
    state = QuantumState.pure(coherent_state(0.3, 24))
    left = Rectangle(-1, 0, -1, 1)
    right = Rectangle(0, 1, -1, 1)
    whole = Rectangle(-1, 1, -1, 1)
    total = quasiprob_mass(state, whole, grid)
    split = quasiprob_mass(state, left, grid) + quasiprob_mass(state, right, grid)
    assert split == pytest.approx(total, abs=1e-12)


def test_fock_one_negative_mass_near_origin():
    # the n = 1 state is negative at the origin: a small disk catches it
    grid = PhaseGrid(-4, 4, -4, 4, 160, 160)
    q, p = grid.meshes()
    small = Indicator(grid, q * q + p * p < 0.25)
    one = QuantumState.pure(number_state(1, 32))
    assert quasiprob_mass(one, small, grid) < 0.0


def test_whole_disk_mass_bare_vacuum():
    grid = PhaseGrid(-6, 6, -6, 6, 200, 200)
    disk = reliable_disk(32, grid)
    mass = quasiprob_mass(vacuum(), disk, grid, 0.0, "bare")
    assert mass == pytest.approx(np.pi / 2, abs=2e-2)


# ---------------------------------------------------------------------------
# exports


def test_csv_export(tmp_path):
    grid = PhaseGrid(-1, 1, -1, 1, 32, 32)
    field = quasiprob_field(vacuum(16), grid, 0.0, "bare", "vacuum")
    path = tmp_path / "field.csv"
    write_field_csv(path, field)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and "s=0.0" in lines[0]
    assert lines[1] == "q,p,value"
    assert len(lines) == 2 + 32 * 32
    q, p, v = (float(x) for x in lines[2].split(","))
    assert v == pytest.approx(field.values[0, 0])


def test_raster_roundtrip(tmp_path):
    grid = PhaseGrid(-2, 2, -3, 3, 40, 48)
    field = quasiprob_field(vacuum(16), grid, -1.0, "two_over_pi", "vacuum")
    path = tmp_path / "field.qfr"
    write_field_raster(path, field)
    back = read_field_raster(path)
    assert back.grid == grid
    assert back.s == -1.0
    assert back.convention == "two_over_pi"
    assert np.array_equal(back.values, field.values)


def test_raster_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(ValueError):
        read_field_raster(path)
