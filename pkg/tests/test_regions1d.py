import numpy as np
import pytest

from phaseovm.errors import (
    InvalidDimensionError,
    InvalidQuadratureError,
    InvalidRegionError,
    NotRepresentableError,
    TruncationError,
    TruncationRiskError,
)
from phaseovm.fock import QuantumState, basic_operators, momentum_ket, number_state
from phaseovm.linalg import central_block, gauss_legendre, hermiticity_defect, max_abs
from phaseovm.ptimaps import apply_map
from phaseovm.regions1d import (
    FourierPeriodic,
    IntegerComb,
    Interval,
    UnionOfIntervals,
    build_region_operator,
    build_region_operator_on_p_axis,
    build_region_operator_smeared,
    eigenpair_residual,
    eigenvalue_pairs,
    fourier_transform,
    integer_comb_identity_defect,
    integer_comb_operator,
    is_symmetric,
    kraus_generators,
    kraus_reconciliation,
    occupation_probability,
    region_from_json,
    region_to_json,
    rotate_region_operator,
    scale_region,
    shift_region,
    shift_region_operator,
    squeeze_region_operator,
    squeezed_reference_operator,
)


# ---------------------------------------------------------------------------
# Fourier data


def quadrature_transform(lo, hi, p_values, points=400):
    """Independent oracle: chi~(p) for an interval by direct quadrature."""
    nodes, weights = gauss_legendre(lo, hi, points)
    return np.array([np.sum(weights * np.exp(1j * nodes * p)) for p in p_values])


def test_constant_cfun_single_atom():
    measure = fourier_transform(FourierPeriodic.of(1.0, period=1.0))
    assert measure.atoms == ((0.0, np.pi),)


def test_single_harmonic_atom_pair():
    measure = fourier_transform(FourierPeriodic.of(0.0, [1.0], None, np.pi))
    atoms = dict(measure.atoms)
    assert set(atoms) == {-1.0, 0.0, 1.0}
    assert atoms[1.0] == pytest.approx(np.pi)
    assert atoms[-1.0] == pytest.approx(np.pi)
    assert atoms[0.0] == 0.0


def test_sine_harmonic_conjugate_atoms():
    measure = fourier_transform(FourierPeriodic.of(0.0, [0.0], [1.0], np.pi))
    atoms = dict(measure.atoms)
    assert atoms[1.0] == pytest.approx(1j * np.pi)
    assert atoms[-1.0] == pytest.approx(-1j * np.pi)


def test_interval_transform_against_quadrature():
    measure = fourier_transform(Interval(-1.0, 1.0))
    p = np.array([0.0, 0.4, 1.3, -2.6])
    expected = quadrature_transform(-1.0, 1.0, p)
    assert np.allclose(measure(p), expected, atol=1e-12)
    assert measure(np.array([0.0]))[0].real == pytest.approx(2.0)  # chi~(0) = width


def test_asymmetric_interval_transform():
    measure = fourier_transform(Interval(0.0, 1.0))
    p = np.array([0.7, -0.7, 2.2, -2.2])
    values = measure(p)
    assert np.allclose(values, quadrature_transform(0.0, 1.0, p), atol=1e-12)
    # Hermitian symmetry of the transform of a real cfun
    assert values[0] == pytest.approx(np.conj(values[1]))
    assert values[2] == pytest.approx(np.conj(values[3]))


def test_union_transform_is_sum_of_pieces():
    union = UnionOfIntervals.of([(-2.0, -1.0), (1.0, 2.0)])
    measure = fourier_transform(union)
    p = np.array([0.0, 0.9, 1.7])
    expected = quadrature_transform(-2.0, -1.0, p) + quadrature_transform(1.0, 2.0, p)
    assert np.allclose(measure(p), expected, atol=1e-12)


def test_union_normalization_merges_overlaps():
    union = UnionOfIntervals.of([(0.0, 1.0), (0.5, 2.0), (3.0, 4.0)])
    assert union.intervals == ((0.0, 2.0), (3.0, 4.0))
    with pytest.raises(InvalidRegionError):
        UnionOfIntervals.of([(1.0, 1.0)])


# ---------------------------------------------------------------------------
# operator builds


def test_whole_line_operator_on_zero_momentum_ket():
    region = FourierPeriodic.of(2.0, period=1.0)  # chi identically 1
    k = build_region_operator(region, 32)
    v0 = momentum_ket(0.0, 32)
    expected = 2.0 * np.pi * np.vdot(v0, v0) * v0
    assert np.allclose(k.op @ v0, expected, atol=1e-12)


def test_fourier_band_guard():
    region = FourierPeriodic.of(0.0, [1.0], None, 0.1)  # atom at 10 pi
    with pytest.raises(TruncationError):
        build_region_operator(region, 16)


def test_dim_and_quadrature_guards():
    with pytest.raises(InvalidDimensionError):
        build_region_operator(Interval(-1, 1), 4)
    with pytest.raises(InvalidQuadratureError):
        build_region_operator_smeared(Interval(-1, 1), 32, quadrature_points=4)


def test_interval_analytic_vs_smeared():
    region = Interval(-1.0, 1.0)
    analytic = build_region_operator(region, 48)
    smeared = build_region_operator_smeared(region, 48, 64)
    assert analytic.path == "analytic" and smeared.path == "smeared"
    gap = np.linalg.norm(central_block(analytic.op) - central_block(smeared.op))
    assert gap < 1e-6


def test_periodic_analytic_vs_smeared():
    region = FourierPeriodic.of(1.0, [1.0], None, np.pi)
    analytic = build_region_operator(region, 64)
    smeared = build_region_operator_smeared(region, 64, 32)
    assert max_abs(central_block(analytic.op) - central_block(smeared.op)) < 1e-6


def test_symmetric_region_operator_is_hermitian_and_parity_commuting():
    for region in (Interval(-1.0, 1.0), FourierPeriodic.of(1.0, [0.5], None, np.pi)):
        k = build_region_operator(region, 48)
        assert hermiticity_defect(k.op) < 1e-10
        parity = basic_operators(48).parity
        assert max_abs(k.op @ parity - parity @ k.op) < 1e-10


def test_asymmetric_region_symbol_is_complex_but_operator_selfadjoint():
    # the transform of a real asymmetric cfun is complex valued; the
    # operator itself stays self-adjoint (chi~(-p) = conj chi~(p))
    region = Interval(0.0, 1.0)
    assert not is_symmetric(region)
    k = build_region_operator_smeared(region, 32)
    assert hermiticity_defect(k.op) < 1e-10
    parity = basic_operators(32).parity
    assert max_abs(k.op @ parity - parity @ k.op) > 1e-3


# ---------------------------------------------------------------------------
# eigen-structure


def test_eigenvalue_pairs_at_zero():
    pairs = eigenvalue_pairs(Interval(-1.0, 1.0), momenta=[0.0])
    p, lam_plus, lam_minus = pairs[0]
    assert lam_plus == pytest.approx(2.0)  # chi~(0) = interval width
    assert lam_minus == pytest.approx(-2.0)


def test_eigenvalue_pairs_degenerate_at_transform_zero():
    # chi~(p) = 2 sin(p)/p vanishes at p = pi
    pairs = eigenvalue_pairs(Interval(-1.0, 1.0), momenta=[np.pi])
    assert abs(pairs[0][1]) < 1e-14
    assert abs(pairs[0][2]) < 1e-14


def test_eigenvalue_pairs_atomic_defaults():
    pairs = eigenvalue_pairs(FourierPeriodic.of(1.0, [1.0], None, np.pi))
    momenta = [p for p, _, _ in pairs]
    assert momenta == [-1.0, 0.0, 1.0]
    with pytest.raises(InvalidRegionError):
        eigenvalue_pairs(FourierPeriodic.of(1.0), momenta=[0.5])
    with pytest.raises(InvalidRegionError):
        eigenvalue_pairs(Interval(-1, 1))


@pytest.mark.parametrize("p", [0.5, 1.0])
def test_eigenpair_residual_small_and_non_increasing(p):
    res64 = eigenpair_residual(Interval(-1.0, 1.0), p, 64)
    assert max(res64) < 1e-4
    res128 = eigenpair_residual(Interval(-1.0, 1.0), p, 128)
    assert max(res128) <= max(res64) * 1.1 + 1e-11


# ---------------------------------------------------------------------------
# occupation probabilities


def test_occupation_vacuum_whole_line():
    region = FourierPeriodic.of(2.0, period=1.0)
    state = QuantumState.pure(number_state(0, 48))
    result = occupation_probability(state, region)
    expected = 2.0 * np.pi * np.pi**-0.5  # 2 pi |Psi(0)|^2
    assert result.operator_path == pytest.approx(expected, abs=1e-10)
    assert result.formula_path == pytest.approx(expected, abs=1e-10)
    assert result.refused is None


def test_occupation_odd_state_refuses_formula():
    region = Interval(-1.0, 1.0)
    state = QuantumState.pure(number_state(1, 48))
    result = occupation_probability(state, region)
    assert result.formula_path is None
    assert result.refused is not None
    assert np.isfinite(result.operator_path)


def test_occupation_series_equals_integral_paths():
    region = FourierPeriodic.of(1.0, [0.4], None, np.pi)
    state = QuantumState.pure(number_state(0, 64))
    result = occupation_probability(state, region)
    assert result.series_path is not None
    assert result.series_path == pytest.approx(result.formula_path, abs=1e-6)
    assert result.series_path == pytest.approx(result.operator_path, abs=1e-6)


def test_occupation_interval_paths_agree():
    region = Interval(-1.0, 1.0)
    state = QuantumState.pure(number_state(2, 64))
    result = occupation_probability(state, region)
    assert result.formula_path == pytest.approx(result.operator_path, abs=1e-6)


# ---------------------------------------------------------------------------
# Kraus representation


def test_kraus_constant_region_single_generator():
    region = FourierPeriodic.of(1.0, period=np.pi)
    kraus = kraus_generators(region, 16)
    assert len(kraus.generators) == 1
    assert max_abs(kraus.generators[0] - np.sqrt(np.pi) * np.eye(16)) < 1e-14
    x = np.diag(np.arange(16).astype(complex))
    assert max_abs(apply_map(kraus, x) - np.pi * x) < 1e-12


def test_kraus_generators_shift_momentum_kets():
    region = FourierPeriodic.of(0.0, [1.0], None, np.pi)
    kraus = kraus_generators(region, 64)
    v0 = momentum_ket(0.0, 64)
    shifted_down, shifted_up = kraus.generators[1] @ v0, kraus.generators[2] @ v0
    half = 32
    assert np.linalg.norm((shifted_down - momentum_ket(-1.0, 64))[:half]) < 1e-10
    assert np.linalg.norm((shifted_up - momentum_ket(1.0, 64))[:half]) < 1e-10


def test_kraus_rejects_bad_coefficients():
    with pytest.raises(NotRepresentableError):
        kraus_generators(FourierPeriodic.of(1.0, [-0.5], None, np.pi), 16)
    with pytest.raises(NotRepresentableError):
        kraus_generators(FourierPeriodic.of(1.0, [0.5], [0.1], np.pi), 16)


def test_kraus_reconciliation_identifies_weighted_candidate():
    report = kraus_reconciliation(FourierPeriodic.of(1.0, [1.0], None, np.pi), 64)
    assert report["matching_candidate"] == "pi_weighted_parity"
    assert report["pi_weighted_parity"]["max_deviation"] < 1e-8
    assert report["literal"]["max_deviation"] > 1e-2


# ---------------------------------------------------------------------------
# transform algebra


def test_rotate_identity_and_group():
    k = build_region_operator(Interval(-1.0, 1.0), 48)
    assert max_abs(rotate_region_operator(k, 0.0).op - k.op) < 1e-14
    twice = rotate_region_operator(rotate_region_operator(k, np.pi / 2), np.pi / 2)
    once = rotate_region_operator(k, np.pi)
    assert max_abs(twice.op - once.op) < 1e-12


def test_rotate_preserves_spectrum():
    k = build_region_operator(Interval(-1.0, 1.0), 48)
    rotated = rotate_region_operator(k, 0.7)
    before = np.sort(np.linalg.eigvalsh(k.op))
    after = np.sort(np.linalg.eigvalsh(rotated.op))
    assert max_abs(before - after) < 1e-9


def test_quarter_turn_matches_p_axis_build():
    region = Interval(-1.0, 1.0)
    k = build_region_operator(region, 48)
    rotated = rotate_region_operator(k, np.pi / 2)
    direct = build_region_operator_on_p_axis(region, 48)
    assert max_abs(central_block(rotated.op) - central_block(direct.op)) < 1e-8


def test_shift_modes_against_translated_regions():
    region = Interval(-1.0, 1.0)
    k = build_region_operator(region, 48)
    assert max_abs(shift_region_operator(k, 0.0, "left").op - k.op) < 1e-12
    for mode, moved in (("left", 0.5), ("right", -0.5), ("conjugate", 0.5)):
        shifted = shift_region_operator(k, 0.5, mode)
        direct = build_region_operator(shift_region(region, moved), 48)
        assert max_abs(central_block(shifted.op) - central_block(direct.op)) < 1e-6
        assert shifted.region == Interval(-1.0 + moved, 1.0 + moved)


def test_conjugate_shift_inverts():
    k = build_region_operator(Interval(-1.0, 1.0), 48)
    back = shift_region_operator(shift_region_operator(k, 0.5, "conjugate"), -0.5, "conjugate")
    assert max_abs(back.op - k.op) < 1e-12


def test_shift_region_descriptors():
    assert shift_region(Interval(-1, 1), 0.5) == Interval(-0.5, 1.5)
    moved = shift_region(FourierPeriodic.of(1.0, [1.0], None, np.pi), np.pi / 2)
    # cos shifted by half a period flips sign into the sine component
    assert moved.a[0] == pytest.approx(np.cos(np.pi / 2))
    assert moved.b[0] == pytest.approx(np.sin(np.pi / 2))
    with pytest.raises(InvalidRegionError):
        shift_region(IntegerComb(2), 1.0)


def test_squeeze_dual_path_and_guard():
    region = Interval(-1.0, 1.0)
    k = build_region_operator(region, 96)
    assert max_abs(squeeze_region_operator(k, 0.0).op - k.op) < 1e-10
    squeezed = squeeze_region_operator(k, 0.2)
    reference = squeezed_reference_operator(region, 96, 0.2)
    assert max_abs(central_block(squeezed.op, 24) - central_block(reference, 24)) < 1e-4
    with pytest.raises(TruncationRiskError):
        squeeze_region_operator(k, 1.5)


def test_squeeze_support_rescale_on_vacuum():
    # conjugated operator equals e^r times the operator of the shrunk region
    region = Interval(-1.0, 1.0)
    r = 0.2
    dim = 96
    vac = QuantumState.pure(number_state(0, dim)).density()
    squeezed = squeeze_region_operator(build_region_operator(region, dim), r)
    shrunk = build_region_operator(scale_region(region, np.exp(-r)), dim)
    lhs = np.trace(squeezed.op @ vac).real
    rhs = np.exp(r) * np.trace(shrunk.op @ vac).real
    assert lhs == pytest.approx(rhs, abs=1e-4)


# ---------------------------------------------------------------------------
# integer comb


def test_comb_single_term_matches_momentum_phase():
    from phaseovm.fock import momentum_function

    k = integer_comb_operator(1, 48)
    phase = momentum_function(48, lambda p: np.exp(2j * p))
    expected = phase @ basic_operators(48).parity
    assert max_abs(k.op - expected) < 1e-12


@pytest.mark.parametrize("n", [1, 3, 5])
def test_comb_geometric_identity(n):
    assert integer_comb_identity_defect(n, 48) < 1e-10


def test_comb_region_is_asymmetric():
    k = integer_comb_operator(3, 48)
    assert not is_symmetric(k.region)
    parity = basic_operators(48).parity
    assert max_abs(k.op @ parity - parity @ k.op) > 1e-3


# ---------------------------------------------------------------------------
# JSON round trips


@pytest.mark.parametrize(
    "region",
    [
        Interval(-1.0, 2.5),
        UnionOfIntervals.of([(-2.0, -1.0), (1.0, 2.0)]),
        FourierPeriodic.of(1.0, [0.5, 0.25], [0.0, 0.1], 2.0),
        IntegerComb(4),
    ],
)
def test_region_json_roundtrip(region):
    assert region_from_json(region_to_json(region)) == region


def test_region_json_rejects_malformed():
    with pytest.raises(InvalidRegionError):
        region_from_json({"type": "interval", "lo": 1.0})
    with pytest.raises(InvalidRegionError):
        region_from_json({"type": "pentagon"})
