import json

import numpy as np
import pytest

from phaseovm.errors import UsageError
from phaseovm.regions1d import FourierPeriodic, Interval
from phaseovm.regions2d import Circle, Disc, Rectangle, Segment
from phaseovm.verify import (
    VERIFY_TARGETS,
    convergence_sweep_circle,
    convergence_sweep_interval,
    convergence_sweep_rectangle_mass,
    run_target,
    sweep_is_nonincreasing,
    verify_fourier,
    verify_rectangle_mass,
    verify_region_operator,
)


@pytest.mark.parametrize("target", VERIFY_TARGETS)
def test_every_named_target_passes(target):
    reports = run_target(target)
    assert reports
    for report in reports:
        assert report.absolute_deviation >= 0.0
        assert report.relative_deviation >= 0.0
        if report.tolerance is not None:
            assert report.passed == (report.absolute_deviation <= report.tolerance)
            assert report.passed, f"{report.label}: {report.absolute_deviation}"


def test_unknown_target_and_params_rejected():
    with pytest.raises(UsageError):
        run_target("nonsense")
    with pytest.raises(UsageError):
        run_target("circle", radius=1.0)


def test_report_json_serializable():
    reports = run_target("comb", dim=32)
    payload = json.dumps([r.to_json() for r in reports])
    decoded = json.loads(payload)
    assert decoded[0]["label"].startswith("integer comb")
    assert set(decoded[0]) >= {
        "label",
        "analytic_value",
        "oracle_value",
        "absolute_deviation",
        "relative_deviation",
        "tolerance",
        "passed",
        "params",
    }


def test_region_dispatch():
    for region, dim in (
        (Circle(1.0), 48),
        (Segment(2.0), 32),
        (Interval(-1.0, 1.0), 48),
        (FourierPeriodic.of(1.0, (1.0,), None, np.pi), 64),
    ):
        reports = verify_region_operator(region, dim)
        assert all(r.passed for r in reports)
    with pytest.raises(UsageError):
        verify_region_operator("not a region", 32)


def test_disc_dispatch_reports_area_gap():
    reports = verify_region_operator(Disc(1.0), 32)
    labels = [r.label for r in reports]
    assert any("area measure" in label for label in labels)
    gap = next(r for r in reports if "area measure" in r.label)
    # the rotated-segment construction is not the area integral; the gap is
    # order one and reported as data
    assert gap.absolute_deviation > 0.1
    assert gap.tolerance is None and gap.passed


def test_rectangle_mass_routes():
    reports = verify_rectangle_mass(dim=24)
    assert len(reports) == 3
    assert all(r.passed for r in reports)


def test_rectangle_dispatch():
    reports = verify_region_operator(Rectangle(-1, 1, -1, 1), 24)
    assert all(r.passed for r in reports)


def test_fourier_target_tolerance():
    reports = verify_fourier(dim=64)
    assert all(r.passed for r in reports)


def test_kraus_report_structure():
    reports = run_target("kraus")
    labels = [r.label for r in reports]
    assert any("literal" in label for label in labels)
    assert any("pi_weighted_parity" in label for label in labels)
    final = reports[-1]
    assert "matching candidate" in final.label
    assert final.passed
    assert final.params["matching_candidate"] == "pi_weighted_parity"


# ---------------------------------------------------------------------------
# convergence sweeps


def test_circle_sweep_decreases_then_floors():
    reports = convergence_sweep_circle(2.0)
    devs = [r.absolute_deviation for r in reports]
    assert devs[0] > devs[1]  # strict drop out of the truncation-limited regime
    assert sweep_is_nonincreasing(reports)


def test_interval_sweep_decreases():
    reports = convergence_sweep_interval()
    devs = [r.absolute_deviation for r in reports]
    assert devs[0] > devs[1]
    assert sweep_is_nonincreasing(reports)


def test_rectangle_mass_sweep_strictly_decreases():
    reports = convergence_sweep_rectangle_mass(dim=16, counts=(100, 200, 400))
    devs = [r.absolute_deviation for r in reports]
    assert devs[0] > devs[1] > devs[2]
    assert sweep_is_nonincreasing(reports)


def test_sweep_monotonicity_helper():
    class Stub:
        def __init__(self, dev):
            self.absolute_deviation = dev

    assert sweep_is_nonincreasing([Stub(1e-3), Stub(1e-4), Stub(1.05e-4)])
    assert not sweep_is_nonincreasing([Stub(1e-6), Stub(1e-3)])
