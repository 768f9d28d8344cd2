"""Laplacian pairing chain, low-dimension closed forms, classification."""
import numpy as np
import pytest

from cosk import (
    NonEinsteinError,
    classify_einstein,
    cubic_objective,
    delta_r_inner,
    delta_r_inner_low_dim,
    delta_r_lower_bound,
    dim_tracefree,
    einstein_defect,
    random_einstein,
    theta_threshold,
    weighted_weyl_bound,
)
from cosk.bochner import (
    BoundPreconditionError,
    delta_r_lower_bound_unsimplified,
    match_profile,
)
from cosk.models import flat, fubini_study, near_sphere, sphere
from cosk.tensors import CurvatureTensor, rotate
from cosk.extremal import expected_minimizers


def test_delta_zero_tensor():
    assert delta_r_inner(flat(8)) == 0.0


def test_delta_sphere_vanishes():
    # Pure-trace spectrum makes every cubic coefficient cancel.
    for n in (4, 5, 8, 10):
        assert abs(delta_r_inner(sphere(n))) < 1e-9


def _ricci_skewed_tensor():
    # Valid curvature symmetries but a Ricci tensor that is not pure trace.
    comp = fubini_study(4).components.copy()
    comp[0, 1, 0, 1] += 0.5
    comp[1, 0, 0, 1] -= 0.5
    comp[0, 1, 1, 0] -= 0.5
    comp[1, 0, 1, 0] += 0.5
    return CurvatureTensor(4, comp)


def test_delta_requires_einstein():
    bad = _ricci_skewed_tensor()
    assert einstein_defect(bad) > 1e-6
    with pytest.raises(NonEinsteinError):
        delta_r_inner(bad)


def test_delta_cubic_homogeneity():
    r = random_einstein(8, seed=5, weyl_scale=0.1)
    base = delta_r_inner(r)
    for c in (0.5, 2.0):
        scaled = CurvatureTensor(8, c * r.components)
        assert delta_r_inner(scaled) == pytest.approx(c**3 * base, rel=1e-9, abs=1e-12)


def test_lower_bound_vanishes_on_constant_spectra():
    for n in (4, 5, 8):
        theta = float(theta_threshold(n))
        values = np.ones(dim_tracefree(n))
        assert delta_r_lower_bound(values, n, theta) == pytest.approx(0.0, abs=1e-12)
        assert delta_r_lower_bound(np.zeros(dim_tracefree(n)), n, theta) == 0.0


def test_lower_bound_matches_unsimplified_at_threshold():
    rng = np.random.default_rng(8)
    for n in (8, 9, 12):
        theta = float(theta_threshold(n))
        for _ in range(50):
            values = rng.uniform(-1, 2, size=dim_tracefree(n))
            simple = delta_r_lower_bound(values, n, theta)
            full = delta_r_lower_bound_unsimplified(values, n, theta)
            assert simple == pytest.approx(full, rel=1e-10, abs=1e-10)


def test_lower_bound_is_scaled_objective():
    # With positive mean, the bound is 16 * mean^3 times the normalized objective.
    rng = np.random.default_rng(9)
    for n in (4, 8):
        theta = float(theta_threshold(n))
        big_n = dim_tracefree(n)
        for _ in range(20):
            values = rng.uniform(0.1, 2.0, size=big_n)
            mean = values.mean()
            f_val = cubic_objective(values / mean, big_n, 1.0 + theta)
            assert delta_r_lower_bound(values, n, theta) == pytest.approx(
                16.0 * mean**3 * f_val, rel=1e-10, abs=1e-10
            )


def test_low_dim_closed_forms():
    assert delta_r_inner_low_dim(np.ones(9), 4) == pytest.approx(0.0, abs=1e-12)
    assert delta_r_inner_low_dim(np.ones(14), 5) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        delta_r_inner_low_dim(np.ones(9), 6)
    with pytest.raises(ValueError):
        delta_r_inner_low_dim(np.ones(8), 4)


def test_low_dim_identity_against_bound():
    rng = np.random.default_rng(10)
    for n in (4, 5):
        theta = float(theta_threshold(n))
        count = 0
        while count < 200:
            values = rng.uniform(-1, 2, size=dim_tracefree(n))
            if values.mean() <= 0:
                continue
            count += 1
            assert 2.0 * delta_r_inner_low_dim(values, n) == pytest.approx(
                delta_r_lower_bound(values, n, theta), rel=1e-9, abs=1e-9
            )


def test_weighted_bound_trivial_cases():
    lhs, rhs = weighted_weyl_bound(sphere(8), float(theta_threshold(8)))
    assert abs(lhs) < 1e-9 and abs(rhs) < 1e-9
    lhs, rhs = weighted_weyl_bound(flat(8), 0.0)
    assert lhs == 0.0 and rhs == 0.0


def test_weighted_bound_near_sphere_sweep():
    for n in (8, 9):
        theta = float(theta_threshold(n))
        for seed in range(10):
            lhs, rhs = weighted_weyl_bound(near_sphere(n, seed=seed, epsilon=0.05), theta)
            assert lhs >= rhs - 1e-8


def test_weighted_bound_preconditions():
    with pytest.raises(BoundPreconditionError):
        weighted_weyl_bound(sphere(5), 0.1)  # dimension too small
    with pytest.raises(BoundPreconditionError):
        weighted_weyl_bound(sphere(8), -0.1)  # negative theta
    with pytest.raises(BoundPreconditionError):
        weighted_weyl_bound(fubini_study(8), 0.0)  # pair sum below the floor


def test_match_profile_synthetic():
    n = 8
    theta = float(theta_threshold(n))
    big_n = dim_tracefree(n)
    assert match_profile(np.zeros(big_n), theta) == "flat"
    assert match_profile(np.full(big_n, 2.5), theta) == "round_sphere_profile"
    boundary = 3.0 * expected_minimizers(big_n, theta)[1]
    assert match_profile(boundary, theta) == "boundary_extremal_profile"
    assert match_profile(np.linspace(0.5, 1.5, big_n), theta) is None


def test_classify_flat_and_sphere():
    for n in (4, 5, 8, 10):
        verdict, report = classify_einstein(flat(n))
        assert verdict.kind == "flat"
        assert report.cone.status == "boundary"
        verdict, report = classify_einstein(sphere(n))
        assert verdict.kind == "round_sphere_profile"
        assert report.delta_r_inner == pytest.approx(0.0, abs=1e-9)
        assert report.cone.status == "strict"


def test_classify_near_sphere_keeps_chain_nonnegative():
    verdict, report = classify_einstein(near_sphere(9, seed=7))
    assert verdict.kind == "inconclusive"
    assert report.cone.status == "strict"
    assert report.delta_r_inner >= -1e-8
    assert report.weighted_lhs >= report.weighted_rhs - 1e-8
    assert 3.0 * report.delta_r_inner >= report.lower_bound - 1e-8


def test_classify_fubini_study_violates_cone():
    verdict, report = classify_einstein(fubini_study(4))
    assert verdict.kind == "inconclusive"
    assert report.cone.status == "violated"
    assert "cone" in verdict.details


def test_classify_low_dim_reports_discrepancy():
    verdict, _ = classify_einstein(near_sphere(4, seed=1))
    assert "differs from the closed form" in verdict.details


def test_classify_not_applicable_dimensions():
    for n in (6, 7):
        verdict, _ = classify_einstein(sphere(n))
        assert verdict.kind == "not_applicable"


def test_classify_not_applicable_non_einstein():
    verdict, report = classify_einstein(_ricci_skewed_tensor())
    assert verdict.kind == "not_applicable"
    assert report.einstein_defect > 1e-8


def test_classify_theta_override():
    # A small explicit theta makes the near-sphere cone strict anyway.
    verdict, report = classify_einstein(near_sphere(8, seed=2, epsilon=0.01), theta=0.2)
    assert report.cone.status == "strict"
    assert verdict.kind in ("inconclusive", "round_sphere_profile")


def test_classify_invariant_under_rotation():
    r = random_einstein(5, seed=19, weyl_scale=0.05)
    q, _ = np.linalg.qr(np.random.default_rng(3).normal(size=(5, 5)))
    v1, rep1 = classify_einstein(r)
    v2, rep2 = classify_einstein(rotate(r, q))
    assert v1.kind == v2.kind
    assert rep1.delta_r_inner == pytest.approx(rep2.delta_r_inner, rel=1e-7, abs=1e-8)
    assert rep1.cone.margin == pytest.approx(rep2.cone.margin, abs=1e-8)


def test_report_serialization():
    _, report = classify_einstein(sphere(8))
    doc = report.to_dict()
    assert set(doc) == {
        "delta_r_inner", "lower_bound", "weighted_lhs", "weighted_rhs", "cone", "einstein_defect",
    }
    assert doc["cone"]["status"] == "strict"
