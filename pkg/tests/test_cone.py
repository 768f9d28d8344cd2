"""Cone condition, fractional partial sums, exact threshold constants."""
from fractions import Fraction

import numpy as np
import pytest

from cosk import (
    ConeParams,
    NotApplicableError,
    Spectrum,
    cone_membership,
    dim_tracefree,
    partial_sum,
    theta_in_window,
    theta_threshold,
)
from cosk.extremal import expected_minimizers


def spec_of(values, n=4):
    return Spectrum.from_values(np.asarray(values, dtype=float), n=n)


def test_threshold_anchors_exact():
    assert theta_threshold(4) == Fraction(1, 2)
    assert theta_threshold(5) == Fraction(2, 3)
    assert theta_threshold(8) == Fraction(1, 20)


def test_threshold_formula_value():
    n = 10
    big_n = dim_tracefree(n)
    assert theta_threshold(n) == Fraction(2 * big_n - 9 * n + 6, big_n + 6 * n - 3)


def test_threshold_rejects_open_dimensions():
    for n in (2, 3, 6, 7):
        with pytest.raises(NotApplicableError):
            theta_threshold(n)


def test_threshold_window_exact():
    for n in range(8, 65):
        assert theta_in_window(n)
        assert Fraction(0) < theta_threshold(n) < Fraction(2 * (n - 1), n + 2)


def test_partial_sum_fractional():
    values = [-2.0] + [1.0] * 8
    assert partial_sum(spec_of(values), 1.5) == pytest.approx(-1.5)


def test_partial_sum_two_smallest():
    values = sorted([0.3, -1.2, 4.0, 2.0, 0.0, 1.0, 1.0, 1.0, 1.0])
    assert partial_sum(spec_of(values), 2.0) == pytest.approx(-1.2 + 0.0)


def test_partial_sum_integer_matches_naive_oracle():
    rng = np.random.default_rng(6)
    for _ in range(20):
        values = rng.normal(size=9)
        spec = spec_of(values)
        for m in range(1, 9):
            naive = float(np.sort(values)[:m].sum())
            assert partial_sum(spec, float(m)) == pytest.approx(naive, abs=1e-12)


def test_partial_sum_range_errors():
    spec = spec_of([1.0] * 9)
    with pytest.raises(ValueError):
        partial_sum(spec, 0.5)
    with pytest.raises(ValueError):
        partial_sum(spec, 9.0)


def test_membership_strict_for_ones():
    verdict = cone_membership(spec_of([1.0] * 9), ConeParams(2.0, 0.0))
    assert verdict.status == "strict"
    assert verdict.margin == pytest.approx(1.0)


def test_membership_boundary_on_extremal_profile():
    n = 8
    theta = float(theta_threshold(n))
    profile = np.sort(expected_minimizers(dim_tracefree(n), theta)[1])
    verdict = cone_membership(spec_of(profile, n=n), ConeParams.for_dimension(n))
    assert verdict.status == "boundary"
    assert abs(verdict.margin) < 1e-12


def test_membership_violated():
    values = np.array([-3.0] + [1.0] * 8) * 0.5  # scaled, mean stays positive
    verdict = cone_membership(spec_of(values), ConeParams(2.0, 0.0))
    assert verdict.status == "violated"


def test_membership_scale_equivariant():
    rng = np.random.default_rng(11)
    for _ in range(20):
        values = rng.normal(loc=0.4, size=14)
        for c in (0.1, 3.0, 250.0):
            base = cone_membership(spec_of(values, n=5), ConeParams(2.0, 0.25))
            scaled = cone_membership(spec_of(c * values, n=5), ConeParams(2.0, 0.25))
            assert base.status == scaled.status


def test_membership_monotone_in_theta():
    rng = np.random.default_rng(13)
    for _ in range(20):
        values = rng.normal(loc=0.5, size=9)
        if values.mean() <= 0:
            continue
        spec = spec_of(values)
        for theta0 in (0.0, 0.3, 0.9):
            if cone_membership(spec, ConeParams(2.0, theta0)).status in ("strict", "boundary"):
                stronger = cone_membership(spec, ConeParams(2.0, theta0 + 0.2))
                assert stronger.status == "strict"


def test_params_validation():
    with pytest.raises(ValueError):
        ConeParams(0.5, 0.0)
    with pytest.raises(ValueError):
        ConeParams(2.0, -1.0)
    params = ConeParams.for_dimension(4)
    assert params.alpha == 2.0
    assert params.theta == pytest.approx(0.5)
    spec = spec_of([1.0] * 9)
    with pytest.raises(ValueError):
        cone_membership(spec, ConeParams(9.5, 0.0))
