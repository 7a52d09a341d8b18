"""End-to-end fits, exact interpolation, and reference-point averaging."""

import math

import numpy as np
import pytest

from padefit import (
    Dataset,
    DerivativeGridSpec,
    FitConfig,
    RationalModel,
    build_reference_points,
    fit_linearized,
    fit_regularized,
    interpolate_reference,
    oscillation_measure,
)
from padefit.errors import CountMismatch, InsufficientData, SingularSystem

GEN = RationalModel(numer=(1.0, -0.4, 0.2), denom=(0.25,))


def _exact_dataset(model=GEN, lo=0.5, hi=2.0, count=10):
    xs = np.linspace(lo, hi, count)
    return Dataset(xs, model(xs))


# -- containers -------------------------------------------------------------


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(np.array([1.0, 2.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        Dataset(np.array([1.0, math.nan]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        Dataset(np.array([]), np.array([]))


def test_dataset_interval_and_sort():
    d = Dataset(np.array([2.0, 0.5, 1.0]), np.array([4.0, 1.0, 2.0]))
    assert d.interval() == (0.5, 2.0)
    s = d.sorted_by_x()
    np.testing.assert_array_equal(s.x, [0.5, 1.0, 2.0])
    np.testing.assert_array_equal(s.f, [1.0, 2.0, 4.0])
    assert len(d) == 3


def test_config_validation():
    with pytest.raises(ValueError):
        FitConfig(n=-1, m=0)
    with pytest.raises(ValueError):
        FitConfig(n=2, m=0, tail_power=2)
    with pytest.raises(ValueError):
        FitConfig(n=1, m=0, lam=-0.1)
    with pytest.raises(ValueError):
        FitConfig(n=1, m=0, x_power=0.0)


def test_cdf_form_pins_origin_and_sets_tail():
    cfg = FitConfig.cdf_form(6, 0, 12)
    assert 0 in cfg.zero_powers
    assert cfg.tail_power == 12
    assert cfg.free_count() == 7  # numer 1..6 plus the shared tail


# -- least-squares fits -----------------------------------------------------


def test_exact_membership_recovery():
    data = _exact_dataset()
    report = fit_linearized(data, FitConfig(n=2, m=1))
    assert report.s0 <= 1e-18 * float(np.dot(data.f, data.f))
    np.testing.assert_allclose(report.model.numer, GEN.numer, rtol=1e-8)
    np.testing.assert_allclose(report.model.denom, GEN.denom, rtol=1e-8)
    assert report.poles.count == 0


def test_polynomial_fit_has_identical_s_and_s0():
    rng = np.random.default_rng(2)
    data = Dataset(np.linspace(0.0, 2.0, 15), rng.normal(size=15))
    report = fit_linearized(data, FitConfig(n=4, m=0))
    assert report.s == report.s0  # same residuals, bit for bit
    assert report.d == math.sqrt(report.s / len(data))


def test_report_metric_relations():
    data = _exact_dataset()
    report = fit_linearized(data, FitConfig(n=1, m=0))
    assert report.s >= 0 and report.s0 >= 0
    assert report.d == pytest.approx(math.sqrt(report.s / len(data)), rel=1e-15)
    assert report.d0 is None and report.d1 is None  # no underlying truth
    assert report.d_der is None  # plain fit carries no derivative grid


def test_truth_metrics_present_when_underlying_known():
    xs = np.linspace(0.5, 2.0, 12)
    data = Dataset(xs, GEN(xs) + 0.01, underlying=GEN)
    report = fit_linearized(data, FitConfig(n=2, m=1))
    assert report.d0 == pytest.approx(0.01, rel=1e-9)
    assert report.d1 is not None and report.d1 < report.d0


def test_insufficient_data_propagates():
    data = Dataset(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    with pytest.raises(InsufficientData):
        fit_linearized(data, FitConfig(n=2, m=1))


def test_zero_penalties_reduce_to_plain_fit():
    data = _exact_dataset()
    grid = DerivativeGridSpec((0.5, 2.0), 40)
    plain = fit_linearized(data, FitConfig(n=2, m=1))
    reg = fit_regularized(data, FitConfig(n=2, m=1), grid)
    assert reg.model.numer == plain.model.numer
    assert reg.model.denom == plain.model.denom
    assert reg.s == plain.s
    assert reg.d_der is not None


def test_huge_penalty_shrinks_all_coefficients():
    rng = np.random.default_rng(4)
    data = Dataset(np.linspace(0.2, 2.0, 20), rng.normal(size=20) + 3.0)
    report = fit_regularized(
        data, FitConfig(n=3, m=2, lam=1e6, lam1=1e6), DerivativeGridSpec((0.2, 2.0), 10)
    )
    for c in report.model.numer + report.model.denom:
        assert abs(c) < 1e-3


def test_d_der_equals_independent_measure():
    data = _exact_dataset()
    grid = DerivativeGridSpec((0.5, 2.0), 25)
    report = fit_regularized(data, FitConfig(n=2, m=1, lam=1e-6), grid)
    assert report.d_der == oscillation_measure(report.model, grid)


def test_regularized_default_grid_covers_data_interval():
    data = _exact_dataset(lo=0.3, hi=1.7)
    report = fit_regularized(data, FitConfig(n=2, m=1))
    assert report.d_der == oscillation_measure(
        report.model, DerivativeGridSpec((0.3, 1.7), 40)
    )


def test_substituted_fit_recovers_sqrt_shape():
    xs = np.linspace(0.0, 2.0, 9)
    data = Dataset(xs, np.sqrt(xs))
    report = fit_linearized(data, FitConfig(n=1, m=0, x_power=0.5))
    assert report.s <= 1e-20
    np.testing.assert_allclose(report.model.numer, (0.0, 1.0), atol=1e-10)


# -- exact interpolation ----------------------------------------------------


def test_two_point_line():
    refs = Dataset(np.array([0.0, 1.0]), np.array([1.0, 3.0]))
    report = interpolate_reference(refs, 1, 0)
    np.testing.assert_allclose(report.model.numer, (1.0, 2.0), rtol=1e-14)
    assert report.s <= 1e-24


def test_interpolation_passes_through_references():
    xs = np.linspace(0.5, 2.0, 4)
    refs = Dataset(xs, GEN(xs))
    report = interpolate_reference(refs, 2, 1)
    for x, f in zip(refs.x, refs.f):
        assert report.model(float(x)) == pytest.approx(f, rel=1e-9)


def test_overdetermined_consistent_references_stay_exact():
    # more references than free coefficients, but all on the same rational
    xs = np.linspace(0.5, 2.0, 8)
    refs = Dataset(xs, GEN(xs))
    report = interpolate_reference(refs, 2, 1)
    for x, f in zip(refs.x, refs.f):
        assert report.model(float(x)) == pytest.approx(f, rel=1e-9)


def test_too_few_references_raise():
    refs = Dataset(np.array([0.0, 1.0]), np.array([1.0, 3.0]))
    with pytest.raises(CountMismatch):
        interpolate_reference(refs, 2, 1)


def test_degenerate_reference_layout_raises():
    # all-zero ordinates null out the denominator column
    refs = Dataset(np.array([1.0, 2.0]), np.array([0.0, 0.0]))
    with pytest.raises(SingularSystem):
        interpolate_reference(refs, 0, 1)


def test_interpolation_metrics_use_evaluation_dataset():
    xs = np.linspace(0.5, 2.0, 4)
    refs = Dataset(xs, GEN(xs))
    full_x = np.linspace(0.5, 2.0, 20)
    full = Dataset(full_x, GEN(full_x))
    report = interpolate_reference(refs, 2, 1, evaluate_on=full)
    assert report.d <= 1e-9  # same generating rational everywhere


def test_interpolated_denominator_zero_marks_report():
    # the unique (0,1) model through these points is 1/(1 - x/2), which
    # blows up exactly at the evaluation abscissa x = 2
    refs = Dataset(np.array([1.0, 3.0]), np.array([2.0, -2.0]))
    full = Dataset(np.array([1.0, 2.0, 3.0]), np.array([2.0, 0.0, -2.0]))
    report = interpolate_reference(refs, 0, 1, evaluate_on=full)
    assert report.denominator_vanishes
    assert report.s == math.inf
    assert report.d == math.inf
    assert report.s0 < math.inf  # the cross-multiplied form stays finite


# -- reference-point construction -------------------------------------------


def test_averaged_reference_count_with_anchors():
    rng = np.random.default_rng(9)
    xs = np.sort(rng.uniform(0.01, 0.99, 45))
    data = Dataset(xs, rng.normal(size=45))
    refs = build_reference_points(data, 5, anchors=((0.0, 0.0), (1.0, 0.0)))
    assert len(refs) == 11
    assert refs.x[0] == 0.0 and refs.x[-1] == 1.0
    assert np.all(np.diff(refs.x) > 0)


def test_group_size_one_is_sorted_identity():
    data = Dataset(np.array([2.0, 0.5, 1.0]), np.array([4.0, 1.0, 2.0]))
    refs = build_reference_points(data, 1)
    np.testing.assert_array_equal(refs.x, [0.5, 1.0, 2.0])
    np.testing.assert_array_equal(refs.f, [1.0, 2.0, 4.0])


def test_group_means_match_direct_summation():
    rng = np.random.default_rng(10)
    xs = np.sort(rng.uniform(0.0, 1.0, 12))
    fs = rng.normal(size=12)
    refs = build_reference_points(Dataset(xs, fs), 4)
    assert len(refs) == 3
    for g in range(3):
        sl = slice(4 * g, 4 * (g + 1))
        assert refs.x[g] == pytest.approx(sum(xs[sl]) / 4, rel=1e-15)
        assert refs.f[g] == pytest.approx(sum(fs[sl]) / 4, rel=1e-15)


def test_partial_final_group_is_averaged_as_is():
    xs = np.arange(7, dtype=float)
    fs = xs * 2
    refs = build_reference_points(Dataset(xs, fs), 3)
    assert len(refs) == 3
    assert refs.x[-1] == 6.0  # lone trailing point averages to itself
    assert refs.f[-1] == 12.0


def test_anchor_replaces_matching_abscissa():
    xs = np.linspace(0.0, 1.0, 47)
    fs = np.sin(2 * math.pi * xs) + 0.01
    refs = build_reference_points(
        Dataset(xs, fs), 5, anchors=((0.0, 0.0), (1.0, 0.0))
    )
    # 45 interior points -> 9 group means, plus the two anchors
    assert len(refs) == 11
    assert refs.f[0] == 0.0 and refs.f[-1] == 0.0


def test_grouping_is_permutation_invariant():
    rng = np.random.default_rng(12)
    xs = rng.uniform(0.0, 1.0, 20)
    fs = rng.normal(size=20)
    a = build_reference_points(Dataset(xs, fs), 5)
    perm = rng.permutation(20)
    b = build_reference_points(Dataset(xs[perm], fs[perm]), 5)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.f, b.f)


def test_reference_points_keep_underlying():
    fn = np.sin
    data = Dataset(np.linspace(0.1, 1.0, 10), np.sin(np.linspace(0.1, 1.0, 10)), underlying=fn)
    refs = build_reference_points(data, 2)
    assert refs.underlying is fn
