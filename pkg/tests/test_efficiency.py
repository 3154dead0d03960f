"""
Tests for efficacy, ARE, relative efficiency and the RE/ARE bridge formula.
"""

import math

import numpy as np
import pytest

from domain.detector_perf import pd_closed_form
from domain.efficiency import (
    are,
    are_from_reports,
    convergence_sweep,
    efficacy,
    gap_trend,
    h1_mean_as_function_of_s,
    re_are_report,
    re_are_rhs,
    relative_efficiency,
    required_sample_size,
    required_sample_size_continuous,
    taylor_remainder,
    u_term,
    u_term_report,
)
from domain.exceptions import (
    DomainError,
    EfficacyInstabilityError,
    IncomparableOrdersError,
    NoNonzeroDerivativeError,
    SampleSizeExceededError,
)
from domain.models import (
    ConvergenceRecord,
    DetectorSpec,
    EfficacyReport,
    GaussianSignalModel,
    OperatingPoint,
    ScalingSchedule,
)


def _synthetic_detector(mean_h1, name: str = "synthetic") -> DetectorSpec:
    return DetectorSpec(
        name=name,
        statistic=lambda x, m: float(np.sum(x)),
        mean_h0=lambda n, m: 0.0,
        mean_h1=mean_h1,
        var_h0=lambda n, m: float(n),
        var_h1=lambda n, m: float(n),
    )


def _np_sqrt_efficacy(sigma0_sq: float, sigma1_sq: float) -> float:
    return math.sqrt(2.0) * ((sigma0_sq + sigma1_sq) + 2 * sigma0_sq / sigma1_sq) / sigma0_sq


class TestEfficacy:
    """Tests for h1_mean_as_function_of_s and efficacy."""

    def test_np_mean_function(self, np_detector: DetectorSpec, unit_model: GaussianSignalModel):
        mean_fn = h1_mean_as_function_of_s(np_detector, unit_model, 100)
        assert mean_fn(0.0) == 200.0
        assert mean_fn(0.5) == pytest.approx(200.0 + 100 * 0.25 * 4.0)

    def test_np_unit_variances(self, np_detector: DetectorSpec, unit_model: GaussianSignalModel):
        report = efficacy(np_detector, unit_model, 100_000)
        assert report.nu == 2
        assert report.sqrt_efficacy == pytest.approx(4 * math.sqrt(2), rel=1e-6)
        assert report.derivative == pytest.approx(8.0, rel=1e-6)
        assert report.n_used == 100_000

    def test_energy_unit_variances(self, energy: DetectorSpec, unit_model: GaussianSignalModel):
        report = efficacy(energy, unit_model, 100_000)
        assert report.nu == 2
        assert report.sqrt_efficacy == pytest.approx(math.sqrt(2), rel=1e-6)

    def test_linear_unit_variances(self, linear: DetectorSpec, unit_model: GaussianSignalModel):
        report = efficacy(linear, unit_model, 100_000)
        assert report.nu == 1
        assert report.sqrt_efficacy == pytest.approx(1.0, rel=1e-6)

    @pytest.mark.parametrize("sigma0_sq", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("sigma1_sq", [0.5, 1.0, 2.0])
    def test_closed_forms(
        self, np_detector: DetectorSpec, energy: DetectorSpec, sigma0_sq: float, sigma1_sq: float
    ):
        model = GaussianSignalModel(sigma0_sq=sigma0_sq, sigma1_sq=sigma1_sq)
        np_report = efficacy(np_detector, model)
        energy_report = efficacy(energy, model)

        assert (np_report.nu, energy_report.nu) == (2, 2)
        assert np_report.sqrt_efficacy == pytest.approx(_np_sqrt_efficacy(sigma0_sq, sigma1_sq), rel=1e-5)
        assert energy_report.sqrt_efficacy == pytest.approx(math.sqrt(2) / sigma0_sq, rel=1e-5)

    @pytest.mark.parametrize("name", ["np_detector", "energy", "linear", "np_exact"])
    def test_independent_of_n(self, request, name: str):
        detector = request.getfixturevalue(name)
        model = GaussianSignalModel(sigma0_sq=1.5, sigma1_sq=0.7)
        at_n = efficacy(detector, model, 1000).sqrt_efficacy
        at_2n = efficacy(detector, model, 2000).sqrt_efficacy
        assert at_2n == pytest.approx(at_n, rel=1e-9)

    def test_flat_mean_has_no_order(self, unit_model: GaussianSignalModel):
        flat = _synthetic_detector(lambda n, m: 1.0)
        with pytest.raises(NoNonzeroDerivativeError):
            efficacy(flat, unit_model, 100)

    def test_n_dependent_efficacy_is_unstable(self, unit_model: GaussianSignalModel):
        growing = _synthetic_detector(lambda n, m: n**1.5 * m.mu1**2)
        with pytest.raises(EfficacyInstabilityError):
            efficacy(growing, unit_model, 100)


class TestAre:
    """Tests for asymptotic relative efficiency."""

    def test_np_versus_energy(
        self, np_detector: DetectorSpec, energy: DetectorSpec, unit_model: GaussianSignalModel
    ):
        assert are(np_detector, energy, unit_model) == pytest.approx(16.0, rel=1e-6)

    @pytest.mark.parametrize("name", ["np_detector", "energy", "linear"])
    def test_self_comparison(self, request, name: str, unit_model: GaussianSignalModel):
        detector = request.getfixturevalue(name)
        assert are(detector, detector, unit_model) == 1.0

    def test_reciprocal(self, np_detector: DetectorSpec, energy: DetectorSpec):
        model = GaussianSignalModel(sigma0_sq=2.0, sigma1_sq=0.5)
        product = are(np_detector, energy, model) * are(energy, np_detector, model)
        assert product == pytest.approx(1.0, abs=1e-9)

    def test_different_orders_are_incomparable(
        self, np_detector: DetectorSpec, linear: DetectorSpec, unit_model: GaussianSignalModel
    ):
        with pytest.raises(IncomparableOrdersError, match="incomparable orders"):
            are(np_detector, linear, unit_model)

    def test_from_reports(self):
        """ARE is the squared ratio of the square-root efficacies."""
        report_a = EfficacyReport(nu=2, derivative=8.0, sqrt_efficacy=3.0, n_used=1000)
        report_b = EfficacyReport(nu=2, derivative=2.0, sqrt_efficacy=1.5, n_used=1000)
        assert are_from_reports(report_a, report_b) == pytest.approx(4.0)

    def test_from_reports_checks_orders(self):
        report_a = EfficacyReport(nu=1, derivative=1.0, sqrt_efficacy=1.0, n_used=1000)
        report_b = EfficacyReport(nu=2, derivative=1.0, sqrt_efficacy=1.0, n_used=1000)
        with pytest.raises(IncomparableOrdersError) as excinfo:
            are_from_reports(report_a, report_b)
        assert (excinfo.value.nu_a, excinfo.value.nu_b) == (1, 2)


class TestRequiredSampleSize:
    """Tests for the closed-form sample-size search."""

    def test_target_just_above_alpha(self, np_detector: DetectorSpec, unit_model: GaussianSignalModel):
        op_point = OperatingPoint(alpha=0.1, beta=0.100001)
        assert required_sample_size(np_detector, unit_model, op_point) == 1

    def test_monotone_in_beta(self, np_detector: DetectorSpec, weak_signal_model: GaussianSignalModel):
        low = required_sample_size(np_detector, weak_signal_model, OperatingPoint(0.1, 0.5))
        high = required_sample_size(np_detector, weak_signal_model, OperatingPoint(0.1, 0.9))
        assert high >= low

    def test_returns_left_most_crossing(self, np_detector: DetectorSpec, op_point: OperatingPoint):
        model = GaussianSignalModel(sigma0_sq=1.0, mu1=0.05, sigma1_sq=0.01)
        n = required_sample_size(np_detector, model, op_point)
        assert pd_closed_form(model, np_detector, n, 0.1) >= 0.9
        assert pd_closed_form(model, np_detector, n - 1, 0.1) < 0.9

    def test_unattainable_target(self, energy: DetectorSpec, op_point: OperatingPoint):
        model = GaussianSignalModel(sigma0_sq=1.0, sigma1_sq=1e-4)
        with pytest.raises(SampleSizeExceededError) as exc_info:
            required_sample_size(energy, model, op_point, n_max=100)
        assert exc_info.value.n_max == 100
        assert exc_info.value.pd_at_n_max < 0.9

    def test_continuous_size_lies_below_integer(
        self, np_detector: DetectorSpec, weak_signal_model: GaussianSignalModel, op_point: OperatingPoint
    ):
        n_int = required_sample_size(np_detector, weak_signal_model, op_point)
        n_cont = required_sample_size_continuous(np_detector, weak_signal_model, op_point)
        assert n_int - 1 < n_cont <= n_int
        assert pd_closed_form(weak_signal_model, np_detector, n_cont, 0.1) == pytest.approx(0.9, abs=1e-8)


class TestRelativeEfficiency:
    """Tests for finite-sample relative efficiency."""

    @pytest.mark.parametrize("name", ["np_detector", "energy", "linear"])
    def test_self_comparison_is_exactly_one(
        self, request, name: str, weak_signal_model: GaussianSignalModel, op_point: OperatingPoint
    ):
        detector = request.getfixturevalue(name)
        report = relative_efficiency(detector, detector, weak_signal_model, op_point)
        assert report.re == 1.0
        assert report.n_a == report.n_b

    def test_np_equals_energy_without_signal_mean(
        self, np_detector: DetectorSpec, energy: DetectorSpec, op_point: OperatingPoint
    ):
        model = GaussianSignalModel(sigma0_sq=1.0, sigma1_sq=0.5)
        assert relative_efficiency(np_detector, energy, model, op_point).re == 1.0

    def test_energy_needs_more_samples(
        self,
        np_detector: DetectorSpec,
        energy: DetectorSpec,
        weak_signal_model: GaussianSignalModel,
        op_point: OperatingPoint,
    ):
        report = relative_efficiency(np_detector, energy, weak_signal_model, op_point)
        assert report.re > 1.0
        assert report.re == report.n_b / report.n_a

    def test_fractional_sizes(
        self,
        np_detector: DetectorSpec,
        energy: DetectorSpec,
        weak_signal_model: GaussianSignalModel,
        op_point: OperatingPoint,
    ):
        report = relative_efficiency(
            np_detector, energy, weak_signal_model, op_point, fractional=True
        )
        assert report.fractional
        assert report.n_a != int(report.n_a)


class TestBridgeFormula:
    """Tests for the Taylor remainder, U and the bridge right-hand side."""

    @pytest.mark.parametrize("name", ["np_detector", "energy"])
    def test_quadratic_means_have_no_remainder(self, request, name: str):
        detector = request.getfixturevalue(name)
        model = GaussianSignalModel(sigma0_sq=1.3, sigma1_sq=0.8)
        mean_fn = h1_mean_as_function_of_s(detector, model, 100)
        for s in np.random.default_rng(5).uniform(-1.0, 1.0, 20):
            remainder = taylor_remainder(detector, model, 100, float(s), 2)
            assert abs(remainder) <= 1e-9 * abs(mean_fn(float(s)))

    def test_cubic_remainder(self, unit_model: GaussianSignalModel):
        cubic = _synthetic_detector(lambda n, m: n * (m.mu1**2 + m.mu1**3))
        assert taylor_remainder(cubic, unit_model, 10, 0.3, 2) == pytest.approx(10 * 0.3**3, rel=1e-6)

    def test_u_vanishes_for_identical_inputs(
        self, np_detector: DetectorSpec, unit_model: GaussianSignalModel
    ):
        model = unit_model.with_mu1(0.1)
        value = u_term(np_detector, np_detector, model, model, 500, 500, 0.1, 0.1, 2)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_u_rejects_zero_s(self, np_detector: DetectorSpec, energy: DetectorSpec, unit_model: GaussianSignalModel):
        with pytest.raises(DomainError):
            u_term(np_detector, energy, unit_model, unit_model, 10, 10, 0.1, 0.0, 2)

    def test_u_is_quantile_part_for_quadratic_means(
        self, np_detector: DetectorSpec, energy: DetectorSpec, unit_model: GaussianSignalModel
    ):
        model = unit_model.with_mu1(0.1)
        report = u_term_report(np_detector, energy, model, model, 10_000, 10_000, 0.1, 0.1, 2)
        assert math.isfinite(report.u)
        assert abs(report.remainder_part) < 1e-4 * abs(report.quantile_part)
        assert report.u == report.quantile_part + report.remainder_part

    def test_quantile_part_shrinks_along_schedule(
        self, np_detector: DetectorSpec, energy: DetectorSpec, unit_model: GaussianSignalModel
    ):
        magnitudes = []
        for n in (100, 1000, 10_000, 100_000):
            s = 0.5 * n ** -0.25
            model = unit_model.with_mu1(s)
            report = u_term_report(np_detector, energy, model, model, n, n, 0.1, s, 2)
            magnitudes.append(abs(report.quantile_part))
        assert all(b < a for a, b in zip(magnitudes, magnitudes[1:]))

    def test_rhs_identities(self):
        assert re_are_rhs(1.0, 16.0, 0.0) == 16.0
        assert re_are_rhs(1.0, 1.0, 0.5) == 4.0

    @pytest.mark.parametrize("u", [1.0, 1.5])
    def test_rhs_rejects_u_at_least_one(self, u: float):
        with pytest.raises(DomainError):
            re_are_rhs(1.0, 1.0, u)

    def test_report_for_identical_detectors(
        self, energy: DetectorSpec, weak_signal_model: GaussianSignalModel, op_point: OperatingPoint
    ):
        report = re_are_report(energy, energy, weak_signal_model, op_point, efficacy_n=1000)
        assert report.re == 1.0
        assert report.are == 1.0
        assert report.u == 0.0
        assert report.variance_ratio == 1.0
        assert report.rhs == 1.0

    def test_report_without_signal_mean_skips_bridge(
        self, np_detector: DetectorSpec, energy: DetectorSpec, op_point: OperatingPoint
    ):
        model = GaussianSignalModel(sigma0_sq=1.0, sigma1_sq=0.5)
        report = re_are_report(np_detector, energy, model, op_point, efficacy_n=1000)
        assert report.are == pytest.approx(are(np_detector, energy, model, 1000))
        assert report.u is None
        assert report.rhs is None


class TestConvergenceSweep:
    """Tests for the RE-vs-ARE convergence sweep."""

    def test_identical_detectors(self, np_detector: DetectorSpec):
        schedule = ScalingSchedule(c_mu=0.5)
        records = convergence_sweep(
            np_detector, np_detector, schedule, 0.1, 0.9, [100, 1000], efficacy_n=1000
        )
        assert len(records) == 2
        for record in records:
            assert (record.re, record.rhs, record.relative_gap) == (1.0, 1.0, 0.0)

    def test_single_grid_point(self, np_detector: DetectorSpec, energy: DetectorSpec):
        schedule = ScalingSchedule(c_mu=0.5)
        records = convergence_sweep(np_detector, energy, schedule, 0.1, 0.9, [1000], efficacy_n=1000)
        assert len(records) == 1
        assert records[0].mu1 == pytest.approx(0.5 * 1000 ** -0.25)

    def test_np_versus_energy_gaps_are_finite(self, np_detector: DetectorSpec, energy: DetectorSpec):
        schedule = ScalingSchedule(c_mu=0.5)
        records = convergence_sweep(
            np_detector, energy, schedule, 0.1, 0.9, [1000, 10_000, 100_000]
        )
        for record in records:
            assert not record.failed
            assert math.isfinite(record.relative_gap)
            assert record.are == pytest.approx(16.0, rel=1e-6)

    def test_np_versus_energy_gap_rises_toward_limit(self, np_detector: DetectorSpec, energy: DetectorSpec):
        """
        With sigma1_sq held fixed both sizes stay near 30, so RE tends to 1
        while the right-hand side stays near ARE = 16. The gap climbs to 15/16.
        """
        schedule = ScalingSchedule(c_mu=0.5)
        records = convergence_sweep(
            np_detector, energy, schedule, 0.1, 0.9, [1000, 10_000, 100_000]
        )
        gaps = [record.relative_gap for record in records]

        assert not gap_trend(records)
        assert gaps == sorted(gaps)
        assert gaps == pytest.approx([15 / 16] * 3, abs=0.01)
        for record in records:
            assert record.re == pytest.approx(1.0, abs=0.1)

    def test_failed_point_does_not_abort(self, np_detector: DetectorSpec, energy: DetectorSpec):
        schedule = ScalingSchedule(c_mu=0.5)
        records = convergence_sweep(
            np_detector, energy, schedule, 0.1, 0.9, [100, 1000], n_max=1, efficacy_n=1000
        )
        assert all(record.failed for record in records)
        assert all(math.isnan(record.relative_gap) for record in records)

    def test_parallel_execution_preserves_order(self, np_detector: DetectorSpec, energy: DetectorSpec):
        schedule = ScalingSchedule(c_mu=0.5)
        grid = [100, 1000, 10_000]
        serial = convergence_sweep(np_detector, energy, schedule, 0.1, 0.9, grid, efficacy_n=1000)
        parallel = convergence_sweep(
            np_detector, energy, schedule, 0.1, 0.9, grid, efficacy_n=1000, max_workers=3
        )
        assert serial == parallel

    def test_gap_trend_ignores_failed_records(self):
        def record(gap: float) -> ConvergenceRecord:
            re = math.nan if math.isnan(gap) else 1.0
            return ConvergenceRecord(1.0, 1.0, 0.1, 1.0, re, 1.0, 0.0, 1.0, gap)

        assert gap_trend([record(0.5), record(math.nan), record(0.4)])
        assert not gap_trend([record(0.4), record(0.5)])
