import logging
from dataclasses import asdict
from typing import Any, Callable

from domain.detector_perf import (
    closed_form_operating_point,
    pf_of_gamma,
    roc_curve,
    threshold_for_pf_general,
)
from domain.efficiency import (
    are_from_reports,
    convergence_sweep,
    efficacy,
    gap_trend,
    re_are_report,
    relative_efficiency,
)
from domain.exceptions import ConfigurationError, IncomparableOrdersError
from domain.mc_oracle import approximation_audit, empirical_pf_pd
from domain.models import (
    ApproximationAuditReport,
    Command,
    DiffConfig,
    MCConfig,
    MomentAudit,
    OperatingPoint,
    OutputFormat,
    RunConfig,
    ScalingSchedule,
    TABULAR_COMMANDS,
)
from domain.validators import validate_run_config
from ports.detector_catalog import DetectorCatalog
from ports.result_storage import ResultStorage

ROC_ALPHAS = (0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)
# Detectors whose statistic is the likelihood-ratio T(x); they also get gamma'.
LIKELIHOOD_RATIO_DETECTORS = {"np", "np-exact"}


class RunCommandUseCase:
    """
    Use case for running one CLI command and storing its artifact.

    Resolves detectors through the catalog, calls the domain operations and
    hands the result to result storage.
    """

    def __init__(
        self,
        detector_catalog: DetectorCatalog,
        storage: ResultStorage,
        diff_config: DiffConfig = DiffConfig(),
        default_n: int = 1000,
        efficacy_n: int = 100_000,
        n_grid: tuple[int, ...] = (100, 1000, 10_000, 100_000),
        sweep_workers: int = 1,
    ):
        self.detector_catalog = detector_catalog
        self.storage = storage
        self.diff_config = diff_config
        self.default_n = default_n
        self.efficacy_n = efficacy_n
        self.n_grid = n_grid
        self.sweep_workers = sweep_workers
        self.logger = logging.getLogger(__name__)

    def execute(self, config: RunConfig) -> str:
        """
        Run the configured command and write its single output file.

        Args:
            config: Parsed run configuration.

        Returns:
            Path where the artifact was saved.
        """
        validate_run_config(config, self.detector_catalog.names())

        fmt = config.output_format
        if fmt is OutputFormat.CSV and config.command not in TABULAR_COMMANDS:
            raise ConfigurationError(
                f"csv output is only available for roc and converge, not {config.command.value}"
            )

        handlers: dict[Command, Callable[[RunConfig], str]] = {
            Command.ROC: self._roc,
            Command.THRESHOLD: self._threshold,
            Command.EFFICACY: self._efficacy,
            Command.ARE: self._are,
            Command.RE: self._re,
            Command.CONVERGE: self._converge,
            Command.MC_VALIDATE: self._mc_validate,
        }

        self.logger.info(f"Running {config.command.value}")
        output_path = handlers[config.command](config)
        self.logger.info(f"{config.command.value} finished: {output_path}")
        return output_path

    def _save(self, config: RunConfig, payload: dict[str, Any]) -> str:
        return self.storage.save_report(config.command.value, payload)

    def _roc(self, config: RunConfig) -> str:
        detector = self.detector_catalog.get(config.detector_a)
        n = config.n or self.default_n
        curve = roc_curve(config.model(), detector, n, ROC_ALPHAS)

        if config.output_format is OutputFormat.JSON:
            return self._save(
                config,
                {
                    "detector": detector.name,
                    "n": n,
                    "points": [{"alpha": a, "pd": pd} for a, pd in curve],
                },
            )
        return self.storage.save_table(["alpha", "pd"], curve)

    def _threshold(self, config: RunConfig) -> str:
        detector = self.detector_catalog.get(config.detector_a)
        model = config.model()
        n = config.n or self.default_n
        threshold, pf, pd = closed_form_operating_point(detector, model, n, config.alpha)

        payload: dict[str, Any] = {
            "detector": detector.name,
            "n": n,
            "alpha": config.alpha,
            "threshold": threshold,
            "pf": pf,
            "pd": pd,
        }
        if detector.name in LIKELIHOOD_RATIO_DETECTORS:
            gamma_prime = threshold_for_pf_general(model, n, config.alpha)
            payload["gamma_prime"] = gamma_prime
            payload["pf_of_gamma_prime"] = pf_of_gamma(model, n, gamma_prime)

        return self._save(config, payload)

    def _efficacy(self, config: RunConfig) -> str:
        detector = self.detector_catalog.get(config.detector_a)
        report = efficacy(
            detector, config.model(), config.n or self.efficacy_n, self.diff_config
        )
        return self._save(
            config,
            {"detector": detector.name, **asdict(report), "efficacy": report.efficacy},
        )

    def _are(self, config: RunConfig) -> str:
        det_a = self.detector_catalog.get(config.detector_a)
        det_b = self.detector_catalog.get(config.detector_b)
        n = config.n or self.efficacy_n
        report_a = efficacy(det_a, config.model(), n, self.diff_config)
        report_b = efficacy(det_b, config.model(), n, self.diff_config)

        return self._save(
            config,
            {
                "detector_a": det_a.name,
                "detector_b": det_b.name,
                "are": are_from_reports(report_a, report_b),
                "nu": report_a.nu,
                "sqrt_efficacy_a": report_a.sqrt_efficacy,
                "sqrt_efficacy_b": report_b.sqrt_efficacy,
            },
        )

    def _re(self, config: RunConfig) -> str:
        det_a = self.detector_catalog.get(config.detector_a)
        det_b = self.detector_catalog.get(config.detector_b)
        model = config.model()
        op_point = OperatingPoint(alpha=config.alpha, beta=config.beta)

        try:
            report = re_are_report(
                det_a, det_b, model, op_point, config.n_max,
                self.diff_config, self.efficacy_n, config.fractional,
            )
        except IncomparableOrdersError as e:
            self.logger.warning(f"{e}; reporting RE only")
            report = relative_efficiency(
                det_a, det_b, model, op_point, config.n_max, config.fractional
            )

        return self._save(
            config,
            {"detector_a": det_a.name, "detector_b": det_b.name, **asdict(report)},
        )

    def _converge(self, config: RunConfig) -> str:
        det_a = self.detector_catalog.get(config.detector_a)
        det_b = self.detector_catalog.get(config.detector_b)
        schedule = ScalingSchedule(
            c_mu=config.c_mu,
            c_var=config.c_var,
            var_exponent=config.var_exponent,
            sigma0_sq=config.sigma0_sq,
            mu_exponent=config.mu_exponent,
        )

        records = convergence_sweep(
            det_a,
            det_b,
            schedule,
            config.alpha,
            config.beta,
            config.n_grid or self.n_grid,
            self.diff_config,
            n_max=config.n_max,
            efficacy_n=self.efficacy_n,
            fractional=config.fractional,
            max_workers=self.sweep_workers,
        )

        failed = sum(r.failed for r in records)
        if failed:
            self.logger.warning(f"{failed} of {len(records)} grid points failed")

        if config.output_format is OutputFormat.JSON:
            return self._save(
                config,
                {
                    "detector_a": det_a.name,
                    "detector_b": det_b.name,
                    "gap_non_increasing": gap_trend(records),
                    "records": [asdict(r) for r in records],
                },
            )
        return self.storage.save_records(records)

    def _mc_validate(self, config: RunConfig) -> str:
        detector = self.detector_catalog.get(config.detector_a)
        model = config.model()
        n = config.n or self.default_n
        mc_config = MCConfig(
            trials=config.trials, seed=config.seed, batch_size=config.batch_size
        )

        threshold, _, pd_expected = closed_form_operating_point(
            detector, model, n, config.alpha
        )
        pf, pd = empirical_pf_pd(model, detector, n, threshold, mc_config)
        payload: dict[str, Any] = {
            "detector": detector.name,
            "n": n,
            "alpha": config.alpha,
            "threshold": threshold,
            "seed": config.seed,
            "pf": asdict(pf),
            "pd": asdict(pd),
            "pd_closed_form": pd_expected,
        }

        if n >= 2:
            payload["audit"] = _audit_payload(approximation_audit(model, n, mc_config))

        return self._save(config, payload)


def _moment_audit_payload(audit: MomentAudit) -> dict[str, float]:
    return {
        **asdict(audit),
        "mean_gap_sd": audit.mean_gap_sd,
        "var_gap_rel": audit.var_gap_rel,
        "mean_z": audit.mean_z,
        "var_z": audit.var_z,
        "exact_mean_z": audit.exact_mean_z,
        "exact_var_z": audit.exact_var_z,
    }


def _audit_payload(report: ApproximationAuditReport) -> dict[str, Any]:
    return {
        "n": report.n,
        "trials": report.trials,
        "h0": _moment_audit_payload(report.h0),
        "h1": _moment_audit_payload(report.h1),
        "max_cdf_gap": report.max_cdf_gap,
    }
