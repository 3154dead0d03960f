"""
Pytest fixtures for detection toolkit tests.
"""

import pytest

from adapters.storage.csv_writer import CSVWriter
from domain.detector_perf import (
    energy_detector,
    linear_detector,
    np_exact_detector,
    np_random_signal_detector,
)
from domain.models import (
    ConvergenceRecord,
    DetectorSpec,
    GaussianSignalModel,
    MCConfig,
    OperatingPoint,
)


@pytest.fixture
def unit_model() -> GaussianSignalModel:
    """sigma0_sq = sigma1_sq = 1, zero means."""
    return GaussianSignalModel(mu0=0.0, sigma0_sq=1.0, mu1=0.0, sigma1_sq=1.0)


@pytest.fixture
def weak_signal_model() -> GaussianSignalModel:
    """Small-variance signal with a nonzero mean."""
    return GaussianSignalModel(mu0=0.0, sigma0_sq=1.0, mu1=0.2, sigma1_sq=0.04)


@pytest.fixture
def np_detector() -> DetectorSpec:
    return np_random_signal_detector()


@pytest.fixture
def np_exact() -> DetectorSpec:
    return np_exact_detector()


@pytest.fixture
def energy() -> DetectorSpec:
    return energy_detector()


@pytest.fixture
def linear() -> DetectorSpec:
    return linear_detector()


@pytest.fixture
def op_point() -> OperatingPoint:
    return OperatingPoint(alpha=0.1, beta=0.9)


@pytest.fixture
def small_mc_config() -> MCConfig:
    """Cheap Monte Carlo settings for plumbing tests."""
    return MCConfig(trials=400, seed=7, batch_size=64)


@pytest.fixture
def sample_records() -> list[ConvergenceRecord]:
    """Two sweep rows with awkward floats and one failed row."""
    nan = float("nan")
    return [
        ConvergenceRecord(
            n_a=29.0, n_b=30.0, mu1=0.1581138830084190, sigma1_sq=1.0,
            re=30.0 / 29.0, are=16.000000000000004, u=0.1, rhs=16.0 / 0.81,
            relative_gap=0.9353,
        ),
        ConvergenceRecord(
            n_a=29.0, n_b=29.0, mu1=0.1, sigma1_sq=1.0,
            re=1.0, are=15.999999999999996, u=-1e-300, rhs=1.0 / 3.0,
            relative_gap=2.0,
        ),
        ConvergenceRecord(
            n_a=nan, n_b=nan, mu1=0.05, sigma1_sq=1.0,
            re=nan, are=nan, u=nan, rhs=nan, relative_gap=nan,
        ),
    ]


@pytest.fixture
def csv_writer() -> CSVWriter:
    """CSVWriter instance for testing."""
    return CSVWriter()
