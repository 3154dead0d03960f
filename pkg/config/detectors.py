from domain.detector_perf import (
    energy_detector,
    linear_detector,
    np_exact_detector,
    np_random_signal_detector,
)

DETECTORS = {
    "np": np_random_signal_detector,
    "energy": energy_detector,
    "linear": linear_detector,
    "np-exact": np_exact_detector,
}
