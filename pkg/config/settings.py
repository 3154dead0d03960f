import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# Directory for emitted artifacts when no --output path is given
DETECTION_OUTPUT_DIR = os.getenv("DETECTION_OUTPUT_DIR", str(BASE_DIR / "results"))

# Operating-point defaults
DEFAULT_ALPHA = float(os.getenv("DEFAULT_ALPHA", "0.1"))
DEFAULT_BETA = float(os.getenv("DEFAULT_BETA", "0.9"))
DEFAULT_N = int(os.getenv("DEFAULT_N", "1000"))

# Sample-size search and efficacy limit
SEARCH_N_MAX = int(os.getenv("SEARCH_N_MAX", "10000000"))
EFFICACY_N = int(os.getenv("EFFICACY_N", "100000"))

# Monte Carlo oracle
MC_TRIALS = int(os.getenv("MC_TRIALS", "100000"))
MC_SEED = int(os.getenv("MC_SEED", "20240521"))
MC_BATCH_SIZE = int(os.getenv("MC_BATCH_SIZE", "500"))

# Convergence sweep
SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "1"))
DEFAULT_N_GRID = tuple(
    int(n) for n in os.getenv("DEFAULT_N_GRID", "100,1000,10000,100000").split(",")
)
