"""
Configuration settings for the theta-rank normality checker.
"""
import math

# Absolute truncation error allowed per theta value
DEFAULT_SERIES_TOL = 1e-12

# Numeric rank thresholds, all relative to the largest singular value:
# rank counts sigma_i > RANK_TOL * sigma_1; the gap sigma_n / sigma_1 decides
# full (> ACCEPT_GAP), deficient (< REJECT_GAP) or ambiguous (in between).
DEFAULT_RANK_TOL = 1e-8
DEFAULT_ACCEPT_GAP = 1e-6
DEFAULT_REJECT_GAP = 1e-10

# Slack factor on the per-entry error budget when testing exact identities
DEFAULT_ZERO_SLACK = 10.0

# Smallest eigenvalue of Im(Z) we are willing to sum over
MIN_LAMBDA = 0.05

# Hard cap on the cube half-width of a lattice sum
MAX_RADIUS = 64

# Entries per vectorised block when summing the full lattice (memory bound)
DIRECT_CHUNK_TERMS = 2_000_000

# Period matrices used for the g=3 and g=4 tables: Z = X + k*Id
TABLE_K = complex(1.0, math.sqrt(1.0 / 3.0))
PRESETS = {
    "paper-g3": {
        "g": 3,
        "X": [[0, 0, 1],
              [0, 0, 2],
              [1, 2, 0]],
        "k": TABLE_K,
    },
    "paper-g4": {
        "g": 4,
        "X": [[0, 0, 0, 1],
              [0, 0, 0, 2],
              [0, 0, 0, 3],
              [1, 2, 3, 0]],
        "k": TABLE_K,
    },
}

# Alternative names accepted for the presets above
PRESET_ALIASES = {
    "table-g3": "paper-g3",
    "table-g4": "paper-g4",
}

# Random period points: Z = S + i(A^T A + Id), entries of S and A uniform in [-1, 1]
DEFAULT_SEED = 20240101
STRUCTURAL_SAMPLES = 3
INVARIANT_SAMPLES = 100

# Escalation for ambiguous rank reports
ESCALATION_TOL_FACTOR = 1e-3
ESCALATION_DPS = 32
# A deficient gap at or above this is confirmed at the escalated tier before it is accepted
ROUNDING_GAP = 1e-13

# Conjecture evidence defaults
CONJECTURE_MAX_G = 5
CONJECTURE_D_SPAN = 8

# Scan workers
DEFAULT_JOBS = 1

# Ask before scans estimated to need more theta values than this
CONFIRM_ENTRY_THRESHOLD = 5_000_000

# Report formats
SUPPORTED_FORMATS = ("json", "csv")
FLOAT_DIGITS = 17

# Process exit codes
EXIT_OK = 0
EXIT_AMBIGUOUS = 1
EXIT_INVARIANT_FAILURE = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4

# Types whose published exception lists disagree with each other
LISTING_DISCREPANCIES = {
    (1, 2, 4, 4): "fail1 type (d_2 = 2, all d_j <= 4) that some published g=4 exception lists omit; treated as fail1",
}
