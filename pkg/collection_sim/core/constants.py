"""
Simulation-wide constants and calibration values.

This module centralizes scenario profiles, dynamics calibration, output
formats and numeric tolerances so that the simulator, harness and CLI
agree on a single set of values.
"""

# ============================================================================
# VERSION INFORMATION
# ============================================================================

APP_VERSION = "1.0.0"


# ============================================================================
# ALGORITHMS
# ============================================================================

ALGORITHM_SINGLE_PATH = "sp"
ALGORITHM_MULTI_PATH = "mp"
ALGORITHM_WEIGHTED = "wmp"

# Canonical order, used for CSV sorting and table output
ALGORITHMS = (ALGORITHM_SINGLE_PATH, ALGORITHM_MULTI_PATH, ALGORITHM_WEIGHTED)

POTENTIAL_ORACLE = "oracle"
POTENTIAL_BELLMAN_FORD = "bellman-ford"
POTENTIAL_MODES = (POTENTIAL_ORACLE, POTENTIAL_BELLMAN_FORD)

# How a receiver decides it takes inflow from an uphill neighbour:
# "named" needs the sender's exported routing metadata to name it,
# "claimed" evaluates the sender's exported potential, count and weight
# total locally, the way aggregate programs read neighbour values
FLOW_NAMED = "named"
FLOW_CLAIMED = "claimed"
FLOW_RULES = (FLOW_NAMED, FLOW_CLAIMED)


# ============================================================================
# SCENARIO PROFILES
# ============================================================================

# Full evaluation scenario: 1000 devices in a 200m x 20m corridor
FULL_PROFILE = {
    "device_count": 1000,
    "corridor_length": 200.0,
    "corridor_width": 20.0,
    "radius": 10.0,
    "mean_period": 1.0,
    "duration": 400.0,
    "source_switch": 200.0,
    "seed_count": 100,
    "sweep": (0.0, 1.0, 21),
}

# Laptop-sized scenario with the same radius and timing
DESK_PROFILE = {
    "device_count": 250,
    "corridor_length": 100.0,
    "corridor_width": 10.0,
    "radius": 10.0,
    "mean_period": 1.0,
    "duration": 400.0,
    "source_switch": 200.0,
    "seed_count": 10,
    "sweep": (0.0, 1.0, 5),
}

PROFILES = {"desk": DESK_PROFILE, "paper": FULL_PROFILE}


# ============================================================================
# DYNAMICS CALIBRATION
# ============================================================================

# Waypoint speed in m/s at variability 1 (scaled linearly by variability)
SPEED_SCALE = 5.0

# Per-round probability of a long-range move at variability 1
TELEPORT_RATE = 0.01

# Half-width of the rate multiplier / jitter interval at variability 1,
# i.e. factors are drawn from [1 - 0.5 v, 1 + 0.5 v]
JITTER_HALF_WIDTH = 0.5

# Neighbour exports older than this many mean periods are discarded
STALENESS_PERIODS = 2.5


# ============================================================================
# SAMPLING & OUTPUT
# ============================================================================

# Sampling cadence at the source, in simulated seconds
SAMPLE_INTERVAL_SECONDS = 1

SAMPLE_CSV_HEADER = ["algorithm", "variability", "seed", "time_s", "value", "true_count"]

SUMMARY_CSV_HEADER = [
    "algorithm",
    "variability",
    "mean_value",
    "mean_abs_rel_error",
    "window_start",
    "window_end",
]


# ============================================================================
# NUMERIC TOLERANCES
# ============================================================================

# Allowed deviation of a non-empty share map from 1
SHARE_SUM_TOLERANCE = 1e-9

# Two co-located devices still get a strictly positive link length
MIN_LINK_DISTANCE = 1e-12


# ============================================================================
# EXIT CODES
# ============================================================================

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2
