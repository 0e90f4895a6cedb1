"""Numerical defaults and fixed model constants."""

# Grid
DEFAULT_BOX_LENGTH = 200.0

# Time stepping
DEFAULT_DT = 0.05
DEFAULT_STRIDE = 10

# Model parameters (a = 1, omega = 1/2 and mu = nu = 1, lambda = 0 are fixed)
DEFAULT_GAMMA = 1.5
DEFAULT_B = 0.0
DEFAULT_RHO_FLOOR = 0.5

# Diagnostics
DEFAULT_ETA = 0.01
DEFAULT_C2 = 1.0
DEFAULT_M_SIGMA = 1.0
N_TRACKER_WEIGHT_EXPONENT = 0.5
MIN_FIT_SAMPLES = 8
SATURATION_FRACTION = 0.3
ENERGY_BALANCE_REL_TOL = 1e-8
INEQUALITY_REL_TOL = 1e-6

# Initial data
DEFAULT_SEED = 20240901
DEFAULT_AMPLITUDE = 1e-2
DEFAULT_CUTOFF = 1.0
DEFAULT_TAIL_EXPONENT = 4.0

# Linear algebra
PHI_SERIES_RADIUS = 0.5
PHI_SERIES_TERMS = 24
LINEAR_VERIFY_TOL = 1e-8

# Littlewood-Paley annulus
LP_INNER_RADIUS = 0.75
LP_OUTER_RADIUS = 8.0 / 3.0
