# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# templates.py
# Configuration module: default orders, tolerances, scan windows, report columns and CLI tables

# Spline orders
MAX_ORDER = 10          # largest B-spline order accepted by bspline()
MAX_ROOT_ORDER = 8      # Euler-Frobenius roots are asserted inside (0,1) up to this order

# Truncation of the geometric tails of phi / psi
DEFAULT_TOL = 1e-12
MIN_TOL = 1e-15         # below this the tail bound drowns in double rounding

# Dyadic breakpoints: largest admissible log2 of a denominator
MAX_LOG2_DEN = 60

# Riemann-Liouville images: evaluation window around the support of the argument
RL_WINDOW = 64

# Criteria windows
TAU_WINDOW = 512        # |tau| <= TAU_WINDOW in every sup
SERIES_WINDOW = 4096    # number of terms kept in each series over r
D_MAX = 20              # largest level scanned in sup over d
CONVERGENCE_REL = 0.01  # doubling both windows must move the value by less than this
DIVERGENCE_RATIO = 0.99 # last dyadic block of a series at least this share of the previous one: divergence
CHUNK_CELLS = 1 << 21   # series terms held in memory at once
GROWTH_PERSISTENCE = 0.9  # level profile: growth factor keeping this share of its excess counts as geometric
EPSILON_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

# Verdict labels
CONVERGED = "converged"
INCONCLUSIVE = "inconclusive"
DIVERGING = "diverging"
PASS = "PASS"
FAIL = "FAIL"

# Equivalence constants of the criteria-vs-empirics comparison
K_LO = 16.0
K_HI = 16.0
TAIL_SLACK = 0.0

# Weights: quadrature accuracy and Muckenhoupt scan defaults
QUAD_REL_TOL = 1e-10
QUAD_LIMIT = 200
SCAN_D_MAX = 8          # dyadic intervals Q_{d tau}, d <= SCAN_D_MAX
SCAN_TAU_SPAN = 20      # |tau| <= 2^d * SCAN_TAU_SPAN
SCAN_MAX_INTERVALS = 50000
RHO_MAX = 16.0          # upper end of the r_w bisection
RW_CAP = 1e6            # a scan estimate above this counts as "not in the class"
RW_BISECTION_STEPS = 30
USL_FACTOR = 4.0        # averaging condition: interval mass within this factor of the midpoint value

# Harness defaults
FAMILY_SIZE = 50
DEFAULT_SEED = 20250101
HSTAR_LEVEL = 2
HARNESS_D_MAX = 5       # last wavelet level of the empirical norm estimates
HARNESS_WINDOW = 8      # length of the interval random members live in
RANDOM_TERMS = 3        # B-splines per random member, at most
RANDOM_MAX_LEVEL = 2    # dilation levels of random members, 0..RANDOM_MAX_LEVEL
EXTREMAL_R = (2, 4, 8)  # truncations R of the f* / g* members added to verification families
RW_SCAN_D_MAX = 4       # reduced Muckenhoupt scan used for r_w inside verification
RW_SCAN_TAU_SPAN = 16
SUPPORT_ATOL = 1e-9     # coefficients below this share of the largest one count as zero

# Report schema
SCHEMA_VERSION = 1

# Columns of emitted CSV tables.
# Must be updated synchronously with the writers in report.py !!!
LEVEL_PROFILE_COLUMNS = ["Level", "Contribution", "Coefficients", "Max Abs Coefficient"]
COEFF_COLUMNS = ["d", "tau", "value"]
D_PROFILE_COLUMNS = ["Functional", "d", "Value", "Tau Star", "Verdict"]
MEMBER_RATIO_COLUMNS = ["Member", "Numerator", "Denominator", "Ratio", "Note"]
FUNCTIONAL_COLUMNS = ["Functional", "Value", "Tau Star", "D Star", "Tau Window", "Series Window",
                      "Tail Ratio", "Verdict"]
MUCKENHOUPT_COLUMNS = ["Lower", "Upper", "Constant"]
DOUBLING_COLUMNS = ["F Lower", "F Upper", "B Lower", "B Upper", "Ratio I", "Ratio II"]
SAMPLE_COLUMNS = ["x", "value"]
ELEMENT_COLUMNS = ["Shift", "Coefficient"]
HOMOGENEITY_COLUMNS = ["d", "value", "predicted"]

# CLI exit codes
EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_NUMERIC = 2
EXIT_FAIL_VERDICT = 3

# Subcommands of the command line (group -> actions)
SUBCOMMANDS = {
    "spline": ["eval", "gram"],
    "wavelet": ["constants", "build", "theta"],
    "weights": ["mass", "muckenhoupt", "doubling"],
    "rl": ["apply", "duality"],
    "besov": ["coeffs", "norm"],
    "criteria": ["full-line", "half-line", "lower", "integral-form", "reduce"],
    "verify": ["forward", "reverse", "example-ex1"],
}

# Keys accepted in a key=value config file, with the type used to parse them
CONFIG_KEYS = {
    "tol": float,
    "tau_window": int,
    "series_window": int,
    "d_max": int,
    "rl_window": int,
    "k_lo": float,
    "k_hi": float,
    "tail_slack": float,
    "family_size": int,
    "seed": int,
    "threads": int,
    "format": str,
    "output": str,
    "u": str,
    "v": str,
    "w": str,
}
