# Polynomials
RESTRICT_DEAD_COEFF_REL = 1e-14

# Parser limits
PARSER_MAX_VAR_INDEX = 32
PARSER_MAX_EXPONENT = 64
PARSER_MAX_DEPTH = 100
PARSER_MAX_TERMS = 20000

# Root finder
ROOTS_MAX_ITERATIONS = 200
ROOTS_STEP_REL = 1e-14
ROOTS_ROUNDOFF_FACTOR = 8.0
ROOTS_POLISH_STEPS = 3
ROOTS_INIT_PHASE = 0.6180339887498949  # golden-ratio conjugate, radians
ROOTS_DEFAULT_TOL = 1e-8
ROOTS_CLUSTER_FLOOR = 1e-6
ROOTS_CLUSTER_RADII = (2.0, 4.0, 8.0, 16.0)

# Geometry
GRID_SNAP_REL = 1e-12
GRID_MAX_CELLS = 20_000_000
BOX_CONTAINS_TOL = 1e-9
HULL_TOL_REL = 1e-8

# Stability
FALSIFIER_IM_TOL = 1e-6
FALSIFIER_CERT_TOL = 1e-8
FALSIFIER_SAMPLE_CAP = 1e6
FALSIFIER_DIRECTION_FLOOR = 1e-6
FALSIFIER_BATCH = 2048
FALSIFIER_ROOT_ITERATIONS = 60

# Harness
WITNESS_TOL = 1e-8
COMPLEMENT_AGREEMENT_POINTS = 10_000
