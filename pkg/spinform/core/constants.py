"""Numerical constants shared across the pipeline.

See docs/conventions.md for the sign conventions these tolerances guard.
"""

# Algebra
MAX_GENERATORS: int = 12  # Dense 2^N storage stays tractable up to N = 12
ALGEBRA_TOLERANCE: float = 1e-10  # Grade / evenness checks on single elements
SPIN_TOLERANCE: float = 1e-8  # τ(g)g = 1 check for SpinElement construction
EXP_SCALE_TARGET: float = 0.5  # Max-norm after scaling in exp_bivector
EXP_TAYLOR_TERMS: int = 18  # Taylor terms once scaled below EXP_SCALE_TARGET

# Solver
DEFAULT_SUBSTEPS: int = 4  # RK4 substeps per grid edge
RENORMALIZATION_TOLERANCE: float = 1e-6  # Non-scalar part of τ(g)g allowed before failing
MIN_RESOLUTION: int = 9  # Nodes per axis accepted by the CLI
DEFAULT_RESOLUTION: int = 33

# Sign continuity for lifted frames: |<φ_prev, φ>| below this is a discontinuity
FRAME_CONTINUITY_THRESHOLD: float = 0.5

# Weierstrass data
POLE_TOLERANCE: float = 1e-9  # |z1| or 1/|g| below this is treated as a pole

# Default tolerance gate: threshold = max(floor, constant * h**order)
DEFAULT_GATE_CONSTANT: float = 10.0
DEFAULT_GATE_ORDER: int = 2
DEFAULT_GATE_FLOOR: float = 1e-9

# Report schema
REPORT_SCHEMA_VERSION: int = 1
REPORT_TIMESTAMP_KEY: str = "timestamp"

# Residual names
RES_GAUSS: str = "gauss"
RES_CODAZZI: str = "codazzi"
RES_RICCI: str = "ricci"
RES_HOLONOMY: str = "holonomy"
RES_KILLING: str = "killing"
RES_CLOSEDNESS: str = "d_xi"
RES_PATH: str = "path_independence"
RES_SPINOR_PATH: str = "spinor_path_independence"
RES_ISOMETRY: str = "isometry"
RES_SECOND_FORM: str = "second_fundamental_form"
RES_NORMAL_CONNECTION: str = "normal_connection"
RES_DIRAC: str = "dirac"
RES_GAUSS_MAP_LIFT: str = "gauss_map_lift"
RES_GAUSS_MAP_TANGENT: str = "gauss_map_tangent"
RES_UNIT_NORM: str = "unit_norm"
RES_LORENTZ_NORM: str = "lorentz_norm"
RES_DF: str = "dF_consistency"
RES_FRIEDRICH: str = "friedrich_dirac"
RES_NORMALIZED: str = "normalized"
RES_ISOTROPY: str = "isotropy"
RES_CONFORMALITY: str = "conformality"
RES_DXI_TILDE: str = "dxi_tilde"
RES_F_TILDE: str = "f_tilde_agreement"
RES_CR_Z1: str = "cauchy_riemann_z1"
RES_CR_Z2: str = "cauchy_riemann_z2"
RES_ROUNDTRIP: str = "roundtrip_distance"
RES_REFERENCE: str = "reference_distance"
RES_PRINCIPAL: str = "principal_curvatures"
RES_MEAN_CURVATURE: str = "mean_curvature"

# Residuals that are exact algebraic identities, gated by a fixed tolerance
EXACT_RESIDUALS = (
    RES_GAUSS_MAP_LIFT,
    RES_UNIT_NORM,
    RES_LORENTZ_NORM,
    RES_F_TILDE,
    RES_ISOTROPY,
    RES_NORMALIZED,
)
EXACT_RESIDUAL_TOLERANCE: float = 1e-8
