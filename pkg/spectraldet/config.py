"""Numerical tolerances, solver defaults and sweep presets for spectraldet."""

from dataclasses import dataclass
from typing import Dict, Optional

# ---------------------------------------------------------------------------
# Branch cuts
# ---------------------------------------------------------------------------

CUT_EPSILON = 1e-6          # radians kept clear on the excluded side of a cut

# ---------------------------------------------------------------------------
# Core model tolerances
# ---------------------------------------------------------------------------

SCALED_EVAL_THRESHOLD = 30.0     # |Re λ|·L above this → log-scaled evaluation
EXPONENT_MERGE_RTOL = 1e-12      # exp-form exponents closer than this are merged
SPLIT_RTOL = 1e-12               # a = p·L0, L − a = q·L0
MU_EXP_RTOL = 1e-10              # exp(2·L0·μ) = z
RESIDUAL_RTOL = 1e-9             # |residual| ≤ RESIDUAL_RTOL · max(1, |sinh(Lλ)|)

# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

EM_SHIFT_TERMS = 16          # Euler–Maclaurin direct-sum head length N
EM_BERNOULLI_ORDER = 8       # number of B_2k corrections M
EM_MIN_SHIFT_TERMS = 8
EM_MAX_BERNOULLI_ORDER = 12
STIRLING_MIN_REAL = 15.0     # log_gamma shifts its argument until Re c ≥ this
STIRLING_TERMS = 10

# ---------------------------------------------------------------------------
# Rational spectrum
# ---------------------------------------------------------------------------

ALPHA_SNAP_RADIUS = 1e-8     # |α ∓ 2| below this → degenerate regime
ROOT_CLUSTER_RADIUS = 1e-7
ROOT_MAX_SWEEPS = 500
ROOT_RESIDUAL_RTOL = 1e-10
ROOT_NEWTON_POLISH_STEPS = 3

# ---------------------------------------------------------------------------
# General spectrum (argument principle on exponential polynomials)
# ---------------------------------------------------------------------------

BOX_HEIGHT_FACTOR = 0.5          # box height = factor · π / L
TILING_OFFSET = 0.37             # fractional offset of tile edges (keeps them off the lattice)
CONTOUR_INITIAL_STEP = 0.05      # initial spacing of contour samples
CONTOUR_MAX_PHASE_STEP = 0.5 * 3.141592653589793
CONTOUR_MAX_REFINEMENTS = 40
BOUNDARY_ZERO_RTOL = 1e-9        # |g| / Σ|terms| below this on a contour → zero on boundary
DILATION_FACTOR = 1.01
DILATION_ATTEMPTS = 5
NEWTON_MAX_STEPS = 100
NEWTON_RTOL = 1e-12
SUBDIVISION_MAX_DEPTH = 40
C1_GROWTH = 1.25
C1_MARGIN = 1.05
MATCH_TOL = 1e-9

# ---------------------------------------------------------------------------
# Determinant
# ---------------------------------------------------------------------------

AGREEMENT_TOL = 1e-8
ZETA_TAIL_BLOCK_FRACTION = 0.5   # last block = eigenvalues with |Im| in (f·T, T]

# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

SWEEP_ALPHA_START = -10.0
SWEEP_ALPHA_END = 10.0
SWEEP_STEP = 0.05
SWEEP_EXCLUDE_RADIUS = 1e-3
CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class SweepPreset:
    label: str
    cut: str                  # "neg" or "pos"
    p: int
    q: int
    length: float = 1.0
    alpha_start: float = SWEEP_ALPHA_START
    alpha_end: float = SWEEP_ALPHA_END
    step: float = SWEEP_STEP
    notes: str = ""


SWEEP_PRESETS: Dict[str, SweepPreset] = {
    "a": SweepPreset(label="a", cut="neg", p=1, q=2, notes="cut below the negative axis, a ≠ L/2"),
    "b": SweepPreset(label="b", cut="neg", p=1, q=1, notes="cut below the negative axis, a = L/2"),
    "c": SweepPreset(label="c", cut="pos", p=1, q=2, notes="cut below the positive axis, a ≠ L/2"),
    "d": SweepPreset(label="d", cut="pos", p=1, q=1, notes="cut below the positive axis, a = L/2"),
}


def preset(name: str) -> Optional[SweepPreset]:
    return SWEEP_PRESETS.get(name.lower())
