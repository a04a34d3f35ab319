"""Eigenvalues for an arbitrary damping position a ∈ (0, L).

Zeros of the exponential polynomial g(λ) = Σ r_j e^{β_j λ} lie in a vertical
strip |Re λ| < c1. The strip is tiled by rectangles; the zeros in each one
are counted with the argument principle (the winding of g along the
boundary, tracked phase step by phase step), isolated by subdivision and
polished with Newton's method. λ = 0 is always a simple zero of g and is
never reported.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from spectraldet.config import (
    BOUNDARY_ZERO_RTOL,
    BOX_HEIGHT_FACTOR,
    C1_GROWTH,
    C1_MARGIN,
    CONTOUR_INITIAL_STEP,
    CONTOUR_MAX_PHASE_STEP,
    CONTOUR_MAX_REFINEMENTS,
    DILATION_ATTEMPTS,
    DILATION_FACTOR,
    NEWTON_MAX_STEPS,
    NEWTON_RTOL,
    SUBDIVISION_MAX_DEPTH,
    TILING_OFFSET,
)
from spectraldet.errors import (
    BoundaryZeroError,
    NoConvergence,
    QuadratureError,
    UnsupportedConfig,
)
from spectraldet.model import (
    EigenvalueRecord,
    ExpPolynomialForm,
    Located,
    StringConfig,
    build_exp_form,
    residual_tolerance_ok,
)

logger = logging.getLogger(__name__)

_EDGE_CLEARANCE = 1e-4     # min |g| / Σ|terms| required along a tile edge
_EDGE_NUDGES = (0.1, -0.1, 0.2, -0.2, 0.3, -0.3)
_SPLIT_FRACTIONS = (0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65)
_MIN_BOX_DIAMETER = 1e-9


# ---------------------------------------------------------------------------
# Data containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StripBox:
    """{λ : |Re λ| < c1, |Im λ − A| ≤ B}."""

    c1: float
    center: float
    halfwidth: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.halfwidth > 0):
            raise ValueError("StripBox needs c1 > 0 and B > 0")

    def rect(self) -> "Rect":
        return Rect(-self.c1, self.c1, self.center - self.halfwidth, self.center + self.halfwidth)


@dataclass(frozen=True)
class Rect:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))

    @property
    def width(self) -> float:
        return self.re_hi - self.re_lo

    @property
    def height(self) -> float:
        return self.im_hi - self.im_lo

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, lam: complex) -> bool:
        return self.re_lo < lam.real < self.re_hi and self.im_lo < lam.imag < self.im_hi

    def dilated(self, factor: float) -> "Rect":
        c = self.center
        hw, hh = 0.5 * self.width * factor, 0.5 * self.height * factor
        return Rect(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def split(self, fraction: float) -> Tuple["Rect", "Rect"]:
        """Cut across the longer side at ``fraction`` of its length."""
        if self.width >= self.height:
            cut = self.re_lo + fraction * self.width
            return (Rect(self.re_lo, cut, self.im_lo, self.im_hi),
                    Rect(cut, self.re_hi, self.im_lo, self.im_hi))
        cut = self.im_lo + fraction * self.height
        return (Rect(self.re_lo, self.re_hi, self.im_lo, cut),
                Rect(self.re_lo, self.re_hi, cut, self.im_hi))

    def boundary(self, step: float) -> np.ndarray:
        """Counter-clockwise samples of the boundary, closed (first point repeated)."""
        corners = [
            complex(self.re_lo, self.im_lo),
            complex(self.re_hi, self.im_lo),
            complex(self.re_hi, self.im_hi),
            complex(self.re_lo, self.im_hi),
        ]
        pieces = []
        for start, end in zip(corners, corners[1:] + corners[:1]):
            n = max(4, int(math.ceil(abs(end - start) / step)))
            pieces.append(start + (end - start) * np.arange(n) / n)
        pieces.append(np.array([corners[0]]))
        return np.concatenate(pieces)


@dataclass(frozen=True)
class LocalizationBound:
    """|Re λ_j| < c1 and |Im λ_j − j·spacing| < c2."""

    c1: float
    c2: float
    spacing: float


Box = Union[StripBox, Rect]


class _NearZero(Exception):
    pass


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def _winding(rect: Rect, form: ExpPolynomialForm) -> int:
    step = min(CONTOUR_INITIAL_STEP, 0.125 * min(rect.width, rect.height))
    points = rect.boundary(step)
    values, mags = form.scaled(points)
    for _ in range(CONTOUR_MAX_REFINEMENTS):
        if np.any(np.abs(values) <= BOUNDARY_ZERO_RTOL * mags):
            raise _NearZero
        increments = np.angle(values[1:] / values[:-1])
        coarse = np.flatnonzero(np.abs(increments) >= CONTOUR_MAX_PHASE_STEP)
        if coarse.size == 0:
            turns = float(np.sum(increments)) / (2.0 * math.pi)
            winding = int(round(turns))
            if abs(turns - winding) > 0.25:
                raise QuadratureError(f"Winding {turns:.3f} is not close to an integer")
            return winding
        midpoints = 0.5 * (points[coarse] + points[coarse + 1])
        mid_values, mid_mags = form.scaled(midpoints)
        points = np.insert(points, coarse + 1, midpoints)
        values = np.insert(values, coarse + 1, mid_values)
        mags = np.insert(mags, coarse + 1, mid_mags)
    raise QuadratureError(
        f"Phase tracking did not resolve after {CONTOUR_MAX_REFINEMENTS} refinements"
    )


def _as_rect(box: Box) -> Rect:
    return box.rect() if isinstance(box, StripBox) else box


def count_zeros(box: Box, form: ExpPolynomialForm, dilate: bool = True) -> int:
    """Number of zeros of g(λ)/λ inside ``box``.

    When the boundary passes through a zero the box is dilated by 1 % about
    its centre, up to DILATION_ATTEMPTS times (``dilate=False`` fails at once).
    """
    rect = _as_rect(box)
    for attempt in range(DILATION_ATTEMPTS + 1):
        try:
            winding = _winding(rect, form)
        except _NearZero:
            if not dilate or attempt == DILATION_ATTEMPTS:
                raise BoundaryZeroError(f"Zero of g on the boundary of {rect}")
            logger.warning("Zero near the boundary of %s; dilating by 1%%", rect)
            rect = rect.dilated(DILATION_FACTOR)
            continue
        return winding - (1 if rect.contains(0j) else 0)
    raise BoundaryZeroError(f"Zero of g on the boundary of {rect}")


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------

def _newton(seed: complex, form: ExpPolynomialForm, multiplicity: int) -> Optional[complex]:
    lam = complex(seed) if seed != 0 else 1e-3 + 1e-3j
    for _ in range(NEWTON_MAX_STEPS):
        ratio = complex(form.log_derivative(lam)) - 1.0 / lam
        if not np.isfinite(ratio) or ratio == 0:
            return None
        step = multiplicity / ratio
        lam -= step
        if lam == 0 or not np.isfinite(lam):
            return None
        if abs(step) <= 4.0 * np.finfo(float).eps * max(1.0, abs(lam)):
            break
    value, mag = form.scaled(lam)
    if abs(complex(value)) > NEWTON_RTOL * float(mag):
        return None
    return lam


def refine_zero(
    seed: complex,
    form: ExpPolynomialForm,
    box: Optional[Box] = None,
    multiplicity: int = 1,
) -> complex:
    """Polish a zero of g(λ)/λ from ``seed``.

    If Newton's method leaves ``box`` (or fails), the box is bisected using
    count_zeros until Newton converges inside the half holding the zero.
    """
    lam = _newton(seed, form, multiplicity)
    if box is None:
        if lam is None:
            raise NoConvergence(f"Newton iteration from {seed} did not converge")
        return lam

    rect = _as_rect(box)
    for depth in range(SUBDIVISION_MAX_DEPTH + 1):
        if lam is not None and rect.contains(lam):
            return lam
        if depth == SUBDIVISION_MAX_DEPTH:
            break
        logger.debug("Newton left %s; bisecting", rect)
        rect = _half_with_zeros(rect, form, multiplicity)
        lam = _newton(rect.center, form, multiplicity)
    raise NoConvergence(f"Could not refine the zero in {_as_rect(box)}")


def _half_with_zeros(rect: Rect, form: ExpPolynomialForm, expected: int) -> Rect:
    for fraction in _SPLIT_FRACTIONS:
        halves = rect.split(fraction)
        try:
            counts = [count_zeros(h, form, dilate=False) for h in halves]
        except BoundaryZeroError:
            continue
        for half, n in zip(halves, counts):
            if n == expected:
                return half
    raise NoConvergence(f"Could not bisect {rect} around its zero")


# ---------------------------------------------------------------------------
# Isolation and tiling
# ---------------------------------------------------------------------------

def _isolate(rect: Rect, count: int, form: ExpPolynomialForm, depth: int = 0) -> List[Tuple[Rect, int]]:
    """Subdivide until every rectangle holds one zero (or is too small to split)."""
    if count == 0:
        return []
    if count == 1 or rect.diameter < _MIN_BOX_DIAMETER:
        return [(rect, count)]
    if depth >= SUBDIVISION_MAX_DEPTH:
        raise NoConvergence(f"Could not separate {count} zeros in {rect}")
    for fraction in _SPLIT_FRACTIONS:
        halves = rect.split(fraction)
        try:
            counts = [count_zeros(h, form, dilate=False) for h in halves]
        except BoundaryZeroError:
            continue
        if sum(counts) != count:
            raise QuadratureError(f"Sub-box counts {counts} do not add up to {count} in {rect}")
        isolated = []
        for half, n in zip(halves, counts):
            isolated.extend(_isolate(half, n, form, depth + 1))
        return isolated
    raise BoundaryZeroError(f"Every split of {rect} passes through a zero")


def strip_halfwidth(form: ExpPolynomialForm, cfg: StringConfig) -> float:
    """c1 such that every zero of g satisfies |Re λ| < c1.

    Starts from a bound on the dominant end term and grows it until the end
    terms dominate the rest on both lines Re λ = ±c1.
    """
    alpha = cfg.alpha
    shortest = min(cfg.position, cfg.complement, 0.5 * cfg.length)
    gaps = [g for g in (abs(2 + alpha), abs(2 - alpha), 2.0) if g > 0]
    c1 = math.log(8.0 * (1.0 + abs(alpha)) / min(gaps)) / (2.0 * shortest)
    c1 = max(c1, 1e-3)
    while not (form.dominance_holds(c1) and form.dominance_holds(-c1)):
        c1 *= C1_GROWTH
        logger.debug("Growing strip half-width to %.4g", c1)
    return C1_MARGIN * c1


def localization_bound(cfg: StringConfig, c1: float) -> LocalizationBound:
    if cfg.alpha in (2, -2):
        long_side = max(cfg.position, cfg.complement)
        return LocalizationBound(c1=c1, c2=2.0 * math.pi / long_side, spacing=math.pi / long_side)
    return LocalizationBound(c1=c1, c2=3.0 * math.pi / cfg.length, spacing=math.pi / cfg.length)


def _edge_is_clear(y: float, c1: float, form: ExpPolynomialForm) -> bool:
    xs = np.linspace(-c1, c1, max(64, int(math.ceil(2 * c1 / CONTOUR_INITIAL_STEP))))
    values, mags = form.scaled(xs + 1j * y)
    return bool(np.all(np.abs(values) > _EDGE_CLEARANCE * mags))


def _place_edge(y: float, height: float, c1: float, form: ExpPolynomialForm) -> float:
    if _edge_is_clear(y, c1, form):
        return y
    for nudge in _EDGE_NUDGES:
        if _edge_is_clear(y + nudge * height, c1, form):
            return y + nudge * height
    raise BoundaryZeroError(f"No clear tile edge near Im λ = {y:.6g}")


def _tile_edges(im_bound: float, height: float, c1: float, form: ExpPolynomialForm) -> List[float]:
    k_lo = int(math.floor(-im_bound / height)) - 1
    k_hi = int(math.ceil(im_bound / height)) + 1
    return [_place_edge((k + TILING_OFFSET) * height, height, c1, form) for k in range(k_lo, k_hi + 1)]


def label_half_planes(values: Sequence[Tuple[complex, int]]) -> List[Tuple[complex, int, int]]:
    """Attach the sorted half-plane index j (upper incl. real axis: 1, 2, …; lower: −1, −2, …)."""
    upper = sorted((v for v in values if v[0].imag >= 0), key=lambda v: (v[0].imag, v[0].real))
    lower = sorted((v for v in values if v[0].imag < 0), key=lambda v: (-v[0].imag, v[0].real))
    labelled = []
    for group, sign in ((upper, 1), (lower, -1)):
        j = 1
        for lam, m in group:
            labelled.append((lam, m, sign * j))
            j += m
    return labelled


def enumerate_general(
    cfg: StringConfig, im_bound: float
) -> Tuple[List[EigenvalueRecord], LocalizationBound]:
    """All eigenvalues with |Im λ| ≤ im_bound for an arbitrary damping position."""
    if not im_bound > 0:
        raise ValueError(f"im_bound must be positive, got {im_bound!r}")
    if cfg.alpha in (2, -2) and cfg.is_symmetric:
        raise UnsupportedConfig(
            f"α = {cfg.alpha.real:+g} with a = L/2 merges two exponents of the "
            "characteristic function; use the rational solver with p = q = 1"
        )

    form = build_exp_form(cfg)
    c1 = strip_halfwidth(form, cfg)
    height = BOX_HEIGHT_FACTOR * 2.0 * math.pi / form.spread
    edges = _tile_edges(im_bound, height, c1, form)
    logger.debug("Tiling |Re λ| < %.4g with %d boxes of height %.4g", c1, len(edges) - 1, height)

    found: List[Tuple[complex, int]] = []
    for lo, hi in zip(edges, edges[1:]):
        tile = Rect(-c1, c1, lo, hi)
        n = count_zeros(tile, form, dilate=False)
        for rect, m in _isolate(tile, n, form):
            lam = refine_zero(rect.center, form, box=rect, multiplicity=m)
            if cfg.alpha.imag == 0 and abs(lam.imag) <= 1e-12 * max(1.0, abs(lam)):
                lam = complex(lam.real, 0.0)
            found.append((lam, m))

    records = []
    for lam, m, j in label_half_planes(found):
        if abs(lam.imag) > im_bound:
            continue
        residual, ok = residual_tolerance_ok(lam, cfg)
        if not ok:
            raise NoConvergence(f"Eigenvalue {lam} fails the residual check ({residual:.2e})")
        records.append(EigenvalueRecord(lam, Located(j), residual, m))
    records.sort(key=lambda r: (r.value.imag, r.value.real))
    return records, localization_bound(cfg, c1)


# ---------------------------------------------------------------------------
# Comparison helpers
# ---------------------------------------------------------------------------

def expand(records: Iterable[EigenvalueRecord]) -> List[complex]:
    """Eigenvalues repeated by multiplicity."""
    return [r.value for r in records for _ in range(r.multiplicity)]


def match_spectra(left: Sequence[complex], right: Sequence[complex]) -> float:
    """Largest distance in a greedy nearest-neighbour matching of two multisets.

    Returns inf when the multisets differ in size.
    """
    if len(left) != len(right):
        return math.inf
    remaining = list(right)
    worst = 0.0
    for lam in sorted(left, key=lambda v: (v.imag, v.real)):
        distances = [abs(lam - other) for other in remaining]
        idx = int(np.argmin(distances))
        worst = max(worst, distances[idx])
        remaining.pop(idx)
    return worst
