"""Spectral determinant det(α) = exp(−ζ′(0)) of the δ-damped string.

Three independent routes are implemented and cross-checked:

- the closed form 4L/(2 − α) (cut below the negative axis) or −4L/(2 + α)
  (cut below the positive axis), with the case split at α = ±2;
- the product over the roots μ_k of the reduced polynomial;
- ζ′(0) assembled from Riemann and Hurwitz zeta values.

The spectral zeta function itself is available as a truncated eigenvalue
sum with a lattice tail correction, or (for rational positions) in closed
assembled form.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

from spectraldet.config import AGREEMENT_TOL, ZETA_TAIL_BLOCK_FRACTION
from spectraldet.errors import AgreementError, DomainError, NoConvergence
from spectraldet.model import BranchCut, MuValue, RationalSplit, StringConfig
from spectraldet.specfun import (
    HALF_LOG_TWO_PI,
    hurwitz_zeta,
    hurwitz_zeta_sderiv0,
    log_gamma,
    riemann_zeta,
)
from spectraldet.spectrum.general import enumerate_general, label_half_planes
from spectraldet.spectrum.rational import (
    Regime,
    enumerate_eigenvalues,
    snap_alpha,
    solve,
)

logger = logging.getLogger(__name__)

_LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

class ZetaDerivative(NamedTuple):
    """ζ′(0) together with the integer m in exp(−ζ′(0)) = det·e^{2πi·m}."""

    value: complex
    branch_integer: int


class ZetaEstimate(NamedTuple):
    value: complex
    error_bar: float
    mode: str


@dataclass(frozen=True)
class DeterminantReport:
    """Closed, root-product and Hurwitz-path determinants for one configuration."""

    config: StringConfig
    cut: BranchCut
    closed: complex
    from_roots: Optional[complex] = None
    zeta_path: Optional[complex] = None
    regime: Optional[Regime] = None
    agreement: Optional[float] = None
    branch_integer: Optional[int] = None
    split: Optional[RationalSplit] = None
    notice: Optional[str] = None

    @property
    def is_complete(self) -> bool:
        return self.from_roots is not None


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _safe_exp(x: complex) -> complex:
    try:
        return cmath.exp(x)
    except OverflowError:
        return complex(math.inf, 0.0)


def _log_one_minus_exp(x: complex) -> complex:
    """A logarithm of 1 − e^{x}, finite for any Re x."""
    if x.real > 30.0:
        # 1 − e^{x} = −e^{x}(1 − e^{−x})
        return x + complex(0.0, math.pi) + cmath.log(1.0 - cmath.exp(-x))
    return cmath.log(1.0 - cmath.exp(x))


def _log_sinh(x: complex) -> complex:
    """A logarithm of sinh(x); principal when |Re x| ≤ 30."""
    if abs(x.real) <= 30.0:
        return cmath.log(cmath.sinh(x))
    if x.real > 0:
        return x - _LOG2 + cmath.log(1.0 - cmath.exp(-2.0 * x))
    return -x - _LOG2 + complex(0.0, math.pi) + cmath.log(1.0 - cmath.exp(2.0 * x))


def _relative_gap(x: complex, y: complex) -> float:
    scale = max(abs(x), abs(y))
    if scale == 0:
        return 0.0
    if not math.isfinite(scale):
        return 0.0 if x == y else math.inf
    return abs(x - y) / scale


def _principal_arg(theta: float) -> float:
    """Reduce an angle to (−π, π]."""
    return theta - 2.0 * math.pi * math.ceil((theta - math.pi) / (2.0 * math.pi))


def max_relative_deviation(values: Sequence[complex]) -> float:
    """Largest pairwise relative deviation."""
    worst = 0.0
    for i, x in enumerate(values):
        for y in values[i + 1:]:
            worst = max(worst, _relative_gap(x, y))
    return worst


# ---------------------------------------------------------------------------
# Determinant paths
# ---------------------------------------------------------------------------

def det_closed(cfg: StringConfig, cut: BranchCut) -> complex:
    """Closed-form determinant; a matters only at α = ±2."""
    L, alpha = cfg.length, cfg.alpha
    if cut.is_neg:
        if alpha == 2:
            return complex(L if cfg.is_symmetric else 2.0 * L)
        return 4.0 * L / (2.0 - alpha)
    if alpha == -2:
        return complex(-L if cfg.is_symmetric else -2.0 * L)
    return -4.0 * L / (2.0 + alpha)


def _log_det_from_roots(mus: Sequence[MuValue], split: RationalSplit, cut: BranchCut) -> complex:
    L0 = split.L0
    if cut.is_neg:
        total = complex(math.log(2.0 * L0))
        for m in mus:
            total += m.multiplicity * _log_one_minus_exp(-2.0 * L0 * m.mu)
    else:
        total = complex(math.log(2.0 * L0), math.pi)
        for m in mus:
            total += m.multiplicity * _log_one_minus_exp(2.0 * L0 * m.mu)
    return total


def det_from_roots(mus: Sequence[MuValue], split: RationalSplit, cut: BranchCut) -> complex:
    """2L0·∏(1 − e^{−2L0μ_k}) or −2L0·∏(1 − e^{2L0μ_k}), accumulated in log space."""
    return _safe_exp(_log_det_from_roots(mus, split, cut))


def zeta_prime0_simplified(
    mus: Sequence[MuValue], split: RationalSplit, cut: BranchCut
) -> ZetaDerivative:
    """ζ′(0) from the sinh-product form of the determinant.

    The returned integer m satisfies exp(−ζ′(0)) = det_from_roots with
    −ζ′(0) = Log det_from_roots + 2πi·m.
    """
    L0 = split.L0
    n0 = sum(m.multiplicity for m in mus) + 1
    if cut.is_neg:
        value = complex(-n0 * _LOG2 - math.log(L0))
        for m in mus:
            y = L0 * m.mu
            value += m.multiplicity * (y - _log_sinh(y))
    else:
        value = complex(-math.log(L0) - n0 * _LOG2, math.pi * (2 - n0))
        for m in mus:
            y = L0 * m.mu
            value -= m.multiplicity * (_log_sinh(y) + y)

    log_det = _log_det_from_roots(mus, split, cut)
    # both are logarithms of the same number; only the imaginary parts can differ
    gap = -value - log_det
    turns = round(gap.imag / (2.0 * math.pi))
    residual = abs(gap - complex(0.0, 2.0 * math.pi * turns))
    if residual > AGREEMENT_TOL:
        raise AgreementError(
            f"exp(−ζ′(0)) does not reproduce the root product (log residual {residual:.2e})",
            residual,
        )
    branch = int(round((-value.imag - _principal_arg(log_det.imag)) / (2.0 * math.pi)))
    return ZetaDerivative(value, branch)


def zeta_prime0_hurwitz_path(
    mus: Sequence[MuValue], split: RationalSplit, cut: BranchCut
) -> complex:
    """ζ′(0) assembled from ζ_R, ζ_H(0, ·) and ∂_s ζ_H(0, ·).

    Each shifted family μ_k + jπi/L0 contributes μ_k^{−s} (j = 0) and two
    Hurwitz series in the shifts 1 ∓ iμ_kL0/π (j ≥ 1 and j ≤ −1).
    """
    L0 = split.L0
    log_scale = math.log(L0 / math.pi)
    zeta0 = riemann_zeta(0.0)
    dzeta0 = hurwitz_zeta_sderiv0(0.0)

    phase_up = complex(0.0, -0.5 * math.pi)
    if cut.is_neg:
        total = 2.0 * log_scale * zeta0 + 2.0 * dzeta0
        phase_down = complex(0.0, 0.5 * math.pi)
    else:
        total = 2.0 * complex(log_scale, -math.pi) * zeta0 + 2.0 * dzeta0
        phase_down = complex(0.0, -1.5 * math.pi)

    for m in mus:
        shift = 1j * m.mu * L0 / math.pi
        c_up, c_down = 1.0 - shift, 1.0 + shift
        # ζ_H(0, c) = ½ − c;  ∂_s ζ_H(0, c) = log Γ(c) − ½ log 2π
        term = (
            -cut.log(m.mu)
            + (log_scale + phase_up) * (0.5 - c_up)
            + (log_scale + phase_down) * (0.5 - c_down)
            + log_gamma(c_up) + log_gamma(c_down) - 2.0 * HALF_LOG_TWO_PI
        )
        total += m.multiplicity * term
    return complex(total)


# ---------------------------------------------------------------------------
# Spectral zeta function
# ---------------------------------------------------------------------------

def _power(lam: complex, s: complex, cut: BranchCut) -> complex:
    """λ^{−s} on the branch of ``cut``."""
    return cmath.exp(-s * cut.log(lam))


def _lattice_phase(s: complex, cut: BranchCut) -> complex:
    """i^{−s} + (−i)^{−s} for the branch of ``cut``."""
    return _power(1j, s, cut) + _power(-1j, s, cut)


def zeta_value(
    cfg: StringConfig,
    s: complex,
    cut: BranchCut,
    im_bound: float = 1e3,
    split: Optional[RationalSplit] = None,
    mode: str = "direct",
) -> ZetaEstimate:
    """Spectral zeta function ζ(s) = Σ λ^{−s}.

    Parameters
    ----------
    cfg : StringConfig
        Problem instance; α is taken from here.
    s : complex
        Direct mode needs Re s > 1.
    cut : BranchCut
        Branch of log λ.
    im_bound : float
        Direct mode sums the first J = ⌊im_bound / spacing⌋ eigenvalues of
        each half-plane (those with |Im λ| up to about im_bound) and adds
        the lattice tail beyond them. The real axis counts as upper.
    split : RationalSplit, optional
        Rational decomposition of cfg; required by the assembled mode.
    mode : {"direct", "assembled"}
    """
    s = complex(s)
    if mode == "assembled":
        if split is None:
            raise DomainError("The assembled zeta function needs a rational split")
        return ZetaEstimate(_zeta_assembled(split, cfg.alpha, s, cut), 0.0, mode)
    if mode != "direct":
        raise ValueError(f"Unknown zeta mode '{mode}'. Expected 'direct' or 'assembled'.")
    if not s.real > 1:
        raise DomainError(f"The eigenvalue sum converges only for Re s > 1, got s = {s}")
    if split is not None and not split.matches(cfg):
        raise ValueError("Rational split does not reproduce the configuration")

    alpha, _ = snap_alpha(cfg.alpha)
    spacing = _asymptotic_spacing(cfg.with_alpha(alpha))
    J = int(math.floor(im_bound / spacing))
    if J < 2:
        raise DomainError(f"im_bound = {im_bound:g} spans fewer than two eigenvalue spacings")

    # the j-th eigenvalue of each half-plane lies within 3 spacings of j·spacing
    reach = (J + 4) * spacing
    if split is not None:
        records = enumerate_eigenvalues(split, alpha, reach)
    else:
        records, _ = enumerate_general(cfg.with_alpha(alpha), reach)

    j_block = int(math.floor(ZETA_TAIL_BLOCK_FRACTION * J))
    head = 0j
    block = 0j
    counted = {1: 0, -1: 0}
    for lam, multiplicity, j in label_half_planes([(r.value, r.multiplicity) for r in records]):
        term = _power(lam, s, cut)
        side = 1 if j > 0 else -1
        for ordinal in range(abs(j), abs(j) + multiplicity):
            if ordinal > J:
                break
            head += term
            counted[side] += 1
            if ordinal > j_block:
                block += term
    if min(counted.values()) < J:
        raise NoConvergence(
            f"Found {counted[1]} upper and {counted[-1]} lower eigenvalues, expected {J} each"
        )

    # lattice j·spacing·i, j ≠ 0: tail beyond J and the comparison block
    phase = _lattice_phase(s, cut) * cmath.exp(-s * math.log(spacing))
    tail = phase * hurwitz_zeta(s, J + 1)
    block_range = range(j_block + 1, J + 1)
    lattice_block = phase * sum(j ** -s for j in block_range)
    weight = sum(j ** -s.real for j in block_range)
    error_bar = abs(block - lattice_block) / weight * J ** (1.0 - s.real) / (s.real - 1.0)
    logger.debug("Zeta direct sum: %d eigenvalues per half-plane, tail bar %.3e", J, error_bar)
    return ZetaEstimate(head + tail, error_bar, mode)


def _asymptotic_spacing(cfg: StringConfig) -> float:
    """Mean gap between consecutive eigenvalues along the imaginary axis."""
    if cfg.alpha in (2, -2):
        return math.pi / max(cfg.position, cfg.complement)
    return math.pi / cfg.length


def _zeta_assembled(split: RationalSplit, alpha: complex, s: complex, cut: BranchCut) -> complex:
    solution = solve(split, alpha)
    L0 = split.L0
    scale = cmath.exp(s * math.log(L0 / math.pi))

    lattice = 2.0 * cmath.cos(0.5 * math.pi * s) * scale * riemann_zeta(s)
    phase_up = cmath.exp(-0.5j * math.pi * s)
    if cut.is_neg:
        phase_down = cmath.exp(0.5j * math.pi * s)
    else:
        lattice *= cmath.exp(-1j * math.pi * s)
        phase_down = cmath.exp(-1.5j * math.pi * s)

    total = lattice
    for m in solution.mus:
        shift = 1j * m.mu * L0 / math.pi
        term = (
            _power(m.mu, s, cut)
            + scale * phase_up * hurwitz_zeta(s, 1.0 - shift)
            + scale * phase_down * hurwitz_zeta(s, 1.0 + shift)
        )
        total += m.multiplicity * term
    return total


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def determinant_report(
    cfg: StringConfig,
    cut: BranchCut,
    split: Optional[RationalSplit] = None,
    max_denominator: Optional[int] = None,
) -> DeterminantReport:
    """Evaluate every available determinant path and check their agreement.

    Without a split, one is certified from a/L when ``max_denominator`` is
    given; if that fails only the closed form is reported.
    """
    if split is not None and not split.matches(cfg):
        raise ValueError(
            f"Split p={split.p}, q={split.q}, L0={split.L0:g} does not reproduce "
            f"L={cfg.length:g}, a={cfg.position:g}"
        )
    if split is None and max_denominator is not None:
        split = RationalSplit.from_config(cfg, max_denominator)

    alpha, _ = snap_alpha(cfg.alpha)
    effective = cfg.with_alpha(alpha)
    closed = det_closed(effective, cut)

    if split is None:
        notice = "a/L is not certified rational; only the closed form is available"
        logger.info(notice)
        return DeterminantReport(config=cfg, cut=cut, closed=closed, notice=notice)

    solution = solve(split, alpha)
    from_roots = det_from_roots(solution.mus, split, cut)
    simplified = zeta_prime0_simplified(solution.mus, split, cut)
    zeta_path = _safe_exp(-zeta_prime0_hurwitz_path(solution.mus, split, cut))

    agreement = max_relative_deviation([closed, from_roots, zeta_path])
    report = DeterminantReport(
        config=cfg,
        cut=cut,
        closed=closed,
        from_roots=from_roots,
        zeta_path=zeta_path,
        regime=solution.regime,
        agreement=agreement,
        branch_integer=simplified.branch_integer,
        split=split,
    )
    if agreement > AGREEMENT_TOL:
        raise AgreementError(
            f"Determinant paths disagree: closed={closed:.12g}, roots={from_roots:.12g}, "
            f"zeta={zeta_path:.12g} (relative deviation {agreement:.2e})",
            agreement,
        )
    return report


def continuity_probe(
    split: RationalSplit, alpha: complex, cut: BranchCut, offsets: Sequence[float] = (1e-6, -1e-6)
) -> List[complex]:
    """det_from_roots at α and at α + each offset."""
    values = []
    for delta in (0.0, *offsets):
        solution = solve(split, alpha + delta)
        values.append(det_from_roots(solution.mus, split, cut))
    return values
