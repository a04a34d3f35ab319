"""Spectrum for a rational damping position a = p·L0, L − a = q·L0.

In z = e^{2L0λ} the spectral condition is a polynomial with the root z = 1
(the lattice λ = jπi/L0). Factoring it out leaves the reduced polynomial,
whose roots z_k give the shifted families μ_k + jπi/L0.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from spectraldet.config import (
    ALPHA_SNAP_RADIUS,
    ROOT_CLUSTER_RADIUS,
    ROOT_MAX_SWEEPS,
    ROOT_NEWTON_POLISH_STEPS,
    ROOT_RESIDUAL_RTOL,
)
from spectraldet.errors import DomainError, NoConvergence
from spectraldet.model import (
    EigenvalueRecord,
    Lattice,
    MuValue,
    RationalSplit,
    Shifted,
    residual_tolerance_ok,
)

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Data containers
# ---------------------------------------------------------------------------

class Regime(str, enum.Enum):
    GENERIC = "generic"
    ALPHA_MINUS_2 = "alpha_minus_2"
    ALPHA_PLUS_2 = "alpha_plus_2"
    TRIVIAL = "trivial"          # p = q = 1 and α = ±2: no shifted family


class Sign(str, enum.Enum):
    PLUS = "plus"      # ∏(1 − e^{+2L0μ_k})
    MINUS = "minus"    # ∏(1 − e^{−2L0μ_k})


@dataclass(frozen=True)
class ReducedPolynomial:
    """Coefficients highest degree first; empty for the trivial regime."""

    coeffs: Tuple[complex, ...]
    regime: Regime

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def monic(self) -> np.ndarray:
        c = np.asarray(self.coeffs, dtype=complex)
        return c / c[0]

    def evaluate(self, z):
        return np.polyval(np.asarray(self.coeffs, dtype=complex), z)


@dataclass(frozen=True)
class RationalSolution:
    """Everything derived from one (split, α) pair."""

    split: RationalSplit
    alpha: complex            # after snapping to ±2
    regime: Regime
    polynomial: ReducedPolynomial
    mus: Tuple[MuValue, ...]

    @property
    def root_count(self) -> int:
        return sum(m.multiplicity for m in self.mus)


# ---------------------------------------------------------------------------
# Regime selection
# ---------------------------------------------------------------------------

def snap_alpha(alpha: complex) -> Tuple[complex, bool]:
    """Snap α within ALPHA_SNAP_RADIUS of ±2 onto ±2; returns (α, snapped)."""
    alpha = complex(alpha)
    for target in (2.0, -2.0):
        if alpha != target and abs(alpha - target) < ALPHA_SNAP_RADIUS:
            logger.warning(
                "α = %s is within %.0e of %+g; using the degenerate regime",
                alpha, ALPHA_SNAP_RADIUS, target,
            )
            return complex(target), True
    return alpha, False


def regime_for(split: RationalSplit, alpha: complex) -> Regime:
    if alpha == 2 or alpha == -2:
        if split.p == 1 and split.q == 1:
            return Regime.TRIVIAL
        return Regime.ALPHA_PLUS_2 if alpha == 2 else Regime.ALPHA_MINUS_2
    return Regime.GENERIC


# ---------------------------------------------------------------------------
# Reduced polynomial
# ---------------------------------------------------------------------------

def build_reduced_polynomial(split: RationalSplit, alpha: complex) -> ReducedPolynomial:
    """(spectral polynomial in z) / (z − 1), by regime.

    Generic: α+2 on degrees p+q−1..p, 2 on p−1..q, 2−α on q−1..0.
    α = −2:  1 on p−1..q, 2 on q−1..0.
    α = +2:  1 on p−1..p−q, ½ on p−q−1..0.
    """
    alpha, _ = snap_alpha(alpha)
    regime = regime_for(split, alpha)
    p, q = split.p, split.q

    if regime is Regime.TRIVIAL:
        return ReducedPolynomial((), regime)

    if regime is Regime.GENERIC:
        degrees = range(p + q - 1, -1, -1)
        coeffs = [
            alpha + 2 if d >= p else (2 + 0j if d >= q else 2 - alpha)
            for d in degrees
        ]
    elif regime is Regime.ALPHA_MINUS_2:
        coeffs = [1 + 0j if d >= q else 2 + 0j for d in range(p - 1, -1, -1)]
    else:
        coeffs = [1 + 0j if d >= p - q else 0.5 + 0j for d in range(p - 1, -1, -1)]
    return ReducedPolynomial(tuple(complex(c) for c in coeffs), regime)


def build_reciprocal_polynomial(split: RationalSplit, alpha: complex) -> ReducedPolynomial:
    """Monic polynomial in y = e^{−2L0λ}; its roots are 1/z_k."""
    z_poly = build_reduced_polynomial(split, alpha)
    if not z_poly.coeffs:
        return z_poly
    reversed_coeffs = np.asarray(z_poly.coeffs[::-1], dtype=complex)
    return ReducedPolynomial(tuple(reversed_coeffs / reversed_coeffs[0]), z_poly.regime)


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------

def _initial_guesses(monic: np.ndarray) -> np.ndarray:
    """Points on a circle between the Cauchy lower and upper root bounds."""
    n = len(monic) - 1
    mags = np.abs(monic)
    upper = 1.0 + np.max(mags[1:])
    lower = mags[-1] / (mags[-1] + np.max(mags[:-1]))
    radius = math.sqrt(upper * lower)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4 / n + 0.25
    return radius * np.exp(1j * angles)


def _converged(monic: np.ndarray, z: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Horner residual at the rounding-error level of the evaluation."""
    n = len(monic) - 1
    scale = np.polyval(np.abs(monic), np.abs(z))
    return np.abs(values) <= (4 * n + 8) * _EPS * scale


def find_roots(poly: ReducedPolynomial) -> List[complex]:
    """All roots of ``poly`` with multiplicity (Aberth–Ehrlich + Newton polish)."""
    if poly.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree ≥ 1")
    monic = poly.monic()
    n = poly.degree
    if n == 1:
        return [complex(-monic[1])]

    deriv = np.polyder(monic)
    z = _initial_guesses(monic)
    stalled = np.zeros(n, dtype=bool)
    for sweep in range(ROOT_MAX_SWEEPS):
        values = np.polyval(monic, z)
        done = _converged(monic, z, values) | stalled
        if np.all(done):
            logger.debug("Aberth iteration converged after %d sweeps (degree %d)", sweep, n)
            break
        slopes = np.polyval(deriv, z)
        slopes = np.where(slopes == 0, _EPS, slopes)
        newton = values / slopes
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * repulsion)
        step = np.where(np.isfinite(step), step, newton)
        stalled = np.abs(step) <= 4.0 * _EPS * np.abs(z)
        z = np.where(done, z, z - step)
    else:
        raise NoConvergence(
            f"Aberth iteration did not converge in {ROOT_MAX_SWEEPS} sweeps (degree {n})"
        )

    for _ in range(ROOT_NEWTON_POLISH_STEPS):
        slopes = np.polyval(deriv, z)
        safe = np.abs(slopes) > 1e3 * _EPS * np.polyval(np.abs(deriv), np.abs(z))
        z = np.where(safe, z - np.polyval(monic, z) / np.where(safe, slopes, 1.0), z)

    scale = np.polyval(np.abs(monic), np.abs(z))
    worst = float(np.max(np.abs(np.polyval(monic, z)) / scale))
    if worst > ROOT_RESIDUAL_RTOL:
        raise NoConvergence(f"Root residual {worst:.2e} exceeds {ROOT_RESIDUAL_RTOL:g}")
    return [complex(r) for r in z]


def cluster_roots(roots: Sequence[complex]) -> List[Tuple[complex, int]]:
    """Merge roots closer than ROOT_CLUSTER_RADIUS into (mean, multiplicity)."""
    clusters: List[List[complex]] = []
    for r in sorted(roots, key=lambda v: (v.real, v.imag)):
        for members in clusters:
            if abs(np.mean(members) - r) < ROOT_CLUSTER_RADIUS:
                members.append(r)
                break
        else:
            clusters.append([r])
    return [(complex(np.mean(m)), len(m)) for m in clusters]


def extract_mu(roots: Sequence[complex], L0: float) -> List[MuValue]:
    """μ_k = (log|z_k| + i·Arg z_k) / (2L0), Arg ∈ (−π, π]."""
    mus = []
    for z, multiplicity in cluster_roots(roots):
        if z == 0:
            raise DomainError("Zero root of the reduced polynomial")
        if z.imag == 0:
            z = complex(z.real, 0.0)
        mu = np.log(z) / (2.0 * L0)
        mus.append(MuValue(mu=complex(mu), z=z, multiplicity=multiplicity, L0=L0))
    return sorted(mus, key=lambda m: (m.mu.imag, m.mu.real))


def _drop_rounding_imag(roots: Sequence[complex]) -> List[complex]:
    """Real-coefficient polynomials: roots within rounding of the real axis become real."""
    return [
        complex(r.real, 0.0) if abs(r.imag) <= 1e3 * _EPS * abs(r) else r
        for r in roots
    ]


def solve(split: RationalSplit, alpha: complex) -> RationalSolution:
    alpha, _ = snap_alpha(alpha)
    poly = build_reduced_polynomial(split, alpha)
    mus: List[MuValue] = []
    if poly.degree >= 1:
        roots = find_roots(poly)
        if alpha.imag == 0:
            roots = _drop_rounding_imag(roots)
        mus = extract_mu(roots, split.L0)
    return RationalSolution(split, alpha, poly.regime, poly, tuple(mus))


# ---------------------------------------------------------------------------
# Product identities
# ---------------------------------------------------------------------------

def product_identity(
    mus: Sequence[MuValue], split: RationalSplit, alpha: complex, sign: Sign
) -> complex:
    """∏(1 − e^{±2L0μ_k}) over the roots, with multiplicity."""
    sign = Sign(sign)
    total = 1.0 + 0j
    for m in mus:
        factor = 1.0 - (m.z if sign is Sign.PLUS else 1.0 / m.z)
        total *= factor ** m.multiplicity
    return total


def closed_product_value(split: RationalSplit, alpha: complex, sign: Sign) -> complex:
    """The regime's closed right-hand side for product_identity."""
    alpha, _ = snap_alpha(alpha)
    regime = regime_for(split, alpha)
    n = split.p + split.q
    sign = Sign(sign)
    if regime is Regime.TRIVIAL:
        return 1.0 + 0j
    if regime is Regime.GENERIC:
        return 2 * n / (alpha + 2) if sign is Sign.PLUS else 2 * n / (2 - alpha)
    plus_value, minus_value = (n, 0.5 * n) if regime is Regime.ALPHA_MINUS_2 else (0.5 * n, n)
    return complex(plus_value if sign is Sign.PLUS else minus_value)


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

def _record(value: complex, family, cfg, multiplicity: int = 1) -> EigenvalueRecord:
    residual, ok = residual_tolerance_ok(value, cfg)
    if not ok:
        raise NoConvergence(f"Eigenvalue {value} fails the residual check ({residual:.2e})")
    return EigenvalueRecord(value=value, family=family, residual=residual, multiplicity=multiplicity)


def enumerate_eigenvalues(
    split: RationalSplit, alpha: complex, im_bound: float
) -> List[EigenvalueRecord]:
    """Lattice and shifted eigenvalues with |Im λ| ≤ im_bound, sorted by Im."""
    if not im_bound > 0:
        raise ValueError(f"im_bound must be positive, got {im_bound!r}")
    solution = solve(split, alpha)
    cfg = split.config(solution.alpha)
    spacing = math.pi / split.L0
    records: List[EigenvalueRecord] = []

    j_max = int(math.floor(im_bound / spacing))
    for j in range(1, j_max + 1):
        for signed in (j, -j):
            records.append(_record(complex(0.0, signed * spacing), Lattice(signed), cfg))

    for k, m in enumerate(solution.mus, start=1):
        j_lo = math.ceil((-im_bound - m.mu.imag) / spacing)
        j_hi = math.floor((im_bound - m.mu.imag) / spacing)
        for j in range(j_lo, j_hi + 1):
            value = m.mu + complex(0.0, j * spacing)
            records.append(_record(value, Shifted(k, j), cfg, m.multiplicity))

    return sorted(records, key=lambda r: (r.value.imag, r.value.real))
