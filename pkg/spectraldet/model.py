"""Problem instance, branch cuts and the spectral condition.

The eigenvalues λ of the δ-damped string on (0, L) are the nonzero roots of

    sinh(Lλ) + α·sinh(aλ)·sinh((L − a)λ) = 0,

which after multiplying by 4·e^{Lλ} becomes the exponential polynomial

    (α − 2) − α·e^{2aλ} − α·e^{(2L−2a)λ} + (2 + α)·e^{2Lλ} = 0.

Every other module consumes the types defined here.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np

from spectraldet.config import (
    CUT_EPSILON,
    EXPONENT_MERGE_RTOL,
    MU_EXP_RTOL,
    RESIDUAL_RTOL,
    SCALED_EVAL_THRESHOLD,
    SPLIT_RTOL,
)
from spectraldet.errors import OnCutError


# ---------------------------------------------------------------------------
# Problem instance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StringConfig:
    """String of length L damped at x = a with complex strength α."""

    length: float
    position: float
    alpha: complex = 0j

    def __post_init__(self):
        length = float(self.length)
        position = float(self.position)
        if not length > 0:
            raise ValueError(f"String length must be positive, got {self.length!r}")
        if not 0 < position < length:
            raise ValueError(
                f"Damping position must lie in (0, {length}), got {self.position!r}"
            )
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def complement(self) -> float:
        """L − a."""
        return self.length - self.position

    @property
    def is_symmetric(self) -> bool:
        """True when the damping sits at the midpoint."""
        return math.isclose(self.position, 0.5 * self.length, rel_tol=SPLIT_RTOL)

    def mirrored(self) -> "StringConfig":
        return StringConfig(self.length, self.complement, self.alpha)

    def with_alpha(self, alpha: complex) -> "StringConfig":
        return StringConfig(self.length, self.position, alpha)


# ---------------------------------------------------------------------------
# Branch cuts
# ---------------------------------------------------------------------------

class CutVariant(str, enum.Enum):
    NEG_AXIS = "neg"    # arguments in (−π, π]
    POS_AXIS = "pos"    # arguments in [0, 2π)


@dataclass(frozen=True)
class BranchCut:
    """Logarithm branch used for λ^{−s} = e^{−s log λ}."""

    variant: CutVariant = CutVariant.NEG_AXIS
    epsilon: float = CUT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "variant", CutVariant(self.variant))
        if not self.epsilon > 0:
            raise ValueError(f"Cut epsilon must be positive, got {self.epsilon!r}")

    @classmethod
    def neg(cls, epsilon: float = CUT_EPSILON) -> "BranchCut":
        return cls(CutVariant.NEG_AXIS, epsilon)

    @classmethod
    def pos(cls, epsilon: float = CUT_EPSILON) -> "BranchCut":
        return cls(CutVariant.POS_AXIS, epsilon)

    @classmethod
    def parse(cls, name: str, epsilon: float = CUT_EPSILON) -> "BranchCut":
        try:
            return cls(CutVariant(name.strip().lower()), epsilon)
        except ValueError:
            raise ValueError(f"Unknown branch cut '{name}'. Expected 'neg' or 'pos'.")

    @property
    def is_neg(self) -> bool:
        return self.variant is CutVariant.NEG_AXIS

    @property
    def label(self) -> str:
        return self.variant.value

    def log(self, value: complex) -> complex:
        """Logarithm of ``value`` with the imaginary part taken from this cut."""
        return complex(math.log(abs(value)), cut_argument(value, self))


def cut_argument(lam: complex, cut: BranchCut) -> float:
    """Argument of ``lam`` in (−π, π] (NegAxis) or [0, 2π) (PosAxis).

    Raises OnCutError if the argument sits within ``cut.epsilon`` of the
    excluded side of the cut ray.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("The argument of zero is undefined")
    if lam.imag == 0:
        lam = complex(lam.real, 0.0)    # −0.0 would report −π / −0
    phase = cmath.phase(lam)
    if cut.is_neg:
        # (π, π + ε] in this convention is (−π, −π + ε] in principal terms
        if phase <= -math.pi + cut.epsilon:
            raise OnCutError(
                f"λ = {lam} has argument {phase:.3e} within ε = {cut.epsilon:g} "
                "below the negative real axis"
            )
        return phase
    if phase < 0:
        if phase >= -cut.epsilon:
            raise OnCutError(
                f"λ = {lam} has argument {phase:.3e} within ε = {cut.epsilon:g} "
                "below the positive real axis"
            )
        phase += 2.0 * math.pi
    return phase


# ---------------------------------------------------------------------------
# Rational positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalSplit:
    """a = p·L0 and L − a = q·L0 with coprime p ≥ q."""

    p: int
    q: int
    L0: float
    swapped: bool = False    # True when the caller's (p, q) were given as q > p

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 1 or self.q < 1:
            raise ValueError(f"p and q must be positive integers, got ({self.p}, {self.q})")
        if math.gcd(int(self.p), int(self.q)) != 1:
            raise ValueError(f"p and q must be coprime, got ({self.p}, {self.q})")
        if self.p < self.q:
            raise ValueError("RationalSplit requires p ≥ q; use from_integers to normalise")
        if not self.L0 > 0:
            raise ValueError(f"L0 must be positive, got {self.L0!r}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "L0", float(self.L0))

    @classmethod
    def from_integers(cls, p: int, q: int, length: float) -> "RationalSplit":
        """Split of a string of ``length`` at a = p/(p+q)·L, swapping to p ≥ q."""
        if not length > 0:
            raise ValueError(f"String length must be positive, got {length!r}")
        swapped = p < q
        if swapped:
            p, q = q, p
        return cls(p=p, q=q, L0=float(length) / (p + q), swapped=swapped)

    @classmethod
    def from_config(
        cls, cfg: StringConfig, max_denominator: int
    ) -> Optional["RationalSplit"]:
        """Certify a/L as rational with denominator ≤ ``max_denominator``.

        Returns None when the best continued-fraction approximant does not
        reproduce a and L − a to SPLIT_RTOL.
        """
        ratio = Fraction(cfg.position / cfg.length).limit_denominator(max_denominator)
        p, total = ratio.numerator, ratio.denominator
        q = total - p
        if p < 1 or q < 1:
            return None
        split = cls.from_integers(p, q, cfg.length)
        return split if split.matches(cfg) else None

    @property
    def length(self) -> float:
        return (self.p + self.q) * self.L0

    @property
    def position(self) -> float:
        return self.p * self.L0

    def matches(self, cfg: StringConfig) -> bool:
        """True if this split reproduces cfg (up to the a ↔ L − a symmetry)."""
        long_side = max(cfg.position, cfg.complement)
        short_side = min(cfg.position, cfg.complement)
        return math.isclose(self.p * self.L0, long_side, rel_tol=SPLIT_RTOL) and math.isclose(
            self.q * self.L0, short_side, rel_tol=SPLIT_RTOL
        )

    def config(self, alpha: complex) -> StringConfig:
        return StringConfig(self.length, self.position, alpha)


# ---------------------------------------------------------------------------
# Roots of the reduced polynomial and eigenvalue records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuValue:
    """μ_k = log(z_k) / (2·L0) with Im μ_k ∈ (−π/(2L0), π/(2L0)]."""

    mu: complex
    z: complex
    multiplicity: int = 1
    L0: float = field(default=1.0, compare=False)

    def __post_init__(self):
        mu, z = complex(self.mu), complex(self.z)
        if mu == 0:
            raise ValueError("μ = 0 cannot be a root of the reduced polynomial")
        bound = math.pi / (2.0 * self.L0)
        slack = 4 * np.finfo(float).eps * bound
        if not (-bound - slack < mu.imag <= bound + slack):
            raise ValueError(f"Im μ = {mu.imag} outside (−π/(2L0), π/(2L0)]")
        if not cmath.isclose(cmath.exp(2.0 * self.L0 * mu), z, rel_tol=MU_EXP_RTOL):
            raise ValueError(f"exp(2·L0·μ) does not reproduce z = {z}")
        if self.multiplicity < 1:
            raise ValueError("Multiplicity must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class Lattice:
    """λ_{1j} = jπi/L0."""

    j: int
    name: str = field(default="lattice", init=False)


@dataclass(frozen=True)
class Shifted:
    """λ_{2kj} = μ_k + jπi/L0."""

    k: int
    j: int
    name: str = field(default="shifted", init=False)


@dataclass(frozen=True)
class Located:
    """General-position eigenvalue, j-th in the closed upper (j > 0) or lower (j < 0) half-plane."""

    j: int
    name: str = field(default="located", init=False)


Family = Union[Lattice, Shifted, Located]


@dataclass(frozen=True)
class EigenvalueRecord:
    value: complex
    family: Family
    residual: float
    multiplicity: int = 1

    @property
    def indices(self) -> Tuple[Optional[int], Optional[int]]:
        """(k, j) for display; k is None outside the shifted family."""
        if isinstance(self.family, Shifted):
            return self.family.k, self.family.j
        return None, self.family.j


# ---------------------------------------------------------------------------
# Exponential-polynomial form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpPolynomialForm:
    """g(λ) = Σ r_j·e^{β_j λ}, 0 = β_0 < β_1 < … with every r_j ≠ 0.

    ``shift`` records the exponent factored out when the β = 0 term
    vanished; the unshifted polynomial equals e^{shift·λ}·g(λ).
    """

    terms: Tuple[Tuple[complex, float], ...]
    shift: float = 0.0

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([r for r, _ in self.terms], dtype=complex)

    @property
    def exponents(self) -> np.ndarray:
        return np.array([b for _, b in self.terms], dtype=float)

    @property
    def spread(self) -> float:
        """β_n − β_0."""
        return self.terms[-1][1] - self.terms[0][1]

    @property
    def order(self) -> int:
        """n, the index of the last term."""
        return len(self.terms) - 1

    def evaluate(self, lam):
        """Unscaled g(λ); overflows for large Re λ."""
        lam = np.asarray(lam, dtype=complex)
        r, b = self.coefficients, self.exponents
        return np.sum(r * np.exp(np.multiply.outer(lam, b)), axis=-1)

    def scaled(self, lam):
        """Return (g·e^{−σ}, Σ|r_j e^{β_j λ}|·e^{−σ}) with σ = max_j β_j·Re λ.

        The scale is a positive real factor, so the phase of g is preserved.
        """
        lam = np.asarray(lam, dtype=complex)
        r, b = self.coefficients, self.exponents
        expo = np.multiply.outer(lam, b)
        sigma = np.max(expo.real, axis=-1, keepdims=True)
        weights = np.exp(expo - sigma)
        value = np.sum(r * weights, axis=-1)
        magnitude = np.sum(np.abs(r) * np.abs(weights), axis=-1)
        return value, magnitude

    def log_derivative(self, lam):
        """g′(λ)/g(λ), evaluated with the same scaling as ``scaled``."""
        lam = np.asarray(lam, dtype=complex)
        r, b = self.coefficients, self.exponents
        expo = np.multiply.outer(lam, b)
        weights = np.exp(expo - np.max(expo.real, axis=-1, keepdims=True))
        return np.sum(r * b * weights, axis=-1) / np.sum(r * weights, axis=-1)

    def dominance_holds(self, x: float) -> bool:
        """True if one end term dominates all others on Re λ = x.

        For x > 0 the last term must exceed the rest, for x < 0 the first;
        either way g has no zero on that vertical line nor beyond it.
        """
        mags = np.abs(self.coefficients) * np.exp(self.exponents * x)
        lead = mags[-1] if x > 0 else mags[0]
        return bool(lead > np.sum(mags) - lead)


def build_exp_form(cfg: StringConfig) -> ExpPolynomialForm:
    """Exponential-polynomial form of the spectral condition.

    Terms ((α−2, 0), (−α, 2a), (−α, 2L−2a), (2+α, 2L)) are sorted, terms with
    equal exponents merged, zero coefficients dropped, and the exponents
    shifted so that the first one is 0.
    """
    L, a, alpha = cfg.length, cfg.position, cfg.alpha
    raw = sorted(
        [(alpha - 2, 0.0), (-alpha, 2 * a), (-alpha, 2 * L - 2 * a), (2 + alpha, 2 * L)],
        key=lambda t: t[1],
    )
    merged = []
    for r, b in raw:
        if merged and math.isclose(
            merged[-1][1], b, rel_tol=EXPONENT_MERGE_RTOL, abs_tol=EXPONENT_MERGE_RTOL * 2 * L
        ):
            merged[-1] = (merged[-1][0] + r, merged[-1][1])
        else:
            merged.append((complex(r), float(b)))
    kept = [(r, b) for r, b in merged if r != 0]
    shift = kept[0][1]
    return ExpPolynomialForm(
        terms=tuple((r, b - shift) for r, b in kept),
        shift=shift,
    )


# ---------------------------------------------------------------------------
# Spectral condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaledResidual:
    """Residual = mantissa·e^{log_scale}."""

    mantissa: complex
    log_scale: float = 0.0

    def __complex__(self) -> complex:
        return self.mantissa * math.exp(self.log_scale)

    def __abs__(self) -> float:
        return abs(self.mantissa) * math.exp(self.log_scale)

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale


def spectral_residual(lam: complex, cfg: StringConfig) -> ScaledResidual:
    """sinh(Lλ) + α·sinh(aλ)·sinh((L−a)λ), log-scaled for |Re λ|·L > 30."""
    lam = complex(lam)
    L, a, alpha = cfg.length, cfg.position, cfg.alpha
    if abs(lam.real) * L <= SCALED_EVAL_THRESHOLD:
        value = cmath.sinh(L * lam) + alpha * cmath.sinh(a * lam) * cmath.sinh((L - a) * lam)
        return ScaledResidual(value)

    # residual = e^{−Lλ}/4 · Σ r_j e^{(β_j + shift)λ}
    form = build_exp_form(cfg)
    r = form.coefficients
    expo = (form.exponents + form.shift - L) * lam
    log_mags = np.log(np.abs(r)) + expo.real - math.log(4.0)
    top = float(np.max(log_mags))
    mantissa = complex(np.sum(r * np.exp(expo - top)) / 4.0)
    return ScaledResidual(mantissa, top)


def log_abs_sinh(x: complex) -> float:
    """log|sinh(x)| without overflow."""
    x = complex(x)
    if abs(x.real) <= SCALED_EVAL_THRESHOLD:
        s = cmath.sinh(x)
        return math.log(abs(s)) if s != 0 else -math.inf
    # sinh(x) = ±e^{±x}/2 · (1 − e^{∓2x})
    return abs(x.real) - math.log(2.0)


def residual_tolerance_ok(lam: complex, cfg: StringConfig) -> Tuple[float, bool]:
    """(|residual|, passes) for the eigenvalue-record residual bound."""
    res = spectral_residual(lam, cfg)
    log_scale = max(0.0, log_abs_sinh(cfg.length * complex(lam)))
    ok = res.log_abs <= math.log(RESIDUAL_RTOL) + log_scale
    return abs(res), ok
