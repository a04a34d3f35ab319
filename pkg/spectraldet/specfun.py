"""Complex special functions for the zeta-regularised determinant.

log Γ via Stirling's series with upward argument recursion, and the Hurwitz
zeta function ζ_H(s, c) = Σ_{j≥0} (j + c)^{−s} continued to Re s > 1 − 2M by
Euler–Maclaurin summation. The Riemann zeta function is ζ_H(s, 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from spectraldet.config import (
    EM_BERNOULLI_ORDER,
    EM_MAX_BERNOULLI_ORDER,
    EM_MIN_SHIFT_TERMS,
    EM_SHIFT_TERMS,
    STIRLING_MIN_REAL,
    STIRLING_TERMS,
)
from spectraldet.errors import DomainError, PoleError

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# B_2, B_4, …, B_24
BERNOULLI_EVEN: Tuple[Fraction, ...] = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
)

# B_2k / (2k)!: Euler–Maclaurin weights
_EM_WEIGHTS: Tuple[float, ...] = tuple(
    float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(BERNOULLI_EVEN)
)

# B_2k / (2k (2k − 1)): Stirling weights
_STIRLING_WEIGHTS: Tuple[float, ...] = tuple(
    float(b / ((2 * (k + 1)) * (2 * (k + 1) - 1))) for k, b in enumerate(BERNOULLI_EVEN)
)


@dataclass(frozen=True)
class EulerMaclaurinParams:
    shift_terms: int = EM_SHIFT_TERMS
    bernoulli_order: int = EM_BERNOULLI_ORDER

    def __post_init__(self):
        if self.shift_terms < EM_MIN_SHIFT_TERMS:
            raise ValueError(f"shift_terms must be ≥ {EM_MIN_SHIFT_TERMS}, got {self.shift_terms}")
        if not 1 <= self.bernoulli_order <= EM_MAX_BERNOULLI_ORDER:
            raise ValueError(
                f"bernoulli_order must lie in [1, {EM_MAX_BERNOULLI_ORDER}], "
                f"got {self.bernoulli_order}"
            )


DEFAULT_EM = EulerMaclaurinParams()


def _is_nonpositive_integer(c: complex) -> bool:
    return c.imag == 0 and c.real <= 0 and c.real == math.floor(c.real)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def log_gamma(c: complex) -> complex:
    """Principal branch of log Γ(c), analytic off (−∞, 0] and real on (0, ∞)."""
    c = complex(c)
    if _is_nonpositive_integer(c):
        raise PoleError(f"Γ has a pole at c = {c.real:g}")

    # log Γ(c) = log Γ(c + n) − Σ_{k<n} log(c + k)
    correction = 0j
    while c.real < STIRLING_MIN_REAL:
        correction += cmath.log(c)
        c += 1.0

    log_c = cmath.log(c)
    series = (c - 0.5) * log_c - c + HALF_LOG_TWO_PI
    inv = 1.0 / c
    inv_sq = inv * inv
    power = inv
    for weight in _STIRLING_WEIGHTS[:STIRLING_TERMS]:
        series += weight * power
        power *= inv_sq
    return series - correction


def gamma_pair(c: complex) -> complex:
    """Γ(1 − ic)·Γ(1 + ic) = cπ / sinh(cπ); equal to 1 at c = 0."""
    c = complex(c)
    if c == 0:
        return 1.0 + 0j
    if c.real == 0 and c.imag == math.floor(c.imag):
        raise DomainError(f"Γ(1 ± ic) has a pole at c = {c}")
    x = c * math.pi
    if abs(x.real) > 30.0:
        # x / sinh(x) = 2x·e^{−x} / (1 − e^{−2x}), mirrored for Re x < 0
        sign = 1.0 if x.real > 0 else -1.0
        return 2.0 * x * sign * cmath.exp(-sign * x) / (1.0 - cmath.exp(-2.0 * sign * x))
    return x / cmath.sinh(x)


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------

def hurwitz_zeta(s: complex, c: complex, params: Optional[EulerMaclaurinParams] = None) -> complex:
    """ζ_H(s, c) for Re c > 0 and s ≠ 1, by Euler–Maclaurin summation.

    Parameters
    ----------
    s : complex
        Valid for Re s > 1 − 2M.
    c : complex
        Shift; Re c must be positive.
    params : EulerMaclaurinParams, optional
        Head length N and Bernoulli order M.
    """
    s, c = complex(s), complex(c)
    if s == 1:
        raise PoleError("ζ_H(s, c) has a pole at s = 1")
    if c.real <= 0:
        raise DomainError(f"ζ_H(s, c) requires Re c > 0, got c = {c}")
    params = params or DEFAULT_EM

    n = params.shift_terms
    head_logs = np.log(np.arange(n) + c)
    head = complex(np.sum(np.exp(-s * head_logs)))

    w = n + c
    log_w = cmath.log(w)
    tail = cmath.exp((1.0 - s) * log_w) / (s - 1.0) + 0.5 * cmath.exp(-s * log_w)

    rising = s                          # (s)_{2k−1}
    power = cmath.exp((-s - 1.0) * log_w)   # w^{−s−2k+1}
    inv_w_sq = 1.0 / (w * w)
    for k, weight in enumerate(_EM_WEIGHTS[: params.bernoulli_order], start=1):
        tail += weight * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power *= inv_w_sq
    return head + tail


def riemann_zeta(s: complex, params: Optional[EulerMaclaurinParams] = None) -> complex:
    return hurwitz_zeta(s, 1.0, params)


def hurwitz_zeta_sderiv0(c: complex) -> complex:
    """∂/∂s ζ_H(s, 1 + c) at s = 0, i.e. log(Γ(1 + c) / √(2π))."""
    return log_gamma(1.0 + complex(c)) - HALF_LOG_TWO_PI
