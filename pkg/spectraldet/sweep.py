"""α-sweeps of the determinant along the real axis."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from spectraldet.config import (
    SWEEP_ALPHA_END,
    SWEEP_ALPHA_START,
    SWEEP_EXCLUDE_RADIUS,
    SWEEP_STEP,
    SweepPreset,
)
from spectraldet.determinant import det_closed, det_from_roots
from spectraldet.errors import SpectralDetError
from spectraldet.model import BranchCut, RationalSplit, StringConfig
from spectraldet.spectrum.rational import solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepSpec:
    cut: BranchCut
    length: float = 1.0
    position: Optional[float] = None
    p: Optional[int] = None
    q: Optional[int] = None
    alpha_start: float = SWEEP_ALPHA_START
    alpha_end: float = SWEEP_ALPHA_END
    step: float = SWEEP_STEP
    exclude_radius: float = SWEEP_EXCLUDE_RADIUS

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"Sweep step must be positive, got {self.step!r}")
        if not self.alpha_start < self.alpha_end:
            raise ValueError("Sweep needs alpha_start < alpha_end")
        if not self.exclude_radius > 0:
            raise ValueError("exclude_radius must be positive")
        if (self.p is None) != (self.q is None):
            raise ValueError("Give both p and q, or neither")
        if self.p is None and self.position is None:
            raise ValueError("Sweep needs either a position or p and q")

    @classmethod
    def from_preset(cls, preset: SweepPreset) -> "SweepSpec":
        return cls(
            cut=BranchCut.parse(preset.cut),
            length=preset.length,
            p=preset.p,
            q=preset.q,
            alpha_start=preset.alpha_start,
            alpha_end=preset.alpha_end,
            step=preset.step,
        )

    @property
    def split(self) -> Optional[RationalSplit]:
        if self.p is None:
            return None
        return RationalSplit.from_integers(self.p, self.q, self.length)

    @property
    def config(self) -> StringConfig:
        split = self.split
        if split is not None:
            return split.config(0j)
        return StringConfig(self.length, self.position, 0j)

    @property
    def pole(self) -> float:
        """α at which det(α) blows up for this cut."""
        return 2.0 if self.cut.is_neg else -2.0

    def alphas(self) -> np.ndarray:
        count = int(math.floor((self.alpha_end - self.alpha_start) / self.step + 1e-9))
        # rounded so that grid points such as ±2 are hit exactly
        return np.round(self.alpha_start + self.step * np.arange(count + 1), 12)


def _row(alpha: float, closed=None, numeric=None, marker: str = "", error: Optional[str] = None) -> Dict[str, Any]:
    return {
        "alpha": float(alpha),
        "det_closed_re": closed.real if closed is not None else None,
        "det_closed_im": closed.imag if closed is not None else None,
        "det_numeric_re": numeric.real if numeric is not None else None,
        "det_numeric_im": numeric.imag if numeric is not None else None,
        "marker": marker,
        "error": error,
    }


def sweep_rows(spec: SweepSpec) -> List[Dict[str, Any]]:
    """One row per grid α plus gap markers straddling the pole.

    Points within exclude_radius of the pole are skipped; the pole itself and
    the opposite critical value are kept and marked "critical". A failed
    point carries its error message and the sweep continues.
    """
    cfg = spec.config
    split = spec.split
    rows: List[Dict[str, Any]] = []

    if spec.alpha_start <= spec.pole <= spec.alpha_end:
        for side in (-1.0, 1.0):
            rows.append(_row(spec.pole + side * spec.exclude_radius, marker="gap"))

    for alpha in spec.alphas():
        alpha = float(alpha)
        if alpha != spec.pole and abs(alpha - spec.pole) < spec.exclude_radius:
            continue
        marker = "critical" if abs(alpha) == 2.0 else ""
        point = cfg.with_alpha(alpha)
        closed = det_closed(point, spec.cut)
        numeric = None
        error = None
        if split is not None:
            try:
                numeric = det_from_roots(solve(split, alpha).mus, split, spec.cut)
            except SpectralDetError as exc:
                logger.warning("Sweep point α = %g failed: %s", alpha, exc)
                error = f"{type(exc).__name__}: {exc}"
        rows.append(_row(alpha, closed, numeric, marker, error))
    return rows
