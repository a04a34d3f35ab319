"""Self-verification suite behind ``main.py verify``.

Each check family returns a list of Check results ("✅" passed, "⚠️"
failed). Sizes default to the full acceptance runs; tests call the same
functions with smaller sizes.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from spectraldet.config import AGREEMENT_TOL, MATCH_TOL, SWEEP_PRESETS
from spectraldet.determinant import (
    continuity_probe,
    det_closed,
    det_from_roots,
    determinant_report,
    max_relative_deviation,
    zeta_prime0_simplified,
    zeta_value,
)
from spectraldet.errors import SpectralDetError
from spectraldet.model import BranchCut, RationalSplit, StringConfig, build_exp_form
from spectraldet.specfun import (
    HALF_LOG_TWO_PI,
    gamma_pair,
    hurwitz_zeta,
    hurwitz_zeta_sderiv0,
    log_gamma,
    riemann_zeta,
)
from spectraldet.spectrum.general import (
    StripBox,
    count_zeros,
    enumerate_general,
    expand,
    match_spectra,
    strip_halfwidth,
)
from spectraldet.spectrum.rational import (
    Sign,
    closed_product_value,
    enumerate_eigenvalues,
    product_identity,
    solve,
)
from spectraldet.sweep import SweepSpec, sweep_rows

logger = logging.getLogger(__name__)

NEG, POS = BranchCut.neg(), BranchCut.pos()


@dataclass
class Check:
    category: str    # "closed", "prod", …
    name: str
    passed: bool
    message: str

    @property
    def icon(self) -> str:
        return "✅" if self.passed else "⚠️"


def _rel(x: complex, y: complex) -> float:
    return max_relative_deviation([x, y])


def _coprime_pairs(max_total: int, strict: bool = False) -> List[tuple]:
    """(p, q) with p ≥ q (p > q when strict), gcd 1 and p + q ≤ max_total."""
    pairs = []
    for total in range(2, max_total + 1):
        for q in range(1, total // 2 + 1):
            p = total - q
            if math.gcd(p, q) == 1 and (p > q or not strict):
                pairs.append((p, q))
    return pairs


def random_alpha(rng: np.random.Generator, scale: float = 4.0, avoid: float = 1e-3) -> complex:
    """Complex α with |α ∓ 2| > avoid."""
    while True:
        alpha = complex(rng.normal(0.0, scale), rng.normal(0.0, scale))
        if abs(alpha - 2) > avoid and abs(alpha + 2) > avoid:
            return alpha


# ---------------------------------------------------------------------------
# Closed form
# ---------------------------------------------------------------------------

def check_closed() -> List[Check]:
    cases = [
        (0.3, 1, NEG, 4), (0.3, 0, NEG, 2), (0.3, -2, NEG, 1), (0.3, 6, NEG, -1),
        (0.3, 2, NEG, 2), (0.5, 2, NEG, 1),
        (0.3, 6, POS, -0.5), (0.7, 0, POS, -2), (0.3, -2, POS, -2), (0.5, -2, POS, -1),
    ]
    checks = []
    for a, alpha, cut, expected in cases:
        cfg = StringConfig(1.0, a, alpha)
        closed = det_closed(cfg, cut)
        split = RationalSplit.from_config(cfg, 10)
        numeric = det_from_roots(solve(split, alpha).mus, split, cut)
        ok = closed == expected and _rel(numeric, expected) <= 1e-9
        checks.append(Check(
            "closed",
            f"det({alpha:+g}), a={a:g}, cut={cut.label}",
            ok,
            f"closed {closed:.12g}, roots {numeric:.12g}, expected {expected:g}",
        ))
    return checks


def check_cut_relation(rng: np.random.Generator, draws: int = 50) -> List[Check]:
    """det(α, pos) = −det(−α, neg)."""
    alphas = [random_alpha(rng) for _ in range(draws)] + [2, -2, 0]
    worst = 0.0
    for alpha in alphas:
        for a in (0.3, 0.5):
            lhs = det_closed(StringConfig(1.0, a, alpha), POS)
            rhs = -det_closed(StringConfig(1.0, a, -alpha), NEG)
            worst = max(worst, abs(lhs - rhs))
    return [Check("cut-relation", f"{len(alphas)} α × 2 positions", worst == 0.0,
                  f"max |det(α,pos) + det(−α,neg)| = {worst:.3g}")]


# ---------------------------------------------------------------------------
# Product identities
# ---------------------------------------------------------------------------

def check_products(rng: np.random.Generator, max_total: int = 60, draws: int = 20) -> List[Check]:
    worst, worst_at = 0.0, None
    miscounted = []
    pairs = _coprime_pairs(max_total)
    for p, q in pairs:
        split = RationalSplit.from_integers(p, q, 1.0)
        for _ in range(draws):
            alpha = random_alpha(rng)
            solution = solve(split, alpha)
            if solution.root_count != solution.polynomial.degree:
                miscounted.append((p, q, alpha))
            mus = solution.mus
            for sign in (Sign.PLUS, Sign.MINUS):
                err = _rel(product_identity(mus, split, alpha, sign),
                           closed_product_value(split, alpha, sign))
                if err > worst:
                    worst, worst_at = err, (p, q, alpha, sign.value)
    message = f"max relative deviation {worst:.2e} at {worst_at}"
    if miscounted:
        message += f"; root count ≠ degree at {miscounted[0]}"
    return [Check("prod", f"{len(pairs)} splits × {draws} α",
                  worst <= 1e-10 and not miscounted, message)]


def check_degenerate(max_p: int = 20) -> List[Check]:
    checks = []
    worst = 0.0
    for p, q in _coprime_pairs(2 * max_p, strict=True):
        if p > max_p:
            continue
        split = RationalSplit.from_integers(p, q, 1.0)
        for alpha in (-2.0, 2.0):
            mus = solve(split, alpha).mus
            for sign in (Sign.PLUS, Sign.MINUS):
                worst = max(worst, _rel(product_identity(mus, split, alpha, sign),
                                        closed_product_value(split, alpha, sign)))
            for cut in (NEG, POS):
                expected = det_closed(split.config(alpha), cut)
                worst = max(worst, _rel(det_from_roots(mus, split, cut), expected))
    checks.append(Check("degenerate", f"α = ±2, p > q, p ≤ {max_p}", worst <= 1e-10,
                        f"max relative deviation {worst:.2e}"))

    half = RationalSplit.from_integers(1, 1, 1.0)
    values = [det_from_roots(solve(half, alpha).mus, half, cut)
              for alpha, cut in ((2, NEG), (-2, NEG), (2, POS), (-2, POS))]
    expected = [1, 1, -1, -1]
    ok = all(_rel(v, e) <= 1e-12 for v, e in zip(values, expected))
    checks.append(Check("degenerate", "p = q = 1 empty product", ok,
                        f"values {[round(v.real, 12) for v in values]}"))

    # continuity at the critical value the cut does not blow up at
    split = RationalSplit.from_integers(2, 1, 1.0)
    for alpha, cut in ((-2.0, NEG), (2.0, POS)):
        probe = continuity_probe(split, alpha, cut)
        targets = [det_closed(split.config(alpha + d), cut) for d in (0.0, 1e-6, -1e-6)]
        err = max(_rel(v, t) for v, t in zip(probe, targets))
        checks.append(Check("degenerate", f"continuity at α = {alpha:+g}, cut={cut.label}",
                            err <= 1e-8, f"max relative deviation {err:.2e}"))
    return checks


# ---------------------------------------------------------------------------
# Determinant paths and zeta function
# ---------------------------------------------------------------------------

def random_split(rng: np.random.Generator, max_total: int = 12) -> RationalSplit:
    pairs = _coprime_pairs(max_total)
    p, q = pairs[int(rng.integers(len(pairs)))]
    return RationalSplit.from_integers(p, q, float(rng.uniform(0.5, 3.0)))


def check_paths(rng: np.random.Generator, configs: int = 200) -> List[Check]:
    worst, failures = 0.0, []
    branch_ok = True
    for _ in range(configs):
        split = random_split(rng)
        alpha = random_alpha(rng, avoid=0.1)
        cut = NEG if rng.random() < 0.5 else POS
        try:
            report = determinant_report(split.config(alpha), cut, split=split)
        except SpectralDetError as exc:
            failures.append(f"p={split.p}, q={split.q}, α={alpha:.4g}: {exc}")
            continue
        worst = max(worst, report.agreement)
        mus = solve(split, alpha).mus
        zp = zeta_prime0_simplified(mus, split, cut)
        branch_ok &= _rel(cmath.exp(-zp.value), report.from_roots) <= AGREEMENT_TOL
    message = f"max agreement {worst:.2e}"
    if failures:
        message += f"; {len(failures)} failed, first: {failures[0]}"
    return [Check("paths", f"{configs} random rational configs",
                  not failures and worst <= AGREEMENT_TOL and branch_ok, message)]


def check_zeta(rng: np.random.Generator, configs: int = 10, im_bound: float = 1e4) -> List[Check]:
    checks = []
    lattice = RationalSplit.from_integers(1, 1, 1.0)
    cfg = lattice.config(0)
    for s, expected in ((2, -1.0 / 3.0), (4, 1.0 / 45.0)):
        direct = zeta_value(cfg, s, NEG, im_bound=im_bound, split=lattice)
        assembled = zeta_value(cfg, s, NEG, split=lattice, mode="assembled")
        ok = (abs(direct.value - expected) <= direct.error_bar + 1e-9
              and direct.error_bar <= 1e-6
              and abs(assembled.value - expected) <= 1e-9)
        checks.append(Check(
            "zeta", f"ζ({s}) for α = 0", ok,
            f"direct {direct.value:.12g} ± {direct.error_bar:.1e}, "
            f"assembled {assembled.value:.12g}, expected {expected:.12g}",
        ))

    worst_ratio = 0.0
    for _ in range(configs):
        split = random_split(rng, max_total=6)
        alpha = random_alpha(rng, scale=2.0, avoid=0.5)
        cut = NEG if rng.random() < 0.5 else POS
        for s in (2, 3, 4):
            cfg = split.config(alpha)
            direct = zeta_value(cfg, s, cut, im_bound=im_bound / 10, split=split)
            assembled = zeta_value(cfg, s, cut, split=split, mode="assembled")
            gap = abs(direct.value - assembled.value)
            worst_ratio = max(worst_ratio, gap / (direct.error_bar + 1e-9))
    checks.append(Check("zeta", f"direct vs assembled, {configs} configs × s ∈ {{2, 3, 4}}",
                        worst_ratio <= 1.0, f"max |gap| / tail bar = {worst_ratio:.3g}"))
    return checks


# ---------------------------------------------------------------------------
# General solver
# ---------------------------------------------------------------------------

def check_oracle(rng: np.random.Generator, draws: int = 10, im_bound: float = 20.0) -> List[Check]:
    checks = []
    for p, q in ((1, 2), (2, 3), (3, 4)):
        split = RationalSplit.from_integers(p, q, 1.0)
        worst = 0.0
        for _ in range(draws):
            alpha = random_alpha(rng, scale=2.0, avoid=0.5)
            reference = expand(enumerate_eigenvalues(split, alpha, im_bound))
            records, _ = enumerate_general(StringConfig(1.0, p / (p + q), alpha), im_bound)
            worst = max(worst, match_spectra(expand(records), reference))
        checks.append(Check("oracle", f"a = {p}/{p + q}", worst <= MATCH_TOL,
                            f"max matched distance {worst:.2e}"))
    return checks


def check_localization(rng: np.random.Generator, draws: int = 5, boxes: int = 20) -> List[Check]:
    worst_re, worst_im = -math.inf, -math.inf
    for _ in range(draws):
        cfg = StringConfig(1.0, float(rng.uniform(0.05, 0.95)), random_alpha(rng, scale=2.0, avoid=0.5))
        records, bound = enumerate_general(cfg, 20.0)
        for r in records:
            j = r.family.j
            worst_re = max(worst_re, abs(r.value.real) - bound.c1)
            worst_im = max(worst_im, abs(r.value.imag - j * bound.spacing) - bound.c2)
    localized = Check("localization", f"{draws} random configs",
                      worst_re < 0 and worst_im < 0,
                      f"max |Re λ| − c1 = {worst_re:.3g}, max |Im λ_j − jπ/L| − c2 = {worst_im:.3g}")

    worst_gap, within = 0.0, True
    for _ in range(boxes):
        cfg = StringConfig(1.0, float(rng.uniform(0.05, 0.95)), random_alpha(rng, scale=2.0, avoid=0.5))
        form = build_exp_form(cfg)
        c1 = strip_halfwidth(form, cfg)
        B = float(rng.uniform(1.0, 20.0))
        shift = 1e-3
        box = StripBox(c1, B - shift, B)
        # count zeros of g itself, λ = 0 included
        n = count_zeros(box, form) + 1
        gap = abs(n - B * form.spread / math.pi)
        within &= gap <= form.order
        worst_gap = max(worst_gap, gap)
    counted = Check("localization", f"{boxes} boxes with A = B", within,
                    f"max |n(R) − B·(β_n − β_0)/π| = {worst_gap:.3g}")
    return [localized, counted]


# ---------------------------------------------------------------------------
# Special functions and sweeps
# ---------------------------------------------------------------------------

def check_specfun(rng: np.random.Generator, draws: int = 50) -> List[Check]:
    checks = [
        Check("specfun", "ζ_R(0) = −1/2", abs(riemann_zeta(0) + 0.5) <= 1e-10,
              f"{riemann_zeta(0):.15g}"),
        Check("specfun", "ζ_R′(0) = −½ log 2π",
              abs(hurwitz_zeta_sderiv0(0) + HALF_LOG_TWO_PI) <= 1e-10,
              f"{hurwitz_zeta_sderiv0(0):.15g}"),
    ]
    worst_h0, worst_pair, worst_fd = 0.0, 0.0, 0.0
    h = 1e-5
    for _ in range(draws):
        c = complex(rng.uniform(0.2, 3.0), rng.uniform(-3.0, 3.0))
        worst_h0 = max(worst_h0, abs(hurwitz_zeta(0, c) - (0.5 - c)))
        fd = (hurwitz_zeta(h, c) - hurwitz_zeta(-h, c)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - (log_gamma(c) - HALF_LOG_TWO_PI)))
        x = complex(rng.uniform(-2.0, 2.0), rng.uniform(-0.45, 0.45))
        via_log_gamma = cmath.exp(log_gamma(1 - 1j * x) + log_gamma(1 + 1j * x))
        worst_pair = max(worst_pair, _rel(gamma_pair(x), via_log_gamma))
    checks += [
        Check("specfun", "ζ_H(0, c) = ½ − c", worst_h0 <= 1e-10,
              f"max error {worst_h0:.2e} over {draws} draws"),
        Check("specfun", "∂_s ζ_H(0, c) = log Γ(c) − ½ log 2π", worst_fd <= 1e-8,
              f"max error {worst_fd:.2e} over {draws} draws"),
        Check("specfun", "Γ(1 − ic)Γ(1 + ic) = cπ/sinh(cπ)", worst_pair <= 1e-10,
              f"max relative error {worst_pair:.2e} over {draws} draws"),
    ]
    return checks


def check_sweep(names: Iterable[str] = tuple(SWEEP_PRESETS)) -> List[Check]:
    checks = []
    for name in names:
        preset = SWEEP_PRESETS[name]
        spec = SweepSpec.from_preset(preset)
        rows = [r for r in sweep_rows(spec) if r["marker"] != "gap"]
        worst, errors = 0.0, 0
        for row in rows:
            if row["error"]:
                errors += 1
                continue
            alpha = row["alpha"]
            closed = complex(row["det_closed_re"], row["det_closed_im"])
            numeric = complex(row["det_numeric_re"], row["det_numeric_im"])
            if abs(alpha) != 2.0:
                formula = 4 * preset.length / (2 - alpha) if spec.cut.is_neg else -4 * preset.length / (2 + alpha)
                worst = max(worst, _rel(closed, formula))
            worst = max(worst, _rel(closed, numeric))
        checks.append(Check("sweep", f"preset {name} ({preset.notes})",
                            errors == 0 and worst <= 1e-9,
                            f"{len(rows)} points, max deviation {worst:.2e}, {errors} failed"))
    return checks


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CHECKS: Dict[str, Callable[[np.random.Generator], List[Check]]] = {
    "closed": lambda rng: check_closed(),
    "prod": check_products,
    "degenerate": lambda rng: check_degenerate(),
    "paths": check_paths,
    "zeta": check_zeta,
    "oracle": check_oracle,
    "localization": check_localization,
    "cut-relation": check_cut_relation,
    "specfun": check_specfun,
    "sweep": lambda rng: check_sweep(),
}


def run_checks(only: Optional[Sequence[str]] = None, seed: int = 0) -> List[Check]:
    """Run the selected check families (all by default) with one seeded generator."""
    names = list(only) if only else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown check(s) {unknown}. Expected some of {sorted(CHECKS)}.")
    rng = np.random.default_rng(seed)
    results: List[Check] = []
    for name in names:
        logger.info("Running %s checks", name)
        try:
            results.extend(CHECKS[name](rng))
        except SpectralDetError as exc:
            results.append(Check(name, "aborted", False, f"{type(exc).__name__}: {exc}"))
    return results
