import cmath
import math

import pytest

from spectraldet import determinant
from spectraldet.determinant import (
    continuity_probe,
    det_closed,
    det_from_roots,
    determinant_report,
    max_relative_deviation,
    zeta_prime0_hurwitz_path,
    zeta_prime0_simplified,
    zeta_value,
)
from spectraldet.errors import AgreementError, DomainError
from spectraldet.model import BranchCut, RationalSplit, StringConfig
from spectraldet.spectrum.rational import Regime, solve

LN2 = math.log(2.0)


def _random_alpha(rng, avoid=0.1):
    while True:
        alpha = complex(rng.normal(0, 4), rng.normal(0, 4))
        if abs(alpha - 2) > avoid and abs(alpha + 2) > avoid:
            return alpha


# ---------------------------------------------------------------------------
# Closed form
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "a, alpha, cut, expected",
    [
        (0.3, 1, "neg", 4), (0.3, 0, "neg", 2), (0.3, -2, "neg", 1), (0.3, 6, "neg", -1),
        (0.3, 2, "neg", 2), (0.5, 2, "neg", 1),
        (0.3, 6, "pos", -0.5), (0.7, 0, "pos", -2), (0.3, -2, "pos", -2), (0.5, -2, "pos", -1),
    ],
)
def test_closed_form_values(a, alpha, cut, expected):
    assert det_closed(StringConfig(1.0, a, alpha), BranchCut.parse(cut)) == expected


def test_closed_form_scales_with_length(neg):
    assert det_closed(StringConfig(2.5, 1.0, 1.0), neg) == pytest.approx(10.0)


def test_cut_relation(rng, neg, pos):
    for _ in range(20):
        alpha = _random_alpha(rng)
        for a in (0.3, 0.5):
            assert det_closed(StringConfig(1.0, a, alpha), pos) == -det_closed(
                StringConfig(1.0, a, -alpha), neg
            )


def test_closed_form_is_position_independent_off_the_critical_values(neg, pos):
    for alpha in (0.0, 1.5, complex(-3.0, 2.0)):
        for cut in (neg, pos):
            values = {det_closed(StringConfig(1.0, a, alpha), cut) for a in (0.1, 0.3, 0.5, 0.8)}
            assert len(values) == 1


def test_pole_behaviour(neg, pos):
    for delta in (1e-4, -1e-4, 1e-7):
        cfg = StringConfig(1.0, 0.3, 2.0 + delta)
        assert det_closed(cfg, neg) * (2.0 - cfg.alpha) == pytest.approx(4.0, rel=1e-9)
        cfg = StringConfig(1.0, 0.3, -2.0 + delta)
        assert det_closed(cfg, pos) * (2.0 + cfg.alpha) == pytest.approx(-4.0, rel=1e-9)


# ---------------------------------------------------------------------------
# Root products
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p, q", [(1, 1), (2, 1), (3, 2), (5, 3), (9, 4)])
def test_root_product_matches_closed_form(rng, neg, pos, p, q):
    split = RationalSplit.from_integers(p, q, 1.7)
    for _ in range(5):
        alpha = _random_alpha(rng)
        mus = solve(split, alpha).mus
        for cut in (neg, pos):
            closed = det_closed(split.config(alpha), cut)
            assert det_from_roots(mus, split, cut) == pytest.approx(closed, rel=1e-10)


def test_root_product_is_position_independent(neg):
    alpha = complex(1.5, 0.5)
    values = []
    for p, q in ((2, 1), (4, 3), (7, 2)):
        split = RationalSplit.from_integers(p, q, 1.0)
        values.append(det_from_roots(solve(split, alpha).mus, split, neg))
    assert max_relative_deviation(values) < 1e-10


def test_root_product_survives_large_alpha(neg, pos):
    split = RationalSplit.from_integers(3, 1, 1.0)
    for alpha in (1e6, complex(-4e5, 3e5)):
        mus = solve(split, alpha).mus
        for cut in (neg, pos):
            closed = det_closed(split.config(alpha), cut)
            assert det_from_roots(mus, split, cut) == pytest.approx(closed, rel=1e-8)


def test_empty_product_at_the_midpoint(neg, pos):
    half = RationalSplit.from_integers(1, 1, 1.0)
    assert det_from_roots(solve(half, 2.0).mus, half, neg) == pytest.approx(1.0)
    assert det_from_roots(solve(half, -2.0).mus, half, pos) == pytest.approx(-1.0)


def test_continuity_through_the_critical_values(neg, pos):
    split = RationalSplit.from_integers(2, 1, 1.0)
    for alpha, cut in ((-2.0, neg), (2.0, pos)):
        probe = continuity_probe(split, alpha, cut)
        targets = [det_closed(split.config(alpha + d), cut) for d in (0.0, 1e-6, -1e-6)]
        for value, target in zip(probe, targets):
            assert value == pytest.approx(target, rel=1e-8)


# ---------------------------------------------------------------------------
# ζ′(0)
# ---------------------------------------------------------------------------

def test_simplified_zeta_prime_undamped(neg):
    split = RationalSplit.from_integers(2, 1, 1.0)
    zp = zeta_prime0_simplified(solve(split, 0.0).mus, split, neg)
    assert zp.value == pytest.approx(-LN2, abs=1e-12)
    assert zp.branch_integer == 0


def test_simplified_zeta_prime_reproduces_the_determinant(rng, neg, pos):
    for p, q in ((2, 1), (5, 2), (8, 5)):
        split = RationalSplit.from_integers(p, q, 1.3)
        alpha = _random_alpha(rng)
        mus = solve(split, alpha).mus
        for cut in (neg, pos):
            zp = zeta_prime0_simplified(mus, split, cut)
            assert cmath.exp(-zp.value) == pytest.approx(det_from_roots(mus, split, cut), rel=1e-10)


@pytest.mark.parametrize("p, q", [(7, 4), (13, 8), (21, 13), (30, 29)])
def test_branch_integer_is_measured_against_the_principal_log(pos, p, q):
    split = RationalSplit.from_integers(p, q, 1.0)
    mus = solve(split, 0.3 - 9j).mus
    zp = zeta_prime0_simplified(mus, split, pos)
    det = det_from_roots(mus, split, pos)
    expected = cmath.log(det) + 2j * math.pi * zp.branch_integer
    assert -zp.value == pytest.approx(expected, abs=1e-8)
    assert zp.branch_integer == round((-zp.value.imag - cmath.phase(det)) / (2 * math.pi))


def test_simplified_zeta_prime_rejects_a_mismatched_product(neg, monkeypatch):
    split = RationalSplit.from_integers(2, 1, 1.0)
    mus = solve(split, 1.0).mus
    original = determinant._log_det_from_roots
    monkeypatch.setattr(determinant, "_log_det_from_roots", lambda *args: original(*args) + 0.1)
    with pytest.raises(AgreementError, match="root product"):
        zeta_prime0_simplified(mus, split, neg)


def test_hurwitz_path_undamped_midpoint(neg, pos):
    half = RationalSplit.from_integers(1, 1, 1.0)
    mus = solve(half, 0.0).mus
    assert zeta_prime0_hurwitz_path(mus, half, neg) == pytest.approx(-LN2, abs=1e-10)
    assert cmath.exp(-zeta_prime0_hurwitz_path(mus, half, pos)) == pytest.approx(-2.0, abs=1e-10)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def test_report_generic(neg):
    split = RationalSplit.from_integers(1, 2, 1.0)
    report = determinant_report(split.config(1.0), neg, split=split)
    assert report.closed == 4
    assert report.from_roots == pytest.approx(4.0, rel=1e-10)
    assert report.zeta_path == pytest.approx(4.0, rel=1e-10)
    assert report.regime is Regime.GENERIC
    assert report.agreement < 1e-8
    assert report.is_complete and report.notice is None


def test_report_trivial_regime(neg):
    half = RationalSplit.from_integers(1, 1, 1.0)
    report = determinant_report(half.config(2.0), neg, split=half)
    assert report.regime is Regime.TRIVIAL
    assert report.closed == 1
    assert report.from_roots == pytest.approx(1.0)
    assert report.zeta_path == pytest.approx(1.0)


def test_report_degenerate_pos(pos):
    split = RationalSplit.from_integers(2, 3, 1.0)
    report = determinant_report(split.config(-2.0), pos, split=split)
    assert report.regime is Regime.ALPHA_MINUS_2
    assert report.closed == -2
    assert report.from_roots == pytest.approx(-2.0, rel=1e-10)


def test_report_snaps_alpha_near_critical(neg):
    split = RationalSplit.from_integers(2, 1, 1.0)
    report = determinant_report(split.config(2.0 + 1e-10), neg, split=split)
    assert report.regime is Regime.ALPHA_PLUS_2
    assert report.closed == 2


def test_report_certifies_rational_positions(neg):
    report = determinant_report(StringConfig(1.0, 0.4, 1.0), neg, max_denominator=10)
    assert (report.split.p, report.split.q) == (3, 2)
    assert report.from_roots == pytest.approx(4.0, rel=1e-10)


def test_report_irrational_position_has_only_the_closed_form(neg):
    report = determinant_report(StringConfig(1.0, 0.9 / math.sqrt(2.0), 1.0), neg)
    assert report.closed == 4
    assert report.from_roots is None and report.zeta_path is None
    assert not report.is_complete
    assert "closed form" in report.notice


def test_report_rejects_a_mismatched_split(neg):
    with pytest.raises(ValueError):
        determinant_report(StringConfig(1.0, 0.3, 1.0), neg, split=RationalSplit.from_integers(1, 1, 1.0))


def test_report_raises_on_disagreement(monkeypatch, neg):
    monkeypatch.setattr(determinant, "det_closed", lambda cfg, cut: complex(5.0))
    split = RationalSplit.from_integers(1, 2, 1.0)
    with pytest.raises(AgreementError) as excinfo:
        determinant_report(split.config(1.0), neg, split=split)
    assert excinfo.value.agreement == pytest.approx(0.2, rel=1e-9)


# ---------------------------------------------------------------------------
# Spectral zeta function
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("s, expected", [(2, -1.0 / 3.0), (4, 1.0 / 45.0)])
def test_zeta_undamped(neg, s, expected):
    half = RationalSplit.from_integers(1, 1, 1.0)
    cfg = half.config(0.0)
    direct = zeta_value(cfg, s, neg, im_bound=1e3, split=half)
    assembled = zeta_value(cfg, s, neg, split=half, mode="assembled")
    assert direct.value == pytest.approx(expected, abs=1e-9)
    assert direct.error_bar < 1e-9
    assert assembled.value == pytest.approx(expected, abs=1e-10)
    assert assembled.mode == "assembled"


@pytest.mark.parametrize("cut_name", ["neg", "pos"])
def test_zeta_direct_within_its_error_bar(cut_name):
    cut = BranchCut.parse(cut_name)
    half = RationalSplit.from_integers(1, 1, 1.0)
    cfg = half.config(6.0)
    assembled = zeta_value(cfg, 2, cut, split=half, mode="assembled").value
    direct = zeta_value(cfg, 2, cut, im_bound=200.0, split=half)
    assert math.isfinite(direct.error_bar)
    assert abs(direct.value - assembled) <= direct.error_bar + 1e-9


def test_zeta_general_solver_path(neg):
    split = RationalSplit.from_integers(2, 1, 1.0)
    alpha = complex(1.0, 0.5)
    cfg = StringConfig(1.0, 1.0 / 3.0, alpha)
    assembled = zeta_value(split.config(alpha), 3, neg, split=split, mode="assembled").value
    # halfway between lattice points, so no eigenvalue sits on the cutoff
    direct = zeta_value(cfg, 3, neg, im_bound=19.5 * math.pi)
    assert abs(direct.value - assembled) <= direct.error_bar + 1e-8


def test_zeta_domain_errors(neg):
    cfg = StringConfig(1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        zeta_value(cfg, 1.0, neg)
    with pytest.raises(DomainError):
        zeta_value(cfg, 2.0, neg, mode="assembled")
    with pytest.raises(ValueError):
        zeta_value(cfg, 2.0, neg, mode="spectral")
