import cmath
import math

import numpy as np
import pytest

from spectraldet.errors import OnCutError
from spectraldet.model import (
    BranchCut,
    EigenvalueRecord,
    Lattice,
    MuValue,
    RationalSplit,
    Shifted,
    StringConfig,
    build_exp_form,
    cut_argument,
    residual_tolerance_ok,
    spectral_residual,
)


# ---------------------------------------------------------------------------
# StringConfig
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("length, position", [(0.0, 0.1), (-1.0, 0.5), (1.0, 0.0), (1.0, 1.0), (1.0, 1.2)])
def test_string_config_rejects_bad_geometry(length, position):
    with pytest.raises(ValueError):
        StringConfig(length, position, 1.0)


def test_string_config_normalises_alpha_and_symmetry():
    cfg = StringConfig(2, 1, 3)
    assert cfg.alpha == 3 + 0j
    assert cfg.is_symmetric
    assert cfg.complement == 1.0
    assert not StringConfig(1.0, 0.3).is_symmetric
    assert cfg.mirrored().position == cfg.complement


# ---------------------------------------------------------------------------
# Branch cuts
# ---------------------------------------------------------------------------

def test_negative_axis_belongs_to_neg_cut(neg):
    assert cut_argument(-1.0, neg) == pytest.approx(math.pi)
    assert cut_argument(complex(-1.0, -0.0), neg) == pytest.approx(math.pi)
    assert cut_argument(-1j, neg) == pytest.approx(-math.pi / 2)


def test_pos_cut_arguments_in_zero_two_pi(pos):
    assert cut_argument(1.0, pos) == 0.0
    assert cut_argument(-1j, pos) == pytest.approx(1.5 * math.pi)
    assert cut_argument(-1.0, pos) == pytest.approx(math.pi)


def test_arguments_inside_the_excluded_sliver_raise(neg, pos):
    with pytest.raises(OnCutError):
        cut_argument(complex(-1.0, -1e-9), neg)
    with pytest.raises(OnCutError):
        cut_argument(complex(1.0, -1e-9), pos)


def test_branch_cut_parse():
    assert BranchCut.parse(" POS ").label == "pos"
    with pytest.raises(ValueError):
        BranchCut.parse("up")


def test_cut_log_matches_argument(pos):
    value = complex(-2.0, -1.0)
    log = pos.log(value)
    assert log.real == pytest.approx(math.log(abs(value)))
    assert cmath.exp(log) == pytest.approx(value)
    assert log.imag > math.pi


# ---------------------------------------------------------------------------
# Rational splits
# ---------------------------------------------------------------------------

def test_from_integers_swaps_to_p_at_least_q():
    split = RationalSplit.from_integers(1, 2, 1.0)
    assert (split.p, split.q, split.swapped) == (2, 1, True)
    assert split.L0 == pytest.approx(1 / 3)


def test_split_requires_coprime_integers():
    with pytest.raises(ValueError):
        RationalSplit.from_integers(2, 4, 1.0)
    with pytest.raises(ValueError):
        RationalSplit(1, 2, 0.5)


def test_from_config_certifies_rational_positions():
    split = RationalSplit.from_config(StringConfig(1.0, 0.4), 10)
    assert (split.p, split.q) == (3, 2)
    assert split.L0 == pytest.approx(0.2)
    assert split.matches(StringConfig(1.0, 0.6))


def test_from_config_rejects_irrational_positions():
    assert RationalSplit.from_config(StringConfig(1.0, 0.61803), 10) is None


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

def test_mu_value_checks_its_root():
    MuValue(mu=complex(0, math.pi), z=-1.0, L0=0.5)
    with pytest.raises(ValueError):
        MuValue(mu=complex(0, math.pi), z=1.0, L0=0.5)
    with pytest.raises(ValueError):
        MuValue(mu=complex(0, 4.0), z=cmath.exp(4j), L0=0.5)


def test_mu_value_accepts_the_open_lower_edge():
    z = complex(-1.0, -1e-15)
    mu = MuValue(mu=cmath.log(z), z=z, L0=0.5)
    assert -math.pi < mu.mu.imag < -math.pi + 1e-14


def test_record_indices():
    assert EigenvalueRecord(1j, Shifted(2, -3), 0.0).indices == (2, -3)
    assert EigenvalueRecord(1j, Lattice(4), 0.0).indices == (None, 4)


# ---------------------------------------------------------------------------
# Exponential-polynomial form and residual
# ---------------------------------------------------------------------------

def test_exp_form_generic_terms():
    form = build_exp_form(StringConfig(1.0, 0.3, 1.0))
    assert form.shift == 0.0
    assert form.exponents.tolist() == pytest.approx([0.0, 0.6, 1.4, 2.0])
    assert form.coefficients.tolist() == pytest.approx([-1, -1, -1, 3])
    assert form.spread == pytest.approx(2.0)
    assert form.order == 3


def test_exp_form_drops_vanishing_first_term_and_shifts():
    form = build_exp_form(StringConfig(1.0, 0.3, 2.0))
    assert form.shift == pytest.approx(0.6)
    assert form.exponents.tolist() == pytest.approx([0.0, 0.8, 1.4])
    assert form.coefficients.tolist() == pytest.approx([-2, -2, 4])


def test_exp_form_merges_equal_exponents():
    form = build_exp_form(StringConfig(1.0, 0.5, 2.0))
    assert form.coefficients.tolist() == pytest.approx([-4, 4])
    assert form.exponents.tolist() == pytest.approx([0.0, 1.0])


def test_exp_form_vanishes_at_origin_and_matches_residual(rng):
    cfg = StringConfig(1.0, 0.3, complex(1.5, -0.7))
    form = build_exp_form(cfg)
    assert abs(form.evaluate(0.0)) < 1e-14
    for lam in rng.normal(size=5) + 1j * rng.normal(size=5):
        lhs = form.evaluate(lam) * cmath.exp(form.shift * lam)
        rhs = 4 * cmath.exp(cfg.length * lam) * complex(spectral_residual(lam, cfg))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_scaled_evaluation_keeps_the_phase():
    form = build_exp_form(StringConfig(1.0, 0.3, 1.0))
    lam = complex(3.0, 1.0)
    value, magnitude = form.scaled(lam)
    raw = form.evaluate(lam)
    assert cmath.phase(complex(value)) == pytest.approx(cmath.phase(raw))
    assert magnitude > abs(value)


def test_residual_is_log_scaled_far_from_the_axis():
    cfg = StringConfig(1.0, 0.3, 1.0)
    res = spectral_residual(complex(100.0, 0.5), cfg)
    # dominant term (2 + α)/4 · e^{Lλ}
    assert res.log_abs == pytest.approx(math.log(0.75) + 100.0, rel=1e-9)


def test_residual_tolerance_on_lattice():
    cfg = StringConfig(1.0, 0.5, 0.0)
    residual, ok = residual_tolerance_ok(complex(0, 3 * math.pi), cfg)
    assert ok and residual < 1e-12
    _, ok = residual_tolerance_ok(complex(0.1, 3.0), cfg)
    assert not ok


def test_dominance_on_far_lines():
    form = build_exp_form(StringConfig(1.0, 0.3, 1.0))
    assert form.dominance_holds(10.0)
    assert form.dominance_holds(-10.0)
    assert not form.dominance_holds(-0.01)
    assert np.isfinite(form.log_derivative(1.0 + 2.0j))


def test_residual_is_symmetric_under_mirroring(rng):
    for _ in range(20):
        cfg = StringConfig(1.7, rng.uniform(0.05, 1.65), complex(rng.normal(0, 3), rng.normal(0, 3)))
        mirror = cfg.mirrored()
        lam = complex(rng.uniform(-5, 5), rng.uniform(-30, 30))
        assert complex(spectral_residual(lam, mirror)) == pytest.approx(
            complex(spectral_residual(lam, cfg)), rel=1e-10, abs=1e-9
        )


def test_scaled_residual_is_symmetric_under_mirroring():
    cfg = StringConfig(1.0, 0.3, complex(1.5, -0.7))
    for lam in (complex(60.0, 2.0), complex(-45.0, -7.5)):
        direct, mirrored = spectral_residual(lam, cfg), spectral_residual(lam, cfg.mirrored())
        assert mirrored.log_abs == pytest.approx(direct.log_abs, rel=1e-12)
        assert cmath.phase(mirrored.mantissa) == pytest.approx(cmath.phase(direct.mantissa), abs=1e-9)
