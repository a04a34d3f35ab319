import numpy as np
import pytest

from spectraldet import checks
from spectraldet.checks import (
    CHECKS,
    Check,
    check_closed,
    check_cut_relation,
    check_degenerate,
    check_localization,
    check_oracle,
    check_paths,
    check_products,
    check_specfun,
    check_sweep,
    check_zeta,
    run_checks,
)
from spectraldet.report.formatter import checks_summary


def _all_passed(results):
    failed = [f"{c.category}/{c.name}: {c.message}" for c in results if not c.passed]
    assert not failed, failed
    return True


def test_closed_and_cut_relation(rng):
    assert _all_passed(check_closed())
    assert _all_passed(check_cut_relation(rng, draws=10))


def test_products_small(rng):
    assert _all_passed(check_products(rng, max_total=12, draws=3))


def test_degenerate_small():
    results = check_degenerate(max_p=6)
    assert len(results) == 4
    assert _all_passed(results)


def test_paths_small(rng):
    assert _all_passed(check_paths(rng, configs=10))


def test_zeta_small(rng):
    assert _all_passed(check_zeta(rng, configs=2, im_bound=2e3))


def test_oracle_and_localization_small(rng):
    assert _all_passed(check_oracle(rng, draws=1, im_bound=12.0))
    assert _all_passed(check_localization(rng, draws=1, boxes=3))


def test_specfun_and_sweep(rng):
    assert _all_passed(check_specfun(rng, draws=5))
    assert _all_passed(check_sweep(["b", "d"]))


def test_run_checks_rejects_unknown_names():
    with pytest.raises(ValueError, match="Unknown check"):
        run_checks(only=["closed", "nope"])


def test_run_checks_subset_is_reproducible():
    first = run_checks(only=["cut-relation", "closed"], seed=3)
    second = run_checks(only=["cut-relation", "closed"], seed=3)
    assert [c.message for c in first] == [c.message for c in second]
    assert first[0].category == "cut-relation"


def test_aborted_family_is_reported(monkeypatch):
    from spectraldet.errors import NoConvergence

    def broken(rng):
        raise NoConvergence("stalled")

    monkeypatch.setitem(CHECKS, "closed", broken)
    results = run_checks(only=["closed"])
    assert len(results) == 1 and not results[0].passed
    assert "NoConvergence" in results[0].message


def test_summary_lines():
    results = [Check("prod", "a", True, "ok"), Check("zeta", "b", False, "bad")]
    text = checks_summary(results)
    assert text.splitlines()[0] == "✅ prod: a - ok"
    assert text.splitlines()[1].startswith("⚠️ zeta: b")
    assert text.endswith("1 of 2 checks failed")
    assert checks_summary(results[:1]).endswith("all checks passed")


def test_random_alpha_avoids_critical_values():
    rng = np.random.default_rng(0)
    for _ in range(100):
        alpha = checks.random_alpha(rng, scale=0.5, avoid=1.0)
        assert abs(alpha - 2) > 1.0 and abs(alpha + 2) > 1.0


def test_box_counts_are_held_to_each_form_order(rng, monkeypatch):
    monkeypatch.setattr(checks, "count_zeros", lambda box, form: 1000)
    localized, counted = check_localization(rng, draws=1, boxes=2)
    assert localized.passed
    assert not counted.passed


def test_specfun_identities_use_fifty_draws_by_default(rng):
    results = check_specfun(rng)
    assert _all_passed(results)
    assert sum("over 50 draws" in c.message for c in results) == 3
