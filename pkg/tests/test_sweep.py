import io

import pandas as pd
import pytest

from spectraldet.config import SWEEP_PRESETS, preset
from spectraldet.model import BranchCut
from spectraldet.report.formatter import SWEEP_COLUMNS, sweep_frame, to_csv
from spectraldet.sweep import SweepSpec, sweep_rows


def _by_alpha(rows):
    return {r["alpha"]: r for r in rows if r["marker"] != "gap"}


def _closed(row):
    return complex(row["det_closed_re"], row["det_closed_im"])


def _numeric(row):
    return complex(row["det_numeric_re"], row["det_numeric_im"])


def test_preset_lookup():
    assert preset("A") is SWEEP_PRESETS["a"]
    assert preset("e") is None
    assert SweepSpec.from_preset(SWEEP_PRESETS["c"]).pole == -2.0


def test_grid_hits_the_critical_values():
    alphas = SweepSpec.from_preset(SWEEP_PRESETS["a"]).alphas()
    assert len(alphas) == 401
    assert alphas[0] == -10.0 and alphas[-1] == 10.0
    assert 2.0 in alphas and -2.0 in alphas and 0.0 in alphas


def test_preset_a_values():
    rows = sweep_rows(SweepSpec.from_preset(SWEEP_PRESETS["a"]))
    assert len(rows) == 403
    points = _by_alpha(rows)
    expected = {0.0: 2.0, 6.0: -1.0, -2.0: 1.0, 2.0: 2.0, 1.0: 4.0}
    for alpha, value in expected.items():
        assert _closed(points[alpha]) == pytest.approx(value)
        assert _numeric(points[alpha]) == pytest.approx(value, rel=1e-9)
    assert points[2.0]["marker"] == "critical"
    assert points[-2.0]["marker"] == "critical"
    assert points[0.0]["marker"] == ""
    assert all(r["error"] is None for r in rows)


def test_preset_b_midpoint_value_at_the_pole():
    points = _by_alpha(sweep_rows(SweepSpec.from_preset(SWEEP_PRESETS["b"])))
    assert _closed(points[2.0]) == 1.0
    assert _numeric(points[2.0]) == pytest.approx(1.0)


@pytest.mark.parametrize("name, expected", [
    ("c", {6.0: -0.5, 0.0: -2.0, -2.0: -2.0, 2.0: -1.0}),
    ("d", {6.0: -0.5, -2.0: -1.0, 2.0: -1.0}),
])
def test_pos_cut_presets(name, expected):
    points = _by_alpha(sweep_rows(SweepSpec.from_preset(SWEEP_PRESETS[name])))
    for alpha, value in expected.items():
        assert _closed(points[alpha]) == pytest.approx(value)
        assert _numeric(points[alpha]) == pytest.approx(value, rel=1e-9)


def test_gap_markers_straddle_the_pole():
    rows = sweep_rows(SweepSpec.from_preset(SWEEP_PRESETS["c"]))
    gaps = sorted(r["alpha"] for r in rows if r["marker"] == "gap")
    assert gaps == pytest.approx([-2.001, -1.999])
    assert all(r["det_closed_re"] is None for r in rows if r["marker"] == "gap")


def test_points_near_the_pole_are_skipped():
    spec = SweepSpec(cut=BranchCut.neg(), p=1, q=2, alpha_start=1.9, alpha_end=2.1,
                     step=0.0005, exclude_radius=1e-3)
    alphas = [r["alpha"] for r in sweep_rows(spec) if r["marker"] != "gap"]
    assert 2.0 in alphas
    assert not any(0 < abs(a - 2.0) < 1e-3 for a in alphas)
    assert 2.0015 in alphas


def test_position_only_sweep_has_no_numeric_column():
    spec = SweepSpec(cut=BranchCut.neg(), position=0.9 / 2 ** 0.5, alpha_start=-1.0, alpha_end=1.0, step=0.5)
    rows = sweep_rows(spec)
    assert [r["alpha"] for r in rows] == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert all(r["det_numeric_re"] is None for r in rows)
    assert _closed(rows[2]) == 2.0


@pytest.mark.parametrize("kwargs", [
    {"step": 0.0},
    {"alpha_start": 1.0, "alpha_end": 1.0},
    {"exclude_radius": 0.0},
    {"p": 1},
])
def test_sweep_spec_validation(kwargs):
    base = {"cut": BranchCut.neg(), "position": 0.3}
    base.update(kwargs)
    with pytest.raises(ValueError):
        SweepSpec(**base)


def test_sweep_spec_needs_a_position():
    with pytest.raises(ValueError):
        SweepSpec(cut=BranchCut.neg())


def test_csv_is_sorted_and_deterministic():
    spec = SweepSpec.from_preset(SWEEP_PRESETS["a"])
    first = to_csv(sweep_frame(sweep_rows(spec)))
    second = to_csv(sweep_frame(sweep_rows(spec)))
    assert first == second
    assert first.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    frame = pd.read_csv(io.StringIO(first))
    assert frame["alpha"].is_monotonic_increasing
    assert list(frame["marker"].fillna("")).count("gap") == 2
