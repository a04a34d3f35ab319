"""Output formatting.

Eigenvalue listings and sweeps become pandas DataFrames written as CSV with
17 significant digits; determinant reports become JSON with complex numbers
as [re, im]. Both can be rendered to the terminal with `rich`.
"""

from __future__ import annotations

import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

from spectraldet.checks import Check
from spectraldet.config import CSV_FLOAT_FORMAT
from spectraldet.determinant import DeterminantReport
from spectraldet.model import EigenvalueRecord

EIGENVALUE_COLUMNS = ["re", "im", "family", "k", "j", "multiplicity", "residual"]
SWEEP_COLUMNS = [
    "alpha",
    "det_closed_re",
    "det_closed_im",
    "det_numeric_re",
    "det_numeric_im",
    "marker",
    "error",
]


# ---------------------------------------------------------------------------
# Scalar helpers
# ---------------------------------------------------------------------------

def complex_pair(value: Optional[complex]) -> Optional[List[float]]:
    """[re, im], or None when missing or not finite."""
    if value is None:
        return None
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        return None
    return [value.real, value.imag]


def _finite(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _fmt_complex(value: Optional[complex]) -> str:
    if value is None:
        return "N/A"
    value = complex(value)
    if value.imag == 0:
        return f"{value.real:.12g}"
    return f"{value.real:.12g} {'+' if value.imag >= 0 else '−'} {abs(value.imag):.12g}i"


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def eigenvalue_rows(records: Iterable[EigenvalueRecord]) -> List[Dict[str, Any]]:
    rows = []
    for r in records:
        k, j = r.indices
        rows.append({
            "re": r.value.real,
            "im": r.value.imag,
            "family": r.family.name,
            "k": k,
            "j": j,
            "multiplicity": r.multiplicity,
            "residual": r.residual,
        })
    return rows


def eigenvalue_frame(records: Iterable[EigenvalueRecord]) -> pd.DataFrame:
    frame = pd.DataFrame(eigenvalue_rows(records), columns=EIGENVALUE_COLUMNS)
    return frame.astype({"k": "Int64", "j": "Int64", "multiplicity": "int64"})


def sweep_frame(rows: Sequence[Dict[str, Any]]) -> pd.DataFrame:
    """Sweep rows ordered by α; missing cells stay empty in the CSV."""
    frame = pd.DataFrame(list(rows), columns=SWEEP_COLUMNS)
    return frame.sort_values("alpha", kind="mergesort").reset_index(drop=True)


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def report_dict(report: DeterminantReport) -> Dict[str, Any]:
    """JSON-ready view of a DeterminantReport (see docs/json_schema.md)."""
    cfg = report.config
    split = report.split
    return {
        "config": {
            "L": cfg.length,
            "a": cfg.position,
            "alpha": complex_pair(cfg.alpha),
        },
        "cut": report.cut.label,
        "closed": complex_pair(report.closed),
        "from_roots": complex_pair(report.from_roots),
        "zeta_path": complex_pair(report.zeta_path),
        "regime": report.regime.value if report.regime is not None else None,
        "agreement": _finite(report.agreement),
        "branch_integer_m": report.branch_integer,
        "split": (
            {"p": split.p, "q": split.q, "L0": split.L0, "swapped": split.swapped}
            if split is not None
            else None
        ),
        "notice": report.notice,
    }


def to_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


# ---------------------------------------------------------------------------
# Terminal rendering
# ---------------------------------------------------------------------------

def render_frame(frame: pd.DataFrame, title: str, console=None) -> None:
    """Print a DataFrame as a rich table."""
    from rich.console import Console
    from rich.table import Table

    console = console or Console()
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*[_cell(v) for v in row])
    console.print(table)


def _cell(value: Any) -> str:
    if value is None or value is pd.NA or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def render_report(report: DeterminantReport, console=None) -> None:
    from rich.console import Console
    from rich.table import Table

    console = console or Console()
    cfg = report.config
    table = Table(
        title=(
            f"det(α) for L={cfg.length:g}, a={cfg.position:g}, "
            f"α={_fmt_complex(cfg.alpha)}, cut={report.cut.label}"
        )
    )
    table.add_column("Path")
    table.add_column("Value", justify="right")
    table.add_row("closed form", _fmt_complex(report.closed))
    table.add_row("root product", _fmt_complex(report.from_roots))
    table.add_row("Hurwitz ζ′(0)", _fmt_complex(report.zeta_path))
    console.print(table)
    if report.agreement is not None:
        console.print(
            f"regime {report.regime.value}, agreement {report.agreement:.2e}, "
            f"branch integer m = {report.branch_integer}"
        )
    if report.notice:
        console.print(f"[yellow]{report.notice}[/yellow]")


def render_checks(checks: Sequence[Check], console=None) -> None:
    from rich.console import Console
    from rich.table import Table

    console = console or Console()
    table = Table(title="Verification")
    table.add_column("")
    table.add_column("Check")
    table.add_column("Detail")
    for check in checks:
        table.add_row(check.icon, check.name, check.message)
    console.print(table)


def checks_summary(checks: Sequence[Check]) -> str:
    """Plain-text summary, one line per check."""
    lines = [f"{c.icon} {c.category}: {c.name} - {c.message}" for c in checks]
    failed = [c for c in checks if not c.passed]
    if failed:
        lines.append(f"{len(failed)} of {len(checks)} checks failed")
    else:
        lines.append("all checks passed")
    return "\n".join(lines)
