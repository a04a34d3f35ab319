"""Subcommand implementations for main.py.

Each ``cmd_*`` takes the parsed argparse namespace, writes its result to
stdout (or ``--output``) and returns the process exit code. Numerical
exceptions propagate to main.py, which maps them to exit codes.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Tuple

from spectraldet.checks import run_checks
from spectraldet.config import preset
from spectraldet.determinant import determinant_report, zeta_value
from spectraldet.model import BranchCut, RationalSplit, StringConfig
from spectraldet.report import formatter
from spectraldet.spectrum.general import enumerate_general
from spectraldet.spectrum.rational import enumerate_eigenvalues
from spectraldet.sweep import SweepSpec, sweep_rows

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_complex(text: str, name: str = "α") -> complex:
    """"re" or "re,im" → complex."""
    parts = [p.strip() for p in str(text).split(",")]
    if not 1 <= len(parts) <= 2 or not all(parts):
        raise ValueError(f"Cannot parse {name} from '{text}'. Expected 're' or 're,im'.")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"Cannot parse {name} from '{text}'. Expected 're' or 're,im'.")
    return complex(values[0], values[1] if len(values) == 2 else 0.0)


def _certify(cfg: StringConfig, max_denominator: Optional[int]) -> Optional[RationalSplit]:
    if not max_denominator:
        return None
    split = RationalSplit.from_config(cfg, max_denominator)
    if split is None:
        logger.warning("a/L = %g has no rational form with denominator ≤ %d",
                       cfg.position / cfg.length, max_denominator)
    return split


def resolve_instance(args: argparse.Namespace) -> Tuple[StringConfig, Optional[RationalSplit]]:
    """StringConfig from --L/--a or --L/--p/--q, plus a split when one is known."""
    alpha = parse_complex(args.alpha)
    has_pq = args.p is not None or args.q is not None
    if has_pq and args.a is not None:
        raise ValueError("Give either --a or --p/--q, not both")
    if has_pq:
        if args.p is None or args.q is None:
            raise ValueError("--p and --q must be given together")
        split = RationalSplit.from_integers(args.p, args.q, args.L)
        return split.config(alpha), split
    if args.a is None:
        raise ValueError("Give the damping position with --a or --p/--q")
    cfg = StringConfig(args.L, args.a, alpha)
    return cfg, _certify(cfg, args.max_denominator)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        print(f"Written to: {output}", file=sys.stderr)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_eig(args: argparse.Namespace) -> int:
    cfg, split = resolve_instance(args)
    mode = args.mode
    if mode == "auto":
        mode = "rational" if split is not None else "general"
    if mode == "rational" and split is None:
        raise ValueError("Rational mode needs --p/--q or a certified --a (see --max-denominator)")

    bound = None
    if mode == "rational":
        records = enumerate_eigenvalues(split, cfg.alpha, args.im_bound)
    else:
        records, bound = enumerate_general(cfg, args.im_bound)
        logger.info("Strip half-width c1 = %.6g, c2 = %.6g", bound.c1, bound.c2)

    frame = formatter.eigenvalue_frame(records)
    if args.format == "table":
        formatter.render_frame(frame, title=f"Eigenvalues ({mode}, |Im λ| ≤ {args.im_bound:g})")
        return 0
    if args.format == "json":
        payload = {
            "mode": mode,
            "eigenvalues": formatter.eigenvalue_rows(records),
            "localization": (
                {"c1": bound.c1, "c2": bound.c2, "spacing": bound.spacing} if bound else None
            ),
        }
        _emit(formatter.to_json(payload), args.output)
        return 0
    _emit(formatter.to_csv(frame), args.output)
    return 0


def cmd_det(args: argparse.Namespace) -> int:
    cfg, split = resolve_instance(args)
    report = determinant_report(cfg, BranchCut.parse(args.cut), split=split)
    if args.format == "table":
        formatter.render_report(report)
        return 0
    _emit(formatter.to_json(formatter.report_dict(report)), args.output)
    return 0


def cmd_zeta(args: argparse.Namespace) -> int:
    cfg, split = resolve_instance(args)
    s = parse_complex(args.s, "s")
    cut = BranchCut.parse(args.cut)
    estimate = zeta_value(cfg, s, cut, im_bound=args.im_bound, split=split, mode=args.mode)
    payload = {
        "mode": estimate.mode,
        "s": formatter.complex_pair(s),
        "cut": cut.label,
        "value": formatter.complex_pair(estimate.value),
        "error_bar": estimate.error_bar,
    }
    _emit(formatter.to_json(payload), args.output)
    return 0


def sweep_spec_from_args(args: argparse.Namespace) -> SweepSpec:
    if args.preset:
        chosen = preset(args.preset)
        if chosen is None:
            raise ValueError(f"Unknown preset '{args.preset}'. Expected a, b, c or d.")
        return SweepSpec.from_preset(chosen)
    if args.a is not None and (args.p is not None or args.q is not None):
        raise ValueError("Give either --a or --p/--q, not both")
    p, q = args.p, args.q
    if args.a is not None:
        split = _certify(StringConfig(args.L, args.a), args.max_denominator)
        if split is not None:
            p, q = split.p, split.q
    return SweepSpec(
        cut=BranchCut.parse(args.cut),
        length=args.L,
        position=args.a,
        p=p,
        q=q,
        alpha_start=args.alpha_start,
        alpha_end=args.alpha_end,
        step=args.step,
        exclude_radius=args.exclude_radius,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = sweep_spec_from_args(args)
    frame = formatter.sweep_frame(sweep_rows(spec))
    if args.format == "table":
        formatter.render_frame(frame, title=f"det(α) sweep, cut={spec.cut.label}")
        return 0
    _emit(formatter.to_csv(frame), args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    only = [name.strip() for name in args.only.split(",")] if args.only else None
    checks = run_checks(only=only, seed=args.seed)
    if args.format == "table":
        formatter.render_checks(checks)
    else:
        _emit(formatter.checks_summary(checks), args.output)
    failed = [c for c in checks if not c.passed]
    if failed:
        names = ", ".join(f"{c.category}/{c.name}" for c in failed)
        print(f"Error: failed checks: {names}", file=sys.stderr)
        return 1
    return 0
