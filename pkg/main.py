#!/usr/bin/env python3
"""spectraldet CLI — eigenvalues and spectral determinants of the δ-damped string.

Usage:
    python main.py eig   --L 1 --p 1 --q 1 --alpha 0 --im-bound 10
    python main.py det   --L 1 --p 1 --q 2 --alpha 1 --cut neg
    python main.py zeta  --p 1 --q 1 --alpha 0 --s 2
    python main.py sweep --preset a > panel_a.csv
    python main.py verify --only prod,cut-relation

Exit codes: 0 success, 1 failed verification checks, 2 invalid input,
3 solver failure, 4 determinant paths disagree.
"""

import argparse
import logging
import sys

from spectraldet.config import (
    SWEEP_ALPHA_END,
    SWEEP_ALPHA_START,
    SWEEP_EXCLUDE_RADIUS,
    SWEEP_STEP,
)

EXIT_INVALID_INPUT = 2
EXIT_SOLVER_FAILURE = 3
EXIT_DISAGREEMENT = 4


def _instance_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--L", type=float, default=1.0, metavar="LENGTH",
                        help="String length L (default: 1)")
    parent.add_argument("--a", type=float, default=None, metavar="POS",
                        help="Damping position a ∈ (0, L)")
    parent.add_argument("--p", type=int, default=None, help="Rational split a = p·L0")
    parent.add_argument("--q", type=int, default=None, help="Rational split L − a = q·L0")
    parent.add_argument("--alpha", default="0", metavar="RE[,IM]",
                        help='Damping strength, e.g. "6" or "1.5,-0.3" (default: 0)')
    parent.add_argument("--max-denominator", type=int, default=None, metavar="N",
                        help="Certify a float --a as rational with denominator ≤ N")
    return parent


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--output", default=None, metavar="PATH",
                        help="Write the result to this file instead of stdout")
    parent.add_argument("--verbose", "-v", action="store_true",
                        help="Debug logging on stderr and tracebacks on errors")
    return parent


def _parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="spectraldet",
        description="Zeta-regularised spectral determinants of the δ-damped string",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Eigenvalues of the undamped string as CSV:
  python main.py eig --L 1 --p 1 --q 1 --alpha 0 --im-bound 10

  # General (irrational) position, rendered as a table:
  python main.py eig --L 1 --a 0.5 --alpha 6 --mode general --im-bound 7 --format table

  # Determinant report with all three paths:
  python main.py det --L 1 --p 1 --q 2 --alpha 1 --cut neg

  # Spectral zeta function at s = 3 in closed assembled form:
  python main.py zeta --p 3 --q 2 --alpha 1.5,-0.3 --s 3 --mode assembled

  # Sweep data for one of the four standard panels:
  python main.py sweep --preset c --output panel_c.csv

  # Reproducible self-check subset:
  python main.py verify --only prod,zeta --seed 7
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    instance, common = _instance_flags(), _common_flags()

    eig = sub.add_parser("eig", parents=[instance, common], help="List eigenvalues")
    eig.add_argument("--im-bound", type=float, default=20.0, metavar="T",
                     help="Keep eigenvalues with |Im λ| ≤ T (default: 20)")
    eig.add_argument("--mode", choices=["auto", "rational", "general"], default="auto")
    eig.add_argument("--format", choices=["csv", "json", "table"], default="csv")

    det = sub.add_parser("det", parents=[instance, common], help="Determinant report (JSON)")
    det.add_argument("--cut", choices=["neg", "pos"], default="neg",
                     help="Log branch cut below the negative or positive real axis")
    det.add_argument("--format", choices=["json", "table"], default="json")

    zeta = sub.add_parser("zeta", parents=[instance, common], help="Spectral zeta function ζ(s) (JSON)")
    zeta.add_argument("--s", default="2", metavar="RE[,IM]",
                      help="Argument s; the direct sum needs Re s > 1 (default: 2)")
    zeta.add_argument("--mode", choices=["direct", "assembled"], default="direct",
                      help="Eigenvalue sum with lattice tail, or closed assembly (rational only)")
    zeta.add_argument("--cut", choices=["neg", "pos"], default="neg")
    zeta.add_argument("--im-bound", type=float, default=1e3, metavar="T",
                      help="Direct mode sums eigenvalues up to |Im λ| ≈ T (default: 1000)")

    sweep = sub.add_parser("sweep", parents=[instance, common], help="α-sweep as CSV")
    sweep.add_argument("--preset", choices=["a", "b", "c", "d"], default=None,
                       help="Standard panel: a/b cut neg, c/d cut pos; b/d have a = L/2")
    sweep.add_argument("--cut", choices=["neg", "pos"], default="neg")
    sweep.add_argument("--alpha-start", type=float, default=SWEEP_ALPHA_START)
    sweep.add_argument("--alpha-end", type=float, default=SWEEP_ALPHA_END)
    sweep.add_argument("--step", type=float, default=SWEEP_STEP)
    sweep.add_argument("--exclude-radius", type=float, default=SWEEP_EXCLUDE_RADIUS,
                       help="Skip α this close to the pole of the chosen cut")
    sweep.add_argument("--format", choices=["csv", "table"], default="csv")

    verify = sub.add_parser("verify", parents=[common], help="Run the self-verification suite")
    verify.add_argument("--only", default=None, metavar="KEYS",
                        help="Comma-separated subset: closed, prod, degenerate, paths, zeta, "
                             "oracle, localization, cut-relation, specfun, sweep")
    verify.add_argument("--seed", type=int, default=0, help="Seed for random α draws")
    verify.add_argument("--format", choices=["text", "table"], default="text")

    return parser.parse_args(argv)


def _configure_logging(verbose: bool) -> None:
    from rich.console import Console
    from rich.logging import RichHandler

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )


def main(argv=None) -> int:
    args = _parse_args(argv)
    _configure_logging(args.verbose)

    from spectraldet import commands
    from spectraldet.errors import AgreementError, SpectralDetError

    handlers = {
        "eig": commands.cmd_eig,
        "det": commands.cmd_det,
        "zeta": commands.cmd_zeta,
        "sweep": commands.cmd_sweep,
        "verify": commands.cmd_verify,
    }

    try:
        return handlers[args.command](args)
    except (ValueError, SpectralDetError) as e:
        if isinstance(e, AgreementError):
            code, message = EXIT_DISAGREEMENT, str(e)
        elif isinstance(e, ValueError):
            code, message = EXIT_INVALID_INPUT, str(e)
        else:
            code, message = EXIT_SOLVER_FAILURE, f"{type(e).__name__}: {e}"
        print(f"Error: {message}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return code


if __name__ == "__main__":
    sys.exit(main())
