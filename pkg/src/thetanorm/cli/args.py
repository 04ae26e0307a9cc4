# thetanorm/cli/args.py
import argparse
import textwrap
from typing import List, Optional

from thetanorm.config import settings


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got '{text}'")


def _add_period_options(p: argparse.ArgumentParser) -> None:
    group = p.add_argument_group('Period point (one source)')
    group.add_argument("--preset", choices=sorted(settings.PRESETS) + sorted(settings.PRESET_ALIASES),
                       help="Named period matrix Z = X + k*Id")
    group.add_argument("--X-file", dest="X_file", help="JSON file with an integer symmetric X (or {\"X\":..., \"k\":...})")
    group.add_argument("--k", help="Complex k for the split Z = X + k*Id, e.g. '1+0.5773502691896258j'")
    group.add_argument("--seed", type=int, help="Seed for a random period point Z = S + i(A^T A + Id)")


def _add_tolerance_options(p: argparse.ArgumentParser) -> None:
    group = p.add_argument_group('Tolerances')
    group.add_argument("--series-tol", dest="series_tol", type=float,
                       help=f"Absolute truncation error per theta value (default: {settings.DEFAULT_SERIES_TOL})")
    group.add_argument("--rank-tol", dest="rank_tol", type=float,
                       help=f"Relative singular value cutoff for rank (default: {settings.DEFAULT_RANK_TOL})")
    group.add_argument("--accept", type=float,
                       help=f"Gap above which the rank is full (default: {settings.DEFAULT_ACCEPT_GAP})")
    group.add_argument("--reject", type=float,
                       help=f"Gap below which the rank is deficient (default: {settings.DEFAULT_REJECT_GAP})")
    group.add_argument("--zero-slack", dest="zero_slack", type=float,
                       help=f"Slack factor on the per-entry error budget (default: {settings.DEFAULT_ZERO_SLACK})")
    group.add_argument("--dps", type=int, help="Evaluate with mpmath at this many decimal digits")


def _add_common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config document; command line flags take precedence")
    p.add_argument("--g", type=int, help="Dimension of the abelian variety")
    p.add_argument("-o", "--out", help="Output file (default: stdout)")
    p.add_argument("--jobs", type=int, help=f"Worker threads (default: {settings.DEFAULT_JOBS})")
    p.add_argument("--debug", action="store_true", help="Print debug info")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thetanorm",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""\
            Decides 2-normality of polarized abelian varieties from ranks of theta-constant matrices.

            Commands:
            1. check: verdict for one type at one period point
            2. scan: verdicts for every type in an h0 range (the g=3 and g=4 tables)
            3. verify-invariants: identity suites for the evaluator and the matrix decompositions
            4. conjecture: numerical evidence for the (1,3,...,3,6) and (1,...,1,d) conjectures
            5. theta: raw theta constant at a rational characteristic"""),
        epilog="Exit codes: 0 success, 1 ambiguous numerics, 2 invariant failure, 3 usage or config error, "
               "4 internal error.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="Verdict for one type")
    p_check.add_argument("--type", required=True, help="Type as '1,2,8'")
    p_check.add_argument("--format", choices=settings.SUPPORTED_FORMATS, help="Report format (default: json)")
    p_check.add_argument("--force-numeric", dest="force_numeric", action="store_true", default=None,
                         help="Run the rank criterion even when a closed-form criterion decides")
    p_check.add_argument("--confirm-iyer", dest="confirm_iyer", action="store_true", default=None,
                         help="Run the rank criterion above the Iyer bound as well")
    p_check.add_argument("--no-escalate", dest="escalate", action="store_false", default=None,
                         help="Report ambiguity without retrying at higher precision")
    p_check.add_argument("--timings", action="store_true", default=None, help="Include wall times in the report")
    _add_period_options(p_check)
    _add_tolerance_options(p_check)
    _add_common_options(p_check)

    p_scan = sub.add_parser("scan", help="Verdicts for all types in an h0 range")
    p_scan.add_argument("--type", help="Scan this single type instead of an h0 range")
    p_scan.add_argument("--min-h0", dest="min_h0", type=int, help="Lower h0 bound (default: 2^(g+1)-1)")
    p_scan.add_argument("--max-h0", dest="max_h0", type=int, help="Upper h0 bound (default: 2^g*g!)")
    p_scan.add_argument("--format", choices=settings.SUPPORTED_FORMATS, help="Table format (default: json)")
    p_scan.add_argument("--force-numeric", dest="force_numeric", action="store_true", default=None,
                        help="Run the rank criterion for every type")
    p_scan.add_argument("--confirm-iyer", dest="confirm_iyer", action="store_true", default=None,
                        help="Run the rank criterion above the Iyer bound as well")
    p_scan.add_argument("--no-escalate", dest="escalate", action="store_false", default=None,
                        help="Report ambiguity without retrying at higher precision")
    p_scan.add_argument("--timings", action="store_true", default=None, help="Include wall times in the table")
    p_scan.add_argument("-y", "--yes", action="store_true", help="Assume 'yes' to confirmation")
    _add_period_options(p_scan)
    _add_tolerance_options(p_scan)
    _add_common_options(p_scan)

    p_inv = sub.add_parser("verify-invariants", help="Run the identity suites")
    p_inv.add_argument("--g-list", dest="g_list", type=_int_list, default=[1, 2, 3, 4],
                       help="Dimensions to test (default: 1,2,3,4)")
    p_inv.add_argument("--samples", type=int, default=settings.INVARIANT_SAMPLES,
                       help=f"Samples per theta identity (default: {settings.INVARIANT_SAMPLES})")
    p_inv.add_argument("--structural-samples", dest="structural_samples", type=int,
                       default=settings.STRUCTURAL_SAMPLES,
                       help=f"Random period points per structural check (default: {settings.STRUCTURAL_SAMPLES})")
    p_inv.add_argument("--suite", dest="suites", action="append", help="Run only this suite (repeatable)")
    p_inv.add_argument("--corrupt-index-order", dest="corrupt_index_order", action="store_true",
                       help=argparse.SUPPRESS)
    _add_period_options(p_inv)
    _add_tolerance_options(p_inv)
    _add_common_options(p_inv)

    p_conj = sub.add_parser("conjecture", help="Numerical evidence for the two conjectures")
    p_conj.add_argument("--which", type=int, choices=(1, 2), required=True,
                        help="1: type (1,3,...,3,6); 2: types (1,...,1,d) with d >= 2^(g+1)-1")
    p_conj.add_argument("--g-list", dest="g_list", type=_int_list, default=[2, 3, 4],
                        help=f"Dimensions (default: 2,3,4; at most {settings.CONJECTURE_MAX_G})")
    p_conj.add_argument("--d-cap", dest="d_cap", type=int,
                        help=f"Largest d for conjecture 2 (default: 2^(g+1)-1+{settings.CONJECTURE_D_SPAN - 1})")
    p_conj.add_argument("--no-escalate", dest="escalate", action="store_false", default=None,
                        help="Report ambiguity without retrying at higher precision")
    _add_period_options(p_conj)
    _add_tolerance_options(p_conj)
    _add_common_options(p_conj)

    p_theta = sub.add_parser("theta", help="Theta constant at a rational characteristic")
    p_theta.add_argument("--c1", required=True, help="Characteristic as '1/2,0,1/3'")
    path = p_theta.add_mutually_exclusive_group()
    path.add_argument("--fast", dest="fast", action="store_true", default=None,
                      help="Force the diagonal product formula")
    path.add_argument("--direct", dest="fast", action="store_false", default=None, help="Force the full lattice sum")
    _add_period_options(p_theta)
    _add_tolerance_options(p_theta)
    _add_common_options(p_theta)
    return ap


def setup_arg_parser(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Sets up and parses command-line arguments."""
    return build_parser().parse_args(argv)
