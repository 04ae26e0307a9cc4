"""
Main runner: logging setup, command dispatch and exit codes
"""
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from thetanorm.cli import args as cli_args
from thetanorm.cli import ui
from thetanorm.config import settings
from thetanorm.config.run_config import RunConfig, build_run_config
from thetanorm.core import scan
from thetanorm.core.rational import RationalVector
from thetanorm.utils.exceptions import (
    ConfigError, DomainError, InvariantFailure, PreconditionError, ThetaNormError,
    UsageError, UserAbortError,
)

# argparse destinations that map one-to-one onto RunConfig fields
CONFIG_KEYS = (
    "g", "preset", "k", "seed", "series_tol", "rank_tol", "accept", "reject", "zero_slack", "dps",
    "type", "min_h0", "max_h0", "format", "out", "jobs", "force_numeric", "confirm_iyer", "escalate",
    "timings",
)


def make_config(params: Dict[str, Any]) -> RunConfig:
    overrides = {key: params.get(key) for key in CONFIG_KEYS}
    return build_run_config(overrides, config_path=params.get('config'), split_path=params.get('X_file'))


def dispatch(params: Dict[str, Any]) -> int:
    """Run one command; returns the exit code for its outcome."""
    command = params['command']
    config = make_config(params)
    logging.debug(f"Run config: {config.as_dict()} (sources: {config.source})")

    if command == 'check':
        row = scan.cmd_check(config)
        logging.info(f"{row.type}: {row.conclusion.value}")
        return settings.EXIT_AMBIGUOUS if row.is_ambiguous else settings.EXIT_OK

    if command == 'scan':
        confirm = None
        if not params.get('yes', False) and ui.interactive():
            confirm = ui.confirm_proceed
        result = scan.cmd_scan(config, confirm=confirm)
        if result.ambiguous or result.errors:
            return settings.EXIT_AMBIGUOUS
        return settings.EXIT_OK

    if command == 'verify-invariants':
        results = scan.cmd_verify_invariants(
            config, params['g_list'], samples=params['samples'],
            structural_samples=params['structural_samples'], suites=params.get('suites'),
            corrupt_index_order=params.get('corrupt_index_order', False),
        )
        if not all(r.passed for r in results):
            raise InvariantFailure(f"{sum(not r.passed for r in results)} suite(s) failed")
        return settings.EXIT_OK

    if command == 'conjecture':
        doc = scan.cmd_conjecture_evidence(config, params['which'], params['g_list'], params.get('d_cap'))
        if any(entry["status"] == "indeterminate" for entry in doc["entries"]):
            return settings.EXIT_AMBIGUOUS
        return settings.EXIT_OK

    if command == 'theta':
        try:
            c1 = RationalVector.parse(params['c1'])
        except ValueError as e:
            raise ConfigError(f"c1: {e}") from e
        scan.cmd_theta(config, c1, fast=params.get('fast'))
        return settings.EXIT_OK

    raise UsageError(f"unknown command '{command}'")


def run_logic(params: Dict[str, Any]) -> int:
    """
    Core logic for the CLI: configures logging on stderr, runs the command
    and maps exceptions to exit codes.
    """
    start_time = time.time()
    logger = logging.getLogger()

    # --- Setup logging ---
    log_level = logging.DEBUG if params.get('debug', False) else logging.INFO
    log_formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    logger.setLevel(log_level)
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    # Reports may go to stdout, so logs stay on stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(log_formatter)
    logger.addHandler(console_handler)

    try:
        code = dispatch(params)
        logging.info(f"Total execution time: {time.time() - start_time:.2f} seconds.")
        return code

    except UserAbortError as e:
        logging.info(f"Operation cancelled: {e}")
        return settings.EXIT_USAGE
    except InvariantFailure as e:
        logging.error(f"❌ Invariant failure: {e}")
        return settings.EXIT_INVARIANT_FAILURE
    except (ConfigError, UsageError, DomainError, PreconditionError) as e:
        logging.error(f"❌ {type(e).__name__}: {e}", exc_info=params.get('debug', False))
        return settings.EXIT_USAGE
    except ThetaNormError as e:
        logging.error(f"❌ Application Error: {e}", exc_info=params.get('debug', False))
        return settings.EXIT_INTERNAL
    except OSError as e:
        logging.error(f"❌ I/O error: {e}", exc_info=params.get('debug', False))
        return settings.EXIT_USAGE
    except Exception as e:
        logging.error(f"❌ An unexpected error occurred: {e}", exc_info=True)
        return settings.EXIT_INTERNAL
    finally:
        logger.removeHandler(console_handler)
        console_handler.close()


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parses CLI args and calls the main logic function."""
    try:
        args = cli_args.setup_arg_parser(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad usage; usage errors are 3 here
        return settings.EXIT_OK if e.code in (0, None) else settings.EXIT_USAGE
    return run_logic(vars(args))


def main() -> None:
    sys.exit(run_cli())
