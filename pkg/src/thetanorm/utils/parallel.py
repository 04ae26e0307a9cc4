"""
Parallel processing utilities for scans and per-w rank checks.
"""

import concurrent.futures
import logging
import sys
import threading
from typing import Any, Callable, List, Optional, Sequence, TypeVar

T = TypeVar('T')


def parallel_map(
    func: Callable[[Any], T],
    items: Sequence[Any],
    max_workers: int = 1,
    desc: Optional[str] = None,
    ignore_errors: bool = False,
    debug: bool = False
) -> List[Optional[T]]:
    """
    Generic parallel map that keeps the input order and optionally shows progress.

    Args:
        func: Function to apply to each item
        items: Items to process
        max_workers: Maximum number of worker threads (1 runs inline)
        desc: Progress label written to stderr; None disables progress output
        ignore_errors: If True, failed items yield None instead of raising
        debug: If True, log every failure with its traceback

    Returns:
        Results in the same order as the input items
    """
    items = list(items)
    total = len(items)
    completed = 0
    lock = threading.Lock()
    errors = []

    def process_with_progress(index_item):
        nonlocal completed
        index, item = index_item
        try:
            return func(item)
        except Exception as e:
            if debug:
                logging.error(f"Error processing item {item}: {e}", exc_info=True)
            if not ignore_errors:
                raise
            errors.append((item, e))
            return None
        finally:
            with lock:
                completed += 1
                if desc:
                    sys.stderr.write(f"\r{desc}: {completed}/{total}")
                    sys.stderr.flush()

    try:
        if max_workers <= 1 or total <= 1:
            return [process_with_progress(pair) for pair in enumerate(items)]
        with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
            # map() yields in submission order regardless of completion order
            return list(executor.map(process_with_progress, enumerate(items)))
    finally:
        if desc and total:
            sys.stderr.write("\n")
            sys.stderr.flush()
        if errors:
            logging.warning(f"{len(errors)} of {total} item(s) failed during '{desc or 'parallel map'}'")
