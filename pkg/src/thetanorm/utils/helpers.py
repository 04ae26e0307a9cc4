# thetanorm/utils/helpers.py
import logging
import pathlib
from typing import Sequence, Union


# --- Formatting & Display ---

def human_duration(seconds: float) -> str:
    """Convert seconds to a short human readable string."""
    if seconds < 60:
        return f"{seconds:.1f} s"
    minutes, seconds = divmod(seconds, 60)
    if minutes < 60:
        return f"{int(minutes)} min {seconds:.0f} s"
    hours, minutes = divmod(minutes, 60)
    return f"{int(hours)} h {int(minutes)} min"


def format_types(types: Sequence) -> str:
    """'{(1,2,8), (2,2,4)}' style listing; '{}' when empty."""
    return "{" + ", ".join(str(t) for t in types) + "}"


# --- Filesystem ---

def ensure_parent_dir(path: Union[str, pathlib.Path]) -> pathlib.Path:
    """Creates the parent directory of `path` if needed and returns it as a Path."""
    path = pathlib.Path(path)
    if not path.parent.exists():
        logging.debug(f"Creating directory {path.parent}")
        path.parent.mkdir(parents=True, exist_ok=True)
    return path
