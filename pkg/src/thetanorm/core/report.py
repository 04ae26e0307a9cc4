"""
Report serialization: canonical JSON and the CSV scan table.

JSON reports keep the field order of the dictionaries they are built from
and print every float with 17 significant digits, so a parsed report
re-serializes to the same bytes.
"""
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Iterable, List, Optional, Union

from thetanorm.config import settings
from thetanorm.utils.helpers import ensure_parent_dir

CSV_HEADER = [
    "type", "h0", "necessary", "fail1", "fail2", "iyer",
    "verdict", "ranks", "statuses", "min_gap", "error",
]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = f"{x:.{settings.FLOAT_DIGITS}g}"
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _encode(obj: Any, indent: int, level: int, out: List[str]) -> None:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for n, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key), ensure_ascii=False)}: ")
            _encode(value, indent, level + 1, out)
            out.append(",\n" if n < len(obj) - 1 else "\n")
        out.append(close + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for n, value in enumerate(obj):
            out.append(pad)
            _encode(value, indent, level + 1, out)
            out.append(",\n" if n < len(obj) - 1 else "\n")
        out.append(close + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} in a report")


def canonical_dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with fixed float formatting, insertion-ordered keys and a trailing newline."""
    out: List[str] = []
    _encode(obj, indent, 0, out)
    out.append("\n")
    return "".join(out)


def parse_report(text: str) -> Any:
    return json.loads(text)


def rows_to_csv(rows: Iterable[dict], timings: bool = False) -> str:
    """Scan rows (as produced by ScanRow.as_dict) to CSV with LF line endings."""
    header = CSV_HEADER + (["wall_time"] if timings else [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        numeric = row.get("numeric") or []
        gaps = [r["gap"] for r in numeric]
        line = [
            row["type"],
            row["h0"],
            *(str(row["predicates"][k]).lower() for k in ("necessary", "fail1", "fail2", "iyer")),
            row["verdict"] or "",
            ";".join(str(r["rank"]) for r in numeric),
            ";".join(r["status"] for r in numeric),
            format_float(min(gaps)) if gaps else "",
            row.get("error") or "",
        ]
        if timings:
            line.append(format_float(row.get("wall_time") or 0.0))
        writer.writerow(line)
    return buffer.getvalue()


def write_output(text: str, out: Optional[Union[str, Path]] = None) -> None:
    """Write to `out` (UTF-8, LF) or to stdout when no path is given."""
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    ensure_parent_dir(path)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logging.info(f"Wrote {path}")
