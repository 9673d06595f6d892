"""Deterministic CSV and JSON report writers.

CSV cells use 17 significant digits for floats and lowercase true/false for
booleans, so two runs with the same seed write identical bytes. JSON keeps
record key order, writes floats with their exact round-trip repr and complex
numbers as [re, im].
"""

import csv
import io
import json
import logging
from collections.abc import Mapping, Sequence
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import numpy as np

logger = logging.getLogger(__name__)

Format = Literal["csv", "json"]


def format_cell(value: Any) -> str:
    """One CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return format(float(value), ".17g")
    if isinstance(value, complex | np.complexfloating):
        c = complex(value)
        return f"{format(c.real, '.17g')}{format(c.imag, '+.17g')}j"
    if isinstance(value, str):
        return value
    return json.dumps(to_jsonable(value), separators=(",", ":"))


def to_jsonable(value: Any) -> Any:
    """Plain JSON values for records, numpy data and complex numbers."""
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        return float(value)
    if isinstance(value, complex | np.complexfloating):
        c = complex(value)
        return [c.real, c.imag]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    return value


def render_csv(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str], keys: Sequence[str] = ()
) -> str:
    """CSV text with a header row, rows sorted by ``keys`` (all columns when empty).

    Missing fields render as empty cells.
    """
    sort_columns = list(keys) or list(columns)
    ordered = sorted(rows, key=lambda r: tuple(_sort_key(r.get(c)) for c in sort_columns))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows([format_cell(row.get(c)) for c in columns] for row in ordered)
    return buffer.getvalue()


def _sort_key(value: Any) -> tuple[int, Any]:
    if value is None:
        return (0, 0)
    if isinstance(value, bool | int | float | np.integer | np.floating):
        return (1, float(value))
    return (2, str(value))


def render_json(document: Any) -> str:
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False) + "\n"


def emit_report(
    path: Path | None,
    document: Any,
    fmt: Format = "json",
    columns: Sequence[str] = (),
    keys: Sequence[str] = (),
) -> str:
    """Render a report and write it to ``path`` (stdout when None).

    Args:
        path: Output file, or None to print.
        document: For csv, an iterable of row mappings (or records with
            to_dict); for json, any record tree.
        fmt: Output format.
        columns: CSV column order; inferred from the first row when empty.
        keys: CSV sort columns.

    Returns:
        The rendered text.

    Raises:
        OSError: If the path cannot be written.
    """
    if fmt == "csv":
        rows = [to_jsonable(r) if hasattr(r, "to_dict") else r for r in document]
        if not columns:
            columns = list(rows[0]) if rows else []
        text = render_csv(rows, columns, keys)
    else:
        text = render_json(document)
    if path is None:
        print(text, end="")
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info("report written to %s", path)
    return text


def read_report(path: Path) -> Any:
    """Read back a JSON or CSV report (CSV as a list of string dicts)."""
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".csv":
        return list(csv.DictReader(io.StringIO(text)))
    return json.loads(text)
