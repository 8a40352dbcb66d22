"""CSV/JSON table reading against the macromech output schemas.

This package never recomputes physics: it renders exactly what the
simulation CLI wrote. Schema mismatches are reported with the offending
column names.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


class SchemaError(Exception):
    pass


#: Required columns per figure kind (extra columns are allowed).
SCHEMAS = {
    "fig1b": ("k", "I", "M"),
    "fig2": ("k", "nbar", "I", "M"),
    "fig3d": ("r", "I", "M"),
    "weights": ("n", "weight_abs"),
    "wigner": ("x", "p", "W"),
}


def read_table(path: str | Path) -> dict[str, list]:
    """Read a CSV or JSON table into columns; numbers parsed, blanks kept."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file {path} does not exist")
    if path.suffix.lower() == ".json":
        rows = json.loads(path.read_text())
        if not isinstance(rows, list) or not rows:
            raise SchemaError(f"{path}: expected a non-empty JSON array of objects")
        names = list(rows[0].keys())
        return {name: [row.get(name, "") for row in rows] for name in names}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        columns: dict[str, list] = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                columns[name].append(_parse(value))
    if not next(iter(columns.values()), []):
        raise SchemaError(f"{path}: no data rows")
    return columns


def _parse(value: str):
    try:
        return float(value)
    except ValueError:
        return value


def validate(columns: dict[str, list], kind: str, path) -> None:
    required = SCHEMAS[kind]
    missing = [name for name in required if name not in columns]
    if missing:
        raise SchemaError(
            f"{path}: missing columns {', '.join(missing)} for kind {kind!r} "
            f"(found: {', '.join(columns)})"
        )
