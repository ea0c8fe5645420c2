"""Readers for the simulation's published CSV/JSON artifacts.

The producing package writes CSVs with a leading comment line
``# akltsim {"schema": "<name>/<major.minor>", "config": {...}}``
followed by a header row, and JSON documents carrying the same
``schema`` key.  Only major version 1 is accepted.
"""

from __future__ import annotations

import json
from pathlib import Path

SUPPORTED_MAJOR = "1"


class SchemaError(ValueError):
    """Input file does not match the expected published schema."""


def _check_schema(tag: str, expected: str, path: Path) -> None:
    name, _, version = tag.partition("/")
    if name != expected:
        raise SchemaError(f"{path}: schema {name!r}, expected {expected!r}")
    if version.split(".")[0] != SUPPORTED_MAJOR:
        raise SchemaError(f"{path}: unsupported schema major version {version!r}")


def read_csv(path: str | Path, expected_schema: str,
             required_columns: tuple[str, ...]) -> list[dict]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# akltsim "):
        raise SchemaError(f"{path}: missing schema comment line")
    meta = json.loads(lines[0][len("# akltsim "):])
    _check_schema(meta.get("schema", ""), expected_schema, path)
    header = lines[1].split(",")
    missing = [c for c in required_columns if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
    rows = []
    for line in lines[2:]:
        if line:
            rows.append(dict(zip(header, line.split(","))))
    return rows


def read_json(path: str | Path, expected_schema: str) -> dict:
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    _check_schema(doc.get("schema", ""), expected_schema, path)
    return doc
