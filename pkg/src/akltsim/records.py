"""Versioned CSV/JSON artifacts with embedded configuration.

Every CSV starts with a single comment line carrying the schema name,
the schema version, and the full resolved configuration as compact
JSON, followed by a regular header row.  Floats are printed with 17
significant digits so files round-trip bit-exactly.  Readers reject
unknown major schema versions.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable

SCHEMA_VERSION = "1.0"

CHAIN_METRICS_COLUMNS = ("seed", "sweep", "L", "boundary", "n_domains",
                         "n_edges_multi", "n_edges_simple", "log2_weight",
                         "acceptance_rate")
SAMPLE_COLUMNS = ("L", "boundary", "n_domains", "n_edges_simple",
                  "n_components", "betti", "mean_degree", "mean_domain_size",
                  "domain_size_width", "max_domain_size")
SUMMARY_COLUMNS = ("L", "boundary", "observable", "mean", "stderr", "n_samples")
CURVE_COLUMNS = ("mode", "L", "p_delete", "p_cluster", "stderr", "trials")


def format_value(v: Any) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def write_csv(path: Path, schema: str, columns: Iterable[str],
              rows: Iterable[Iterable[Any]], config: dict) -> None:
    columns = tuple(columns)
    meta = json.dumps({"schema": f"{schema}/{SCHEMA_VERSION}", "config": config},
                      sort_keys=True, separators=(",", ":"))
    lines = [f"# akltsim {meta}", ",".join(columns)]
    for row in rows:
        row = tuple(row)
        if len(row) != len(columns):
            raise ValueError("row width does not match header")
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path: Path, expect_schema: str | None = None) -> tuple[dict, list[dict]]:
    """Parse one of our CSVs; returns (meta, rows-as-dicts)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# akltsim "):
        raise ValueError(f"{path}: missing schema comment line")
    meta = json.loads(lines[0][len("# akltsim "):])
    schema, _, version = meta.get("schema", "").partition("/")
    if expect_schema is not None and schema != expect_schema:
        raise ValueError(f"{path}: schema {schema!r}, expected {expect_schema!r}")
    major = version.split(".")[0]
    if major != SCHEMA_VERSION.split(".")[0]:
        raise ValueError(f"{path}: unsupported schema major version {version!r}")
    header = lines[1].split(",")
    rows = []
    for line in lines[2:]:
        if not line:
            continue
        rows.append(dict(zip(header, line.split(","))))
    return meta, rows


def write_json(path: Path, schema: str, payload: dict, config: dict) -> None:
    doc = {"schema": f"{schema}/{SCHEMA_VERSION}", "config": config}
    doc.update(payload)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")


def read_json(path: Path, expect_schema: str | None = None) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    schema, _, version = doc.get("schema", "").partition("/")
    if expect_schema is not None and schema != expect_schema:
        raise ValueError(f"{path}: schema {schema!r}, expected {expect_schema!r}")
    if version.split(".")[0] != SCHEMA_VERSION.split(".")[0]:
        raise ValueError(f"{path}: unsupported schema major version {version!r}")
    return doc
