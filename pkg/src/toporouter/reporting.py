"""Tabular output: CSV with provenance headers, content hashes, manifests.

Everything here is deterministic: floats are written with repr (shortest
round-trip form, at most 17 significant digits), manifests are sorted JSON
without timestamps, so a rerun with the same config and seed produces
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, replace
from importlib import metadata
from pathlib import Path
from typing import Sequence

__all__ = [
    "ResultTable",
    "write_csv",
    "read_csv",
    "sha256_of_file",
    "write_manifest",
    "tool_version",
]

_INT_RE = re.compile(r"^-?\d+$")


def tool_version() -> str:
    try:
        return metadata.version("toporouter")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} does not match {len(self.columns)} columns"
                )

    def with_provenance(self, lines: Sequence[str]) -> "ResultTable":
        return replace(self, provenance=tuple(lines))

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def _format_cell(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean cells are not part of the table format")
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise ValueError(f"cell text may not contain separators: {value!r}")
        return value
    return repr(float(value))


def _parse_cell(text: str):
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def write_csv(table: ResultTable, path) -> Path:
    path = Path(path)
    lines = [f"# {p}" for p in table.provenance]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path) -> ResultTable:
    text = Path(path).read_text(encoding="utf-8")
    provenance = []
    header = None
    rows = []
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            provenance.append(line[1:].strip())
            continue
        cells = line.split(",")
        if header is None:
            header = tuple(cells)
            continue
        rows.append(tuple(_parse_cell(c) for c in cells))
    if header is None:
        raise ValueError(f"{path}: no header row found")
    return ResultTable(columns=header, rows=tuple(rows), provenance=tuple(provenance))


def sha256_of_file(path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def write_manifest(
    out_dir,
    command: str,
    resolved_config: dict,
    outputs: Sequence[Path],
    results: dict | None = None,
) -> Path:
    """Write manifest.json capturing the run: config, version, output hashes.

    No timestamps on purpose; the manifest participates in the determinism
    contract along with the CSVs it describes.
    """
    out_dir = Path(out_dir)
    manifest = {
        "tool": "toporouter",
        "version": tool_version(),
        "command": command,
        "config": resolved_config,
        "outputs": {Path(p).name: sha256_of_file(p) for p in outputs},
    }
    if results is not None:
        manifest["results"] = results
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
