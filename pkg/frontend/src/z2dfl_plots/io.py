"""Parsers for the simulator's delimited table formats.

Each format starts with a '# col,col,...' header line; parse failures name
the offending column and line.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

# figure kind -> expected header columns
SCHEMAS = {
    "fidelity_timeseries": (
        "t", "trace", "min_eig", "hermiticity_residual", "fidelity"
    ),
    "diagonal_profile": ("index", "bitstring", "value"),
    "alpha_sweep": ("alpha", "F_ss", "converged"),
}

# columns holding text rather than numbers
_TEXT_COLUMNS = {"bitstring"}


class ParseError(ValueError):
    """An input file does not match the expected column schema."""


@dataclass(frozen=True)
class Table:
    path: Path
    columns: tuple[str, ...]
    rows: list[tuple]

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        values = [r[i] for r in self.rows]
        if name in _TEXT_COLUMNS:
            return np.array(values, dtype=object)
        return np.array(values, dtype=float)


def read_table(path: str | Path, kind: str) -> Table:
    """Read and validate one delimited file against the schema for kind."""
    if kind not in SCHEMAS:
        raise ParseError(f"unknown figure kind {kind!r}; "
                         f"choose from {sorted(SCHEMAS)}")
    expected = SCHEMAS[kind]
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    lines = path.read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file (expected header "
                         f"'# {','.join(expected)}')")
    header = lines[0].lstrip("#").strip()
    got = tuple(c.strip() for c in header.split(","))
    if got != expected:
        for k, (want, have) in enumerate(zip(expected, got)):
            if want != have:
                raise ParseError(
                    f"{path}: header column {k + 1} is {have!r}, "
                    f"expected {want!r}"
                )
        raise ParseError(
            f"{path}: header has {len(got)} columns, "
            f"expected {len(expected)} ({','.join(expected)})"
        )
    rows = []
    for ln, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != len(expected):
            raise ParseError(
                f"{path}: line {ln} has {len(parts)} fields, "
                f"expected {len(expected)}"
            )
        row = []
        for name, text in zip(expected, parts):
            if name in _TEXT_COLUMNS:
                row.append(text)
                continue
            try:
                row.append(float(text))
            except ValueError as exc:
                raise ParseError(
                    f"{path}: line {ln}, column {name!r}: "
                    f"cannot parse {text!r} as a number"
                ) from exc
        rows.append(tuple(row))
    if not rows:
        raise ParseError(f"{path}: no data rows after the header")
    return Table(path=path, columns=expected, rows=rows)
