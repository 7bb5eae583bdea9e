"""Strict reader for casph sweep CSV files.

Only the documented CSV contract is consumed: '#'-prefixed metadata lines
(the first of which carries the schema version), a header row, and data
rows.  No physics is recomputed here; rows whose status is not "ok" are
dropped with a warning count.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

SUPPORTED_SCHEMA = 1

REQUIRED_COLUMNS = {
    1: ("L_um", "R_um", "theta", "theta_pfa"),
    2: ("L_um", "R_um", "theta", "theta_pfa"),
    3: ("L_um", "R_um", "ratio_plasma_drude", "ratio_pfa_plasma_drude"),
}

OPTIONAL_OVERLAY = {1: "theta_dipole"}


class SchemaError(ValueError):
    """CSV does not satisfy the expected sweep schema."""


@dataclass
class SweepTable:
    schema: int
    columns: tuple
    rows: list
    n_dropped: int = 0

    def radii(self):
        return sorted({row["R_um"] for row in self.rows})

    def series(self, radius, column):
        """(L, value) pairs for one radius, sorted by L; blanks skipped."""
        pts = [(row["L_um"], row[column]) for row in self.rows
               if row["R_um"] == radius and row.get(column) is not None]
        return sorted(pts)


def read_sweep_csv(path, figure_id):
    required = REQUIRED_COLUMNS[figure_id]
    with open(path, encoding="utf-8") as fh:
        text = fh.read()

    schema = None
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            stripped = line[1:].strip()
            if stripped.startswith("schema="):
                schema = int(stripped.split("=", 1)[1])
            continue
        if line.strip():
            data_lines.append(line)
    if schema is None:
        raise SchemaError(f"{path}: missing '# schema=' metadata line")
    if schema > SUPPORTED_SCHEMA:
        raise SchemaError(f"{path}: schema {schema} is newer than the "
                          f"supported version {SUPPORTED_SCHEMA}")
    if not data_lines:
        raise SchemaError(f"{path}: no header row")

    reader = csv.DictReader(io.StringIO("\n".join(data_lines)))
    columns = tuple(reader.fieldnames or ())
    missing = [c for c in required if c not in columns]
    if missing:
        raise SchemaError(f"{path}: missing required columns {missing}")

    wanted = list(required)
    overlay = OPTIONAL_OVERLAY.get(figure_id)
    if overlay and overlay in columns:
        wanted.append(overlay)

    rows = []
    dropped = 0
    for raw in reader:
        if raw.get("status", "ok") != "ok":
            dropped += 1
            continue
        row = {}
        valid = True
        for col in wanted:
            cell = (raw.get(col) or "").strip()
            if cell == "":
                if col == overlay:
                    row[col] = None
                    continue
                valid = False
                break
            try:
                row[col] = float(cell)
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: non-numeric value {cell!r} in column "
                    f"{col!r}") from exc
        if valid:
            rows.append(row)
        else:
            dropped += 1
    if not rows:
        raise SchemaError(f"{path}: no usable rows")
    return SweepTable(schema=schema, columns=columns, rows=rows,
                      n_dropped=dropped)
