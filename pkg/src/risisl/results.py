"""Tabular sweep results and their CSV serialisation."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

PROBABILITY_COLUMNS = frozenset({"analytic_ber", "mc_ber", "mc_stderr"})


@dataclass
class SweepResult:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)
    row_errors: dict[int, str] = field(default_factory=dict)

    def sort(self) -> "SweepResult":
        order = sorted(range(len(self.rows)), key=lambda i: self.rows[i])
        self.row_errors = {order.index(i): msg for i, msg in self.row_errors.items()}
        self.rows = [self.rows[i] for i in order]
        return self

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]


def format_probability(p: float) -> str:
    """Scientific notation with six decimals and an unpadded exponent, e.g. ``1.230000e-5``."""
    if p is None or (isinstance(p, float) and math.isnan(p)):
        return "NaN"
    mantissa, exponent = f"{p:.6e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if v is None or math.isnan(v):
        return "NaN"
    return f"{v:.10g}"


def render_csv(r: SweepResult) -> str:
    buf = io.StringIO()
    for key, value in r.metadata.items():
        buf.write(f"# {key}: {value}\r\n")
    for i, msg in sorted(r.row_errors.items()):
        buf.write(f"# row_error {i}: {msg}\r\n")
    writer = csv.writer(buf)
    writer.writerow(r.columns)
    prob = [c in PROBABILITY_COLUMNS for c in r.columns]
    for row in r.rows:
        writer.writerow([format_probability(v) if is_p else format_value(v) for v, is_p in zip(row, prob)])
    return buf.getvalue()


def emit_csv(r: SweepResult, destination) -> None:
    """Write ``r`` to a path, or to an open text stream."""
    text = render_csv(r)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
