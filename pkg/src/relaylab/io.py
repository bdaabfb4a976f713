"""CSV serialization of sweep results."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .experiments import SweepResult, SweepRow

__all__ = ["CSV_HEADER", "sweep_to_csv", "sweep_from_csv", "write_sweep_csv", "read_sweep_csv"]

CSV_HEADER = ("sweep_value", "scheme", "mean_rate_per_subcarrier", "std_error", "trials")


def sweep_to_csv(result: SweepResult) -> str:
    """CSV text, rows sorted by (sweep_value, scheme); floats use shortest round-trip repr."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sorted(result.rows, key=lambda r: (r.sweep_value, r.scheme)):
        writer.writerow((repr(r.sweep_value), r.scheme, repr(r.mean_rate_per_subcarrier),
                         repr(r.std_error), str(r.trials)))
    return buf.getvalue()


def sweep_from_csv(text: str) -> SweepResult:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = [SweepRow(float(v), s, float(m), float(e), int(t)) for v, s, m, e, t in reader]
    return SweepResult(rows)


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_to_csv(result))


def read_sweep_csv(path) -> SweepResult:
    with open(Path(path), encoding="utf-8", newline="") as fh:
        return sweep_from_csv(fh.read())
