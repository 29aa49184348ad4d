"""CSV / JSON-lines emission of flat result records.

Reals are written with 17 significant digits in CSV (enough to round-trip a
double); JSON-lines uses Python's shortest round-trip repr. Booleans are
``true``/``false`` and missing values are empty (CSV) or ``null`` (JSON).
"""
from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence, TextIO

from .classical import Verdict
from .quantumgame import PARAMETER_NAMES
from .sweep import SweepRecord

FORMATS = ("csv", "jsonl")

SWEEP_FIELDS = ("index", *PARAMETER_NAMES, "p_win", "expected_payoff", "classification", "oracle_checked")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def emit(
    records: Iterable[Mapping[str, Any]], fields: Sequence[str], fmt: str, stream: TextIO
) -> int:
    """Write records to ``stream``; returns the number written."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")
    n = 0
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_csv_cell(rec.get(f)) for f in fields])
            n += 1
    else:
        for rec in records:
            row = {f: _json_value(rec.get(f)) for f in fields}
            stream.write(json.dumps(row, allow_nan=False) + "\n")
            n += 1
    return n


def emit_string(records: Iterable[Mapping[str, Any]], fields: Sequence[str], fmt: str) -> str:
    buf = io.StringIO()
    emit(records, fields, fmt, buf)
    return buf.getvalue()


def sweep_row(rec: SweepRecord) -> dict[str, Any]:
    row: dict[str, Any] = {"index": rec.index}
    row.update(zip(PARAMETER_NAMES, rec.angles))
    row.update(
        p_win=rec.p_win,
        expected_payoff=rec.expected_payoff,
        classification=rec.verdict,
        oracle_checked=rec.oracle_checked,
    )
    return row


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if value in ("true", "false"):
        return value == "true"
    raise ValueError(f"not a boolean: {value!r}")


def sweep_record_from_row(row: Mapping[str, Any]) -> SweepRecord:
    return SweepRecord(
        index=int(row["index"]),
        angles=tuple(float(row[n]) for n in PARAMETER_NAMES),
        p_win=float(row["p_win"]),
        expected_payoff=float(row["expected_payoff"]),
        verdict=Verdict(row["classification"]),
        oracle_checked=_parse_bool(row["oracle_checked"]),
    )


def read_sweep_records(text: str, fmt: str) -> list[SweepRecord]:
    """Parse emitted sweep output back into records."""
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != SWEEP_FIELDS:
            raise ValueError("unexpected sweep CSV header")
        return [sweep_record_from_row(r) for r in reader]
    if fmt == "jsonl":
        return [sweep_record_from_row(json.loads(line)) for line in text.splitlines() if line]
    raise ValueError(f"unknown output format {fmt!r}")
