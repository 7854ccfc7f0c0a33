"""Deterministic report emission.

Every table is written with a fixed column order, fixed row ordering (declared
by the producing module), and fixed numeric rendering: counts as plain
integers, percentage columns half-up at one decimal (matching the style of the
published tables), fractions at the precision noted in docs/FORMATS.md.
Undefined statistics render as the literal string ``undefined`` so diffs stay
stable. The manifest maps each emitted file to its SHA-256 digest.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import IoFailureError

UNDEFINED = "undefined"

ISCO1_LABELS = {
    "0": "Armed Forces Occupations",
    "1": "Managers",
    "2": "Professionals",
    "3": "Technicians and Associate Professionals",
    "4": "Clerical Support Workers",
    "5": "Service and Sales Workers",
    "6": "Skilled Agricultural, Forestry and Fishery Workers",
    "7": "Craft and Related Trades Workers",
    "8": "Plant and Machine Operators and Assemblers",
    "9": "Elementary Occupations",
    "ALL": "All groups",
}


def _round_half_up(value: float, places: int) -> str:
    from decimal import ROUND_HALF_UP, Decimal

    q = Decimal(10) ** -places
    return str(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def pct(value: float | None, places: int = 1) -> str:
    """Percentage given as 0-100; half-up at `places` decimals."""
    return UNDEFINED if value is None else _round_half_up(value, places)


def frac_pct(value: float | None, places: int = 1) -> str:
    """Percentage given as a 0-1 fraction."""
    return UNDEFINED if value is None else _round_half_up(value * 100.0, places)


def num(value: float | None, places: int) -> str:
    return UNDEFINED if value is None else _round_half_up(value, places)


def count(value: int | None) -> str:
    return UNDEFINED if value is None else str(value)


@dataclass(frozen=True)
class Table:
    name: str  # stem without extension
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def to_csv_bytes(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue().encode("utf-8")

    def to_json_bytes(self) -> bytes:
        records = [dict(zip(self.columns, row)) for row in self.rows]
        return (json.dumps(records, indent=2, sort_keys=True) + "\n").encode("utf-8")


def emit_tables(
    tables: Sequence[Table], out_dir: str | Path, fmt: str = "csv"
) -> dict[str, str]:
    """Write tables in the requested format; returns file -> sha256."""
    if fmt not in ("csv", "structured"):
        raise IoFailureError(f"unknown report format {fmt!r}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailureError(str(exc)) from exc
    digests: dict[str, str] = {}
    for table in tables:
        if fmt == "csv":
            name, payload = f"{table.name}.csv", table.to_csv_bytes()
        else:
            name, payload = f"{table.name}.json", table.to_json_bytes()
        try:
            (out / name).write_bytes(payload)
        except OSError as exc:
            raise IoFailureError(str(exc)) from exc
        digests[name] = hashlib.sha256(payload).hexdigest()
    return digests


def write_manifest(
    out_dir: str | Path, file_digests: Mapping[str, str], seed: int | None, config_digest: str
) -> str:
    manifest = {
        "config_digest": config_digest,
        "seed": seed,
        "files": dict(sorted(file_digests.items())),
    }
    payload = (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8")
    (Path(out_dir) / "manifest.json").write_bytes(payload)
    return hashlib.sha256(payload).hexdigest()


def digest_of(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def canonical_json_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")
