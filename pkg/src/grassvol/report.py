"""JSON and CSV emission of verification records."""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Literal

from pydantic import TypeAdapter

from common.basemodel import VerificationRecord

logger = logging.getLogger(__name__)

ReportFormat = Literal["json", "csv"]

CSV_HEADER = ("check_id", "paper_anchor", "status", "max_error", "runtime_ms", "seed")

_RECORDS = TypeAdapter(list[VerificationRecord])


class ReportError(OSError):
    """Raised when a report cannot be written."""


def render_report(records: Sequence[VerificationRecord], fmt: ReportFormat = "json") -> str:
    """Render records with a fixed field order.

    Raises:
        ValueError: If ``records`` is empty or ``fmt`` is unknown.
    """
    if not records:
        raise ValueError("a report needs at least one record")
    if fmt == "json":
        return _RECORDS.dump_json(list(records), indent=2).decode() + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(
                [
                    record.check_id,
                    record.paper_anchor,
                    record.status,
                    repr(record.max_error),
                    repr(record.runtime_ms),
                    "" if record.seed is None else record.seed,
                ]
            )
        return buffer.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(
    records: Sequence[VerificationRecord], fmt: ReportFormat = "json", path: str | Path | None = None
) -> str:
    """Render ``records`` and write them to ``path`` when given.

    Returns:
        The rendered text.

    Raises:
        ReportError: If the file cannot be written.
    """
    text = render_report(records, fmt)
    if path is not None:
        target = Path(path)
        try:
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            raise ReportError(f"cannot write report to {target}: {e}") from e
        logger.info(f"wrote {len(records)} records to {target}")
    return text


def load_report(text: str | bytes) -> list[VerificationRecord]:
    """Parse a JSON report back into records."""
    return _RECORDS.validate_json(text)


__all__ = [
    "CSV_HEADER",
    "ReportError",
    "ReportFormat",
    "emit_report",
    "load_report",
    "render_report",
]
