"""Active Window Tracking log ingestion and title frequency statistics.

The canonical input is a UTF-8 CSV with header ``start,end,app,title``,
RFC 4180 quoting and ISO 8601 timestamps. Day bucketing uses the UTC
calendar date of the start timestamp, and "frequency" means occurrence
count (total duration is kept per title for future ranking experiments).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import IO, Iterable

from .errors import EmptyFile, MalformedRow

EXPECTED_HEADER = ["start", "end", "app", "title"]


@dataclass(frozen=True)
class WindowEvent:
    """One AWT row: a window held focus from ``start`` to ``end``."""

    start: datetime
    end: datetime
    app: str
    title: str

    @property
    def duration_seconds(self) -> float:
        return (self.end - self.start).total_seconds()


@dataclass(frozen=True)
class TitleStat:
    """Aggregate statistics for one exact window title."""

    title: str
    occurrence_count: int
    distinct_days: int
    total_duration: float


@dataclass(frozen=True)
class ParsedLog:
    """Parse result: events in file order plus the count of skipped rows."""

    events: tuple[WindowEvent, ...]
    skipped_empty_titles: int


def _parse_timestamp(value: str, line_no: int, column: str) -> datetime:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError:
        raise MalformedRow(line_no, f"bad {column} timestamp: {value!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def parse_awt_log(stream: bytes | str | IO) -> ParsedLog:
    """Parse an AWT CSV stream into WindowEvents.

    Rows whose title is empty after trimming are skipped and counted.
    Raises EmptyFile for an empty stream or missing header and
    MalformedRow (with line number) for bad column counts, unparseable
    timestamps, or end-before-start rows.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        raw = stream.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if not text.strip():
        raise EmptyFile("AWT log is empty")

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFile("AWT log is empty") from None
    if [h.strip().lower() for h in header] != EXPECTED_HEADER:
        raise MalformedRow(1, f"expected header {','.join(EXPECTED_HEADER)!r}")

    events: list[WindowEvent] = []
    skipped = 0
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise MalformedRow(line_no, f"expected 4 columns, got {len(row)}")
        start = _parse_timestamp(row[0], line_no, "start")
        end = _parse_timestamp(row[1], line_no, "end")
        if end < start:
            raise MalformedRow(line_no, "end precedes start")
        title = row[3]
        if not title.strip():
            skipped += 1
            continue
        events.append(WindowEvent(start=start, end=end, app=row[2], title=title))
    return ParsedLog(events=tuple(events), skipped_empty_titles=skipped)


def title_statistics(events: Iterable[WindowEvent]) -> list[TitleStat]:
    """Tally occurrence counts, distinct UTC days and total duration per title.

    Sorted by (occurrence_count desc, title asc); invariant under input
    permutation.
    """
    counts: dict[str, int] = {}
    days: dict[str, set] = {}
    durations: dict[str, float] = {}
    for event in events:
        counts[event.title] = counts.get(event.title, 0) + 1
        days.setdefault(event.title, set()).add(event.start.astimezone(timezone.utc).date())
        durations[event.title] = durations.get(event.title, 0.0) + event.duration_seconds
    stats = [
        TitleStat(
            title=title,
            occurrence_count=counts[title],
            distinct_days=len(days[title]),
            total_duration=durations[title],
        )
        for title in counts
    ]
    stats.sort(key=lambda s: (-s.occurrence_count, s.title))
    return stats


def select_object_titles(
    stats: list[TitleStat], n: int = 500, min_days: int = 3
) -> list[str]:
    """Titles fed to object recognition: the ``n`` most frequent that
    appeared on at least ``min_days`` distinct days."""
    qualifying = [s.title for s in stats if s.distinct_days >= min_days]
    return qualifying[:n]


def select_enrichment_titles(stats: list[TitleStat], n: int = 100) -> list[str]:
    """Titles fed to event enrichment: the ``n`` most frequent, no day filter."""
    return [s.title for s in stats[:n]]
