"""Year extraction and per-chapter year assignment.

Every chapter of a volume ends up with exactly one year. Dated chapters
take the mode of their own year mentions; undated chapters borrow the
year of the nearest dated chapter in the same volume. Assignment never
crosses volume boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import NoAnchorYear
from .ingest import Chapter

DEFAULT_YEAR_RANGE = (1800, 1950)

# A year mention is a maximal 4-digit run: no digit on either side.
_YEAR_RE = re.compile(r"(?<!\d)\d{4}(?!\d)")


@dataclass(frozen=True)
class YearHistogram:
    """Counts of in-range year mentions found in one chapter."""

    counts: dict[int, int] = field(default_factory=dict)
    valid_range: tuple[int, int] = DEFAULT_YEAR_RANGE

    def __bool__(self) -> bool:
        return bool(self.counts)


def extract_year_mentions(
    text: str, year_range: tuple[int, int] = DEFAULT_YEAR_RANGE
) -> YearHistogram:
    lo, hi = year_range
    if lo > hi:
        raise ValueError(f"invalid year range {year_range}")
    counts: dict[int, int] = {}
    for match in _YEAR_RE.finditer(text):
        year = int(match.group())
        if lo <= year <= hi:
            counts[year] = counts.get(year, 0) + 1
    return YearHistogram(counts, year_range)


def _mode_year(histogram: YearHistogram, previous_year: int | None) -> int:
    top = max(histogram.counts.values())
    modes = sorted(y for y, c in histogram.counts.items() if c == top)
    if len(modes) == 1 or previous_year is None:
        return modes[0]
    return min(modes, key=lambda y: (abs(y - previous_year), y))


def assign_years(
    chapters: list[Chapter], histograms: dict[str, YearHistogram]
) -> dict[str, int]:
    """Assign one year to every chapter, per volume.

    Dated chapters (non-empty histogram) get their histogram mode; mode
    ties prefer the year nearest the closest preceding assigned chapter,
    then the smaller year. Undated chapters copy the year of the nearest
    dated chapter by ordinal distance, ties toward the earlier chapter.

    Raises NoAnchorYear for a volume with no year mention anywhere.
    """
    by_volume: dict[str, list[Chapter]] = {}
    for chapter in chapters:
        by_volume.setdefault(chapter.volume_id, []).append(chapter)

    assigned: dict[str, int] = {}
    for volume_id, volume_chapters in by_volume.items():
        volume_chapters = sorted(volume_chapters, key=lambda c: c.ordinal)
        dated: list[int] = []
        previous_year: int | None = None
        for i, chapter in enumerate(volume_chapters):
            histogram = histograms.get(chapter.chapter_id)
            if histogram and histogram.counts:
                year = _mode_year(histogram, previous_year)
                assigned[chapter.chapter_id] = year
                previous_year = year
                dated.append(i)
        if not dated:
            raise NoAnchorYear(f"volume {volume_id!r} has no year mention in any chapter")
        for i, chapter in enumerate(volume_chapters):
            if chapter.chapter_id in assigned:
                continue
            nearest = min(dated, key=lambda j: (abs(i - j), j))
            assigned[chapter.chapter_id] = assigned[volume_chapters[nearest].chapter_id]
    return assigned
