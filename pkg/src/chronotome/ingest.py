"""Volume parsing: chapter boundary detection and corpus manifests.

A corpus directory holds a ``manifest`` file (JSON Lines, one record per
volume) next to the volume text files. Chapter boundaries are detected
line-by-line with a per-volume regular expression; everything before the
first heading becomes a front-matter chapter at ordinal 0, and each
heading line opens a new chapter that owns its heading line and the body
up to the next heading. Concatenating the chapter texts of a volume
reproduces the source document byte for byte.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    MalformedInput,
    MalformedManifest,
    MissingVolumeFile,
    NoChapters,
)

# A heading line: no lowercase anywhere, at most 80 characters, and at
# least one uppercase letter so blank lines and bare dividers never open
# a chapter.
DEFAULT_HEADING_PATTERN = r"^(?=.{1,80}$)(?=.*[A-Z])[^a-z]+$"

# Characters str.splitlines() treats as line terminators.
_LINE_ENDS = "\r\n\v\f\x1c\x1d\x1e\x85  "


@dataclass(frozen=True)
class VolumeManifest:
    """One volume of the corpus: identity, source file, boundary rule."""

    volume_id: str
    title: str
    source_path: str
    heading_pattern: str = DEFAULT_HEADING_PATTERN
    year_range: tuple[int, int] | None = None

    def compiled_pattern(self) -> re.Pattern[str]:
        try:
            return re.compile(self.heading_pattern)
        except re.error as exc:
            raise MalformedManifest(
                f"volume {self.volume_id!r}: heading pattern does not compile: {exc}"
            ) from exc


@dataclass
class Chapter:
    """A stored document unit: letter, speech, article, or book chapter."""

    chapter_id: str
    volume_id: str
    ordinal: int
    title: str
    text: str
    year: int | None = None


def make_chapter_id(volume_id: str, ordinal: int) -> str:
    return f"{volume_id}-{ordinal:04d}"


def parse_volume(raw: str | bytes, manifest: VolumeManifest) -> list[Chapter]:
    """Split a volume into chapters at lines matching the heading pattern.

    The front matter (possibly empty) gets ordinal 0 with an empty title;
    each heading line starts a chapter titled with that line. Chapter
    texts include their heading lines, so ``"".join(c.text for c in
    chapters)`` equals ``raw`` exactly.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"volume {manifest.volume_id!r}: {exc}") from exc

    pattern = manifest.compiled_pattern()
    titles: list[str] = [""]
    texts: list[list[str]] = [[]]
    for line in raw.splitlines(keepends=True):
        content = line.rstrip(_LINE_ENDS)
        if pattern.search(content):
            titles.append(content)
            texts.append([line])
        else:
            texts[-1].append(line)

    if len(titles) == 1 and not raw.strip():
        raise NoChapters(f"volume {manifest.volume_id!r} has no headings and no text")

    return [
        Chapter(
            chapter_id=make_chapter_id(manifest.volume_id, ordinal),
            volume_id=manifest.volume_id,
            ordinal=ordinal,
            title=title,
            text="".join(chunks),
        )
        for ordinal, (title, chunks) in enumerate(zip(titles, texts))
    ]


def parse_manifest(lines: str) -> list[VolumeManifest]:
    """Parse a JSON Lines manifest document into volume records."""
    manifests: list[VolumeManifest] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedManifest(f"manifest line {lineno}: {exc}") from exc
        if not isinstance(record, dict):
            raise MalformedManifest(f"manifest line {lineno}: record is not an object")
        try:
            volume_id = record["volume_id"]
            title = record["title"]
            path = record["path"]
        except KeyError as exc:
            raise MalformedManifest(f"manifest line {lineno}: missing field {exc}") from exc
        if not isinstance(volume_id, str) or not volume_id:
            raise MalformedManifest(f"manifest line {lineno}: bad volume_id")
        if volume_id in seen:
            raise MalformedManifest(f"manifest line {lineno}: duplicate volume_id {volume_id!r}")
        seen.add(volume_id)
        year_range = record.get("year_range")
        if year_range is not None:
            if (
                not isinstance(year_range, (list, tuple))
                or len(year_range) != 2
                or not all(isinstance(y, int) for y in year_range)
                or year_range[0] > year_range[1]
            ):
                raise MalformedManifest(
                    f"manifest line {lineno}: year_range must be [min, max] with min <= max"
                )
            year_range = (year_range[0], year_range[1])
        manifest = VolumeManifest(
            volume_id=volume_id,
            title=str(title),
            source_path=str(path),
            heading_pattern=record.get("heading_pattern", DEFAULT_HEADING_PATTERN),
            year_range=year_range,
        )
        manifest.compiled_pattern()
        manifests.append(manifest)
    return manifests


def read_manifest_file(path: Path) -> list[VolumeManifest]:
    if not path.is_file():
        raise MalformedManifest(f"manifest file not found: {path}")
    return parse_manifest(path.read_text(encoding="utf-8"))


def parse_volume_file(manifest: VolumeManifest, root: Path) -> list[Chapter]:
    source = root / manifest.source_path
    if not source.is_file():
        raise MissingVolumeFile(str(source))
    return parse_volume(source.read_bytes(), manifest)


def load_corpus(manifests: list[VolumeManifest], root: Path, store) -> "object":
    """Parse every volume under ``root`` and persist it into ``store``.

    Returns the store, which enumerates volumes in manifest order and
    chapters in ordinal order.
    """
    for manifest in manifests:
        chapters = parse_volume_file(manifest, root)
        store.add_volume(manifest, chapters)
    return store
