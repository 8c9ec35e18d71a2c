"""File-backed document store for parsed chapters.

Layout under the store root:

    volumes              volume table, JSON Lines
    meta                 chapter table, JSON Lines
    <volume_id>/NNNN.txt one UTF-8 text file per chapter
    entities             accepted entity rows, pipe-delimited
    index/               persisted search index
    graphs/              exported graph documents

The store has a single writer during ingestion; afterwards any number of
readers may share it. Text round-trips byte-identically: files are
written and read with newline translation disabled.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import DuplicateChapter, StorageFailure
from .ingest import Chapter, VolumeManifest, make_chapter_id

PERSON = "PERSON"
PLACE = "PLACE"
LABELS = (PERSON, PLACE)


class EntityRow(NamedTuple):
    """One accepted entity occurrence: (chapter, normalized form, label)."""

    chapter_id: str
    normalized: str
    label: str


class VolumeRecord(NamedTuple):
    volume_id: str
    title: str
    heading_pattern: str
    year_range: tuple[int, int] | None


class DocumentStore:
    """Chapter persistence plus the volume/entity side tables."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self._volumes: list[VolumeRecord] = []
        self._meta: dict[str, dict] = {}
        if (self.root / "volumes").exists():
            self._load()

    # -- paths ------------------------------------------------------------

    @property
    def index_dir(self) -> Path:
        return self.root / "index"

    @property
    def graphs_dir(self) -> Path:
        return self.root / "graphs"

    def _chapter_path(self, volume_id: str, ordinal: int) -> Path:
        return self.root / volume_id / f"{ordinal:04d}.txt"

    # -- loading ----------------------------------------------------------

    def _load(self) -> None:
        try:
            volume_lines = (self.root / "volumes").read_text(encoding="utf-8")
            meta_lines = (self.root / "meta").read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cannot read store at {self.root}: {exc}") from exc
        self._volumes = []
        for line in volume_lines.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            year_range = rec.get("year_range")
            self._volumes.append(
                VolumeRecord(
                    rec["volume_id"],
                    rec["title"],
                    rec["heading_pattern"],
                    tuple(year_range) if year_range else None,
                )
            )
        self._meta = {}
        for line in meta_lines.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            self._meta[rec["chapter_id"]] = rec

    # -- writing ----------------------------------------------------------

    def _flush_tables(self) -> None:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            with open(self.root / "volumes", "w", encoding="utf-8", newline="") as fh:
                for vol in self._volumes:
                    fh.write(
                        json.dumps(
                            {
                                "volume_id": vol.volume_id,
                                "title": vol.title,
                                "heading_pattern": vol.heading_pattern,
                                "year_range": list(vol.year_range) if vol.year_range else None,
                            },
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
            with open(self.root / "meta", "w", encoding="utf-8", newline="") as fh:
                for rec in self._iter_meta():
                    fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        except OSError as exc:
            raise StorageFailure(f"cannot write store at {self.root}: {exc}") from exc

    def _iter_meta(self) -> Iterable[dict]:
        by_volume: dict[str, list[dict]] = {}
        for rec in self._meta.values():
            by_volume.setdefault(rec["volume_id"], []).append(rec)
        order = [v.volume_id for v in self._volumes]
        for volume_id in order + sorted(set(by_volume) - set(order)):
            for rec in sorted(by_volume.get(volume_id, []), key=lambda r: r["ordinal"]):
                yield rec

    def add_volume(self, manifest: VolumeManifest, chapters: list[Chapter]) -> int:
        if any(v.volume_id == manifest.volume_id for v in self._volumes):
            raise DuplicateChapter(f"volume {manifest.volume_id!r} already stored")
        self._volumes.append(
            VolumeRecord(
                manifest.volume_id,
                manifest.title,
                manifest.heading_pattern,
                manifest.year_range,
            )
        )
        return self.store_chapters(chapters)

    def store_chapters(self, chapters: list[Chapter]) -> int:
        """Persist chapters; returns how many were written.

        Refuses to overwrite: a chapter_id already present (or repeated in
        the argument) raises DuplicateChapter before anything is written.
        """
        seen: set[str] = set()
        for chapter in chapters:
            if chapter.chapter_id in self._meta or chapter.chapter_id in seen:
                raise DuplicateChapter(chapter.chapter_id)
            seen.add(chapter.chapter_id)
        if not chapters:
            return 0
        try:
            for chapter in chapters:
                path = self._chapter_path(chapter.volume_id, chapter.ordinal)
                path.parent.mkdir(parents=True, exist_ok=True)
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(chapter.text)
                self._meta[chapter.chapter_id] = {
                    "chapter_id": chapter.chapter_id,
                    "volume_id": chapter.volume_id,
                    "ordinal": chapter.ordinal,
                    "title": chapter.title,
                    "bytes": len(chapter.text.encode("utf-8")),
                    "year": chapter.year,
                }
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc
        self._flush_tables()
        return len(chapters)

    def set_years(self, years: dict[str, int]) -> None:
        for chapter_id, year in years.items():
            if chapter_id not in self._meta:
                raise StorageFailure(f"unknown chapter {chapter_id!r}")
            self._meta[chapter_id]["year"] = year
        self._flush_tables()

    # -- reading ----------------------------------------------------------

    def volumes(self) -> list[VolumeRecord]:
        return list(self._volumes)

    def volume_ids(self) -> list[str]:
        return [v.volume_id for v in self._volumes]

    def chapter_text(self, chapter_id: str) -> str:
        rec = self._meta.get(chapter_id)
        if rec is None:
            raise StorageFailure(f"unknown chapter {chapter_id!r}")
        path = self._chapter_path(rec["volume_id"], rec["ordinal"])
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                return fh.read()
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc

    def _to_chapter(self, rec: dict) -> Chapter:
        return Chapter(
            chapter_id=rec["chapter_id"],
            volume_id=rec["volume_id"],
            ordinal=rec["ordinal"],
            title=rec["title"],
            text=self.chapter_text(rec["chapter_id"]),
            year=rec["year"],
        )

    def chapter(self, chapter_id: str) -> Chapter:
        rec = self._meta.get(chapter_id)
        if rec is None:
            raise StorageFailure(f"unknown chapter {chapter_id!r}")
        return self._to_chapter(rec)

    def chapter_by_ordinal(self, volume_id: str, ordinal: int) -> Chapter:
        return self.chapter(make_chapter_id(volume_id, ordinal))

    def chapters(self, volume_id: str | None = None) -> list[Chapter]:
        """All chapters in deterministic order (volume order, then ordinal)."""
        out = []
        for rec in self._iter_meta():
            if volume_id is None or rec["volume_id"] == volume_id:
                out.append(self._to_chapter(rec))
        return out

    def chapter_count(self) -> int:
        return len(self._meta)

    # -- entity rows --------------------------------------------------------

    def write_entity_rows(self, rows: list[EntityRow]) -> None:
        try:
            with open(self.root / "entities", "w", encoding="utf-8", newline="") as fh:
                for row in rows:
                    fh.write(f"{row.chapter_id}|{row.normalized}|{row.label}\n")
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc

    def entity_rows(self) -> list[EntityRow]:
        path = self.root / "entities"
        if not path.exists():
            return []
        rows = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            chapter_id, normalized, label = line.split("|")
            rows.append(EntityRow(chapter_id, normalized, label))
        return rows
