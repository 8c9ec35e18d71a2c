"""Positional inverted index with BM25 ranking and phrase queries.

Terms are maximal alphanumeric runs, case-folded; everything else is a
separator. All spans are byte offsets into the UTF-8 encoding of the
source text so highlights survive serialization; snippet excerpts carry
spans rebased to the excerpt's own encoding.

No stemming and no stopword removal: entity phrases must match verbatim
and highlights must align with source bytes.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from .errors import EmptyQuery, StorageFailure, UnassignedYear, UnknownBook
from .ingest import Chapter

BM25_K1 = 1.2
BM25_B = 0.75

SNIPPET_RADIUS = 60
SNIPPET_MAX = 3

INDEX_MAGIC = "chronotome.index"
INDEX_VERSION = 1

_WORD_RE = re.compile(r"[^\W_]+")
_WHITESPACE_BYTES = frozenset(b" \t\r\n")


@dataclass(frozen=True)
class Word:
    """A word occurrence with both character and byte coordinates."""

    surface: str
    position: int
    char_span: tuple[int, int]
    span: tuple[int, int]


@dataclass(frozen=True)
class Token:
    term: str
    position: int
    span: tuple[int, int]


def iter_words(text: str) -> list[Word]:
    words = []
    byte_pos = 0
    char_pos = 0
    for position, match in enumerate(_WORD_RE.finditer(text)):
        cs, ce = match.span()
        byte_pos += len(text[char_pos:cs].encode("utf-8"))
        width = len(text[cs:ce].encode("utf-8"))
        words.append(Word(match.group(), position, (cs, ce), (byte_pos, byte_pos + width)))
        byte_pos += width
        char_pos = ce
    return words


def tokenize(text: str) -> list[Token]:
    return [Token(w.surface.casefold(), w.position, w.span) for w in iter_words(text)]


@dataclass
class ChapterInfo:
    volume_id: str
    ordinal: int
    title: str
    year: int
    length: int  # token count


@dataclass(frozen=True)
class Snippet:
    text: str
    highlights: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SearchHit:
    chapter_id: str
    volume_id: str
    ordinal: int
    title: str
    year: int
    score: float
    snippets: tuple[Snippet, ...]


@dataclass
class SearchIndex:
    """Inverted index plus the chapter table needed for ranking."""

    chapters: dict[str, ChapterInfo] = field(default_factory=dict)
    # term -> {chapter_id -> (positions, spans)}, all sorted
    postings: dict[str, dict[str, tuple[list[int], list[tuple[int, int]]]]] = field(
        default_factory=dict
    )
    texts: Callable[[str], str] | None = None

    def text(self, chapter_id: str) -> str:
        if self.texts is None:
            raise StorageFailure("index has no text source attached")
        return self.texts(chapter_id)

    @property
    def avgdl(self) -> float:
        if not self.chapters:
            return 0.0
        return sum(info.length for info in self.chapters.values()) / len(self.chapters)

    def volume_ids(self) -> set[str]:
        return {info.volume_id for info in self.chapters.values()}


def build_index(chapters: list[Chapter]) -> SearchIndex:
    """Index chapters; they must all carry an assigned year."""
    index = SearchIndex()
    texts: dict[str, str] = {}
    for chapter in chapters:
        if chapter.year is None:
            raise UnassignedYear(chapter.chapter_id)
        tokens = tokenize(chapter.text)
        index.chapters[chapter.chapter_id] = ChapterInfo(
            volume_id=chapter.volume_id,
            ordinal=chapter.ordinal,
            title=chapter.title,
            year=chapter.year,
            length=len(tokens),
        )
        texts[chapter.chapter_id] = chapter.text
        for token in tokens:
            per_chapter = index.postings.setdefault(token.term, {})
            positions, spans = per_chapter.setdefault(chapter.chapter_id, ([], []))
            positions.append(token.position)
            spans.append(token.span)
    index.texts = texts.__getitem__
    return index


def save_index(index: SearchIndex, path: Path) -> None:
    document = {
        "magic": INDEX_MAGIC,
        "version": INDEX_VERSION,
        "chapters": [
            [cid, info.volume_id, info.ordinal, info.title, info.year, info.length]
            for cid, info in sorted(index.chapters.items())
        ],
        "postings": {
            term: [
                [cid, positions, [list(s) for s in spans]]
                for cid, (positions, spans) in sorted(per_chapter.items())
            ]
            for term, per_chapter in sorted(index.postings.items())
        },
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            json.dump(document, fh, ensure_ascii=False, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise StorageFailure(str(exc)) from exc


def load_index(path: Path, texts: Callable[[str], str] | Mapping[str, str]) -> SearchIndex:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise StorageFailure(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise StorageFailure(f"corrupt index at {path}: {exc}") from exc
    if document.get("magic") != INDEX_MAGIC or document.get("version") != INDEX_VERSION:
        raise StorageFailure(f"not a readable index file: {path}")
    index = SearchIndex()
    for cid, volume_id, ordinal, title, year, length in document["chapters"]:
        index.chapters[cid] = ChapterInfo(volume_id, ordinal, title, year, length)
    for term, rows in document["postings"].items():
        index.postings[term] = {
            cid: (positions, [tuple(s) for s in spans]) for cid, positions, spans in rows
        }
    index.texts = texts if callable(texts) else texts.__getitem__
    return index


def _idf(index: SearchIndex, term: str) -> float:
    n = len(index.postings.get(term, {}))
    total = len(index.chapters)
    return math.log(1.0 + (total - n + 0.5) / (n + 0.5))


def bm25_score(index: SearchIndex, terms: list[str], chapter_id: str) -> float:
    """BM25 over the query term multiset for one chapter."""
    info = index.chapters[chapter_id]
    avgdl = index.avgdl
    score = 0.0
    for term in terms:
        per_chapter = index.postings.get(term, {})
        entry = per_chapter.get(chapter_id)
        if entry is None:
            continue
        tf = len(entry[0])
        norm = BM25_K1 * (1.0 - BM25_B + BM25_B * info.length / avgdl)
        score += _idf(index, term) * tf * (BM25_K1 + 1.0) / (tf + norm)
    return score


def snippet(
    text: str,
    match_spans: list[tuple[int, int]],
    radius: int = SNIPPET_RADIUS,
    max_snippets: int = SNIPPET_MAX,
) -> list[Snippet]:
    """Excerpts around matches, with highlight spans rebased to each excerpt.

    Windows extend ``radius`` bytes beyond the outermost matches;
    overlapping windows merge. Window edges snap outward to UTF-8
    boundaries, then inward to whitespace when a partial word would
    otherwise remain. Spans are byte offsets into the excerpt's UTF-8
    encoding.
    """
    if not match_spans:
        return []
    data = text.encode("utf-8")
    spans = sorted(match_spans)

    groups: list[list[tuple[int, int]]] = [[spans[0]]]
    group_ends = [spans[0][1]]
    for span in spans[1:]:
        if span[0] - radius <= group_ends[-1] + radius:
            groups[-1].append(span)
            group_ends[-1] = max(group_ends[-1], span[1])
        else:
            groups.append([span])
            group_ends.append(span[1])

    snippets = []
    for group, last_end in list(zip(groups, group_ends))[:max_snippets]:
        start = max(0, group[0][0] - radius)
        end = min(len(data), last_end + radius)
        # Snap outward to UTF-8 boundaries.
        while start > 0 and (data[start] & 0xC0) == 0x80:
            start -= 1
        while end < len(data) and (data[end] & 0xC0) == 0x80:
            end += 1
        # Trim partial words inward to whitespace, never into a match.
        if start > 0 and data[start - 1] not in _WHITESPACE_BYTES:
            for i in range(start, group[0][0]):
                if data[i] in _WHITESPACE_BYTES:
                    start = i + 1
                    break
        if end < len(data) and data[end] not in _WHITESPACE_BYTES:
            for i in range(end - 1, last_end - 1, -1):
                if data[i] in _WHITESPACE_BYTES:
                    end = i
                    break
        snippets.append(
            Snippet(
                text=data[start:end].decode("utf-8"),
                highlights=tuple((s - start, e - start) for s, e in group),
            )
        )
    return snippets


def _query_terms(query: str) -> list[str]:
    terms = [t.term for t in tokenize(query)]
    if not terms:
        raise EmptyQuery(repr(query))
    return terms


def search(
    index: SearchIndex,
    query: str,
    limit: int | None = None,
    offset: int = 0,
) -> tuple[list[SearchHit], int]:
    """Ranked chapter hits for a free-text query.

    Candidates contain at least one query term and are ranked by BM25
    (ties by chapter id). Returns the page plus the total candidate
    count.
    """
    terms = _query_terms(query)
    candidates: set[str] = set()
    for term in set(terms):
        candidates.update(index.postings.get(term, {}))

    scored = sorted(
        ((bm25_score(index, terms, cid), cid) for cid in candidates),
        key=lambda pair: (-pair[0], pair[1]),
    )
    total = len(scored)
    if limit is not None:
        scored = scored[offset : offset + limit]
    elif offset:
        scored = scored[offset:]

    hits = []
    for score, cid in scored:
        info = index.chapters[cid]
        spans: list[tuple[int, int]] = []
        for term in set(terms):
            entry = index.postings.get(term, {}).get(cid)
            if entry:
                spans.extend(entry[1])
        hits.append(
            SearchHit(
                chapter_id=cid,
                volume_id=info.volume_id,
                ordinal=info.ordinal,
                title=info.title,
                year=info.year,
                score=score,
                snippets=tuple(snippet(index.text(cid), sorted(spans))),
            )
        )
    return hits, total


def phrase_spans(index: SearchIndex, terms: list[str], chapter_id: str) -> list[tuple[int, int]]:
    """Byte spans of consecutive-position runs of ``terms`` in a chapter."""
    per_term = []
    for term in terms:
        entry = index.postings.get(term, {}).get(chapter_id)
        if entry is None:
            return []
        per_term.append((dict(zip(entry[0], entry[1])), set(entry[0])))
    first_positions, _ = per_term[0]
    spans = []
    for position in sorted(first_positions):
        if all(position + i in per_term[i][1] for i in range(1, len(terms))):
            start = first_positions[position][0]
            end = per_term[-1][0][position + len(terms) - 1][1]
            spans.append((start, end))
    return spans


@dataclass(frozen=True)
class ChapterOccurrences:
    chapter_id: str
    volume_id: str
    ordinal: int
    title: str
    year: int
    count: int
    snippets: tuple[Snippet, ...]


@dataclass(frozen=True)
class YearGroup:
    year: int
    chapters: tuple[ChapterOccurrences, ...]


@dataclass(frozen=True)
class EntityOccurrences:
    entity: str
    total_chapters: int
    groups: tuple[YearGroup, ...]


def entity_occurrences(
    index: SearchIndex,
    entity: str,
    volumes: set[str] | None = None,
    radius: int = SNIPPET_RADIUS,
) -> EntityOccurrences:
    """All phrase occurrences of an entity, grouped by year then chapter.

    Every occurrence is covered by a snippet. An entity absent from the
    selected volumes yields an empty result, not an error.
    """
    terms = _query_terms(entity)
    if volumes is not None:
        unknown = volumes - index.volume_ids()
        if unknown:
            raise UnknownBook(", ".join(sorted(unknown)))

    by_year: dict[int, list[ChapterOccurrences]] = {}
    candidates = index.postings.get(terms[0], {})
    for chapter_id in sorted(candidates):
        info = index.chapters[chapter_id]
        if volumes is not None and info.volume_id not in volumes:
            continue
        spans = phrase_spans(index, terms, chapter_id)
        if not spans:
            continue
        by_year.setdefault(info.year, []).append(
            ChapterOccurrences(
                chapter_id=chapter_id,
                volume_id=info.volume_id,
                ordinal=info.ordinal,
                title=info.title,
                year=info.year,
                count=len(spans),
                snippets=tuple(
                    snippet(index.text(chapter_id), spans, radius, max_snippets=len(spans))
                ),
            )
        )

    groups = tuple(
        YearGroup(
            year=year,
            chapters=tuple(
                sorted(by_year[year], key=lambda c: (c.volume_id, c.ordinal))
            ),
        )
        for year in sorted(by_year)
    )
    return EntityOccurrences(
        entity=entity,
        total_chapters=sum(len(g.chapters) for g in groups),
        groups=groups,
    )
