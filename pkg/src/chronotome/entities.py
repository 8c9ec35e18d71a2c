"""Ensemble entity tagging with quorum voting and noise filtering.

Three deterministic taggers are built in:

* gazetteer — dictionary lookup against person/place name lists,
  longest match first;
* capitalized — capitalized-run heuristic with a preposition rule for
  places;
* context — cue-driven: honorific before a name, "city of" before a
  place.

External tagger output joins the ensemble through a pipe-delimited
annotation format. Agreement is counted per (chapter, normalized form):
a candidate needs at least ``quorum`` distinct taggers behind it. The
individual taggers are intentionally noisy; the quorum is what makes the
ensemble usable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    MalformedInput,
    QuorumUnsatisfiable,
    SpanOutOfBounds,
    UnknownChapter,
    UnknownLabel,
)
from .ingest import Chapter
from .search import Word, iter_words
from .store import LABELS, PERSON, PLACE, EntityRow

HONORIFICS = ("mr", "mrs", "dr", "sjt", "shri", "mahatma")

PLACE_PREPOSITIONS = frozenset({"in", "at", "to", "from"})

PLACE_CUES = ("city of", "town of", "port of")

# Function words the capitalized-run tagger never treats as names.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be but by for from had has have he her his i if in
    is it its my no nor not of on or our she so some that the their them
    then there they this to up was we were what when where which while
    who whom whose will with you your
    """.split()
)

_OUTER_PUNCT_RE = re.compile(r"^[\W_]+|[\W_]+$")
_SENTENCE_BREAK_RE = re.compile(r"[.!?]|\n[ \t]*\n")


@dataclass(frozen=True)
class EntityMention:
    """A single tagger's claim about a span of chapter text."""

    surface: str
    normalized: str
    label: str
    chapter_id: str
    span: tuple[int, int]  # byte offsets
    tagger_id: str


def _strip_outer(token: str) -> str:
    return _OUTER_PUNCT_RE.sub("", token)


def normalize_surface(surface: str) -> str:
    """Canonical form used for agreement: case-folded, outer punctuation
    stripped, whitespace collapsed, honorific prefixes removed.

    An empty result means "discard".
    """
    s = re.sub(r"\s+", " ", surface.casefold())
    s = _strip_outer(s)
    tokens = s.split(" ") if s else []
    while tokens and _strip_outer(tokens[0]) in HONORIFICS:
        tokens.pop(0)
    return _strip_outer(" ".join(tokens))


def _mention(
    chapter: Chapter, words: Sequence[Word], start: int, end: int, label: str, tagger_id: str
) -> EntityMention | None:
    """Mention covering words[start:end]; None when it normalizes away."""
    surface = chapter.text[words[start].char_span[0] : words[end - 1].char_span[1]]
    normalized = normalize_surface(surface)
    if not normalized:
        return None
    return EntityMention(
        surface=surface,
        normalized=normalized,
        label=label,
        chapter_id=chapter.chapter_id,
        span=(words[start].span[0], words[end - 1].span[1]),
        tagger_id=tagger_id,
    )


# -- gazetteer tagger -------------------------------------------------------


def tag_gazetteer(
    chapter: Chapter,
    persons: Iterable[str],
    places: Iterable[str],
    tagger_id: str = "gazetteer",
) -> list[EntityMention]:
    """Dictionary tagger: maximal token windows whose normalized form is a
    gazetteer entry. Longest match wins and matches never overlap.
    """
    person_set = {normalize_surface(p) for p in persons} - {""}
    place_set = {normalize_surface(p) for p in places} - {""}
    if not person_set or not place_set:
        raise ValueError("gazetteer lists must be non-empty")
    # +2 lets a window absorb stacked honorific tokens that normalize away
    # ("Mr. Gokhale" is a two-token match for the entry "gokhale").
    max_window = max(len(entry.split(" ")) for entry in person_set | place_set) + 2

    words = iter_words(chapter.text)
    mentions = []
    i = 0
    while i < len(words):
        matched = False
        for width in range(min(max_window, len(words) - i), 0, -1):
            surface = chapter.text[words[i].char_span[0] : words[i + width - 1].char_span[1]]
            normalized = normalize_surface(surface)
            if normalized in person_set:
                label = PERSON
            elif normalized in place_set:
                label = PLACE
            else:
                continue
            mention = _mention(chapter, words, i, i + width, label, tagger_id)
            if mention is not None:
                mentions.append(mention)
            i += width
            matched = True
            break
        if not matched:
            i += 1
    return mentions


# -- capitalized-run tagger ---------------------------------------------------


def _sentence_initial_flags(text: str, words: Sequence[Word]) -> list[bool]:
    flags = []
    prev_end = 0
    for word in words:
        separator = text[prev_end : word.char_span[0]]
        flags.append(prev_end == 0 or bool(_SENTENCE_BREAK_RE.search(separator)))
        prev_end = word.char_span[1]
    return flags


def tag_capitalized(
    chapter: Chapter,
    stopwords: Iterable[str] = DEFAULT_STOPWORDS,
    tagger_id: str = "capitalized",
) -> list[EntityMention]:
    """Heuristic tagger over runs of capitalized words.

    A word occurrence is a candidate when it is capitalized, not a
    stopword, and not merely sentence-initial: a word seen capitalized
    only at sentence starts in the chapter is discarded. Adjacent
    candidates separated by whitespace alone form one run. A run
    directly preceded by in/at/to/from is a PLACE, otherwise a PERSON.
    """
    stop = {w.casefold() for w in stopwords}
    words = iter_words(chapter.text)
    initial = _sentence_initial_flags(chapter.text, words)
    capitalized = [w.surface[0].isupper() for w in words]
    eligible = [
        capitalized[i] and words[i].surface.casefold() not in stop for i in range(len(words))
    ]
    seen_internal = {
        words[i].surface.casefold() for i in range(len(words)) if eligible[i] and not initial[i]
    }
    kept = [
        eligible[i] and (not initial[i] or words[i].surface.casefold() in seen_internal)
        for i in range(len(words))
    ]

    mentions = []
    i = 0
    while i < len(words):
        if not kept[i]:
            i += 1
            continue
        j = i + 1
        while (
            j < len(words)
            and kept[j]
            and chapter.text[words[j - 1].char_span[1] : words[j].char_span[0]].isspace()
            and not initial[j]
        ):
            j += 1
        label = PERSON
        if i > 0 and words[i - 1].surface.casefold() in PLACE_PREPOSITIONS:
            label = PLACE
        mention = _mention(chapter, words, i, j, label, tagger_id)
        if mention is not None:
            mentions.append(mention)
        i = j
    return mentions


# -- context-cue tagger -------------------------------------------------------


def tag_context(
    chapter: Chapter,
    honorifics: Iterable[str] = HONORIFICS,
    place_cues: Iterable[str] = PLACE_CUES,
    tagger_id: str = "context",
) -> list[EntityMention]:
    """Cue tagger: capitalized run after an honorific is a PERSON, after a
    place cue phrase ("city of", ...) a PLACE.
    """
    honorific_set = {h.casefold() for h in honorifics}
    cue_seqs = [tuple(c.casefold().split()) for c in place_cues]
    words = iter_words(chapter.text)
    lowered = [w.surface.casefold() for w in words]

    def capitalized_run(start: int) -> int:
        j = start
        while j < len(words) and words[j].surface[0].isupper():
            if j > start and not chapter.text[
                words[j - 1].char_span[1] : words[j].char_span[0]
            ].isspace():
                break
            j += 1
        return j

    mentions = []
    for i, word in enumerate(words):
        if _strip_outer(lowered[i]) in honorific_set:
            end = capitalized_run(i + 1)
            if end > i + 1:
                mention = _mention(chapter, words, i + 1, end, PERSON, tagger_id)
                if mention is not None:
                    mentions.append(mention)
            continue
        for cue in cue_seqs:
            if tuple(lowered[i : i + len(cue)]) == cue:
                start = i + len(cue)
                end = capitalized_run(start)
                if end > start:
                    mention = _mention(chapter, words, start, end, PLACE, tagger_id)
                    if mention is not None:
                        mentions.append(mention)
                break
    return mentions


# -- external annotations -----------------------------------------------------


def parse_external_annotations(
    source: str | Path,
    chapter_lengths: Mapping[str, int],
) -> dict[str, list[tuple[int, int, str, str]]]:
    """Parse pipe-delimited rows chapter_id|start|end|label|surface and
    validate them against the known chapters.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    rows: dict[str, list[tuple[int, int, str, str]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("|")
        if len(parts) != 5:
            raise MalformedInput(f"annotation line {lineno}: expected 5 columns")
        chapter_id, start_s, end_s, label, surface = parts
        try:
            start, end = int(start_s), int(end_s)
        except ValueError as exc:
            raise MalformedInput(f"annotation line {lineno}: bad span") from exc
        if label not in LABELS:
            raise UnknownLabel(f"annotation line {lineno}: {label!r}")
        if chapter_id not in chapter_lengths:
            raise UnknownChapter(f"annotation line {lineno}: {chapter_id!r}")
        if start < 0 or end > chapter_lengths[chapter_id] or start >= end:
            raise SpanOutOfBounds(f"annotation line {lineno}: ({start}, {end})")
        rows.setdefault(chapter_id, []).append((start, end, label, surface))
    return rows


def tag_external(
    chapter: Chapter, source: str | Path, tagger_id: str = "external"
) -> list[EntityMention]:
    """Adapter for third-party tagger output covering one chapter."""
    rows = parse_external_annotations(
        source, {chapter.chapter_id: len(chapter.text.encode("utf-8"))}
    )
    return [
        EntityMention(
            surface=surface,
            normalized=normalize_surface(surface),
            label=label,
            chapter_id=chapter.chapter_id,
            span=(start, end),
            tagger_id=tagger_id,
        )
        for start, end, label, surface in rows.get(chapter.chapter_id, [])
    ]


class ExternalTagger:
    """Ensemble member replaying a pre-parsed annotation file."""

    def __init__(
        self,
        source: str | Path,
        chapter_lengths: Mapping[str, int],
        tagger_id: str = "external",
    ):
        self.tagger_id = tagger_id
        self._rows = parse_external_annotations(source, chapter_lengths)

    def tag(self, chapter: Chapter) -> list[EntityMention]:
        return [
            EntityMention(
                surface=surface,
                normalized=normalize_surface(surface),
                label=label,
                chapter_id=chapter.chapter_id,
                span=(start, end),
                tagger_id=self.tagger_id,
            )
            for start, end, label, surface in self._rows.get(chapter.chapter_id, [])
        ]


class GazetteerTagger:
    def __init__(self, persons: Iterable[str], places: Iterable[str], tagger_id: str = "gazetteer"):
        self.tagger_id = tagger_id
        self.persons = list(persons)
        self.places = list(places)

    def tag(self, chapter: Chapter) -> list[EntityMention]:
        return tag_gazetteer(chapter, self.persons, self.places, self.tagger_id)


class CapitalizedTagger:
    def __init__(self, stopwords: Iterable[str] = DEFAULT_STOPWORDS, tagger_id: str = "capitalized"):
        self.tagger_id = tagger_id
        self.stopwords = frozenset(stopwords)

    def tag(self, chapter: Chapter) -> list[EntityMention]:
        return tag_capitalized(chapter, self.stopwords, self.tagger_id)


class ContextTagger:
    def __init__(
        self,
        honorifics: Iterable[str] = HONORIFICS,
        place_cues: Iterable[str] = PLACE_CUES,
        tagger_id: str = "context",
    ):
        self.tagger_id = tagger_id
        self.honorifics = tuple(honorifics)
        self.place_cues = tuple(place_cues)

    def tag(self, chapter: Chapter) -> list[EntityMention]:
        return tag_context(chapter, self.honorifics, self.place_cues, self.tagger_id)


# -- voting -------------------------------------------------------------------


@dataclass(frozen=True)
class TaggerSpec:
    tagger_id: str
    priority: int  # 1 is highest


@dataclass(frozen=True)
class TaggerRegistry:
    taggers: tuple[TaggerSpec, ...]
    quorum: int = 2

    def __post_init__(self) -> None:
        if self.quorum < 1:
            raise ValueError("quorum must be >= 1")
        if len(self.taggers) < self.quorum:
            raise ValueError("fewer taggers registered than the quorum requires")
        priorities = [t.priority for t in self.taggers]
        if len(set(priorities)) != len(priorities):
            raise ValueError("tagger priorities must be unique")
        ids = [t.tagger_id for t in self.taggers]
        if len(set(ids)) != len(ids):
            raise ValueError("tagger ids must be unique")

    def priority_of(self, tagger_id: str) -> int:
        for spec in self.taggers:
            if spec.tagger_id == tagger_id:
                return spec.priority
        raise KeyError(tagger_id)


def default_registry(extra_ids: Sequence[str] = (), quorum: int = 2) -> TaggerRegistry:
    specs = [TaggerSpec("gazetteer", 1), TaggerSpec("capitalized", 2), TaggerSpec("context", 3)]
    specs += [TaggerSpec(tid, 4 + i) for i, tid in enumerate(extra_ids)]
    return TaggerRegistry(tuple(specs), quorum)


def _tagger_label_vote(labels: list[str]) -> str:
    persons = labels.count(PERSON)
    places = labels.count(PLACE)
    if persons == places:
        return PERSON
    return PERSON if persons > places else PLACE


def vote(
    by_tagger: Mapping[str, list[EntityMention]], registry: TaggerRegistry
) -> list[EntityRow]:
    """Quorum vote over per-tagger mention lists.

    A (chapter, normalized) candidate is accepted when at least
    ``registry.quorum`` distinct taggers produced it anywhere in that
    chapter. The accepted label is the majority label among supporting
    taggers, ties resolved by the highest-priority supporter. The result
    is sorted and independent of the order the lists are supplied in.
    """
    known = {spec.tagger_id for spec in registry.taggers}
    unknown = set(by_tagger) - known
    if unknown:
        raise ValueError(f"taggers not in registry: {sorted(unknown)}")
    if len(by_tagger) < registry.quorum:
        raise QuorumUnsatisfiable(
            f"{len(by_tagger)} tagger lists supplied, quorum is {registry.quorum}"
        )

    support: dict[tuple[str, str], dict[str, list[str]]] = {}
    for tagger_id, mentions in by_tagger.items():
        for mention in mentions:
            if not mention.normalized:
                continue
            key = (mention.chapter_id, mention.normalized)
            support.setdefault(key, {}).setdefault(tagger_id, []).append(mention.label)

    accepted = []
    for (chapter_id, normalized), supporters in sorted(support.items()):
        if len(supporters) < registry.quorum:
            continue
        votes = {tid: _tagger_label_vote(labels) for tid, labels in supporters.items()}
        persons = sum(1 for label in votes.values() if label == PERSON)
        places = len(votes) - persons
        if persons != places:
            label = PERSON if persons > places else PLACE
        else:
            top = min(votes, key=registry.priority_of)
            label = votes[top]
        accepted.append(EntityRow(chapter_id, normalized, label))
    return accepted


def filter_entities(
    accepted: list[EntityRow],
    places_gazetteer: Iterable[str],
    common_words: Iterable[str],
) -> list[EntityRow]:
    """Drop common-word noise and settle place labels.

    An entity is dropped only when its normalized form is a common word,
    is not in the places gazetteer, and (for PERSON labels) is a single
    token. Surviving PLACE entities outside the gazetteer are relabeled
    PERSON only when the same form was also voted PERSON somewhere;
    otherwise the PLACE label stands.
    """
    place_set = {normalize_surface(p) for p in places_gazetteer} - {""}
    common_set = {w.casefold().strip() for w in common_words} - {""}

    survivors = [
        row
        for row in accepted
        if not (
            row.normalized in common_set
            and row.normalized not in place_set
            and (row.label != PERSON or " " not in row.normalized)
        )
    ]
    person_forms = {row.normalized for row in survivors if row.label == PERSON}
    return [
        EntityRow(row.chapter_id, row.normalized, PERSON)
        if row.label == PLACE
        and row.normalized not in place_set
        and row.normalized in person_forms
        else row
        for row in survivors
    ]


def run_ensemble(
    chapters: Iterable[Chapter],
    taggers: Sequence,
    registry: TaggerRegistry,
) -> list[EntityRow]:
    """Tag every chapter with every tagger, then vote."""
    by_tagger: dict[str, list[EntityMention]] = {t.tagger_id: [] for t in taggers}
    for chapter in chapters:
        for tagger in taggers:
            by_tagger[tagger.tagger_id].extend(tagger.tag(chapter))
    return vote(by_tagger, registry)
