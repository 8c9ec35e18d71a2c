from __future__ import annotations

import random

import pytest

from chronotome.entities import (
    EntityMention,
    TaggerRegistry,
    TaggerSpec,
    default_registry,
    filter_entities,
    normalize_surface,
    parse_external_annotations,
    tag_capitalized,
    tag_context,
    tag_external,
    tag_gazetteer,
    vote,
)
from chronotome.errors import (
    QuorumUnsatisfiable,
    SpanOutOfBounds,
    UnknownChapter,
    UnknownLabel,
)
from chronotome.ingest import Chapter
from chronotome.store import PERSON, PLACE, EntityRow
from oracles import vote_oracle


def _chapter(text: str, chapter_id="c1") -> Chapter:
    return Chapter(chapter_id, "v1", 1, "", text)


# -- normalize_surface ----------------------------------------------------------


def test_normalize_honorific_and_punctuation():
    assert normalize_surface("  Mr. Gokhale,") == "gokhale"


def test_normalize_case_and_whitespace():
    assert normalize_surface("GOPAL   KRISHNA GOKHALE") == "gopal krishna gokhale"


def test_normalize_punctuation_only_is_empty():
    assert normalize_surface("—") == ""


def test_normalize_stacked_honorifics():
    assert normalize_surface("Shri Mahatma Gandhi") == "gandhi"


# -- gazetteer tagger -------------------------------------------------------------


def test_gazetteer_person_and_place():
    mentions = tag_gazetteer(_chapter("met Gokhale in Bombay"), ["gokhale"], ["bombay"])
    assert [(m.normalized, m.label) for m in mentions] == [
        ("gokhale", PERSON),
        ("bombay", PLACE),
    ]
    # spans cover the original surfaces
    text = "met Gokhale in Bombay".encode("utf-8")
    for mention in mentions:
        start, end = mention.span
        assert text[start:end].decode("utf-8") == mention.surface


def test_gazetteer_longest_match_wins():
    mentions = tag_gazetteer(
        _chapter("Gopal Krishna Gokhale spoke"),
        ["gokhale", "gopal krishna gokhale"],
        ["bombay"],
    )
    assert [(m.normalized, m.label) for m in mentions] == [
        ("gopal krishna gokhale", PERSON)
    ]


def test_gazetteer_no_hits():
    assert tag_gazetteer(_chapter("nothing to see"), ["gokhale"], ["bombay"]) == []


def test_gazetteer_matches_through_honorific():
    mentions = tag_gazetteer(_chapter("Mr. Gokhale arrived"), ["gokhale"], ["bombay"])
    assert len(mentions) == 1
    assert mentions[0].surface == "Mr. Gokhale"
    assert mentions[0].normalized == "gokhale"


# -- capitalized tagger -----------------------------------------------------------


def test_capitalized_preposition_rule():
    mentions = tag_capitalized(_chapter("I went to Durban with Kallenbach."))
    assert [(m.normalized, m.label) for m in mentions] == [
        ("durban", PLACE),
        ("kallenbach", PERSON),
    ]


def test_capitalized_stopword_suppression():
    mentions = tag_capitalized(_chapter("we saw The End"), stopwords={"the"})
    assert [(m.normalized, m.label) for m in mentions] == [("end", PERSON)]


def test_capitalized_sentence_initial_only_is_dropped():
    mentions = tag_capitalized(_chapter("When I arrived all was quiet."), stopwords={"i"})
    assert all(m.normalized != "when" for m in mentions)


def test_capitalized_sentence_initial_rescued_by_internal_use():
    text = "Gandhi spoke first. Later that week Gandhi wrote again."
    mentions = tag_capitalized(_chapter(text), stopwords={"later"})
    assert [m.normalized for m in mentions] == ["gandhi", "gandhi"]


def test_capitalized_run_does_not_cross_punctuation():
    mentions = tag_capitalized(_chapter("we met Durban, Kallenbach and others"))
    assert [m.normalized for m in mentions] == ["durban", "kallenbach"]


# -- context tagger ---------------------------------------------------------------


def test_context_honorific():
    mentions = tag_context(_chapter("Sjt. Gokhale spoke"))
    assert [(m.normalized, m.label) for m in mentions] == [("gokhale", PERSON)]


def test_context_place_cue():
    mentions = tag_context(_chapter("we reached the city of Porbandar at dusk"))
    assert [(m.normalized, m.label) for m in mentions] == [("porbandar", PLACE)]


def test_context_no_cues():
    assert tag_context(_chapter("a plain sentence")) == []


# -- external annotations -----------------------------------------------------------


def test_external_valid_rows():
    chapter = _chapter("Gokhale went to Bombay")
    source = "c1|0|7|PERSON|Gokhale\nc1|16|22|PLACE|Bombay\n"
    mentions = tag_external(chapter, source)
    assert [(m.normalized, m.label, m.span) for m in mentions] == [
        ("gokhale", PERSON, (0, 7)),
        ("bombay", PLACE, (16, 22)),
    ]


def test_external_span_out_of_bounds():
    with pytest.raises(SpanOutOfBounds):
        tag_external(_chapter("short"), "c1|0|99|PERSON|x\n")


def test_external_unknown_label():
    with pytest.raises(UnknownLabel):
        tag_external(_chapter("text here"), "c1|0|4|ORG|text\n")


def test_external_unknown_chapter():
    with pytest.raises(UnknownChapter):
        parse_external_annotations("nope|0|2|PERSON|ab\n", {"c1": 10})


# -- vote ---------------------------------------------------------------------------


def _mention(chapter_id: str, normalized: str, label: str, tagger_id: str) -> EntityMention:
    return EntityMention(
        surface=normalized,
        normalized=normalized,
        label=label,
        chapter_id=chapter_id,
        span=(0, max(1, len(normalized))),
        tagger_id=tagger_id,
    )


def _registry(quorum=2):
    return TaggerRegistry(
        (TaggerSpec("A", 1), TaggerSpec("B", 2), TaggerSpec("C", 3)), quorum
    )


def test_vote_quorum_met():
    by_tagger = {
        "A": [_mention("c1", "gokhale", PERSON, "A")],
        "B": [_mention("c1", "gokhale", PERSON, "B")],
        "C": [],
    }
    assert vote(by_tagger, _registry()) == [EntityRow("c1", "gokhale", PERSON)]


def test_vote_quorum_unmet():
    by_tagger = {"A": [], "B": [_mention("c1", "end", PERSON, "B")], "C": []}
    assert vote(by_tagger, _registry()) == []


def test_vote_label_tie_resolved_by_priority():
    by_tagger = {
        "A": [_mention("c1", "durban", PERSON, "A")],
        "B": [_mention("c1", "durban", PLACE, "B")],
    }
    assert vote(by_tagger, _registry()) == [EntityRow("c1", "durban", PERSON)]
    flipped = {
        "A": [_mention("c1", "durban", PLACE, "A")],
        "B": [_mention("c1", "durban", PERSON, "B")],
    }
    assert vote(flipped, _registry()) == [EntityRow("c1", "durban", PLACE)]


def test_vote_quorum_unsatisfiable():
    with pytest.raises(QuorumUnsatisfiable):
        vote({"A": []}, _registry(quorum=2))


def test_vote_drops_empty_normalized():
    by_tagger = {
        "A": [_mention("c1", "", PERSON, "A")],
        "B": [_mention("c1", "", PERSON, "B")],
    }
    assert vote(by_tagger, _registry()) == []


def test_vote_independent_of_supply_order():
    by_tagger = {
        "A": [_mention("c1", "x", PERSON, "A")],
        "B": [_mention("c1", "x", PLACE, "B")],
        "C": [_mention("c1", "x", PLACE, "C")],
    }
    reordered = {k: by_tagger[k] for k in ("C", "A", "B")}
    assert vote(by_tagger, _registry()) == vote(reordered, _registry())
    # majority PLACE regardless of priority
    assert vote(by_tagger, _registry())[0].label == PLACE


def test_registry_invariants():
    with pytest.raises(ValueError):
        TaggerRegistry((TaggerSpec("A", 1),), quorum=2)
    with pytest.raises(ValueError):
        TaggerRegistry((TaggerSpec("A", 1), TaggerSpec("B", 1)), quorum=1)
    with pytest.raises(ValueError):
        TaggerRegistry((TaggerSpec("A", 1), TaggerSpec("B", 2)), quorum=0)


# -- brute-force voting oracle --------------------------------------------------------


def _random_instance(rng: random.Random, n_chapters=8):
    names = ["gokhale", "bombay", "polak", "end", "love", "smuts", "durban", "x y"]
    by_tagger = {tid: [] for tid in ("A", "B", "C")}
    for c in range(n_chapters):
        chapter_id = f"c{c}"
        for tid in by_tagger:
            for name in rng.sample(names, k=rng.randint(0, len(names))):
                label = rng.choice((PERSON, PLACE))
                by_tagger[tid].append(_mention(chapter_id, name, label, tid))
                if rng.random() < 0.2:  # duplicate span with a second label
                    by_tagger[tid].append(
                        _mention(chapter_id, name, rng.choice((PERSON, PLACE)), tid)
                    )
    return by_tagger


def test_vote_matches_oracle_on_random_instances():
    rng = random.Random(13)
    for _ in range(60):
        by_tagger = _random_instance(rng, n_chapters=4)
        for quorum in (1, 2, 3):
            registry = _registry(quorum)
            assert vote(by_tagger, registry) == vote_oracle(by_tagger, registry)


def test_vote_quorum_monotonicity():
    rng = random.Random(17)
    for _ in range(40):
        by_tagger = _random_instance(rng, n_chapters=4)
        previous = None
        for quorum in (1, 2, 3):
            keys = {(r.chapter_id, r.normalized) for r in vote(by_tagger, _registry(quorum))}
            if previous is not None:
                assert keys <= previous
            previous = keys


def test_vote_superset_bound_and_quorum_one():
    rng = random.Random(19)
    by_tagger = _random_instance(rng)
    union = {
        (m.chapter_id, m.normalized)
        for mentions in by_tagger.values()
        for m in mentions
        if m.normalized
    }
    for quorum in (1, 2, 3):
        keys = {(r.chapter_id, r.normalized) for r in vote(by_tagger, _registry(quorum))}
        assert keys <= union
        if quorum == 1:
            assert keys == union


# -- filter -----------------------------------------------------------------------


def test_filter_drops_common_word_person():
    rows = [EntityRow("c1", "love", PERSON)]
    assert filter_entities(rows, ["bombay"], ["love"]) == []


def test_filter_gazetteer_overrides_common_word():
    rows = [EntityRow("c1", "bombay", PLACE)]
    assert filter_entities(rows, ["bombay"], ["bombay", "love"]) == rows


def test_filter_keeps_proper_names():
    rows = [EntityRow("c1", "gokhale", PERSON)]
    assert filter_entities(rows, ["bombay"], ["love"]) == rows


def test_filter_multi_token_person_survives():
    rows = [EntityRow("c1", "gopal krishna", PERSON)]
    assert filter_entities(rows, ["bombay"], ["gopal krishna"]) == rows


def test_filter_relabels_place_with_person_evidence():
    rows = [
        EntityRow("c1", "gokhale", PLACE),   # not in the places gazetteer
        EntityRow("c2", "gokhale", PERSON),  # voted PERSON elsewhere
        EntityRow("c3", "durban", PLACE),    # stays PLACE: no PERSON evidence
    ]
    filtered = filter_entities(rows, ["bombay"], [])
    assert filtered == [
        EntityRow("c1", "gokhale", PERSON),
        EntityRow("c2", "gokhale", PERSON),
        EntityRow("c3", "durban", PLACE),
    ]


def test_filter_never_adds_and_is_idempotent():
    rng = random.Random(23)
    names = ["love", "bombay", "gokhale", "end", "x y", "durban"]
    for _ in range(40):
        rows = [
            EntityRow(f"c{rng.randint(0, 3)}", rng.choice(names), rng.choice((PERSON, PLACE)))
            for _ in range(rng.randint(0, 12))
        ]
        once = filter_entities(rows, ["bombay", "durban"], ["love", "end", "bombay"])
        assert {(r.chapter_id, r.normalized) for r in once} <= {
            (r.chapter_id, r.normalized) for r in rows
        }
        assert filter_entities(once, ["bombay", "durban"], ["love", "end", "bombay"]) == once


def test_default_registry_with_externals():
    registry = default_registry(["external-0"], quorum=2)
    assert [t.tagger_id for t in registry.taggers] == [
        "gazetteer", "capitalized", "context", "external-0",
    ]
    assert registry.priority_of("external-0") == 4
