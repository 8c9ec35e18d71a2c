"""Independent brute-force oracles the tests check the engine against.

Everything here recomputes results from first principles (direct formula
evaluation, exhaustive enumeration, naive counting) without touching the
production code paths it verifies.
"""

from __future__ import annotations

import math
import re
from collections import Counter

from chronotome.store import PERSON, PLACE, EntityRow


def vote_oracle(by_tagger, registry):
    """Naive set-intersection counting for the ensemble vote."""
    keys = set()
    for mentions in by_tagger.values():
        for m in mentions:
            if m.normalized:
                keys.add((m.chapter_id, m.normalized))
    accepted = []
    for chapter_id, normalized in sorted(keys):
        backers = []
        for tagger_id, mentions in by_tagger.items():
            labels = [
                m.label
                for m in mentions
                if m.chapter_id == chapter_id and m.normalized == normalized
            ]
            if labels:
                n_person = sum(1 for label in labels if label == PERSON)
                backers.append(
                    (tagger_id, PERSON if 2 * n_person >= len(labels) else PLACE)
                )
        if len(backers) < registry.quorum:
            continue
        n_person = sum(1 for _, label in backers if label == PERSON)
        if 2 * n_person > len(backers):
            label = PERSON
        elif 2 * n_person < len(backers):
            label = PLACE
        else:
            ranked = sorted(backers, key=lambda b: registry.priority_of(b[0]))
            label = ranked[0][1]
        accepted.append(EntityRow(chapter_id, normalized, label))
    return accepted


def build_graph_oracle(entities, window):
    """Direct quadruple loop over entity and year pairs."""
    edges = {}
    for i, u in enumerate(entities):
        for v in entities[i + 1 :]:
            weight = sum(
                1 for a in u.occurrences for b in v.occurrences if abs(a - b) <= window
            )
            if weight:
                key = tuple(sorted((u.normalized, v.normalized)))
                edges[key] = weight
    return edges


def modularity_oracle(edges, communities):
    """Q = sum_c [W_c/W - (S_c/2W)^2], evaluated straight off the edge list."""
    total = sum(edges.values())
    q = 0.0
    for community in communities:
        intra = sum(w for (u, v), w in edges.items() if u in community and v in community)
        strength = sum(w for (u, v), w in edges.items() if u in community)
        strength += sum(w for (u, v), w in edges.items() if v in community)
        q += intra / total - (strength / (2 * total)) ** 2
    return q


def set_partitions(items):
    """All set partitions of ``items`` (Bell enumeration)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [partial[i] | {first}] + partial[i + 1 :]
        yield partial + [{first}]


def bm25_oracle(chapters, query, k1=1.2, b=0.75):
    """BM25 per chapter by direct formula evaluation.

    Tokenizes on its own and never consults the inverted index.
    """
    doc_terms = {
        c.chapter_id: [w.casefold() for w in re.findall(r"[^\W_]+", c.text)]
        for c in chapters
    }
    n_docs = len(chapters)
    avgdl = sum(len(t) for t in doc_terms.values()) / n_docs
    term_freqs = {cid: Counter(terms) for cid, terms in doc_terms.items()}
    query_terms = [w.casefold() for w in re.findall(r"[^\W_]+", query)]

    scores = {}
    for cid, counts in term_freqs.items():
        if not any(counts[t] for t in query_terms):
            continue
        dl = len(doc_terms[cid])
        score = 0.0
        for term in query_terms:
            tf = counts[term]
            if tf == 0:
                continue
            df = sum(1 for other in term_freqs.values() if term in other)
            idf = math.log(1 + (n_docs - df + 0.5) / (df + 0.5))
            score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))
        scores[cid] = score
    return scores
