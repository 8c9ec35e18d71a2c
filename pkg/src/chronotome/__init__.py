"""Chronotome: year-anchored co-mention networks and search over
chaptered historical corpora."""

from .chronology import YearHistogram, assign_years, extract_year_mentions
from .entities import (
    EntityMention,
    TaggerRegistry,
    TaggerSpec,
    filter_entities,
    normalize_surface,
    tag_capitalized,
    tag_context,
    tag_external,
    tag_gazetteer,
    vote,
)
from .graph import (
    CanonicalEntity,
    CommunityCaption,
    TemporalGraph,
    build_graph,
    collect_occurrences,
    export_graph,
    louvain,
    make_captions,
    modularity,
)
from .ingest import Chapter, VolumeManifest, load_corpus, parse_volume
from .portal import PortalConfig, PortalServer, serve
from .search import (
    SearchHit,
    SearchIndex,
    Snippet,
    Token,
    build_index,
    entity_occurrences,
    load_index,
    save_index,
    search,
    snippet,
    tokenize,
)
from .store import DocumentStore, EntityRow

__version__ = "0.1.0"

__all__ = [
    "assign_years",
    "build_graph",
    "build_index",
    "CanonicalEntity",
    "Chapter",
    "collect_occurrences",
    "CommunityCaption",
    "DocumentStore",
    "entity_occurrences",
    "EntityMention",
    "EntityRow",
    "export_graph",
    "extract_year_mentions",
    "filter_entities",
    "load_corpus",
    "load_index",
    "louvain",
    "make_captions",
    "modularity",
    "normalize_surface",
    "parse_volume",
    "PortalConfig",
    "PortalServer",
    "save_index",
    "search",
    "SearchHit",
    "SearchIndex",
    "serve",
    "Snippet",
    "snippet",
    "tag_capitalized",
    "tag_context",
    "tag_external",
    "tag_gazetteer",
    "TaggerRegistry",
    "TaggerSpec",
    "TemporalGraph",
    "Token",
    "tokenize",
    "VolumeManifest",
    "vote",
    "YearHistogram",
]
