"""Exception types raised across the pipeline.

Every failure mode a caller is expected to handle gets its own class;
anything else propagates as a plain Python exception.
"""

from __future__ import annotations


class ChronotomeError(Exception):
    """Base class for all package errors."""


class MalformedInput(ChronotomeError):
    """Input document is not valid UTF-8."""


class NoChapters(ChronotomeError):
    """Document contains no chapter headings and no body text."""


class DuplicateChapter(ChronotomeError):
    """A chapter id is already present in the store."""


class StorageFailure(ChronotomeError):
    """The document store could not be read or written."""


class MissingVolumeFile(ChronotomeError):
    """A manifest entry points at a file that does not exist."""


class MalformedManifest(ChronotomeError):
    """A corpus manifest record is unreadable or violates its invariants."""


class NoAnchorYear(ChronotomeError):
    """A volume has no year mention in any of its chapters."""


class SpanOutOfBounds(ChronotomeError):
    """An annotation span falls outside the chapter text."""


class UnknownLabel(ChronotomeError):
    """An annotation label is not PERSON or PLACE."""


class UnknownChapter(ChronotomeError):
    """An annotation references a chapter id that is not in the corpus."""


class QuorumUnsatisfiable(ChronotomeError):
    """Fewer tagger outputs were supplied than the vote quorum requires."""


class UnassignedYear(ChronotomeError):
    """A chapter needed by a year-dependent step has no assigned year."""


class EmptyGraph(ChronotomeError):
    """The graph has no edges, so the requested quantity is undefined."""


class EmptyQuery(ChronotomeError):
    """The query tokenizes to nothing."""


class UnknownBook(ChronotomeError):
    """A book or volume filter references an id that is not configured."""


class MissingArtifact(ChronotomeError):
    """A build-time artifact (index, graph document) is absent."""
