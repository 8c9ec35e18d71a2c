"""Read-only HTTP facade over the store, graph documents, and index.

All artifacts are built beforehand by the CLI (ingest, annotate-years,
annotate-entities, graph, index); the service only reads them, so any
number of requests may be handled concurrently and identical requests
produce byte-identical payloads.

Endpoints (all JSON):

    GET /api/books
    GET /api/graph?book=ID
    GET /api/entity?book=ID&name=NORMALIZED&page=N
    GET /api/search?q=TERMS[&book=ID]&page=N
    GET /api/chapter/CHAPTER_ID

Error bodies are ``{"error": {"code": ..., "message": ...}}`` with codes
from {unknown_book, empty_query, missing_artifact, not_found}.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .errors import EmptyQuery, MissingArtifact, StorageFailure
from .search import EntityOccurrences, SearchHit, Snippet, entity_occurrences, load_index, search
from .store import DocumentStore

DEFAULT_PAGE_SIZE = 20

ERROR_CODES = ("unknown_book", "empty_query", "missing_artifact", "not_found")

_STATUS = {
    "unknown_book": 404,
    "empty_query": 400,
    "missing_artifact": 500,
    "not_found": 404,
}


@dataclass(frozen=True)
class BookConfig:
    book_id: str
    title: str
    volumes: tuple[str, ...]
    graph_path: str | None = None


@dataclass(frozen=True)
class PortalConfig:
    store: Path
    books: tuple[BookConfig, ...]
    listen: tuple[str, int] = ("127.0.0.1", 8080)
    page_size: int = DEFAULT_PAGE_SIZE
    window: int = 1
    seed: int = 0


def load_config(path: Path) -> PortalConfig:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    books = []
    seen = set()
    for rec in raw.get("books", []):
        book = BookConfig(
            book_id=rec["id"],
            title=rec.get("title", rec["id"]),
            volumes=tuple(rec["volumes"]),
            graph_path=rec.get("graph"),
        )
        if book.book_id in seen:
            raise ValueError(f"duplicate book id {book.book_id!r}")
        seen.add(book.book_id)
        books.append(book)
    host, _, port = raw.get("listen", "127.0.0.1:8080").rpartition(":")
    return PortalConfig(
        store=Path(raw["store"]),
        books=tuple(books),
        listen=(host or "127.0.0.1", int(port)),
        page_size=int(raw.get("page_size", DEFAULT_PAGE_SIZE)),
        window=int(raw.get("window", 1)),
        seed=int(raw.get("seed", 0)),
    )


class PortalError(Exception):
    def __init__(self, code: str, message: str):
        assert code in ERROR_CODES
        super().__init__(message)
        self.code = code
        self.message = message


def _snippet_payload(snippets: tuple[Snippet, ...]) -> list[dict]:
    return [
        {"text": s.text, "highlights": [list(h) for h in s.highlights]} for s in snippets
    ]


class PortalApp:
    """Request handling over immutable shared state; no HTTP in here."""

    def __init__(self, config: PortalConfig):
        self.config = config
        self.store = DocumentStore(config.store)
        if not (config.store / "meta").exists():
            raise MissingArtifact(str(config.store / "meta"))

        index_path = config.store / "index" / "index.json"
        if not index_path.exists():
            raise MissingArtifact(str(index_path))
        self.index = load_index(index_path, self.store.chapter_text)

        stored_volumes = set(self.store.volume_ids())
        self.graphs: dict[str, bytes] = {}
        for book in config.books:
            for volume_id in book.volumes:
                if volume_id not in stored_volumes:
                    raise MissingArtifact(
                        f"volume {volume_id!r} (book {book.book_id!r}) not in store"
                    )
            graph_path = (
                Path(book.graph_path)
                if book.graph_path
                else config.store / "graphs" / f"{book.book_id}.json"
            )
            if not graph_path.exists():
                raise MissingArtifact(str(graph_path))
            self.graphs[book.book_id] = graph_path.read_bytes()
        self.books = {book.book_id: book for book in config.books}

    # -- payload builders --------------------------------------------------

    def books_payload(self) -> dict:
        return {
            "books": [
                {"id": b.book_id, "title": b.title, "volumes": list(b.volumes)}
                for b in self.config.books
            ]
        }

    def graph_document(self, book_id: str) -> bytes:
        if book_id not in self.graphs:
            raise PortalError("unknown_book", f"no such book: {book_id!r}")
        return self.graphs[book_id]

    def _book_volumes(self, book_id: str) -> set[str]:
        if book_id not in self.books:
            raise PortalError("unknown_book", f"no such book: {book_id!r}")
        return set(self.books[book_id].volumes)

    def handle_entity_query(self, book_id: str, entity: str, page: int = 1) -> dict:
        """Phrase occurrences of an entity, grouped by year, paginated by
        chapters across groups."""
        volumes = self._book_volumes(book_id)
        try:
            result: EntityOccurrences = entity_occurrences(self.index, entity, volumes)
        except EmptyQuery:
            raise PortalError("empty_query", "entity name is empty") from None

        page_size = self.config.page_size
        flat = [(group.year, chapter) for group in result.groups for chapter in group.chapters]
        window = flat[(page - 1) * page_size : page * page_size]
        groups: list[dict] = []
        for year, chapter in window:
            if not groups or groups[-1]["year"] != year:
                groups.append({"year": year, "chapters": []})
            groups[-1]["chapters"].append(
                {
                    "chapter_id": chapter.chapter_id,
                    "volume_id": chapter.volume_id,
                    "ordinal": chapter.ordinal,
                    "title": chapter.title,
                    "year": chapter.year,
                    "count": chapter.count,
                    "snippets": _snippet_payload(chapter.snippets),
                }
            )
        return {
            "entity": result.entity,
            "book": book_id,
            "page": page,
            "page_size": page_size,
            "total_chapters": result.total_chapters,
            "groups": groups,
        }

    def handle_search(self, query: str, book_id: str | None = None, page: int = 1) -> dict:
        """Ranked BM25 hits with snippets, optionally restricted to a book."""
        volumes = self._book_volumes(book_id) if book_id is not None else None
        try:
            hits, total = search(self.index, query)
        except EmptyQuery:
            raise PortalError("empty_query", "query is empty") from None
        if volumes is not None:
            hits = [h for h in hits if h.volume_id in volumes]
            total = len(hits)

        page_size = self.config.page_size
        window = hits[(page - 1) * page_size : page * page_size]
        volume_titles = {v.volume_id: v.title for v in self.store.volumes()}
        return {
            "query": query,
            "book": book_id,
            "page": page,
            "page_size": page_size,
            "total": total,
            "hits": [self._hit_payload(h, volume_titles) for h in window],
        }

    @staticmethod
    def _hit_payload(hit: SearchHit, volume_titles: dict[str, str]) -> dict:
        return {
            "chapter_id": hit.chapter_id,
            "volume_id": hit.volume_id,
            "volume_title": volume_titles.get(hit.volume_id, hit.volume_id),
            "ordinal": hit.ordinal,
            "title": hit.title,
            "year": hit.year,
            "score": hit.score,
            "snippets": _snippet_payload(hit.snippets),
        }

    def chapter_payload(self, chapter_id: str) -> dict:
        try:
            chapter = self.store.chapter(chapter_id)
        except StorageFailure:
            raise PortalError("not_found", f"no such chapter: {chapter_id!r}") from None
        return {
            "chapter_id": chapter.chapter_id,
            "volume_id": chapter.volume_id,
            "ordinal": chapter.ordinal,
            "title": chapter.title,
            "year": chapter.year,
            "text": chapter.text,
        }


def _encode(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode(
        "utf-8"
    )


class _Handler(BaseHTTPRequestHandler):
    app: PortalApp  # set on the subclass built in serve()

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib signature
        pass

    def _send(self, status: int, body: bytes) -> None:
        self.send_response_only(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        # read-only API; lets a separately hosted frontend call it
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error(self, code: str, message: str) -> None:
        self._send(_STATUS[code], _encode({"error": {"code": code, "message": message}}))

    def do_GET(self) -> None:  # noqa: N802 - stdlib handler name
        url = urlsplit(self.path)
        params = parse_qs(url.query)

        def param(name: str) -> str | None:
            values = params.get(name)
            return values[0] if values else None

        def page() -> int:
            try:
                return max(1, int(param("page") or 1))
            except ValueError:
                return 1

        try:
            if url.path == "/api/books":
                self._send(200, _encode(self.app.books_payload()))
            elif url.path == "/api/graph":
                book = param("book")
                if book is None:
                    raise PortalError("unknown_book", "book parameter required")
                self._send(200, self.app.graph_document(book))
            elif url.path == "/api/entity":
                book = param("book")
                if book is None:
                    raise PortalError("unknown_book", "book parameter required")
                name = param("name")
                if name is None:
                    raise PortalError("empty_query", "name parameter required")
                self._send(200, _encode(self.app.handle_entity_query(book, name, page())))
            elif url.path == "/api/search":
                query = param("q")
                if query is None:
                    raise PortalError("empty_query", "q parameter required")
                self._send(200, _encode(self.app.handle_search(query, param("book"), page())))
            elif url.path.startswith("/api/chapter/"):
                chapter_id = url.path[len("/api/chapter/") :]
                self._send(200, _encode(self.app.chapter_payload(chapter_id)))
            else:
                raise PortalError("not_found", f"no such endpoint: {url.path}")
        except PortalError as exc:
            self._send_error(exc.code, exc.message)


class PortalServer:
    """Running service handle: address, background start, clean stop."""

    def __init__(self, config: PortalConfig):
        self.app = PortalApp(config)
        handler = type("PortalHandler", (_Handler,), {"app": self.app})
        self._httpd = ThreadingHTTPServer(config.listen, handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._httpd.server_address[:2]

    def start(self) -> "PortalServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join()
            self._thread = None


def serve(config: PortalConfig) -> PortalServer:
    """Validate artifacts and return a ready (not yet started) server."""
    return PortalServer(config)
