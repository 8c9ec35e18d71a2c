"""Command line entry points for the build pipeline and the portal.

The pipeline runs as separate steps over a shared store directory:

    chronotome ingest --corpus corpus/ --store store/
    chronotome annotate-years --store store/
    chronotome annotate-entities --store store/ --persons p.txt \\
        --places pl.txt --common c.txt
    chronotome graph --store store/ --book vol1 --out store/graphs/b.json
    chronotome index --store store/
    chronotome serve --config portal.json
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .chronology import DEFAULT_YEAR_RANGE, assign_years, extract_year_mentions
from .entities import (
    CapitalizedTagger,
    ContextTagger,
    ExternalTagger,
    GazetteerTagger,
    default_registry,
    filter_entities,
    run_ensemble,
)
from .errors import ChronotomeError, UnknownBook
from .graph import build_graph, collect_occurrences, export_graph, louvain, make_captions
from .ingest import load_corpus, read_manifest_file
from .portal import load_config, serve
from .search import build_index, entity_occurrences, load_index, save_index, search
from .store import DocumentStore


def _read_lexicon(path: Path) -> list[str]:
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_ingest(args: argparse.Namespace) -> int:
    corpus = Path(args.corpus)
    manifests = read_manifest_file(corpus / "manifest")
    store = DocumentStore(Path(args.store))
    load_corpus(manifests, corpus, store)
    print(f"ingested {len(manifests)} volumes, {store.chapter_count()} chapters")
    return 0


def cmd_annotate_years(args: argparse.Namespace) -> int:
    store = DocumentStore(Path(args.store))
    ranges = {v.volume_id: v.year_range or DEFAULT_YEAR_RANGE for v in store.volumes()}
    chapters = store.chapters()
    histograms = {
        c.chapter_id: extract_year_mentions(c.text, ranges[c.volume_id]) for c in chapters
    }
    years = assign_years(chapters, histograms)
    store.set_years(years)
    print(f"assigned years to {len(years)} chapters")
    return 0


def cmd_annotate_entities(args: argparse.Namespace) -> int:
    store = DocumentStore(Path(args.store))
    persons = _read_lexicon(Path(args.persons))
    places = _read_lexicon(Path(args.places))
    common = _read_lexicon(Path(args.common))
    chapters = store.chapters()

    taggers = [GazetteerTagger(persons, places), CapitalizedTagger(), ContextTagger()]
    lengths = {c.chapter_id: len(c.text.encode("utf-8")) for c in chapters}
    external_ids = []
    for i, source in enumerate(args.external or []):
        tagger_id = f"external-{i}"
        taggers.append(ExternalTagger(Path(source), lengths, tagger_id))
        external_ids.append(tagger_id)

    registry = default_registry(external_ids, quorum=args.quorum)
    accepted = run_ensemble(chapters, taggers, registry)
    rows = filter_entities(accepted, places, common)
    store.write_entity_rows(rows)
    print(f"accepted {len(accepted)} entities, kept {len(rows)} after filtering")
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    store = DocumentStore(Path(args.store))
    volumes = list(args.book)
    stored = set(store.volume_ids())
    unknown = [v for v in volumes if v not in stored]
    if unknown:
        raise UnknownBook(", ".join(unknown))

    chapter_ids = {c.chapter_id for v in volumes for c in store.chapters(v)}
    years = {
        c.chapter_id: c.year
        for v in volumes
        for c in store.chapters(v)
        if c.year is not None
    }
    rows = [r for r in store.entity_rows() if r.chapter_id in chapter_ids]
    entities = collect_occurrences(rows, years)
    graph = build_graph(entities, window=args.window)
    partition = louvain(graph, seed=args.seed)
    captions = make_captions(graph, partition, k=args.top)
    document = export_graph(graph, partition, captions, book_ids=volumes, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(document, encoding="utf-8")
    print(f"wrote {len(graph.nodes)} nodes, {len(graph.edges)} edges to {out}")
    return 0


def cmd_index(args: argparse.Namespace) -> int:
    store = DocumentStore(Path(args.store))
    index = build_index(store.chapters())
    path = store.index_dir / "index.json"
    save_index(index, path)
    print(f"indexed {len(index.chapters)} chapters, {len(index.postings)} terms")
    return 0


def _render_snippet(text: str, highlights: list[tuple[int, int]]) -> str:
    data = text.encode("utf-8")
    out = bytearray()
    cursor = 0
    for start, end in highlights:
        out += data[cursor:start] + b"[" + data[start:end] + b"]"
        cursor = end
    out += data[cursor:]
    return out.decode("utf-8")


def cmd_search(args: argparse.Namespace) -> int:
    store = DocumentStore(Path(args.store))
    index = load_index(store.index_dir / "index.json", store.chapter_text)
    volumes = {args.book} if args.book else None
    if volumes:
        unknown = volumes - index.volume_ids()
        if unknown:
            raise UnknownBook(", ".join(sorted(unknown)))

    if args.entity:
        result = entity_occurrences(index, args.q, volumes)
        print(f"{result.total_chapters} chapters mention {args.q!r}")
        for group in result.groups:
            print(f"== {group.year}")
            for chapter in group.chapters:
                print(f"  {chapter.chapter_id}  {chapter.title}  (x{chapter.count})")
                for snippet in chapter.snippets:
                    print(f"    ...{_render_snippet(snippet.text, snippet.highlights)}...")
        return 0

    hits, total = search(index, args.q, limit=args.limit)
    print(f"{total} chapters match {args.q!r}")
    for hit in hits:
        if volumes and hit.volume_id not in volumes:
            continue
        print(f"{hit.score:8.4f}  {hit.chapter_id}  [{hit.year}]  {hit.title}")
        for snippet in hit.snippets:
            print(f"    ...{_render_snippet(snippet.text, snippet.highlights)}...")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = load_config(Path(args.config))
    server = serve(config)
    host, port = server.address
    print(f"serving on http://{host}:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronotome", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse volumes and fill the document store")
    p.add_argument("--corpus", required=True, help="directory with manifest + volume files")
    p.add_argument("--store", required=True, help="store directory to create/fill")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("annotate-years", help="assign a year to every chapter")
    p.add_argument("--store", required=True)
    p.set_defaults(func=cmd_annotate_years)

    p = sub.add_parser("annotate-entities", help="run the tagger ensemble and vote")
    p.add_argument("--store", required=True)
    p.add_argument("--persons", required=True, help="person gazetteer, one name per line")
    p.add_argument("--places", required=True, help="place gazetteer, one name per line")
    p.add_argument("--common", required=True, help="common-word lexicon, one word per line")
    p.add_argument("--external", action="append", help="external annotation file (repeatable)")
    p.add_argument("--quorum", type=int, default=2)
    p.set_defaults(func=cmd_annotate_entities)

    p = sub.add_parser("graph", help="build and export a temporal co-mention graph")
    p.add_argument("--store", required=True)
    p.add_argument("--book", action="append", required=True, help="volume id (repeatable)")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top", type=int, default=3, help="entities per community caption")
    p.add_argument("--out", required=True, help="output graph document path")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("index", help="build the full-text index")
    p.add_argument("--store", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="query the index from the command line")
    p.add_argument("--store", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--book", help="restrict to one volume id")
    p.add_argument("--entity", action="store_true", help="exact entity phrase query")
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("serve", help="serve the portal API")
    p.add_argument("--config", required=True, help="portal config file (JSON)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChronotomeError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
