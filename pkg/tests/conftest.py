from __future__ import annotations

from pathlib import Path

import pytest

from chronotome.cli import main as cli_main

FIXTURES = Path(__file__).parent / "fixtures" / "minicorpus"

BOOKS = {
    "experiments": ["expA"],
    "struggle": ["satB"],
    "return": ["indC"],
}


def build_minicorpus_store(root: Path) -> Path:
    """Run the full build pipeline over the bundled mini-corpus."""
    store = root / "store"
    steps = [
        ["ingest", "--corpus", str(FIXTURES), "--store", str(store)],
        ["annotate-years", "--store", str(store)],
        [
            "annotate-entities",
            "--store", str(store),
            "--persons", str(FIXTURES / "persons.txt"),
            "--places", str(FIXTURES / "places.txt"),
            "--common", str(FIXTURES / "common.txt"),
        ],
    ]
    for book_id, volumes in BOOKS.items():
        step = ["graph", "--store", str(store), "--out", str(store / "graphs" / f"{book_id}.json")]
        for volume_id in volumes:
            step += ["--book", volume_id]
        steps.append(step)
    steps.append(["index", "--store", str(store)])
    for step in steps:
        assert cli_main(step) == 0, f"pipeline step failed: {step[0]}"
    return store


@pytest.fixture(scope="session")
def minicorpus_store(tmp_path_factory) -> Path:
    return build_minicorpus_store(tmp_path_factory.mktemp("minicorpus"))


def write_portal_config(store: Path, path: Path, port: int = 0) -> Path:
    import json

    config = {
        "store": str(store),
        "listen": f"127.0.0.1:{port}",
        "page_size": 20,
        "books": [
            {"id": book_id, "title": book_id.title(), "volumes": volumes}
            for book_id, volumes in BOOKS.items()
        ],
    }
    path.write_text(json.dumps(config), encoding="utf-8")
    return path
