import http.server
import threading
from pathlib import Path

import pytest

from mcforge.errors import FetchError, OfflineMissError, ParseFailure
from mcforge.fetch import fetch_ontology
from mcforge.rdf import isomorphic


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path

SIMPLE = "<http://x/a> <http://x/p> <http://x/b> .\n"


@pytest.fixture
def served_dir(tmp_path):
    root = tmp_path / "www"
    root.mkdir()
    handler = lambda *a, **kw: http.server.SimpleHTTPRequestHandler(*a, directory=str(root), **kw)
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield root, f"http://127.0.0.1:{server.server_port}"
    finally:
        server.shutdown()
        thread.join()


def test_local_path_fetch(tmp_path):
    source = _write(tmp_path / "onto.ttl", SIMPLE)
    cache = tmp_path / "cache"
    handle = fetch_ontology(str(source), cache_dir=cache)
    assert len(handle.graph.triples) == 1
    assert handle.cache_path.exists()
    assert handle.cache_path.parent == cache
    assert handle.origin == str(source)
    assert handle.warnings == ()


def test_file_url_fetch(tmp_path):
    source = _write(tmp_path / "onto.ttl", SIMPLE)
    handle = fetch_ontology(source.as_uri(), cache_dir=tmp_path / "cache")
    assert len(handle.graph.triples) == 1


def test_local_path_works_offline(tmp_path):
    source = _write(tmp_path / "onto.ttl", SIMPLE)
    handle = fetch_ontology(str(source), cache_dir=tmp_path / "cache", offline=True)
    assert len(handle.graph.triples) == 1


def test_offline_cold_cache_is_an_error(tmp_path):
    with pytest.raises(OfflineMissError):
        fetch_ontology(
            "https://example.invalid/onto.ttl", cache_dir=tmp_path / "cache", offline=True
        )


def test_offline_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("MCFORGE_OFFLINE", "1")
    with pytest.raises(OfflineMissError):
        fetch_ontology("https://example.invalid/onto.ttl", cache_dir=tmp_path / "cache")


def test_http_fetch_and_warm_cache(served_dir, tmp_path):
    root, base_url = served_dir
    _write(root / "onto.ttl", SIMPLE)
    cache = tmp_path / "cache"
    url = f"{base_url}/onto.ttl"
    first = fetch_ontology(url, cache_dir=cache)
    assert len(first.graph.triples) == 1
    # warm cache satisfies offline mode with the identical graph
    second = fetch_ontology(url, cache_dir=cache, offline=True)
    assert isomorphic(first.graph, second.graph)


def test_cached_copy_survives_network_failure(served_dir, tmp_path):
    root, base_url = served_dir
    _write(root / "onto.ttl", SIMPLE)
    cache = tmp_path / "cache"
    url = f"{base_url}/onto.ttl"
    fetch_ontology(url, cache_dir=cache)
    (root / "onto.ttl").unlink()  # server now 404s
    handle = fetch_ontology(url, cache_dir=cache)
    assert len(handle.graph.triples) == 1
    assert any("cached copy" in w for w in handle.warnings)


def test_cold_cache_network_failure_raises(tmp_path):
    with pytest.raises(FetchError):
        fetch_ontology("http://127.0.0.1:9/unreachable.ttl", cache_dir=tmp_path / "cache")


def test_unparseable_payload_raises_parse_failure(tmp_path):
    source = _write(tmp_path / "broken.ttl", "this is not turtle at all |||")
    with pytest.raises(ParseFailure):
        fetch_ontology(str(source), cache_dir=tmp_path / "cache")


def test_non_utf8_payload_is_a_fetch_error(tmp_path):
    target = tmp_path / "binary.ttl"
    target.write_bytes(b"\xff\xfe\x00broken")
    with pytest.raises(FetchError):
        fetch_ontology(str(target), cache_dir=tmp_path / "cache")


def _ontology_with_import(import_uri: str, tag: str) -> str:
    return (
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        f"<http://x/onto-{tag}> a owl:Ontology ;\n"
        f"  owl:imports <{import_uri}> .\n"
        f"<http://x/{tag}> <http://x/p> <http://x/{tag}-value> .\n"
    )


def test_imports_are_merged(tmp_path):
    leaf = _write(
        tmp_path / "leaf.ttl",
        "@prefix leafp: <http://leaf/> .\nleafp:s leafp:p leafp:o .\n",
    )
    root = _write(tmp_path / "root.ttl", _ontology_with_import(leaf.as_uri(), "root"))
    handle = fetch_ontology(str(root), cache_dir=tmp_path / "cache")
    subjects = {t.subject.value for t in handle.graph if hasattr(t.subject, "value")}
    assert "http://leaf/s" in subjects
    assert "http://x/root" in subjects
    assert handle.graph.prefixes["leafp"] == "http://leaf/"


def test_import_prefix_collision_root_wins(tmp_path):
    leaf = _write(
        tmp_path / "leaf.ttl",
        "@prefix shared: <http://leaf-ns/> .\nshared:s shared:p shared:o .\n",
    )
    root = _write(
        tmp_path / "root.ttl",
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        "@prefix shared: <http://root-ns/> .\n"
        f"<http://x/onto> a owl:Ontology ; owl:imports <{leaf.as_uri()}> .\n"
        "shared:a shared:p shared:b .\n",
    )
    handle = fetch_ontology(str(root), cache_dir=tmp_path / "cache")
    assert handle.graph.prefixes["shared"] == "http://root-ns/"


def test_import_cycle_terminates(tmp_path):
    a_path = tmp_path / "a.ttl"
    b_path = tmp_path / "b.ttl"
    _write(a_path, _ontology_with_import(b_path.as_uri(), "aa"))
    _write(b_path, _ontology_with_import(a_path.as_uri(), "bb"))
    handle = fetch_ontology(str(a_path), cache_dir=tmp_path / "cache")
    subjects = {t.subject.value for t in handle.graph if hasattr(t.subject, "value")}
    assert "http://x/aa" in subjects and "http://x/bb" in subjects


def _import_chain(tmp_path, depth: int) -> Path:
    last = _write(tmp_path / f"c{depth}.ttl", f"<http://x/c{depth}> <http://x/p> <http://x/v> .\n")
    for i in range(depth - 1, 0, -1):
        last = _write(tmp_path / f"c{i}.ttl", _ontology_with_import(last.as_uri(), f"c{i}"))
    return _write(tmp_path / "c0.ttl", _ontology_with_import(last.as_uri(), "c0"))


def test_import_depth_within_cap(tmp_path):
    root = _import_chain(tmp_path, 3)
    handle = fetch_ontology(str(root), cache_dir=tmp_path / "cache")
    subjects = {t.subject.value for t in handle.graph if hasattr(t.subject, "value")}
    assert "http://x/c3" in subjects


def test_import_depth_cap_enforced(tmp_path):
    root = _import_chain(tmp_path, 5)
    with pytest.raises(FetchError) as info:
        fetch_ontology(str(root), cache_dir=tmp_path / "cache")
    assert "depth" in str(info.value)


def test_cache_layout(tmp_path):
    source = _write(tmp_path / "onto.ttl", SIMPLE)
    cache = tmp_path / "cache"
    handle = fetch_ontology(str(source), cache_dir=cache)
    body = handle.cache_path
    meta = body.with_name(body.name.replace(".ttl", ".meta.json"))
    assert body.suffix == ".ttl"
    assert len(body.stem) == 64  # sha256 hex digest
    assert meta.exists()
