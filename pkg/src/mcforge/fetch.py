"""Ontology retrieval with a content cache and offline support.

Origins may be local paths, file:// URLs, or http(s):// URLs. Every
successful read is mirrored into a cache directory keyed by the SHA-256 of
the normalized origin, so a later offline run (or a network outage) can fall
back to the last good copy. owl:imports are resolved recursively up to a
fixed depth and merged into one graph.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from mcforge.errors import FetchError, OfflineMissError
from mcforge.ontology import OWL_IMPORTS
from mcforge.rdf.core import Graph, Iri
from mcforge.rdf.turtle import parse_turtle

MAX_IMPORT_DEPTH = 4
OFFLINE_ENV_VAR = "MCFORGE_OFFLINE"
DEFAULT_CACHE_DIR = Path.home() / ".cache" / "mcforge"

# Refuse to buffer pathological ontology documents.
MAX_DOCUMENT_BYTES = 32 * 1024 * 1024


@dataclass(frozen=True)
class OntologyHandle:
    origin: str
    fetched_at: str
    cache_path: Path
    graph: Graph
    warnings: tuple[str, ...]


def _normalize_origin(origin: str) -> str:
    parsed = urllib.parse.urlparse(origin)
    if parsed.scheme in ("http", "https"):
        return origin
    if parsed.scheme == "file":
        return str(Path(urllib.request.url2pathname(parsed.path)).resolve())
    if parsed.scheme and len(parsed.scheme) > 1:
        raise FetchError(f"unsupported origin scheme {parsed.scheme!r} in {origin!r}")
    return str(Path(origin).resolve())  # plain path; len>1 guard spares C:\ styles


def _cache_paths(cache_dir: Path, normalized: str) -> tuple[Path, Path]:
    digest = hashlib.sha256(normalized.encode("utf-8")).hexdigest()
    return cache_dir / f"{digest}.ttl", cache_dir / f"{digest}.meta.json"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _store(cache_dir: Path, normalized: str, origin: str, text: str) -> tuple[Path, str]:
    body_path, meta_path = _cache_paths(cache_dir, normalized)
    fetched_at = datetime.now(timezone.utc).isoformat()
    _atomic_write(body_path, text.encode("utf-8"))
    meta = {"origin": origin, "normalized": normalized, "fetched_at": fetched_at}
    _atomic_write(meta_path, json.dumps(meta, indent=2).encode("utf-8"))
    return body_path, fetched_at


def _load_cached(cache_dir: Path, normalized: str) -> tuple[str, Path, str] | None:
    body_path, meta_path = _cache_paths(cache_dir, normalized)
    if not body_path.exists():
        return None
    fetched_at = "unknown"
    if meta_path.exists():
        try:
            fetched_at = json.loads(meta_path.read_text("utf-8")).get("fetched_at", "unknown")
        except (OSError, ValueError):
            pass
    try:
        return body_path.read_text("utf-8"), body_path, fetched_at
    except OSError:
        return None


def _read_origin(origin: str, normalized: str) -> str:
    parsed = urllib.parse.urlparse(origin)
    if parsed.scheme in ("http", "https"):
        request = urllib.request.Request(origin, headers={"Accept": "text/turtle"})
        try:
            with urllib.request.urlopen(request, timeout=30) as response:
                data = response.read(MAX_DOCUMENT_BYTES + 1)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise FetchError(f"could not fetch {origin!r}: {exc}") from exc
    else:
        try:
            data = Path(normalized).read_bytes()
        except OSError as exc:
            raise FetchError(f"could not read {origin!r}: {exc}") from exc
    if len(data) > MAX_DOCUMENT_BYTES:
        raise FetchError(f"{origin!r} exceeds the {MAX_DOCUMENT_BYTES} byte document limit")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FetchError(f"{origin!r} is not valid UTF-8: {exc}") from exc


def _is_offline(offline: bool | None) -> bool:
    if offline is not None:
        return offline
    return os.environ.get(OFFLINE_ENV_VAR, "") == "1"


def _fetch_document(
    origin: str, cache_dir: Path, offline: bool, warnings: list[str]
) -> tuple[str, Path, str]:
    normalized = _normalize_origin(origin)
    is_remote = urllib.parse.urlparse(origin).scheme in ("http", "https")
    if offline and is_remote:
        cached = _load_cached(cache_dir, normalized)
        if cached is None:
            raise OfflineMissError(
                f"offline mode is on and {origin!r} has never been cached"
            )
        return cached
    try:
        text = _read_origin(origin, normalized)
    except FetchError as exc:
        cached = _load_cached(cache_dir, normalized)
        if cached is None:
            raise
        warnings.append(f"using cached copy of {origin!r} after a fetch failure: {exc}")
        return cached
    body_path, fetched_at = _store(cache_dir, normalized, origin, text)
    return text, body_path, fetched_at


def _imports_of(graph: Graph) -> list[str]:
    return sorted(
        t.object.value
        for t in graph.match(p=OWL_IMPORTS)
        if isinstance(t.object, Iri)
    )


def fetch_ontology(
    origin: str,
    cache_dir: str | Path | None = None,
    offline: bool | None = None,
) -> OntologyHandle:
    """Fetch, cache, and parse an ontology document plus its imports."""
    cache = Path(cache_dir) if cache_dir is not None else DEFAULT_CACHE_DIR
    offline_mode = _is_offline(offline)
    warnings: list[str] = []

    text, body_path, fetched_at = _fetch_document(origin, cache, offline_mode, warnings)
    graph = parse_turtle(text, base=None)

    visited = {_normalize_origin(origin)}
    queue = [(imported, 1) for imported in _imports_of(graph)]
    merged = graph
    while queue:
        imported, depth = queue.pop(0)
        if depth > MAX_IMPORT_DEPTH:
            raise FetchError(
                f"owl:imports chain exceeds depth {MAX_IMPORT_DEPTH} at {imported!r}"
            )
        try:
            key = _normalize_origin(imported)
        except FetchError:
            warnings.append(f"skipped owl:imports target {imported!r}: unsupported scheme")
            continue
        if key in visited:
            continue
        visited.add(key)
        sub_text, _, _ = _fetch_document(imported, cache, offline_mode, warnings)
        sub_graph = parse_turtle(sub_text, base=None)
        # Root document prefixes win over imported ones on collision.
        prefixes = dict(sub_graph.prefixes)
        prefixes.update(merged.prefixes)
        merged = Graph(frozenset(merged.triples | sub_graph.triples), prefixes)
        queue.extend((nested, depth + 1) for nested in _imports_of(sub_graph))

    return OntologyHandle(
        origin=origin,
        fetched_at=fetched_at,
        cache_path=body_path,
        graph=merged,
        warnings=tuple(warnings),
    )
