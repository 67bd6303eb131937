"""Annotation sessions and the publish pipeline.

A session holds an extracted ontology plus an ordered list of annotated
text snippets. encode() mints one individual per snippet, links individuals
along the inferred part-whole structure, and returns the enriched graph
together with the linked pairs and any orphaned snippets. export() renders
that graph in one of the four supported formats.
"""

from __future__ import annotations

import json
import uuid
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from mcforge.config import EngineConfig
from mcforge.errors import (
    AnnotationError,
    ConfigurationError,
    NotFoundError,
    PreconditionError,
    ValidationError,
)
from mcforge.fetch import OntologyHandle, fetch_ontology
from mcforge.ontology import (
    RDF_TYPE,
    RDFS_LABEL,
    OntologyModel,
    class_annotations,
    extract,
)
from mcforge.rdf.core import XSD_NS, Graph, Iri, Literal, Triple
from mcforge.rdf.serialize import ExportFormat, serialize
from mcforge.reasoner import ClosureIndex, MeronymyResult, build_closure, meronymy_of

XSD_STRING = XSD_NS + "string"

# The root individual's path segment under the session base IRI; snippet ids
# must not collide with it.
REPORT_SEGMENT = "report"


@dataclass(frozen=True)
class AnnotatedSnippet:
    id: str
    text: str
    class_iri: str


@dataclass(frozen=True)
class LinkedPair:
    parent: str
    child: str
    property: str


@dataclass(frozen=True)
class PublishResult:
    graph: Graph
    pairs: tuple[LinkedPair, ...]
    orphans: tuple[str, ...]
    warnings: tuple[str, ...]


class ReportSession:
    """Single-writer annotation session over one extracted ontology."""

    def __init__(
        self,
        handle: OntologyHandle,
        model: OntologyModel,
        closure: ClosureIndex,
        config: EngineConfig,
        base_iri: str,
        root_class: str,
    ):
        self.handle = handle
        self.model = model
        self.closure = closure
        self.config = config
        self.base_iri = base_iri
        self.root_class = root_class
        self.report_iri = f"{base_iri}/{REPORT_SEGMENT}"
        self.snippets: list[AnnotatedSnippet] = []
        self.last_result: Optional[PublishResult] = None
        self._ordinal = 0

    @property
    def text_property(self) -> str:
        return f"{self.base_iri}/vocab#textContent"


def detect_root_class(model: OntologyModel, part_of_iri: str) -> str:
    """Pick the unique part-of filler that is never itself declared a part."""
    fillers: set[str] = set()
    subjects: set[str] = set()
    for axiom in model.axioms:
        if axiom.is_restriction and axiom.sup.property == part_of_iri:
            fillers.add(axiom.sup.filler)
            subjects.add(axiom.sub)
    candidates = sorted(fillers - subjects)
    if len(candidates) == 1:
        return candidates[0]
    if not candidates:
        raise ConfigurationError(
            "cannot infer a root class: no part-of restriction filler stands "
            "apart as a whole; set root_class_iri explicitly"
        )
    listed = ", ".join(f"<{c}>" for c in candidates)
    raise ConfigurationError(
        f"cannot infer a root class: multiple candidates ({listed}); "
        "set root_class_iri explicitly"
    )


def open_session(
    handle: OntologyHandle,
    config: EngineConfig,
    base_iri: Optional[str] = None,
) -> ReportSession:
    model = extract(handle.graph)
    closure = build_closure(model)
    if config.root_class_iri is not None:
        if config.root_class_iri not in model.classes:
            raise ConfigurationError(
                f"configured root class <{config.root_class_iri}> is not in the ontology"
            )
        root = config.root_class_iri
    else:
        root = detect_root_class(model, config.part_of_iri)
    base = base_iri or config.base_iri or f"urn:mcforge:session:{uuid.uuid4()}"
    base = base.rstrip("/")
    Iri(base)  # validate early; minted individuals extend this
    return ReportSession(handle, model, closure, config, base, root)


def add_snippet(
    session: ReportSession,
    text: str,
    class_iri: str,
    snippet_id: Optional[str] = None,
) -> str:
    if not text.strip():
        raise ValidationError("snippet text must be non-empty")
    if class_iri not in session.model.classes:
        raise AnnotationError(f"unknown class <{class_iri}>")
    session._ordinal += 1
    sid = snippet_id if snippet_id is not None else f"s{session._ordinal}"
    if sid == REPORT_SEGMENT:
        raise ValidationError(f"snippet id {REPORT_SEGMENT!r} is reserved for the root individual")
    if any(s.id == sid for s in session.snippets):
        raise ValidationError(f"duplicate snippet id {sid!r}")
    session.snippets.append(AnnotatedSnippet(id=sid, text=text, class_iri=class_iri))
    session.last_result = None
    return sid


def remove_snippet(session: ReportSession, snippet_id: str) -> None:
    for i, snippet in enumerate(session.snippets):
        if snippet.id == snippet_id:
            del session.snippets[i]
            session.last_result = None
            return
    raise NotFoundError(f"no snippet with id {snippet_id!r}")


def list_snippets(session: ReportSession) -> list[dict]:
    rows = []
    for snippet in session.snippets:
        annotations = class_annotations(session.model, snippet.class_iri)
        rows.append(
            {
                "id": snippet.id,
                "text": snippet.text,
                "classIri": snippet.class_iri,
                "classLabel": annotations.label,
            }
        )
    return rows


def individual_iri(session: ReportSession, snippet_id: str) -> str:
    return f"{session.base_iri}/{snippet_id}"


def encode(session: ReportSession) -> PublishResult:
    """Mint individuals, link part-of pairs, and enrich the ontology graph."""
    if not session.snippets:
        raise ValidationError("cannot encode an empty session; add at least one snippet")

    part_of = session.config.part_of_iri
    warnings: list[str] = []

    instances: dict[str, list[str]] = {}
    minted: dict[str, str] = {}
    for snippet in session.snippets:
        iri = individual_iri(session, snippet.id)
        minted[snippet.id] = iri
        instances.setdefault(snippet.class_iri, []).append(iri)
    # The root individual always exists and always counts as an instance of
    # the root class, so root-level parts link to it.
    instances.setdefault(session.root_class, []).insert(0, session.report_iri)

    parent_classes: list[str] = [session.root_class]
    for snippet in session.snippets:
        if snippet.class_iri not in parent_classes:
            parent_classes.append(snippet.class_iri)

    meronymy_cache: dict[str, MeronymyResult] = {}

    def parts_of(parent_class: str) -> MeronymyResult:
        if parent_class not in meronymy_cache:
            meronymy_cache[parent_class] = meronymy_of(
                session.model,
                session.closure,
                parent_class,
                part_of,
                has_part_iri=session.config.has_part_iri,
                inherit_inverse=session.config.inherit_inverse,
            )
        return meronymy_cache[parent_class]

    # Missing-part warnings only fire for parents the author actually wrote
    # about; the auto-minted root individual starting out empty is the
    # normal state of a partially filled card, not an anomaly.
    snippet_classes = {s.class_iri for s in session.snippets}

    pairs: set[LinkedPair] = set()
    for parent_class in parent_classes:
        result = parts_of(parent_class)
        for child_class in result.children:
            child_instances = instances.get(child_class, [])
            if not child_instances:
                if parent_class in snippet_classes:
                    warnings.append(
                        f"part class <{child_class}> of <{parent_class}> has no "
                        "annotated text; skipped"
                    )
                continue
            for parent_iri in instances[parent_class]:
                for child_iri in child_instances:
                    if child_iri == parent_iri:
                        continue
                    pairs.add(LinkedPair(parent=parent_iri, child=child_iri, property=part_of))

    sorted_pairs = tuple(sorted(pairs, key=lambda p: (p.child, p.parent, p.property)))

    children_of: dict[str, list[str]] = {}
    for pair in sorted_pairs:
        children_of.setdefault(pair.parent, []).append(pair.child)
    reachable: set[str] = set()
    queue = deque([session.report_iri])
    while queue:
        node = queue.popleft()
        for child in children_of.get(node, ()):
            if child not in reachable:
                reachable.add(child)
                queue.append(child)

    orphans = tuple(s.id for s in session.snippets if minted[s.id] not in reachable)
    for sid in orphans:
        snippet = next(s for s in session.snippets if s.id == sid)
        warnings.append(
            f"snippet {sid!r} (<{snippet.class_iri}>) has no part-of path to "
            "the report root"
        )

    text_property = Iri(session.text_property)
    triples = set(session.handle.graph.triples)
    triples.add(Triple(Iri(session.report_iri), RDF_TYPE, Iri(session.root_class)))
    for snippet in session.snippets:
        ind = Iri(minted[snippet.id])
        triples.add(Triple(ind, RDF_TYPE, Iri(snippet.class_iri)))
        triples.add(Triple(ind, RDFS_LABEL, Literal(snippet.text)))
        triples.add(Triple(ind, text_property, Literal(snippet.text, datatype=XSD_STRING)))
    for pair in sorted_pairs:
        triples.add(Triple(Iri(pair.child), Iri(pair.property), Iri(pair.parent)))

    graph = Graph(triples, session.handle.graph.prefixes)
    result = PublishResult(
        graph=graph,
        pairs=sorted_pairs,
        orphans=orphans,
        warnings=tuple(warnings),
    )
    session.last_result = result
    return result


def export(
    session: ReportSession,
    fmt: ExportFormat,
    result: Optional[PublishResult] = None,
) -> str:
    chosen = result if result is not None else session.last_result
    if chosen is None:
        raise PreconditionError("nothing to export: run encode first")
    return serialize(chosen.graph, fmt)


_MANIFEST_KEYS = {"ontology", "baseIri", "prefixes", "snippets"}
_SNIPPET_KEYS = {"id", "text", "class"}


def _expand_class(value: str, prefixes: dict[str, str]) -> str:
    if ":" in value:
        prefix, _, local = value.partition(":")
        if prefix in prefixes and "//" not in value[: len(prefix) + 3]:
            return prefixes[prefix] + local
    return value


def load_manifest(path: str | Path) -> dict:
    path = Path(path)
    try:
        raw = path.read_text("utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read manifest {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise ValidationError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("manifest root must be a JSON object")

    unknown = sorted(set(data) - _MANIFEST_KEYS)
    if unknown:
        raise ValidationError(f"unknown manifest field(s): {', '.join(unknown)}")
    ontology = data.get("ontology")
    if not isinstance(ontology, str) or not ontology:
        raise ValidationError("manifest field 'ontology' must be a non-empty string")
    base_iri = data.get("baseIri")
    if base_iri is not None and not isinstance(base_iri, str):
        raise ValidationError("manifest field 'baseIri' must be a string")
    prefixes = data.get("prefixes", {})
    if not isinstance(prefixes, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in prefixes.items()
    ):
        raise ValidationError("manifest field 'prefixes' must map strings to strings")
    snippets = data.get("snippets")
    if not isinstance(snippets, list):
        raise ValidationError("manifest field 'snippets' must be an array")
    for index, entry in enumerate(snippets):
        where = f"snippets[{index}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where} must be an object")
        extra = sorted(set(entry) - _SNIPPET_KEYS)
        if extra:
            raise ValidationError(f"unknown field(s) in {where}: {', '.join(extra)}")
        if not isinstance(entry.get("text"), str):
            raise ValidationError(f"{where}.text must be a string")
        if not isinstance(entry.get("class"), str) or not entry["class"]:
            raise ValidationError(f"{where}.class must be a non-empty string")
        if "id" in entry and (not isinstance(entry["id"], str) or not entry["id"]):
            raise ValidationError(f"{where}.id must be a non-empty string")
    return data


def resolve_ontology_origin(ontology: str, manifest_path: str | Path) -> str:
    """Relative manifest paths are taken relative to the manifest file."""
    if "://" in ontology or ontology.startswith("urn:"):
        return ontology
    candidate = Path(ontology)
    if candidate.is_absolute():
        return str(candidate)
    return str((Path(manifest_path).parent / candidate).resolve())


def ingest_manifest(
    path: str | Path,
    config: EngineConfig,
    handle: Optional[OntologyHandle] = None,
    base_iri: Optional[str] = None,
    offline: Optional[bool] = None,
) -> ReportSession:
    data = load_manifest(path)
    if handle is None:
        origin = resolve_ontology_origin(data["ontology"], path)
        handle = fetch_ontology(origin, cache_dir=config.cache_dir, offline=offline)
    session = open_session(handle, config, base_iri=base_iri or data.get("baseIri"))

    prefixes = dict(handle.graph.prefixes)
    prefixes.update(data.get("prefixes", {}))

    failures: list[str] = []
    for index, entry in enumerate(data["snippets"]):
        class_iri = _expand_class(entry["class"], prefixes)
        try:
            add_snippet(session, entry["text"], class_iri, snippet_id=entry.get("id"))
        except AnnotationError as exc:
            failures.append(f"snippets[{index}]: {exc}")
    if failures:
        raise AnnotationError(
            f"{len(failures)} snippet(s) use unknown classes",
            details=failures,
        )
    return session
