"""Serializers for the four export formats, plus restricted re-readers.

The export menu maps user-facing tokens onto concrete serializations:
"turtle" is Turtle, "rdf" is N-Triples, "owl" is RDF/XML (the Protege
ecosystem's exchange form), and "json" is flattened JSON-LD. Output is
deterministic: identical graphs serialize to identical bytes.

reparse_any only promises to read documents this module itself produced;
it exists so exports can be round-trip checked without a full parser for
every syntax.
"""

from __future__ import annotations

import enum
import json
import re
import xml.etree.ElementTree as ET

from mcforge.errors import SerializationError, UnsupportedConstructError
from mcforge.rdf.core import (
    RDF_NS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    term_sort_key,
)
from mcforge.rdf.turtle import parse_turtle


class ExportFormat(enum.Enum):
    TURTLE = "turtle"
    NTRIPLES = "ntriples"
    RDFXML = "rdfxml"
    JSONLD = "jsonld"


# CLI/service tokens, media types, and file extensions per format.
FORMAT_TOKENS = {
    "turtle": ExportFormat.TURTLE,
    "rdf": ExportFormat.NTRIPLES,
    "owl": ExportFormat.RDFXML,
    "json": ExportFormat.JSONLD,
}
MEDIA_TYPES = {
    ExportFormat.TURTLE: "text/turtle",
    ExportFormat.NTRIPLES: "application/n-triples",
    ExportFormat.RDFXML: "application/rdf+xml",
    ExportFormat.JSONLD: "application/ld+json",
}
FILE_EXTENSIONS = {
    ExportFormat.TURTLE: ".ttl",
    ExportFormat.NTRIPLES: ".nt",
    ExportFormat.RDFXML: ".rdf",
    ExportFormat.JSONLD: ".jsonld",
}


def format_for_token(token: str) -> ExportFormat:
    try:
        return FORMAT_TOKENS[token]
    except KeyError:
        valid = ", ".join(sorted(FORMAT_TOKENS))
        raise SerializationError(f"unknown format token {token!r}; valid tokens: {valid}")


def _escape_string(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def _nt_term(t: Term) -> str:
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    body = f'"{_escape_string(t.lexical)}"'
    if t.lang:
        return f"{body}@{t.lang}"
    if t.datatype:
        return f"{body}^^<{t.datatype}>"
    return body


def serialize(graph: Graph, fmt: ExportFormat) -> str:
    if fmt == ExportFormat.NTRIPLES:
        return _write_ntriples(graph)
    if fmt == ExportFormat.TURTLE:
        return _write_turtle(graph)
    if fmt == ExportFormat.RDFXML:
        return _write_rdfxml(graph)
    if fmt == ExportFormat.JSONLD:
        return _write_jsonld(graph)
    raise SerializationError(f"unknown format: {fmt!r}")


def reparse_any(source: str, fmt: ExportFormat) -> Graph:
    """Read back a document produced by serialize() in the same format."""
    if fmt in (ExportFormat.TURTLE, ExportFormat.NTRIPLES):
        return parse_turtle(source)
    if fmt == ExportFormat.RDFXML:
        return _read_rdfxml(source)
    if fmt == ExportFormat.JSONLD:
        return _read_jsonld(source)
    raise UnsupportedConstructError(f"unknown format: {fmt!r}")


# --- N-Triples ---------------------------------------------------------


def _write_ntriples(graph: Graph) -> str:
    lines = [
        f"{_nt_term(t.subject)} {_nt_term(t.predicate)} {_nt_term(t.object)} ."
        for t in graph
    ]
    return "".join(line + "\n" for line in lines)


# --- Turtle ------------------------------------------------------------

_LOCAL_OK_RE = re.compile(r"^(?:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?$")


class _TurtleWriter:
    def __init__(self, graph: Graph):
        self.graph = graph
        # Longest namespace wins when several prefixes could abbreviate.
        self.namespaces = sorted(
            graph.prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0])
        )

    def term(self, t: Term) -> str:
        if isinstance(t, Iri):
            for prefix, ns in self.namespaces:
                if t.value.startswith(ns):
                    local = t.value[len(ns):]
                    if _LOCAL_OK_RE.match(local):
                        return f"{prefix}:{local}"
            return f"<{t.value}>"
        return _nt_term(t)

    def write(self) -> str:
        out: list[str] = []
        for prefix, ns in sorted(self.graph.prefixes.items()):
            out.append(f"@prefix {prefix}: <{ns}> .\n")
        if out and len(self.graph):
            out.append("\n")
        by_subject: dict[Term, list[Triple]] = {}
        for t in self.graph:
            by_subject.setdefault(t.subject, []).append(t)
        for subject in sorted(by_subject, key=term_sort_key):
            out.append(self._subject_block(subject, by_subject[subject]))
        return "".join(out)

    def _subject_block(self, subject: Term, triples: list[Triple]) -> str:
        by_pred: dict[Iri, list[Term]] = {}
        for t in triples:
            by_pred.setdefault(t.predicate, []).append(t.object)
        rdf_type = Iri(RDF_NS + "type")

        def pred_key(p: Iri) -> tuple:
            return (0 if p == rdf_type else 1, p.value)

        lines = []
        for pred in sorted(by_pred, key=pred_key):
            objects = ", ".join(self.term(o) for o in sorted(by_pred[pred], key=term_sort_key))
            label = "a" if pred == rdf_type else self.term(pred)
            lines.append(f"{label} {objects}")
        head = self.term(subject)
        if len(lines) == 1:
            return f"{head} {lines[0]} .\n"
        joined = " ;\n    ".join(lines)
        return f"{head} {joined} .\n"


def _write_turtle(graph: Graph) -> str:
    return _TurtleWriter(graph).write()


# --- RDF/XML -----------------------------------------------------------

_NCNAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_XMLNS_OK_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def split_predicate_iri(iri: str) -> tuple[str, str]:
    """Split a predicate IRI into (namespace, XML local name).

    The split point is after the last '#' or '/'; the remainder must be a
    valid NCName or the IRI cannot be written as an RDF/XML element.
    """
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut == -1:
        raise SerializationError(f"predicate IRI has no namespace separator: <{iri}>")
    ns, local = iri[: cut + 1], iri[cut + 1 :]
    if not _NCNAME_RE.match(local):
        raise SerializationError(
            f"predicate IRI cannot be split into namespace and XML name: <{iri}>"
        )
    return ns, local


def _xml_escape_text(value: str) -> str:
    out = value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return out.replace("\r", "&#13;")


def _xml_escape_attr(value: str) -> str:
    out = _xml_escape_text(value).replace('"', "&quot;")
    return out.replace("\n", "&#10;").replace("\t", "&#9;")


def _write_rdfxml(graph: Graph) -> str:
    ns_to_prefix: dict[str, str] = {RDF_NS: "rdf"}
    wanted = sorted({split_predicate_iri(t.predicate.value)[0] for t in graph})
    preferred = {ns: p for p, ns in sorted(graph.prefixes.items(), reverse=True) if p}
    counter = 0
    for ns in wanted:
        if ns in ns_to_prefix:
            continue
        cand = preferred.get(ns)
        if cand and _XMLNS_OK_RE.match(cand) and cand not in ns_to_prefix.values():
            ns_to_prefix[ns] = cand
        else:
            ns_to_prefix[ns] = f"ns{counter}"
            counter += 1

    decls = "".join(
        f'\n    xmlns:{p}="{_xml_escape_attr(ns)}"'
        for ns, p in sorted(ns_to_prefix.items(), key=lambda kv: kv[1])
    )
    out = ['<?xml version="1.0" encoding="utf-8"?>\n', f"<rdf:RDF{decls}>\n"]

    by_subject: dict[Term, list[Triple]] = {}
    for t in graph:
        by_subject.setdefault(t.subject, []).append(t)
    for subject in sorted(by_subject, key=term_sort_key):
        if isinstance(subject, Iri):
            out.append(f'  <rdf:Description rdf:about="{_xml_escape_attr(subject.value)}">\n')
        else:
            out.append(f'  <rdf:Description rdf:nodeID="{_xml_escape_attr(subject.label)}">\n')
        for t in sorted(by_subject[subject], key=Triple.sort_key):
            ns, local = split_predicate_iri(t.predicate.value)
            tag = f"{ns_to_prefix[ns]}:{local}"
            o = t.object
            if isinstance(o, Iri):
                out.append(f'    <{tag} rdf:resource="{_xml_escape_attr(o.value)}"/>\n')
            elif isinstance(o, BlankNode):
                out.append(f'    <{tag} rdf:nodeID="{_xml_escape_attr(o.label)}"/>\n')
            else:
                attrs = ""
                if o.lang:
                    attrs = f' xml:lang="{_xml_escape_attr(o.lang)}"'
                elif o.datatype:
                    attrs = f' rdf:datatype="{_xml_escape_attr(o.datatype)}"'
                out.append(f"    <{tag}{attrs}>{_xml_escape_text(o.lexical)}</{tag}>\n")
        out.append("  </rdf:Description>\n")
    out.append("</rdf:RDF>\n")
    return "".join(out)


_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"


def _read_rdfxml(source: str) -> Graph:
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise UnsupportedConstructError(f"not well-formed XML: {exc}")
    if root.tag != f"{{{RDF_NS}}}RDF":
        raise UnsupportedConstructError(f"expected rdf:RDF document element, got {root.tag}")
    triples: list[Triple] = []
    for desc in root:
        if desc.tag != f"{{{RDF_NS}}}Description":
            raise UnsupportedConstructError(f"unsupported element {desc.tag}")
        about = desc.get(f"{{{RDF_NS}}}about")
        node_id = desc.get(f"{{{RDF_NS}}}nodeID")
        if about is not None:
            subject: Term = Iri(about)
        elif node_id is not None:
            subject = BlankNode(node_id)
        else:
            raise UnsupportedConstructError("rdf:Description without rdf:about or rdf:nodeID")
        for prop in desc:
            m = re.match(r"^\{(.*)\}(.*)$", prop.tag)
            if not m:
                raise UnsupportedConstructError(f"unnamespaced property element {prop.tag}")
            predicate = Iri(m.group(1) + m.group(2))
            if len(prop) > 0:
                raise UnsupportedConstructError("nested property elements are not supported")
            resource = prop.get(f"{{{RDF_NS}}}resource")
            obj_node = prop.get(f"{{{RDF_NS}}}nodeID")
            datatype = prop.get(f"{{{RDF_NS}}}datatype")
            lang = prop.get(_XML_LANG)
            if resource is not None:
                obj: Term = Iri(resource)
            elif obj_node is not None:
                obj = BlankNode(obj_node)
            else:
                obj = Literal(prop.text or "", lang=lang, datatype=datatype)
            triples.append(Triple(subject, predicate, obj))
    return Graph(triples)


# --- JSON-LD -----------------------------------------------------------


def _jsonld_id(t: Term) -> str:
    if isinstance(t, Iri):
        return t.value
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    raise SerializationError(f"not a node term: {t!r}")


def _jsonld_value(o: Term) -> dict:
    if isinstance(o, (Iri, BlankNode)):
        return {"@id": _jsonld_id(o)}
    val: dict = {"@value": o.lexical}
    if o.lang:
        val["@language"] = o.lang
    elif o.datatype:
        val["@type"] = o.datatype
    return val


def _write_jsonld(graph: Graph) -> str:
    nodes: dict[str, dict[str, list[dict]]] = {}
    for t in graph:
        node = nodes.setdefault(_jsonld_id(t.subject), {})
        node.setdefault(t.predicate.value, []).append(_jsonld_value(t.object))
    doc = {
        "@context": {p: ns for p, ns in sorted(graph.prefixes.items()) if p},
        "@graph": [
            {
                "@id": node_id,
                **{
                    pred: sorted(values, key=lambda v: json.dumps(v, sort_keys=True))
                    for pred, values in sorted(nodes[node_id].items())
                },
            }
            for node_id in sorted(nodes)
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _node_term(value: str) -> Term:
    if value.startswith("_:"):
        return BlankNode(value[2:])
    return Iri(value)


def _read_jsonld(source: str) -> Graph:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise UnsupportedConstructError(f"not valid JSON: {exc}")
    if not isinstance(doc, dict) or "@graph" not in doc:
        raise UnsupportedConstructError("expected a JSON object with an @graph array")
    context = doc.get("@context", {})
    prefixes = context if isinstance(context, dict) else {}
    triples: list[Triple] = []
    for node in doc["@graph"]:
        if not isinstance(node, dict) or "@id" not in node:
            raise UnsupportedConstructError("every node object needs an @id")
        subject = _node_term(node["@id"])
        for pred, values in node.items():
            if pred == "@id":
                continue
            if pred.startswith("@"):
                raise UnsupportedConstructError(f"unsupported keyword {pred}")
            if not isinstance(values, list):
                raise UnsupportedConstructError("property values must be arrays")
            for v in values:
                if not isinstance(v, dict):
                    raise UnsupportedConstructError("property values must be value objects")
                if "@id" in v:
                    obj: Term = _node_term(v["@id"])
                elif "@value" in v:
                    if not isinstance(v["@value"], str):
                        raise UnsupportedConstructError("@value must be a string")
                    obj = Literal(
                        v["@value"],
                        lang=v.get("@language"),
                        datatype=v.get("@type"),
                    )
                else:
                    raise UnsupportedConstructError(f"unsupported value object {v!r}")
                triples.append(Triple(subject, Iri(pred), obj))
    return Graph(triples, {str(k): str(v) for k, v in prefixes.items()})
