from mcforge.rdf.core import (
    OWL_NS,
    RDF_NS,
    RDFS_NS,
    XSD_NS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    isomorphic,
)
from mcforge.rdf.serialize import (
    FILE_EXTENSIONS,
    FORMAT_TOKENS,
    MEDIA_TYPES,
    ExportFormat,
    format_for_token,
    reparse_any,
    serialize,
)
from mcforge.rdf.turtle import parse_ntriples, parse_turtle

__all__ = [
    "OWL_NS",
    "RDF_NS",
    "RDFS_NS",
    "XSD_NS",
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "isomorphic",
    "ExportFormat",
    "FORMAT_TOKENS",
    "MEDIA_TYPES",
    "FILE_EXTENSIONS",
    "format_for_token",
    "serialize",
    "reparse_any",
    "parse_turtle",
    "parse_ntriples",
]
