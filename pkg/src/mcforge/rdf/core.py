"""Immutable RDF data model: terms, triples, graphs, and graph isomorphism.

IRIs are stored absolute; prefix maps ride along on the graph and only
matter at serialization time. Graphs are value objects: every mutator
returns a new graph, so instances can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from mcforge.errors import CapacityError, GraphError

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")

# Characters that can never appear in an IRI reference; admitting them
# would produce unparseable serializations.
_IRI_FORBIDDEN = set(' \t\n\r<>"{}|^`\\') | {chr(c) for c in range(0x20)}

# Candidate-mapping budget for blank-node matching; exact search on the
# small graphs this engine produces, but bounded so pathological inputs
# fail loudly instead of hanging.
DEFAULT_CANDIDATE_BOUND = 10_000


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not _SCHEME_RE.match(self.value):
            raise GraphError(f"IRI is not absolute (missing scheme): {self.value!r}")
        bad = _IRI_FORBIDDEN.intersection(self.value)
        if bad:
            listed = ", ".join(repr(c) for c in sorted(bad))
            raise GraphError(f"IRI contains forbidden character(s) {listed}: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class BlankNode:
    label: str

    def __post_init__(self):
        if not self.label:
            raise GraphError("blank node label must be non-empty")

    def __repr__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    lang: Optional[str] = None
    datatype: Optional[str] = None  # absolute IRI; None means plain string

    def __post_init__(self):
        if self.lang is not None and self.datatype is not None:
            raise GraphError("literal cannot carry both a language tag and a datatype")
        if self.datatype is not None and not _SCHEME_RE.match(self.datatype):
            raise GraphError(f"literal datatype is not an absolute IRI: {self.datatype!r}")

    def __repr__(self) -> str:
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


Term = Union[Iri, BlankNode, Literal]


def term_sort_key(t: Term) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, BlankNode):
        return (1, t.label)
    return (2, t.lexical, t.lang or "", t.datatype or "")


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise GraphError("literal cannot be the subject of a triple")
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise GraphError(f"invalid subject term: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise GraphError(f"predicate must be an IRI, got: {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise GraphError(f"invalid object term: {self.object!r}")

    def sort_key(self) -> tuple:
        return (
            term_sort_key(self.subject),
            term_sort_key(self.predicate),
            term_sort_key(self.object),
        )

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


class Graph:
    """An immutable set of triples plus a prefix map.

    Set semantics: inserting a triple that is already present returns the
    graph unchanged. Iteration is in a stable sorted order.
    """

    __slots__ = ("_triples", "_prefixes")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[Mapping[str, str]] = None,
    ):
        self._triples = frozenset(triples)
        self._prefixes = dict(prefixes or {})

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    def insert(self, t: Triple) -> "Graph":
        if not isinstance(t, Triple):
            raise GraphError(f"expected a Triple, got {type(t).__name__}")
        if t in self._triples:
            return self
        return Graph(self._triples | {t}, self._prefixes)

    def add_all(self, triples: Iterable[Triple]) -> "Graph":
        return Graph(self._triples | frozenset(triples), self._prefixes)

    def with_prefixes(self, prefixes: Mapping[str, str]) -> "Graph":
        merged = dict(self._prefixes)
        merged.update(prefixes)
        return Graph(self._triples, merged)

    def match(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> set[Triple]:
        """Triples agreeing with every bound position; None is a wildcard."""
        return {
            t
            for t in self._triples
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        }

    def blank_nodes(self) -> set[BlankNode]:
        out: set[BlankNode] = set()
        for t in self._triples:
            if isinstance(t.subject, BlankNode):
                out.add(t.subject)
            if isinstance(t.object, BlankNode):
                out.add(t.object)
        return out

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple.sort_key))

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples and self._prefixes == other._prefixes

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples, {len(self._prefixes)} prefixes)"


def _ground(t: Triple) -> bool:
    return not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)


def _color_key(term: Term, colors: dict[BlankNode, tuple]) -> tuple:
    if isinstance(term, BlankNode):
        return ("bnode", colors[term])
    return ("ground", term_sort_key(term))


def _refine_colors(triples: list[Triple], nodes: set[BlankNode]) -> dict[BlankNode, tuple]:
    """Iterative color refinement over blank nodes.

    Colors are plain tuples built from triple structure, so they are
    directly comparable between two different graphs.
    """
    colors: dict[BlankNode, tuple] = {n: () for n in nodes}
    for _ in range(max(1, len(nodes))):
        nxt: dict[BlankNode, tuple] = {}
        for n in nodes:
            sig = []
            for t in triples:
                if t.subject == n:
                    sig.append(("s", t.predicate.value, _color_key(t.object, colors)))
                if t.object == n:
                    sig.append(("o", _color_key(t.subject, colors), t.predicate.value))
            nxt[n] = tuple(sorted(sig))
        if nxt == colors:
            break
        colors = nxt
    return colors


def isomorphic(a: Graph, b: Graph, max_candidates: int = DEFAULT_CANDIDATE_BOUND) -> bool:
    """True iff some bijection on blank nodes maps a's triples onto b's.

    Ground triples must match exactly; prefixes are ignored. Search is
    color refinement followed by backtracking, with each attempted node
    assignment counted against max_candidates (CapacityError beyond it).
    """
    if len(a) != len(b):
        return False
    a_ground = {t for t in a.triples if _ground(t)}
    b_ground = {t for t in b.triples if _ground(t)}
    if a_ground != b_ground:
        return False

    a_open = [t for t in a.triples if not _ground(t)]
    b_open = {t for t in b.triples if not _ground(t)}
    a_nodes = a.blank_nodes()
    b_nodes = b.blank_nodes()
    if len(a_nodes) != len(b_nodes):
        return False
    if not a_nodes:
        return True

    a_colors = _refine_colors(a_open, a_nodes)
    b_colors = _refine_colors(sorted(b_open, key=Triple.sort_key), b_nodes)
    a_classes = sorted(a_colors.values())
    b_classes = sorted(b_colors.values())
    if a_classes != b_classes:
        return False

    # Assign rare-colored nodes first to shrink the branching factor.
    color_freq: dict[tuple, int] = {}
    for c in a_colors.values():
        color_freq[c] = color_freq.get(c, 0) + 1
    order = sorted(a_nodes, key=lambda n: (color_freq[a_colors[n]], n.label))
    index = {n: i for i, n in enumerate(order)}

    # Triples checkable as soon as their last blank node gets assigned.
    check_at: dict[int, list[Triple]] = {i: [] for i in range(len(order))}
    for t in a_open:
        last = max(
            index[x] for x in (t.subject, t.object) if isinstance(x, BlankNode)
        )
        check_at[last].append(t)

    budget = [max_candidates]

    def substituted(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
        s = mapping[t.subject] if isinstance(t.subject, BlankNode) else t.subject
        o = mapping[t.object] if isinstance(t.object, BlankNode) else t.object
        return Triple(s, t.predicate, o)

    def extend(pos: int, mapping: dict[BlankNode, BlankNode], used: set[BlankNode]) -> bool:
        if pos == len(order):
            return True
        node = order[pos]
        for cand in sorted(b_nodes - used, key=lambda n: n.label):
            if b_colors[cand] != a_colors[node]:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise CapacityError(
                    f"isomorphism search exceeded {max_candidates} candidate mappings"
                )
            mapping[node] = cand
            if all(substituted(t, mapping) in b_open for t in check_at[pos]):
                if extend(pos + 1, mapping, used | {cand}):
                    return True
            del mapping[node]
        return False

    return extend(0, {}, set())
