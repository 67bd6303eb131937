"""Structured ontology view over a parsed graph.

extract() indexes the closed construct set this engine understands:
class declarations, subclass axioms (named superclasses and existential
part-of style restrictions reconstructed from blank nodes), object
properties, rdfs:label/rdfs:comment annotations, individual typings, and
owl:imports. Everything else is ignored but counted in a warnings list so
broken fixtures cannot fail silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from mcforge.errors import NotFoundError
from mcforge.rdf.core import (
    OWL_NS,
    RDF_NS,
    RDFS_NS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
)

RDF_TYPE = Iri(RDF_NS + "type")
RDFS_SUBCLASSOF = Iri(RDFS_NS + "subClassOf")
RDFS_LABEL = Iri(RDFS_NS + "label")
RDFS_COMMENT = Iri(RDFS_NS + "comment")
OWL_CLASS = Iri(OWL_NS + "Class")
OWL_RESTRICTION = Iri(OWL_NS + "Restriction")
OWL_ON_PROPERTY = Iri(OWL_NS + "onProperty")
OWL_SOME_VALUES_FROM = Iri(OWL_NS + "someValuesFrom")
OWL_OBJECT_PROPERTY = Iri(OWL_NS + "ObjectProperty")
OWL_ONTOLOGY = Iri(OWL_NS + "Ontology")
OWL_IMPORTS = Iri(OWL_NS + "imports")

# IRI of a named class; kept as a plain string throughout.
ClassIri = str


@dataclass(frozen=True)
class ExistentialRestriction:
    """A someValuesFrom class expression: things related via property to a filler."""

    property: str
    filler: ClassIri


@dataclass(frozen=True)
class SubClassAxiom:
    sub: ClassIri
    sup: Union[ClassIri, ExistentialRestriction]

    @property
    def is_restriction(self) -> bool:
        return isinstance(self.sup, ExistentialRestriction)


@dataclass(frozen=True)
class ClassAnnotations:
    label: Optional[str] = None
    comment: Optional[str] = None


@dataclass
class OntologyModel:
    classes: frozenset[ClassIri]
    axioms: frozenset[SubClassAxiom]
    object_properties: frozenset[str]
    annotations: dict[ClassIri, ClassAnnotations]
    individuals: dict[ClassIri, frozenset[str]]
    imports: tuple[str, ...]
    warnings: list[str]
    source_graph: Graph = field(repr=False)

    def named_axioms(self) -> list[SubClassAxiom]:
        return sorted(
            (a for a in self.axioms if not a.is_restriction),
            key=lambda a: (a.sub, a.sup),
        )

    def restriction_axioms(self) -> list[SubClassAxiom]:
        return sorted(
            (a for a in self.axioms if a.is_restriction),
            key=lambda a: (a.sub, a.sup.property, a.sup.filler),
        )


def extract(graph: Graph) -> OntologyModel:
    """Index the recognized construct set of a parsed ontology graph."""
    classes: set[str] = set()
    axioms: set[SubClassAxiom] = set()
    properties: set[str] = set()
    labels: dict[str, str] = {}
    comments: dict[str, str] = {}
    individuals: dict[str, set[str]] = {}
    imports: list[str] = []
    warnings: list[str] = []

    triples = list(graph)  # sorted, so warning order is stable

    # Reconstruct restriction nodes first; subClassOf handling needs them.
    restriction_nodes: set[BlankNode | Iri] = set()
    on_property: dict[BlankNode, list[Triple]] = {}
    some_values: dict[BlankNode, list[Triple]] = {}
    for t in triples:
        if t.predicate == RDF_TYPE and t.object == OWL_RESTRICTION:
            restriction_nodes.add(t.subject)
        elif t.predicate == OWL_ON_PROPERTY and isinstance(t.subject, BlankNode):
            on_property.setdefault(t.subject, []).append(t)
        elif t.predicate == OWL_SOME_VALUES_FROM and isinstance(t.subject, BlankNode):
            some_values.setdefault(t.subject, []).append(t)

    def restriction_for(node: BlankNode) -> Optional[ExistentialRestriction]:
        if node not in restriction_nodes:
            warnings.append(f"blank superclass _:{node.label} is not typed owl:Restriction")
            return None
        props = on_property.get(node, [])
        fillers = some_values.get(node, [])
        if len(props) != 1 or len(fillers) != 1:
            warnings.append(
                f"malformed restriction _:{node.label}: needs exactly one owl:onProperty "
                f"and one owl:someValuesFrom (found {len(props)} and {len(fillers)})"
            )
            return None
        prop, filler = props[0].object, fillers[0].object
        if not isinstance(prop, Iri) or not isinstance(filler, Iri):
            warnings.append(f"restriction _:{node.label} uses a non-IRI property or filler")
            return None
        return ExistentialRestriction(prop.value, filler.value)

    consumed_restrictions: set[BlankNode] = set()
    deferred_typings: list[Triple] = []

    for t in triples:
        s, p, o = t.subject, t.predicate, t.object
        if p == RDF_TYPE:
            if o == OWL_CLASS:
                if isinstance(s, Iri):
                    classes.add(s.value)
                else:
                    warnings.append(f"ignored anonymous class declaration _:{s.label}")
            elif o == OWL_OBJECT_PROPERTY:
                if isinstance(s, Iri):
                    properties.add(s.value)
                else:
                    warnings.append(f"ignored anonymous object property _:{s.label}")
            elif o in (OWL_RESTRICTION, OWL_ONTOLOGY):
                pass  # restrictions resolved above; ontology headers anchor imports
            else:
                deferred_typings.append(t)
        elif p == RDFS_SUBCLASSOF:
            if not isinstance(s, Iri):
                warnings.append("ignored subclass axiom with a blank subject")
                continue
            if isinstance(o, Iri):
                axioms.add(SubClassAxiom(s.value, o.value))
                classes.update((s.value, o.value))
            elif isinstance(o, BlankNode):
                restriction = restriction_for(o)
                consumed_restrictions.add(o)
                if restriction is not None:
                    axioms.add(SubClassAxiom(s.value, restriction))
                    classes.update((s.value, restriction.filler))
            else:
                warnings.append(f"ignored subclass axiom with literal superclass on <{s.value}>")
        elif p in (RDFS_LABEL, RDFS_COMMENT):
            if not isinstance(o, Literal):
                warnings.append(f"ignored non-literal {p.value.rsplit('#', 1)[-1]} annotation")
            elif isinstance(s, Iri):
                target = labels if p == RDFS_LABEL else comments
                target.setdefault(s.value, o.lexical)
        elif p == OWL_IMPORTS:
            if isinstance(o, Iri):
                imports.append(o.value)
            else:
                warnings.append("ignored owl:imports with a non-IRI target")
        elif p in (OWL_ON_PROPERTY, OWL_SOME_VALUES_FROM):
            pass  # consumed by restriction reconstruction
        else:
            warnings.append(f"ignored triple with unrecognized predicate <{p.value}>")

    for node in sorted(restriction_nodes, key=lambda n: getattr(n, "label", str(n))):
        if isinstance(node, Iri):
            warnings.append(f"ignored named restriction <{node.value}>; only blank restrictions are used")
        elif node not in consumed_restrictions:
            warnings.append(f"restriction _:{node.label} is not referenced by any subclass axiom")

    for t in deferred_typings:
        s, o = t.subject, t.object
        if isinstance(o, Iri) and o.value in classes:
            if isinstance(s, Iri):
                individuals.setdefault(o.value, set()).add(s.value)
            else:
                warnings.append(f"ignored blank-node individual _:{s.label}")
        else:
            name = o.value if isinstance(o, Iri) else repr(o)
            warnings.append(f"ignored rdf:type to unknown class {name}")

    annotations = {
        c: ClassAnnotations(label=labels.get(c), comment=comments.get(c))
        for c in classes
    }
    return OntologyModel(
        classes=frozenset(classes),
        axioms=frozenset(axioms),
        object_properties=frozenset(properties),
        annotations=annotations,
        individuals={c: frozenset(inds) for c, inds in individuals.items()},
        imports=tuple(imports),
        warnings=warnings,
        source_graph=graph,
    )


def class_annotations(model: OntologyModel, class_iri: ClassIri) -> ClassAnnotations:
    """Label/comment pair for a known class; absent values stay None."""
    if class_iri not in model.classes:
        raise NotFoundError(f"unknown class <{class_iri}>")
    return model.annotations.get(class_iri, ClassAnnotations())
