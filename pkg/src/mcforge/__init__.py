"""mcforge: an ontology-driven publishing engine for model card reports.

Annotated text snippets are linked into a computable report by querying
an OWL-style ontology for part-of relations, then exported as Turtle,
N-Triples, RDF/XML, or JSON-LD.
"""

__version__ = "0.1.0"
