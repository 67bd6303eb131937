import random

import pytest

from mcforge.errors import CapacityError, GraphError
from mcforge.rdf import BlankNode, Graph, Iri, Literal, Triple, isomorphic

P = Iri("http://x/p")
Q = Iri("http://x/q")
A = Iri("http://x/a")
B = Iri("http://x/b")


def test_iri_requires_absolute_form():
    Iri("http://example.org/thing")
    Iri("urn:uuid:1234")
    with pytest.raises(GraphError):
        Iri("relative/path")
    with pytest.raises(GraphError):
        Iri("")
    with pytest.raises(GraphError):
        Iri("http://bad space.org/")


def test_blank_node_label_non_empty():
    BlankNode("b0")
    with pytest.raises(GraphError):
        BlankNode("")


def test_literal_lang_and_datatype_are_exclusive():
    Literal("plain")
    Literal("hi", lang="en")
    Literal("5", datatype="http://www.w3.org/2001/XMLSchema#integer")
    with pytest.raises(GraphError):
        Literal("x", lang="en", datatype="http://www.w3.org/2001/XMLSchema#string")
    with pytest.raises(GraphError):
        Literal("x", datatype="notaniri")


def test_triple_position_rules():
    Triple(A, P, Literal("ok"))
    Triple(BlankNode("n"), P, B)
    with pytest.raises(GraphError):
        Triple(Literal("no"), P, B)  # literal subject
    with pytest.raises(GraphError):
        Triple(A, BlankNode("n"), B)  # non-IRI predicate
    with pytest.raises(GraphError):
        Triple(A, Literal("no"), B)


def test_graph_set_semantics():
    g = Graph()
    g1 = g.insert(Triple(A, P, B))
    g2 = g1.insert(Triple(A, P, B))
    assert g2 is g1  # already present: unchanged
    assert len(g1.triples) == 1
    assert len(g.triples) == 0  # original untouched


def test_graph_match_wildcards():
    g = Graph([Triple(A, P, B), Triple(A, Q, B), Triple(B, P, A)])
    assert len(g.match(s=A)) == 2
    assert len(g.match(p=P)) == 2
    assert g.match(s=A, p=Q, o=B) == {Triple(A, Q, B)}
    assert g.match(o=Iri("http://x/none")) == set()


def test_graph_iteration_is_sorted_and_stable():
    t1 = Triple(B, P, A)
    t2 = Triple(A, P, B)
    t3 = Triple(A, P, Literal("z"))
    g = Graph([t1, t2, t3])
    assert list(g) == list(Graph([t3, t1, t2]))


def test_graph_equality_includes_prefixes():
    g1 = Graph([Triple(A, P, B)], {"ex": "http://x/"})
    g2 = Graph([Triple(A, P, B)], {"ex": "http://x/"})
    g3 = Graph([Triple(A, P, B)], {})
    assert g1 == g2
    assert g1 != g3


def test_with_prefixes_overlays():
    g = Graph([], {"a": "http://a/"})
    g2 = g.with_prefixes({"b": "http://b/"})
    assert g2.prefixes == {"a": "http://a/", "b": "http://b/"}
    assert g.prefixes == {"a": "http://a/"}


def test_isomorphic_ground_graphs():
    g1 = Graph([Triple(A, P, B)])
    g2 = Graph([Triple(A, P, B)])
    g3 = Graph([Triple(A, P, A)])
    assert isomorphic(g1, g2)
    assert not isomorphic(g1, g3)


def test_isomorphic_ignores_blank_labels():
    g1 = Graph([Triple(BlankNode("x"), P, B), Triple(BlankNode("x"), Q, B)])
    g2 = Graph([Triple(BlankNode("y"), P, B), Triple(BlankNode("y"), Q, B)])
    assert isomorphic(g1, g2)


def test_isomorphic_distinguishes_structure():
    # one node with two edges vs two nodes with one edge each
    g1 = Graph([Triple(BlankNode("x"), P, B), Triple(BlankNode("x"), Q, B)])
    g2 = Graph([Triple(BlankNode("x"), P, B), Triple(BlankNode("y"), Q, B)])
    assert not isomorphic(g1, g2)


def test_isomorphic_bnode_count_mismatch():
    g1 = Graph([Triple(BlankNode("x"), P, B)])
    g2 = Graph([Triple(BlankNode("x"), P, B), Triple(BlankNode("y"), P, B)])
    assert not isomorphic(g1, g2)


def test_isomorphic_cycle_vs_self_loops():
    x, y = BlankNode("x"), BlankNode("y")
    u, v = BlankNode("u"), BlankNode("v")
    two_cycle = Graph([Triple(x, P, y), Triple(y, P, x)])
    self_loops = Graph([Triple(u, P, u), Triple(v, P, v)])
    assert not isomorphic(two_cycle, self_loops)


def test_isomorphic_candidate_budget_is_enforced():
    x, y = BlankNode("x"), BlankNode("y")
    u, v = BlankNode("u"), BlankNode("v")
    two_cycle = Graph([Triple(x, P, y), Triple(y, P, x)])
    self_loops = Graph([Triple(u, P, u), Triple(v, P, v)])
    # refinement cannot split these colors; rejection takes 4 candidate tries
    with pytest.raises(CapacityError):
        isomorphic(two_cycle, self_loops, max_candidates=3)


def _random_graph(rng: random.Random) -> Graph:
    iris = [Iri(f"http://t/{i}") for i in range(4)]
    preds = [Iri(f"http://t/p{i}") for i in range(3)]
    bnodes = [BlankNode(f"n{i}") for i in range(rng.randint(1, 5))]
    triples = set()
    for _ in range(rng.randint(1, 25)):
        subject = rng.choice(iris + bnodes)
        obj = rng.choice(iris + bnodes + [Literal(str(rng.randint(0, 9)))])
        triples.add(Triple(subject, rng.choice(preds), obj))
    return Graph(triples)


def _rename_blanks(g: Graph, rng: random.Random) -> Graph:
    names = sorted(n.label for n in g.blank_nodes())
    shuffled = names[:]
    rng.shuffle(shuffled)
    mapping = {old: new for old, new in zip(names, shuffled)}

    def rename(term):
        if isinstance(term, BlankNode):
            return BlankNode("r_" + mapping[term.label])
        return term

    return Graph(
        Triple(rename(t.subject), t.predicate, rename(t.object)) for t in g
    )


def test_isomorphic_under_random_blank_renaming():
    rng = random.Random(4021)
    for _ in range(60):
        g = _random_graph(rng)
        assert isomorphic(g, _rename_blanks(g, rng))


def test_non_isomorphic_after_dropping_a_triple():
    rng = random.Random(977)
    checked = 0
    while checked < 40:
        g = _random_graph(rng)
        if len(g.triples) < 2:
            continue
        dropped = list(g)[rng.randrange(len(g.triples))]
        smaller = Graph(set(g.triples) - {dropped})
        assert not isomorphic(g, smaller)
        checked += 1
