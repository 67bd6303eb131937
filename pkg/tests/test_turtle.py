import pytest

from mcforge.errors import ParseFailure
from mcforge.rdf import RDF_NS, XSD_NS, BlankNode, Iri, Literal, Triple, parse_turtle

RDF_TYPE = Iri(RDF_NS + "type")
FIRST = Iri(RDF_NS + "first")
REST = Iri(RDF_NS + "rest")
NIL = Iri(RDF_NS + "nil")


def test_single_triple():
    g = parse_turtle("<http://x/a> <http://x/p> <http://x/b> .")
    assert g.triples == {Triple(Iri("http://x/a"), Iri("http://x/p"), Iri("http://x/b"))}


def test_prefixed_names_and_a_keyword():
    g = parse_turtle(
        "@prefix ex: <http://x/> .\n"
        "ex:a a ex:Thing .\n"
    )
    assert Triple(Iri("http://x/a"), RDF_TYPE, Iri("http://x/Thing")) in g.triples
    assert g.prefixes == {"ex": "http://x/"}


def test_predicate_and_object_lists():
    g = parse_turtle(
        "@prefix ex: <http://x/> .\n"
        "ex:a ex:p ex:b, ex:c ;\n"
        "     ex:q ex:d .\n"
    )
    assert len(g.triples) == 3
    assert len(g.match(p=Iri("http://x/p"))) == 2


def test_string_escapes():
    g = parse_turtle('<http://x/a> <http://x/p> "line1\\nline2\\t\\"q\\" \\u0041\\U0001F600" .')
    (t,) = g.triples
    assert t.object == Literal('line1\nline2\t"q" A\U0001F600')


def test_long_strings_keep_newlines_and_quotes():
    g = parse_turtle('<http://x/a> <http://x/p> """multi\nline ""quoted"" text""" .')
    (t,) = g.triples
    assert t.object == Literal('multi\nline ""quoted"" text')


def test_language_tag_and_datatype():
    g = parse_turtle(
        '<http://x/a> <http://x/p> "bonjour"@fr .\n'
        '<http://x/a> <http://x/q> "5"^^<http://www.w3.org/2001/XMLSchema#decimal> .\n'
    )
    objects = {t.object for t in g.triples}
    assert Literal("bonjour", lang="fr") in objects
    assert Literal("5", datatype=XSD_NS + "decimal") in objects


def test_numeric_and_boolean_shorthand():
    g = parse_turtle("<http://x/a> <http://x/p> 42 .\n<http://x/a> <http://x/q> true .")
    objects = {t.object for t in g.triples}
    assert Literal("42", datatype=XSD_NS + "integer") in objects
    assert Literal("true", datatype=XSD_NS + "boolean") in objects


def test_collection_expands_to_list_triples():
    g = parse_turtle("<http://x/a> <http://x/p> (1 2) .")
    firsts = g.match(p=FIRST)
    rests = g.match(p=REST)
    assert len(firsts) == 2 and len(rests) == 2
    assert any(t.object == NIL for t in rests)
    assert len(g.triples) == 5


def test_empty_collection_is_nil():
    g = parse_turtle("<http://x/a> <http://x/p> () .")
    (t,) = g.triples
    assert t.object == NIL


def test_bracketed_blank_nodes_share_one_node():
    g = parse_turtle(
        "@prefix ex: <http://x/> .\n"
        "ex:a ex:p [ ex:q ex:b ; ex:r ex:c ] .\n"
    )
    assert len(g.triples) == 3
    assert len(g.blank_nodes()) == 1


def test_bare_bracket_subject():
    g = parse_turtle("[ <http://x/p> <http://x/b> ] .")
    (t,) = g.triples
    assert isinstance(t.subject, BlankNode)


def test_labelled_blank_nodes_are_shared_across_statements():
    g = parse_turtle(
        "_:n <http://x/p> <http://x/b> .\n"
        "_:n <http://x/q> <http://x/c> .\n"
    )
    assert len(g.blank_nodes()) == 1


def test_base_resolution():
    g = parse_turtle("@base <http://ex.org/dir/> .\n<rel> <http://x/p> <other> .")
    (t,) = g.triples
    assert t.subject == Iri("http://ex.org/dir/rel")
    assert t.object == Iri("http://ex.org/dir/other")


def test_base_argument_used_without_directive():
    g = parse_turtle("<rel> <http://x/p> <http://x/b> .", base="http://srv/root/")
    (t,) = g.triples
    assert t.subject == Iri("http://srv/root/rel")


def test_relative_iri_without_base_is_an_error():
    with pytest.raises(ParseFailure):
        parse_turtle("<rel> <http://x/p> <http://x/b> .")


def test_comments_are_skipped():
    g = parse_turtle("# leading\n<http://x/a> <http://x/p> <http://x/b> . # trailing")
    assert len(g.triples) == 1


def test_unknown_prefix_is_positioned():
    with pytest.raises(ParseFailure) as info:
        parse_turtle("nope:a <http://x/p> nope:b .")
    diag = info.value.diagnostics[0]
    assert diag.line == 1
    assert "nope" in diag.message


def test_missing_dot_diagnostic():
    with pytest.raises(ParseFailure) as info:
        parse_turtle("<http://x/a> <http://x/p> <http://x/b>")
    assert any("." in d.message or "end" in d.message.lower() for d in info.value.diagnostics)


def test_recovery_collects_multiple_diagnostics():
    source = (
        "<http://x/a> <http://x/p> .\n"          # missing object
        "<http://x/c> <http://x/q> <http://x/d> .\n"  # fine
        "bad:e <http://x/r> <http://x/f> .\n"    # unknown prefix
    )
    with pytest.raises(ParseFailure) as info:
        parse_turtle(source)
    lines = {d.line for d in info.value.diagnostics}
    assert len(info.value.diagnostics) >= 2
    assert 1 in lines and 3 in lines


def test_diagnostic_format():
    with pytest.raises(ParseFailure) as info:
        parse_turtle("<http://x/a> <http://x/p> <http://x/b>")
    rendered = str(info.value.diagnostics[0])
    assert rendered.count(":") >= 2  # line:col: severity: message


def test_unterminated_string_reported():
    with pytest.raises(ParseFailure):
        parse_turtle('<http://x/a> <http://x/p> "never closed .')


def test_illegal_iri_character_reported():
    with pytest.raises(ParseFailure) as info:
        parse_turtle("<http://x/with space> <http://x/p> <http://x/b> .")
    assert any("IRI" in d.message for d in info.value.diagnostics)
