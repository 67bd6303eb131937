"""Turtle-subset parser.

Supported: @prefix/@base, the 'a' keyword, predicate lists (';'), object
lists (','), anonymous blank nodes '[...]', collections '(...)', short and
long double-quoted strings with escapes, language tags, '^^' datatypes,
integer and boolean shorthand, and comments. That is the smallest subset
that parses real OWL-in-Turtle documents; anything else produces an error
diagnostic with a source position.

The parser never aborts mid-stream: on a syntax error it records a
diagnostic, skips to the next statement terminator, and keeps going, so a
broken document yields every independent problem it can find.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional
from urllib.parse import urljoin

from mcforge.errors import GraphError, ParseDiagnostic, ParseFailure
from mcforge.rdf.core import (
    RDF_NS,
    XSD_NS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
)

RDF_TYPE = Iri(RDF_NS + "type")
RDF_FIRST = Iri(RDF_NS + "first")
RDF_REST = Iri(RDF_NS + "rest")
RDF_NIL = Iri(RDF_NS + "nil")

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")

_PNAME_RE = re.compile(
    r"(?P<prefix>[A-Za-z][A-Za-z0-9_\-]*)?:"
    r"(?P<local>[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?"
)
_BLANK_RE = re.compile(r"_:(?P<label>[A-Za-z0-9_][A-Za-z0-9_.\-]*)")
_INTEGER_RE = re.compile(r"[+-]?[0-9]+")
_LANGTAG_RE = re.compile(r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*")

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(frozen=True)
class _Token:
    kind: str  # IRIREF PNAME BLANK STRING INTEGER LANGTAG DTYPE PUNCT DIRECTIVE A EOF
    value: object
    line: int
    column: int


class _LexError(Exception):
    def __init__(self, line: int, column: int, message: str):
        self.diagnostic = ParseDiagnostic(line, column, message)
        super().__init__(message)


class _Lexer:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.src):
                if self.src[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _skip_trivia(self) -> None:
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.src) and self.src[self.pos] != "\n":
                    self._advance()
            else:
                return

    def _read_string(self) -> str:
        # Caller guarantees src[pos] == '"'.
        start_line, start_col = self.line, self.col
        long_form = self.src.startswith('"""', self.pos)
        quote = '"""' if long_form else '"'
        self._advance(len(quote))
        out: list[str] = []
        while True:
            if self.pos >= len(self.src):
                raise _LexError(start_line, start_col, "unterminated string literal")
            if self.src.startswith(quote, self.pos) and not (
                long_form and self.src.startswith('""""', self.pos)
            ):
                self._advance(len(quote))
                return "".join(out)
            ch = self.src[self.pos]
            if not long_form and ch in "\n\r":
                raise _LexError(start_line, start_col, "newline in short string literal")
            if ch == "\\":
                self._advance()
                if self.pos >= len(self.src):
                    raise _LexError(self.line, self.col, "dangling escape at end of input")
                esc = self.src[self.pos]
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self._advance()
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    hexpart = self.src[self.pos + 1 : self.pos + 1 + width]
                    if len(hexpart) != width or not re.fullmatch(r"[0-9A-Fa-f]+", hexpart):
                        raise _LexError(self.line, self.col, f"bad \\{esc} escape")
                    out.append(chr(int(hexpart, 16)))
                    self._advance(1 + width)
                else:
                    raise _LexError(self.line, self.col, f"unknown escape '\\{esc}'")
            else:
                out.append(ch)
                self._advance()

    def next_token(self) -> _Token:
        self._skip_trivia()
        line, col = self.line, self.col
        if self.pos >= len(self.src):
            return _Token("EOF", None, line, col)
        src, pos = self.src, self.pos
        ch = src[pos]

        if ch == "<":
            end = src.find(">", pos + 1)
            if end == -1:
                raise _LexError(line, col, "unterminated IRI reference")
            body = src[pos + 1 : end]
            if any(c in body for c in " \t\n\r<\"{}|^`"):
                raise _LexError(line, col, f"illegal character in IRI <{body}>")
            self._advance(end - pos + 1)
            return _Token("IRIREF", body, line, col)
        if ch == '"':
            value = self._read_string()
            return _Token("STRING", value, line, col)
        if ch in ".;,[]()":
            self._advance()
            return _Token("PUNCT", ch, line, col)
        if src.startswith("^^", pos):
            self._advance(2)
            return _Token("DTYPE", "^^", line, col)
        if ch == "@":
            word = src[pos : pos + 8]
            if word.startswith("@prefix") or word.startswith("@base"):
                name = "@prefix" if word.startswith("@prefix") else "@base"
                self._advance(len(name))
                return _Token("DIRECTIVE", name, line, col)
            m = _LANGTAG_RE.match(src, pos)
            if m:
                self._advance(m.end() - pos)
                return _Token("LANGTAG", m.group()[1:], line, col)
            raise _LexError(line, col, "malformed '@' directive or language tag")
        if src.startswith("_:", pos):
            m = _BLANK_RE.match(src, pos)
            if not m:
                raise _LexError(line, col, "malformed blank node label")
            self._advance(m.end() - pos)
            return _Token("BLANK", m.group("label"), line, col)
        m = _INTEGER_RE.match(src, pos)
        if m and (ch.isdigit() or (ch in "+-" and pos + 1 < len(src) and src[pos + 1].isdigit())):
            after = src[m.end() : m.end() + 2]
            if after[:1] in ("e", "E") or (after[:1] == "." and after[1:2].isdigit()):
                raise _LexError(line, col, "only integer numeric literals are supported")
            self._advance(m.end() - pos)
            return _Token("INTEGER", m.group(), line, col)
        # Bare word: 'a', 'true', 'false', or a prefixed name.
        if src.startswith("a", pos) and (
            pos + 1 >= len(src) or not (src[pos + 1].isalnum() or src[pos + 1] in "_:-.")
        ):
            self._advance()
            return _Token("A", "a", line, col)
        for word in ("true", "false"):
            if src.startswith(word, pos) and (
                pos + len(word) >= len(src)
                or not (src[pos + len(word)].isalnum() or src[pos + len(word)] in "_:-.")
            ):
                self._advance(len(word))
                return _Token("BOOLEAN", word, line, col)
        m = _PNAME_RE.match(src, pos)
        if m:
            self._advance(m.end() - pos)
            return _Token("PNAME", (m.group("prefix") or "", m.group("local") or ""), line, col)
        raise _LexError(line, col, f"unexpected character {ch!r}")


class _Parser:
    def __init__(self, source: str, base: Optional[str]):
        self.lexer = _Lexer(source)
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self.diagnostics: list[ParseDiagnostic] = []
        self._bnode_map: dict[str, BlankNode] = {}
        self._bnode_counter = 0
        self.tok = self.lexer.next_token()

    class _Bail(Exception):
        pass

    def _error(self, message: str, tok: Optional[_Token] = None) -> "_Parser._Bail":
        t = tok or self.tok
        self.diagnostics.append(ParseDiagnostic(t.line, t.column, message))
        return self._Bail()

    def _next(self) -> None:
        self.tok = self.lexer.next_token()

    def _expect_punct(self, ch: str) -> None:
        if self.tok.kind != "PUNCT" or self.tok.value != ch:
            raise self._error(f"expected '{ch}'")
        self._next()

    def _fresh_bnode(self) -> BlankNode:
        node = BlankNode(f"b{self._bnode_counter}")
        self._bnode_counter += 1
        return node

    def _labelled_bnode(self, label: str) -> BlankNode:
        if label not in self._bnode_map:
            self._bnode_map[label] = self._fresh_bnode()
        return self._bnode_map[label]

    def _resolve_iri(self, ref: str, tok: _Token) -> Iri:
        if _SCHEME_RE.match(ref):
            return Iri(ref)
        if self.base is None:
            raise self._error(f"relative IRI <{ref}> with no base", tok)
        return Iri(urljoin(self.base, ref))

    def _expand_pname(self, prefix: str, local: str, tok: _Token) -> Iri:
        if prefix not in self.prefixes:
            raise self._error(f"undefined prefix '{prefix}:'", tok)
        return Iri(self.prefixes[prefix] + local)

    def parse(self) -> tuple[list[Triple], dict[str, str]]:
        while self.tok.kind != "EOF":
            try:
                if self.tok.kind == "DIRECTIVE":
                    self._directive()
                else:
                    self._triples_statement()
            except self._Bail:
                self._recover()
            except _LexError as exc:
                self.diagnostics.append(exc.diagnostic)
                self._recover()
        return self.triples, dict(self.prefixes)

    def _recover(self) -> None:
        # Skip to the statement terminator so later statements still parse.
        while True:
            try:
                if self.tok.kind == "EOF":
                    return
                if self.tok.kind == "PUNCT" and self.tok.value == ".":
                    self._next()
                    return
                self._next()
            except _LexError:
                self.lexer._advance()
                self.tok = _Token("PUNCT", "?", self.lexer.line, self.lexer.col)

    def _directive(self) -> None:
        name = self.tok.value
        self._next()
        if name == "@prefix":
            if self.tok.kind != "PNAME" or self.tok.value[1]:
                raise self._error("expected 'prefix:' after @prefix")
            prefix = self.tok.value[0]
            self._next()
            if self.tok.kind != "IRIREF":
                raise self._error("expected IRI after prefix name")
            ns = self._resolve_iri(self.tok.value, self.tok).value
            self._next()
            self.prefixes[prefix] = ns
        else:  # @base
            if self.tok.kind != "IRIREF":
                raise self._error("expected IRI after @base")
            self.base = self._resolve_iri(self.tok.value, self.tok).value
            self._next()
        self._expect_punct(".")

    def _triples_statement(self) -> None:
        if self.tok.kind == "PUNCT" and self.tok.value == "[":
            subject = self._bracketed_bnode()
            # A bare '[...]' may close the statement without predicates.
            if self.tok.kind == "PUNCT" and self.tok.value == ".":
                self._next()
                return
        else:
            subject = self._subject()
        self._predicate_object_list(subject)
        self._expect_punct(".")

    def _subject(self) -> Term:
        tok = self.tok
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._expand_pname(tok.value[0], tok.value[1], tok)
        if tok.kind == "BLANK":
            self._next()
            return self._labelled_bnode(tok.value)
        if tok.kind == "PUNCT" and tok.value == "(":
            return self._collection()
        raise self._error("expected subject (IRI, blank node, or collection)")

    def _predicate(self) -> Iri:
        tok = self.tok
        if tok.kind == "A":
            self._next()
            return RDF_TYPE
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._expand_pname(tok.value[0], tok.value[1], tok)
        raise self._error("expected predicate IRI")

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._predicate()
            while True:
                obj = self._object()
                self._emit(subject, predicate, obj)
                if self.tok.kind == "PUNCT" and self.tok.value == ",":
                    self._next()
                    continue
                break
            if self.tok.kind == "PUNCT" and self.tok.value == ";":
                self._next()
                # Turtle allows a trailing ';' before '.' or ']'.
                if self.tok.kind == "PUNCT" and self.tok.value in ".]":
                    return
                continue
            return

    def _object(self) -> Term:
        tok = self.tok
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._expand_pname(tok.value[0], tok.value[1], tok)
        if tok.kind == "BLANK":
            self._next()
            return self._labelled_bnode(tok.value)
        if tok.kind == "PUNCT" and tok.value == "[":
            return self._bracketed_bnode()
        if tok.kind == "PUNCT" and tok.value == "(":
            return self._collection()
        if tok.kind == "STRING":
            self._next()
            return self._literal_tail(tok.value)
        if tok.kind == "INTEGER":
            self._next()
            return Literal(tok.value, datatype=XSD_NS + "integer")
        if tok.kind == "BOOLEAN":
            self._next()
            return Literal(tok.value, datatype=XSD_NS + "boolean")
        raise self._error("expected object term")

    def _literal_tail(self, value: str) -> Literal:
        if self.tok.kind == "LANGTAG":
            lang = self.tok.value
            self._next()
            return Literal(value, lang=lang)
        if self.tok.kind == "DTYPE":
            self._next()
            tok = self.tok
            if tok.kind == "IRIREF":
                self._next()
                return Literal(value, datatype=self._resolve_iri(tok.value, tok).value)
            if tok.kind == "PNAME":
                self._next()
                return Literal(
                    value, datatype=self._expand_pname(tok.value[0], tok.value[1], tok).value
                )
            raise self._error("expected datatype IRI after '^^'")
        return Literal(value)

    def _bracketed_bnode(self) -> BlankNode:
        self._expect_punct("[")
        node = self._fresh_bnode()
        if self.tok.kind == "PUNCT" and self.tok.value == "]":
            self._next()
            return node
        self._predicate_object_list(node)
        self._expect_punct("]")
        return node

    def _collection(self) -> Term:
        self._expect_punct("(")
        items: list[Term] = []
        while not (self.tok.kind == "PUNCT" and self.tok.value == ")"):
            if self.tok.kind == "EOF":
                raise self._error("unterminated collection")
            items.append(self._object())
        self._next()
        head: Term = RDF_NIL
        for item in reversed(items):
            node = self._fresh_bnode()
            self._emit(node, RDF_FIRST, item)
            self._emit(node, RDF_REST, head)
            head = node
        return head

    def _emit(self, s: Term, p: Iri, o: Term) -> None:
        try:
            self.triples.append(Triple(s, p, o))
        except GraphError as exc:
            raise self._error(str(exc))


def parse_turtle(source: str, base: Optional[str] = None) -> Graph:
    """Parse a Turtle document into a Graph.

    Blank node labels are freshly generated; @prefix declarations populate
    the graph's prefix map. Raises ParseFailure carrying positioned
    diagnostics when the document is not in the supported subset.
    """
    parser = None
    try:
        parser = _Parser(source, base)
        triples, prefixes = parser.parse()
    except _LexError as exc:
        earlier = parser.diagnostics if parser is not None else []
        raise ParseFailure(earlier + [exc.diagnostic])
    if parser.diagnostics:
        raise ParseFailure(parser.diagnostics)
    return Graph(triples, prefixes)


def parse_ntriples(source: str) -> Graph:
    """Parse an N-Triples document (a syntactic subset of Turtle)."""
    return parse_turtle(source, base=None)
