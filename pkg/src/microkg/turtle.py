"""Minimal Turtle reader, independent of the graph writer.

Covers the constructs needed to audit reified statement graphs: prefix
directives, prefixed names and IRIs, string/numeric/boolean literals with
language tags and datatypes, predicate and object lists, blank nodes, and
collections. Terms parse to plain tuples:

    ("iri", absolute_iri) | ("bnode", label) | ("lit", value, datatype_iri)
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

__all__ = ["Term", "TurtleParseError", "parse_turtle", "parse_turtle_text"]

Term = tuple

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_PN_LOCAL_EXTRA = set("-_.%:")
_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class TurtleParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class _Tok:
    kind: str
    value: str
    line: int


def _tokenize(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    i, n, line = 0, len(text), 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "<":
            j = text.find(">", i + 1)
            if j < 0:
                raise TurtleParseError("unterminated IRI", line)
            tokens.append(_Tok("iri", text[i + 1 : j], line))
            i = j + 1
            continue
        if ch in "\"'":
            quote = ch
            if text[i : i + 3] == quote * 3:
                end = text.find(quote * 3, i + 3)
                if end < 0:
                    raise TurtleParseError("unterminated long string", line)
                raw = text[i + 3 : end]
                line += raw.count("\n")
                tokens.append(_Tok("string", _unescape(raw, line), line))
                i = end + 3
                continue
            j = i + 1
            buf = []
            while j < n and text[j] != quote:
                if text[j] == "\\" and j + 1 < n:
                    buf.append(text[j : j + 2])
                    j += 2
                elif text[j] == "\n":
                    raise TurtleParseError("newline in string", line)
                else:
                    buf.append(text[j])
                    j += 1
            if j >= n:
                raise TurtleParseError("unterminated string", line)
            tokens.append(_Tok("string", _unescape("".join(buf), line), line))
            i = j + 1
            continue
        if ch == "@":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "-"):
                j += 1
            tokens.append(_Tok("at", text[i + 1 : j], line))
            i = j
            continue
        if ch in ".;,[]()":
            # A dot can also start a decimal like ".5"; treat as punctuation
            # unless followed by a digit.
            if ch == "." and i + 1 < n and text[i + 1].isdigit():
                pass  # fall through to the number scanner
            else:
                tokens.append(_Tok(ch, ch, line))
                i += 1
                continue
        if ch == "^" and text[i : i + 2] == "^^":
            tokens.append(_Tok("^^", "^^", line))
            i += 2
            continue
        if ch.isdigit() or ch in "+-." and _looks_numeric(text, i):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] in ".eE+-"):
                # Stop at a statement-terminating dot (digit dot whitespace).
                if text[j] == "." and (j + 1 >= n or not (text[j + 1].isdigit() or text[j + 1] in "eE")):
                    break
                j += 2 if text[j] in "eE" and j + 1 < n and text[j + 1] in "+-" else 1
            tokens.append(_Tok("number", text[i:j], line))
            i = j
            continue
        # prefixed name, bare keyword (a, true, false), or blank node label
        j = i
        while j < n and (text[j].isalnum() or text[j] in _PN_LOCAL_EXTRA or ord(text[j]) > 127 or text[j] == "\\"):
            if text[j] == "\\" and j + 1 < n:
                j += 2
                continue
            j += 1
        if j == i:
            raise TurtleParseError(f"unexpected character {ch!r}", line)
        word = text[i:j]
        if word.endswith("."):
            # PN_LOCAL cannot end in '.': the dot terminates the statement.
            tokens.append(_Tok("name", word[:-1], line))
            tokens.append(_Tok(".", ".", line))
        else:
            tokens.append(_Tok("name", word, line))
        i = j
        continue
    return tokens


def _looks_numeric(text: str, i: int) -> bool:
    if text[i].isdigit():
        return True
    if text[i] in "+-.":
        j = i + 1
        if text[i] in "+-" and j < len(text) and text[j] == ".":
            j += 1
        return j < len(text) and text[j].isdigit()
    return False


def _unescape(raw: str, line: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise TurtleParseError("dangling escape", line)
        nxt = raw[i + 1]
        if nxt in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(raw[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(raw[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise TurtleParseError(f"unknown escape \\{nxt}", line)
    return "".join(out)


class _Parser:
    def __init__(self, tokens: list[_Tok]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.base = ""
        self.triples: list[tuple[Term, Term, Term]] = []
        self._bnode_counter = 0

    # -- token helpers ----------------------------------------------------

    def _peek(self) -> _Tok | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> _Tok:
        tok = self._peek()
        if tok is None:
            raise TurtleParseError("unexpected end of input", self.tokens[-1].line if self.tokens else 0)
        self.pos += 1
        return tok

    def _expect(self, kind: str) -> _Tok:
        tok = self._next()
        if tok.kind != kind:
            raise TurtleParseError(f"expected {kind!r}, got {tok.value!r}", tok.line)
        return tok

    # -- grammar ----------------------------------------------------------

    def parse(self) -> None:
        while self._peek() is not None:
            tok = self._peek()
            if tok.kind == "at" and tok.value in {"prefix", "base"}:
                self._directive(tok.value, sparql_style=False)
            elif tok.kind == "name" and tok.value.upper() in {"PREFIX", "BASE"}:
                self._directive(tok.value.lower(), sparql_style=True)
            else:
                self._triples_block()

    def _directive(self, which: str, sparql_style: bool) -> None:
        self._next()
        if which == "prefix":
            name_tok = self._expect("name")
            if not name_tok.value.endswith(":"):
                raise TurtleParseError("prefix name must end with ':'", name_tok.line)
            iri = self._expect("iri")
            self.prefixes[name_tok.value[:-1]] = self._resolve(iri.value)
        else:
            iri = self._expect("iri")
            self.base = self._resolve(iri.value)
        if not sparql_style:
            self._expect(".")

    def _triples_block(self) -> None:
        subject = self._term(as_subject=True)
        self._predicate_object_list(subject)
        self._expect(".")

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._predicate()
            while True:
                obj = self._term(as_subject=False)
                self.triples.append((subject, predicate, obj))
                if self._peek() and self._peek().kind == ",":
                    self._next()
                    continue
                break
            if self._peek() and self._peek().kind == ";":
                self._next()
                # ';' may be followed by '.', ']' or another ';'
                while self._peek() and self._peek().kind == ";":
                    self._next()
                if self._peek() and self._peek().kind in {".", "]"}:
                    return
                continue
            return

    def _predicate(self) -> Term:
        tok = self._peek()
        if tok.kind == "name" and tok.value == "a":
            self._next()
            return ("iri", RDF_NS + "type")
        return self._term(as_subject=True)

    def _fresh_bnode(self) -> Term:
        self._bnode_counter += 1
        return ("bnode", f"gen{self._bnode_counter}")

    def _term(self, as_subject: bool) -> Term:
        tok = self._next()
        if tok.kind == "iri":
            return ("iri", self._resolve(tok.value))
        if tok.kind == "name":
            if tok.value == "true":
                return ("lit", True, XSD_NS + "boolean")
            if tok.value == "false":
                return ("lit", False, XSD_NS + "boolean")
            if tok.value.startswith("_:"):
                return ("bnode", tok.value[2:])
            return ("iri", self._expand(tok.value, tok.line))
        if tok.kind == "number":
            text = tok.value
            if any(c in text for c in ".eE"):
                datatype = "double" if any(c in text for c in "eE") else "decimal"
                return ("lit", float(text), XSD_NS + datatype)
            return ("lit", int(text), XSD_NS + "integer")
        if tok.kind == "string":
            value = tok.value
            nxt = self._peek()
            if nxt is not None and nxt.kind == "at":
                self._next()
                return ("lit", value, RDF_NS + "langString")
            if nxt is not None and nxt.kind == "^^":
                self._next()
                dtype = self._term(as_subject=True)
                datatype = dtype[1]
                if datatype == XSD_NS + "integer":
                    return ("lit", int(value), datatype)
                if datatype == XSD_NS + "boolean":
                    return ("lit", value == "true", datatype)
                if datatype in {XSD_NS + "double", XSD_NS + "decimal", XSD_NS + "float"}:
                    return ("lit", float(value), datatype)
                return ("lit", value, datatype)
            return ("lit", value, XSD_NS + "string")
        if tok.kind == "[":
            node = self._fresh_bnode()
            if self._peek() and self._peek().kind == "]":
                self._next()
                return node
            self._predicate_object_list(node)
            self._expect("]")
            return node
        if tok.kind == "(":
            items = []
            while self._peek() and self._peek().kind != ")":
                items.append(self._term(as_subject=False))
            self._expect(")")
            head: Term = ("iri", RDF_NS + "nil")
            for item in reversed(items):
                node = self._fresh_bnode()
                self.triples.append((node, ("iri", RDF_NS + "first"), item))
                self.triples.append((node, ("iri", RDF_NS + "rest"), head))
                head = node
            return head
        raise TurtleParseError(f"unexpected token {tok.value!r}", tok.line)

    def _expand(self, name: str, line: int) -> str:
        if ":" not in name:
            raise TurtleParseError(f"not a prefixed name: {name!r}", line)
        prefix, local = name.split(":", 1)
        if prefix not in self.prefixes:
            raise TurtleParseError(f"unknown prefix {prefix!r}", line)
        local = local.replace("\\", "")  # PN_LOCAL_ESC
        return self.prefixes[prefix] + local

    def _resolve(self, iri: str) -> str:
        if "://" in iri or not self.base:
            return iri
        return self.base + iri


def parse_turtle_text(text: str) -> list[tuple[Term, Term, Term]]:
    parser = _Parser(_tokenize(text))
    parser.parse()
    return parser.triples


def parse_turtle(path: str | Path) -> list[tuple[Term, Term, Term]]:
    """Parse a Turtle file into a list of (subject, predicate, object)."""
    return parse_turtle_text(Path(path).read_text("utf-8"))
