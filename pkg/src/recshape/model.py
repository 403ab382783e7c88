"""RDF terms, graphs and the N-Triples subset used for graph files.

Only the fragment needed by the validator is supported: IRIs in angle
brackets, plain or datatyped literals, and blank node labels.  Language tags,
prefixes and datasets are rejected.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import RecshapeError

IRI = "iri"
LITERAL = "literal"
BLANK = "blank"

FORWARD = "fwd"
INVERSE = "inv"

_KIND_ORDER = {IRI: 0, BLANK: 1, LITERAL: 2}


class NTriplesError(RecshapeError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True, order=False)
class Term:
    kind: str
    value: str
    datatype: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind in (IRI, BLANK) and not self.value:
            raise ValueError(f"empty {self.kind} value")
        if self.datatype is not None and (self.kind != LITERAL or not self.datatype):
            raise ValueError("only literals carry a (non-empty) datatype")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    @property
    def is_blank(self) -> bool:
        return self.kind == BLANK

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.value, self.datatype or "")

    def __lt__(self, other: "Term") -> bool:
        return self.sort_key() < other.sort_key()

    def n3(self) -> str:
        """N-Triples spelling of the term."""
        if self.kind == IRI:
            return f"<{self.value}>"
        if self.kind == BLANK:
            return f"_:{self.value}"
        text = '"' + _escape(self.value) + '"'
        if self.datatype:
            text += f"^^<{self.datatype}>"
        return text

    def short(self) -> str:
        """Display form: IRIs bare, everything else as in N-Triples."""
        return self.value if self.kind == IRI else self.n3()

    def __str__(self) -> str:
        return self.n3()


def iri(value: str) -> Term:
    return Term(IRI, value)


def literal(value: str, datatype: str | None = None) -> Term:
    return Term(LITERAL, value, datatype)


def blank(label: str) -> Term:
    return Term(BLANK, label)


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if self.predicate.kind != IRI:
            raise ValueError("predicate must be an IRI")
        if self.subject.kind == LITERAL:
            raise ValueError("literal in subject position")

    def sort_key(self):
        return (self.subject.sort_key(), self.predicate.sort_key(), self.object.sort_key())


@dataclass(frozen=True)
class OrientedTriple:
    """An element of a node's two-way neighbourhood.

    ``(v, p, fwd, u)`` stands for the edge ``(v, p, u)``; ``(v, p, inv, u)``
    for the incoming edge ``(u, p, v)`` seen from ``v``.
    """

    source: Term
    predicate: Term
    direction: str
    target: Term

    def sort_key(self):
        return (
            self.source.sort_key(),
            self.predicate.sort_key(),
            self.direction,
            self.target.sort_key(),
        )


class Graph:
    """An immutable finite set of triples with subject/object/predicate indexes."""

    __slots__ = ("triples", "_by_subject", "_by_object", "_by_predicate")

    def __init__(self, triples: Iterable[Triple] = ()):
        self.triples = frozenset(triples)
        by_s, by_o, by_p = defaultdict(list), defaultdict(list), defaultdict(list)
        for t in self.triples:
            by_s[t.subject].append(t)
            by_o[t.object].append(t)
            by_p[t.predicate].append(t)
        self._by_subject = {k: tuple(v) for k, v in by_s.items()}
        self._by_object = {k: tuple(v) for k, v in by_o.items()}
        self._by_predicate = {k: tuple(v) for k, v in by_p.items()}

    def __repr__(self):
        return f"Graph({len(self.triples)} triples)"

    @classmethod
    def from_tuples(cls, *spo: tuple) -> "Graph":
        """Build a graph from ``(s, p, o)`` tuples of terms or plain IRI strings."""
        return cls(Triple(*(x if isinstance(x, Term) else iri(x) for x in t)) for t in spo)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.triples == other.triples

    def __hash__(self):
        return hash(self.triples)

    def __len__(self):
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self.triples, key=Triple.sort_key))

    def __contains__(self, t: Triple) -> bool:
        return t in self.triples

    def outgoing(self, v: Term) -> tuple[Triple, ...]:
        return self._by_subject.get(v, ())

    def incoming(self, v: Term) -> tuple[Triple, ...]:
        return self._by_object.get(v, ())

    def with_predicate(self, p: Term) -> tuple[Triple, ...]:
        return self._by_predicate.get(p, ())

    @property
    def predicates(self) -> frozenset[Term]:
        return frozenset(self._by_predicate)

    @property
    def nodes(self) -> frozenset[Term]:
        return nodes(self)


def nodes(g: Graph) -> frozenset[Term]:
    """Terms in subject or object position; predicate-only IRIs are excluded."""
    return frozenset(g._by_subject) | frozenset(g._by_object)


def neighborhood(g: Graph, v: Term) -> frozenset[OrientedTriple]:
    out = {OrientedTriple(v, t.predicate, FORWARD, t.object) for t in g.outgoing(v)}
    inc = {OrientedTriple(v, t.predicate, INVERSE, t.subject) for t in g.incoming(v)}
    return frozenset(out | inc)


# -- N-Triples ---------------------------------------------------------------

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}

_IRI_RE = re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_.\-]*)")
_LITERAL_RE = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_WS = re.compile(r"[ \t]*")


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch in "\x7f\x85\u2028\u2029":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape(text: str, line: int) -> str:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = text[i + 1] if i + 1 < len(text) else ""
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in "uU":
            width = 4 if nxt == "u" else 8
            digits = text[i + 2 : i + 2 + width]
            if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                raise NTriplesError("malformed unicode escape", line)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise NTriplesError(f"unknown escape \\{nxt}", line)
    return "".join(out)


def parse_term(text: str, pos: int = 0, line: int = 1) -> tuple[Term, int]:
    """Parse one term starting at ``pos``; returns the term and the end offset."""
    if text.startswith("<", pos):
        m = _IRI_RE.match(text, pos)
        if not m or not m.group(1):
            raise NTriplesError("malformed IRI", line)
        return iri(m.group(1)), m.end()
    if text.startswith("_:", pos):
        m = _BLANK_RE.match(text, pos)
        if not m:
            raise NTriplesError("malformed blank node", line)
        return blank(m.group(1).rstrip(".")), m.start() + 2 + len(m.group(1).rstrip("."))
    if text.startswith('"', pos):
        m = _LITERAL_RE.match(text, pos)
        if not m:
            raise NTriplesError("malformed literal", line)
        lexical = _unescape(m.group(1), line)
        end = m.end()
        if text.startswith("^^", end):
            m2 = _IRI_RE.match(text, end + 2)
            if not m2 or not m2.group(1):
                raise NTriplesError("malformed datatype IRI", line)
            return literal(lexical, m2.group(1)), m2.end()
        if text.startswith("@", end):
            raise NTriplesError("language tags are not supported", line)
        return literal(lexical), end
    raise NTriplesError("malformed term", line)


def term_from_string(text: str) -> Term:
    """Parse a single N-Triples term such as ``<a>`` or ``"42"``."""
    text = text.strip()
    term, end = parse_term(text)
    if end != len(text):
        raise ValueError(f"trailing characters after term: {text!r}")
    return term


def parse_ntriples(text: str) -> Graph:
    triples = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pos = 0
        terms = []
        for _ in range(3):
            pos = _WS.match(line, pos).end()
            term, pos = parse_term(line, pos, lineno)
            terms.append(term)
        pos = _WS.match(line, pos).end()
        if not line.startswith(".", pos):
            raise NTriplesError("missing terminal dot", lineno)
        rest = line[pos + 1 :].strip()
        if rest and not rest.startswith("#"):
            raise NTriplesError("trailing characters after dot", lineno)
        s, p, o = terms
        if s.kind == LITERAL:
            raise NTriplesError("literal in subject position", lineno)
        if p.kind != IRI:
            raise NTriplesError("predicate must be an IRI", lineno)
        triples.append(Triple(s, p, o))
    return Graph(triples)


def serialize_ntriples(g: Graph) -> str:
    lines = sorted(
        (f"{t.subject.n3()} {t.predicate.n3()} {t.object.n3()} ." for t in g.triples),
        key=lambda s: s.encode("utf-8"),
    )
    return "".join(line + "\n" for line in lines)
