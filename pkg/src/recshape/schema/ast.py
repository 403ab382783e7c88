"""Shape, path and triple-expression trees for the three dialects.

All nodes are frozen dataclasses, so shapes are hashable and can be used as
dictionary keys (the translators rely on that for deduplication).
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

from ..errors import SchemaError
from ..model import Term

SSL = "SSL"
SHEX = "ShEx"
SHACL = "SHACL"
DIALECTS = (SSL, SHEX, SHACL)

XSD_INTEGER = "http://www.w3.org/2001/XMLSchema#integer"
XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"


# -- value types -------------------------------------------------------------


def _is_integer(t: Term) -> bool:
    if not t.is_literal or t.datatype != XSD_INTEGER:
        return False
    text = t.value[1:] if t.value[:1] in "+-" else t.value
    return text.isdigit()


VALUE_TYPES = {
    "AnyIRI": lambda t: t.is_iri,
    "AnyLiteral": lambda t: t.is_literal,
    "AnyBlank": lambda t: t.is_blank,
    "IntegerLiteral": _is_integer,
    "StringLiteral": lambda t: t.is_literal and t.datatype in (None, XSD_STRING),
}


def value_type_holds(vtype: str, t: Term) -> bool:
    return VALUE_TYPES[vtype](t)


# -- paths -------------------------------------------------------------------


@dataclass(frozen=True)
class Id:
    pass


@dataclass(frozen=True)
class Pred:
    iri: Term


@dataclass(frozen=True)
class Inv:
    path: "Path"


@dataclass(frozen=True)
class PSeq:
    args: tuple["Path", ...]


@dataclass(frozen=True)
class PAlt:
    args: tuple["Path", ...]


@dataclass(frozen=True)
class PStar:
    path: "Path"


Path = Union[Id, Pred, Inv, PSeq, PAlt, PStar]


def atomic_step(path: Path) -> tuple[Term, bool] | None:
    """``(p, inverse)`` when ``path`` is ``p`` or ``p⁻``, else None."""
    if isinstance(path, Pred):
        return path.iri, False
    if isinstance(path, Inv) and isinstance(path.path, Pred):
        return path.path.iri, True
    return None


def step_path(pred: Term, inverse: bool) -> Path:
    return Inv(Pred(pred)) if inverse else Pred(pred)


# -- shapes ------------------------------------------------------------------


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Test:
    term: Term


@dataclass(frozen=True)
class TestType:
    vtype: str

    def __post_init__(self):
        if self.vtype not in VALUE_TYPES:
            raise SchemaError(f"unknown value type {self.vtype}")


@dataclass(frozen=True)
class Ref:
    name: str

    def __post_init__(self):
        if not self.name:
            raise SchemaError("empty shape name")


@dataclass(frozen=True)
class Not:
    arg: "Shape"


@dataclass(frozen=True)
class And:
    args: tuple["Shape", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Shape", ...]


@dataclass(frozen=True)
class Exists:
    path: Path
    shape: "Shape"


@dataclass(frozen=True)
class Forall:
    path: Path
    shape: "Shape"


@dataclass(frozen=True)
class Geq:
    n: int
    path: Path
    shape: "Shape"

    def __post_init__(self):
        if self.n < 0:
            raise SchemaError("cardinality must be non-negative")


@dataclass(frozen=True)
class Leq:
    n: int
    path: Path
    shape: "Shape"

    def __post_init__(self):
        if self.n < 0:
            raise SchemaError("cardinality must be non-negative")


@dataclass(frozen=True)
class Eq:
    path: Path
    pred: Term


@dataclass(frozen=True)
class Disj:
    path: Path
    pred: Term


@dataclass(frozen=True)
class Closed:
    preds: frozenset[Term]


@dataclass(frozen=True)
class Neigh:
    expr: "TripleExpr"


Shape = Union[Bot, Top, Test, TestType, Ref, Not, And, Or, Exists, Forall, Geq, Leq, Eq, Disj, Closed, Neigh]


# -- triple expressions ------------------------------------------------------


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class TC:
    """Triple constraint ``p.φ`` (or ``p⁻.φ`` when ``inverse``)."""

    pred: Term
    shape: Shape
    inverse: bool = False

    @property
    def key(self) -> tuple[Term, bool]:
        return self.pred, self.inverse


@dataclass(frozen=True)
class TSeq:
    args: tuple["TripleExpr", ...]


@dataclass(frozen=True)
class TAlt:
    args: tuple["TripleExpr", ...]


@dataclass(frozen=True)
class TStar:
    expr: "TripleExpr"


@dataclass(frozen=True)
class OpenInv:
    """``(¬R⁻)*``: any set of incoming edges whose predicate is outside R."""

    preds: frozenset[Term] = frozenset()


@dataclass(frozen=True)
class Open:
    """``(¬Q)*``: any set of outgoing edges whose predicate is outside Q."""

    preds: frozenset[Term] = frozenset()


TripleExpr = Union[Eps, TC, TSeq, TAlt, TStar, OpenInv, Open]

# ⟨ε;(¬∅⁻)*;(¬∅)*⟩ matches every neighbourhood; it is the ShEx spelling of ⊤.
TOP_EXPR = TSeq((OpenInv(), Open()))
TOP_NEIGH = Neigh(TOP_EXPR)


def all_of(*shapes: Shape) -> Shape:
    flat: list[Shape] = []
    for s in shapes:
        flat.extend(s.args if isinstance(s, And) else (s,))
    flat = list(dict.fromkeys(flat))
    if not flat:
        return Top()
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def any_of(*shapes: Shape) -> Shape:
    flat: list[Shape] = []
    for s in shapes:
        flat.extend(s.args if isinstance(s, Or) else (s,))
    flat = list(dict.fromkeys(flat))
    if not flat:
        return Bot()
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def seq(*exprs: TripleExpr) -> TripleExpr:
    flat: list[TripleExpr] = []
    for e in exprs:
        if isinstance(e, TSeq):
            flat.extend(e.args)
        elif not isinstance(e, Eps):
            flat.append(e)
    if not flat:
        return Eps()
    return flat[0] if len(flat) == 1 else TSeq(tuple(flat))


def split_tails(expr: TripleExpr) -> tuple[TripleExpr, frozenset[Term] | None, frozenset[Term] | None]:
    """Split a top-level ``f ; (¬R⁻)* [; (¬Q)*]`` into ``(f, R, Q)``.

    Missing tails come back as None.  Only trailing tails are recognised;
    tails buried inside ``f`` stay where they are.
    """
    args = list(expr.args) if isinstance(expr, TSeq) else [expr]
    r = q = None
    if args and isinstance(args[-1], Open):
        q = args.pop().preds
    if args and isinstance(args[-1], OpenInv):
        r = args.pop().preds
    return seq(*args), r, q


def with_tails(f: TripleExpr, r: frozenset[Term] | None, q: frozenset[Term] | None) -> TripleExpr:
    tails = []
    if r is not None:
        tails.append(OpenInv(frozenset(r)))
    if q is not None:
        tails.append(Open(frozenset(q)))
    return seq(f, *tails)


def is_top_expr(expr: TripleExpr) -> bool:
    return split_tails(expr) == (Eps(), frozenset(), frozenset())


# -- traversal ---------------------------------------------------------------


def children(node) -> tuple:
    """Immediate shape/path/expression children of any tree node."""
    if isinstance(node, (Not,)):
        return (node.arg,)
    if isinstance(node, (And, Or, PSeq, PAlt, TSeq, TAlt)):
        return node.args
    if isinstance(node, (Exists, Forall, Geq, Leq)):
        return (node.path, node.shape)
    if isinstance(node, (Eq, Disj)):
        return (node.path,)
    if isinstance(node, Neigh):
        return (node.expr,)
    if isinstance(node, TC):
        return (node.shape,)
    if isinstance(node, (Inv,)):
        return (node.path,)
    if isinstance(node, PStar):
        return (node.path,)
    if isinstance(node, TStar):
        return (node.expr,)
    return ()


def walk(node) -> Iterator:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def size(node) -> int:
    return sum(1 for _ in walk(node))


def refs(node) -> set[str]:
    return {n.name for n in walk(node) if isinstance(n, Ref)}


def tests(node) -> set[Term]:
    return {n.term for n in walk(node) if isinstance(n, Test)}


def is_boolean_atomic(shape: Shape) -> bool:
    """Boolean combination of refs and test atoms only (the 'shallow' atoms)."""
    if isinstance(shape, Neigh) and is_top_expr(shape.expr):
        return True
    if isinstance(shape, (Ref, Test, TestType, Top, Bot)):
        return True
    if isinstance(shape, Not):
        return is_boolean_atomic(shape.arg)
    if isinstance(shape, (And, Or)):
        return all(is_boolean_atomic(a) for a in shape.args)
    return False


# -- canonical text ----------------------------------------------------------


def _terms(ts: Iterable[Term]) -> str:
    return ",".join(t.n3() for t in sorted(ts))


def show(node) -> str:
    """Canonical one-line rendering, stable across runs."""
    if isinstance(node, Bot):
        return "⊥"
    if isinstance(node, Top):
        return "⊤"
    if isinstance(node, Test):
        return f"test({node.term.n3()})"
    if isinstance(node, TestType):
        return f"test({node.vtype})"
    if isinstance(node, Ref):
        return node.name
    if isinstance(node, Not):
        return f"¬{show(node.arg)}"
    if isinstance(node, And):
        return "(" + " ∧ ".join(show(a) for a in node.args) + ")"
    if isinstance(node, Or):
        return "(" + " ∨ ".join(show(a) for a in node.args) + ")"
    if isinstance(node, Exists):
        return f"∃{show(node.path)}.{show(node.shape)}"
    if isinstance(node, Forall):
        return f"∀{show(node.path)}.{show(node.shape)}"
    if isinstance(node, Geq):
        return f"≥{node.n} {show(node.path)}.{show(node.shape)}"
    if isinstance(node, Leq):
        return f"≤{node.n} {show(node.path)}.{show(node.shape)}"
    if isinstance(node, Eq):
        return f"eq({show(node.path)},{node.pred.n3()})"
    if isinstance(node, Disj):
        return f"disj({show(node.path)},{node.pred.n3()})"
    if isinstance(node, Closed):
        return f"closed({{{_terms(node.preds)}}})"
    if isinstance(node, Neigh):
        return "{" + show(node.expr) + "}"
    if isinstance(node, Id):
        return "id"
    if isinstance(node, Pred):
        return node.iri.n3()
    if isinstance(node, Inv):
        return f"{show(node.path)}⁻"
    if isinstance(node, PSeq):
        return "(" + "·".join(show(a) for a in node.args) + ")"
    if isinstance(node, PAlt):
        return "(" + "∪".join(show(a) for a in node.args) + ")"
    if isinstance(node, PStar):
        return f"{show(node.path)}*"
    if isinstance(node, Eps):
        return "ε"
    if isinstance(node, TC):
        return f"{node.pred.n3()}{'⁻' if node.inverse else ''}.{show(node.shape)}"
    if isinstance(node, TSeq):
        return "(" + " ; ".join(show(a) for a in node.args) + ")"
    if isinstance(node, TAlt):
        return "(" + " | ".join(show(a) for a in node.args) + ")"
    if isinstance(node, TStar):
        return f"{show(node.expr)}*"
    if isinstance(node, OpenInv):
        return f"(¬{{{_terms(node.preds)}}}⁻)*"
    if isinstance(node, Open):
        return f"(¬{{{_terms(node.preds)}}})*"
    raise TypeError(f"not a tree node: {node!r}")


# -- catalogues and schemas --------------------------------------------------


class Catalogue(Mapping):
    """Finite map from shape names to shapes, tagged with a dialect."""

    __slots__ = ("_decls", "dialect")

    def __init__(self, decls: Mapping[str, Shape] | Iterable[tuple[str, Shape]] = (), dialect: str = SSL):
        if dialect not in DIALECTS:
            raise SchemaError(f"unknown dialect {dialect}")
        items = decls.items() if isinstance(decls, Mapping) else decls
        self._decls = dict(sorted(items, key=lambda kv: kv[0]))
        self.dialect = dialect

    def __getitem__(self, name: str) -> Shape:
        return self._decls[name]

    def __iter__(self):
        return iter(self._decls)

    def __len__(self):
        return len(self._decls)

    def __eq__(self, other):
        return isinstance(other, Catalogue) and self.dialect == other.dialect and self._decls == other._decls

    def __hash__(self):
        return hash((self.dialect, tuple(self._decls.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: {show(v)}" for k, v in self._decls.items())
        return f"Catalogue[{self.dialect}]({{{body}}})"

    def updated(self, extra: Mapping[str, Shape] | Iterable[tuple[str, Shape]], dialect: str | None = None) -> "Catalogue":
        merged = dict(self._decls)
        merged.update(extra.items() if isinstance(extra, Mapping) else extra)
        return Catalogue(merged, dialect or self.dialect)

    def mapped(self, fn, dialect: str | None = None) -> "Catalogue":
        return Catalogue({k: fn(v) for k, v in self._decls.items()}, dialect or self.dialect)


Selector = tuple[str, Shape]


@dataclass(frozen=True)
class Schema:
    catalogue: Catalogue
    selectors: tuple[Selector, ...] = ()
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "selectors", tuple(dict.fromkeys(self.selectors)))

    @property
    def dialect(self) -> str:
        return self.catalogue.dialect


def fresh_name(prefix: str, payload: str, taken: Iterable[str]) -> str:
    """Deterministic name derived from ``payload`` that avoids ``taken``."""
    taken = set(taken)
    digest = hashlib.sha1(payload.encode("utf-8")).hexdigest()[:10]
    name = f"{prefix}{digest}"
    i = 1
    while name in taken:
        name = f"{prefix}{digest}_{i}"
        i += 1
    return name
