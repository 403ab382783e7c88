"""JSON interchange format for schemas (see docs/format.md)."""

from __future__ import annotations

import json
from typing import Any

from ..errors import DialectError, SchemaError, UndeclaredName
from ..model import Term, iri, term_from_string
from .ast import (
    DIALECTS,
    SHACL,
    SHEX,
    SSL,
    And,
    Bot,
    Catalogue,
    Closed,
    Disj,
    Eps,
    Eq,
    Exists,
    Forall,
    Geq,
    Id,
    Inv,
    Leq,
    Neigh,
    Not,
    Open,
    OpenInv,
    Or,
    PAlt,
    Pred,
    PSeq,
    PStar,
    Ref,
    Schema,
    TAlt,
    TC,
    Test,
    TestType,
    Top,
    TSeq,
    TStar,
    children,
    refs,
    split_tails,
    walk,
)


def _iri_text(text: Any) -> Term:
    if not isinstance(text, str) or not text:
        raise SchemaError(f"expected an IRI string, got {text!r}")
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
    return iri(text)


def _term_text(text: Any) -> Term:
    if not isinstance(text, str) or not text:
        raise SchemaError(f"expected a term string, got {text!r}")
    if text[0] in '<"' or text.startswith("_:"):
        try:
            return term_from_string(text)
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    return iri(text)


def _field(node: dict, key: str):
    try:
        return node[key]
    except KeyError:
        raise SchemaError(f"missing field {key!r} in {node.get('op', '?')} node") from None


def _list(node: dict, key: str) -> list:
    value = _field(node, key)
    if not isinstance(value, list):
        raise SchemaError(f"field {key!r} must be a list")
    return value


def _count(node: dict) -> int:
    n = _field(node, "n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise SchemaError(f"cardinality must be a non-negative integer, got {n!r}")
    return n


def path_from_json(node: Any):
    if isinstance(node, str):
        return Pred(_iri_text(node))
    if not isinstance(node, dict):
        raise SchemaError(f"malformed path {node!r}")
    op = node.get("op")
    if op == "id":
        return Id()
    if op == "pred":
        return Pred(_iri_text(_field(node, "iri")))
    if op == "inv":
        return Inv(path_from_json(_field(node, "path")))
    if op in ("seq", "alt"):
        args = tuple(path_from_json(a) for a in _list(node, "args"))
        if not args:
            raise SchemaError(f"empty {op} path")
        return PSeq(args) if op == "seq" else PAlt(args)
    if op == "star":
        return PStar(path_from_json(_field(node, "path")))
    raise SchemaError(f"unknown path op {op!r}")


def expr_from_json(node: Any):
    if not isinstance(node, dict):
        raise SchemaError(f"malformed triple expression {node!r}")
    op = node.get("op")
    if op == "eps":
        return Eps()
    if op in ("tc", "invTc"):
        return TC(_iri_text(_field(node, "pred")), shape_from_json(_field(node, "shape")), op == "invTc")
    if op in ("seq", "alt"):
        args = tuple(expr_from_json(a) for a in _list(node, "args"))
        if not args:
            raise SchemaError(f"empty {op} expression")
        return TSeq(args) if op == "seq" else TAlt(args)
    if op == "star":
        return TStar(expr_from_json(_field(node, "expr")))
    if op in ("openInv", "open"):
        preds = frozenset(_iri_text(p) for p in _list(node, "preds"))
        return OpenInv(preds) if op == "openInv" else Open(preds)
    raise SchemaError(f"unknown triple expression op {op!r}")


def shape_from_json(node: Any):
    if not isinstance(node, dict):
        raise SchemaError(f"malformed shape {node!r}")
    op = node.get("op")
    if op == "bot":
        return Bot()
    if op == "top":
        return Top()
    if op == "test":
        return Test(_term_text(_field(node, "term")))
    if op == "testType":
        return TestType(_field(node, "type"))
    if op == "ref":
        name = _field(node, "name")
        if not isinstance(name, str):
            raise SchemaError("shape name must be a string")
        return Ref(name)
    if op == "not":
        return Not(shape_from_json(_field(node, "shape")))
    if op in ("and", "or"):
        args = tuple(shape_from_json(a) for a in _list(node, "args"))
        if not args:
            raise SchemaError(f"empty {op}")
        return And(args) if op == "and" else Or(args)
    if op in ("exists", "forall"):
        cls = Exists if op == "exists" else Forall
        return cls(path_from_json(_field(node, "path")), shape_from_json(node.get("shape", {"op": "top"})))
    if op in ("geq", "leq"):
        cls = Geq if op == "geq" else Leq
        return cls(_count(node), path_from_json(_field(node, "path")), shape_from_json(_field(node, "shape")))
    if op in ("eq", "disj"):
        cls = Eq if op == "eq" else Disj
        return cls(path_from_json(_field(node, "path")), _iri_text(_field(node, "pred")))
    if op == "closed":
        return Closed(frozenset(_iri_text(p) for p in _list(node, "preds")))
    if op == "neigh":
        return Neigh(expr_from_json(_field(node, "expr")))
    raise SchemaError(f"unknown shape op {op!r}")


# -- dumping -----------------------------------------------------------------


def _iris(ts) -> list[str]:
    return [t.value for t in sorted(ts)]


def path_to_json(p) -> Any:
    if isinstance(p, Id):
        return {"op": "id"}
    if isinstance(p, Pred):
        return p.iri.value
    if isinstance(p, Inv):
        return {"op": "inv", "path": path_to_json(p.path)}
    if isinstance(p, (PSeq, PAlt)):
        return {"op": "seq" if isinstance(p, PSeq) else "alt", "args": [path_to_json(a) for a in p.args]}
    if isinstance(p, PStar):
        return {"op": "star", "path": path_to_json(p.path)}
    raise TypeError(p)


def expr_to_json(e) -> dict:
    if isinstance(e, Eps):
        return {"op": "eps"}
    if isinstance(e, TC):
        return {"op": "invTc" if e.inverse else "tc", "pred": e.pred.value, "shape": shape_to_json(e.shape)}
    if isinstance(e, (TSeq, TAlt)):
        return {"op": "seq" if isinstance(e, TSeq) else "alt", "args": [expr_to_json(a) for a in e.args]}
    if isinstance(e, TStar):
        return {"op": "star", "expr": expr_to_json(e.expr)}
    if isinstance(e, OpenInv):
        return {"op": "openInv", "preds": _iris(e.preds)}
    if isinstance(e, Open):
        return {"op": "open", "preds": _iris(e.preds)}
    raise TypeError(e)


def shape_to_json(s) -> dict:
    if isinstance(s, Bot):
        return {"op": "bot"}
    if isinstance(s, Top):
        return {"op": "top"}
    if isinstance(s, Test):
        return {"op": "test", "term": s.term.n3()}
    if isinstance(s, TestType):
        return {"op": "testType", "type": s.vtype}
    if isinstance(s, Ref):
        return {"op": "ref", "name": s.name}
    if isinstance(s, Not):
        return {"op": "not", "shape": shape_to_json(s.arg)}
    if isinstance(s, (And, Or)):
        return {"op": "and" if isinstance(s, And) else "or", "args": [shape_to_json(a) for a in s.args]}
    if isinstance(s, (Exists, Forall)):
        op = "exists" if isinstance(s, Exists) else "forall"
        return {"op": op, "path": path_to_json(s.path), "shape": shape_to_json(s.shape)}
    if isinstance(s, (Geq, Leq)):
        op = "geq" if isinstance(s, Geq) else "leq"
        return {"op": op, "n": s.n, "path": path_to_json(s.path), "shape": shape_to_json(s.shape)}
    if isinstance(s, (Eq, Disj)):
        return {"op": "eq" if isinstance(s, Eq) else "disj", "path": path_to_json(s.path), "pred": s.pred.value}
    if isinstance(s, Closed):
        return {"op": "closed", "preds": _iris(s.preds)}
    if isinstance(s, Neigh):
        return {"op": "neigh", "expr": expr_to_json(s.expr)}
    raise TypeError(s)


def schema_to_json(sch: Schema) -> dict:
    doc = {
        "dialect": sch.dialect,
        "shapes": {name: shape_to_json(shape) for name, shape in sch.catalogue.items()},
        "targets": [{"shape": s, "selector": shape_to_json(tau)} for s, tau in sch.selectors],
    }
    if sch.provenance:
        doc["provenance"] = list(sch.provenance)
    return doc


def dump_schema(sch: Schema) -> str:
    return json.dumps(schema_to_json(sch), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- well-formedness ---------------------------------------------------------


def dialect_problems(shape, dialect: str) -> list[str]:
    """Constructs in ``shape`` that ``dialect`` does not have."""
    problems = []
    for node in walk(shape):
        name = type(node).__name__
        if dialect == SSL:
            if isinstance(node, (TestType, Geq, Leq, Eq, Disj, Closed, Neigh)):
                problems.append(f"{name} is not SSL")
            elif isinstance(node, (Exists, Forall)) and not isinstance(node.path, Pred):
                problems.append("SSL quantifiers take a single predicate, not a path expression")
        elif dialect == SHEX:
            if isinstance(node, (Top, Bot, Exists, Forall, Geq, Leq, Eq, Disj, Closed)):
                problems.append(f"{name} is not ShEx")
            elif isinstance(node, Neigh):
                problems.extend(_expr_form_problems(node.expr))
        elif dialect == SHACL:
            if isinstance(node, Neigh):
                problems.append("triple expressions are not SHACL")
    return problems


def _expr_form_problems(expr) -> list[str]:
    f, r, _q = split_tails(expr)
    problems = []
    if r is None:
        problems.append("triple expression must end with an (¬R⁻)* tail")
    # tails are only legal at the top level, so none may remain inside f
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, (Open, OpenInv)):
            problems.append("open tail nested inside a closed triple expression")
        elif not isinstance(node, TC):
            stack.extend(children(node))
    return problems


def check_schema(sch: Schema, strict_selectors: bool = False) -> None:
    """Raise on undeclared names, dialect violations or bad selectors."""
    cat = sch.catalogue
    for name, shape in cat.items():
        for r in sorted(refs(shape)):
            if r not in cat:
                raise UndeclaredName(r)
        problems = dialect_problems(shape, cat.dialect)
        if problems:
            raise DialectError(f"shape {name}: {problems[0]}")
    for s, tau in sch.selectors:
        if s not in cat:
            raise UndeclaredName(s)
        if refs(tau):
            raise SchemaError(f"selector for {s} mentions shape names")
        problems = dialect_problems(tau, cat.dialect)
        if problems:
            raise DialectError(f"selector for {s}: {problems[0]}")
        if strict_selectors and not isinstance(tau, (Test, TestType)):
            raise SchemaError(f"strict selectors allow only test atoms, got a {type(tau).__name__} for {s}")


def schema_from_json(doc: Any, dialect: str | None = None, strict_selectors: bool = False) -> Schema:
    if not isinstance(doc, dict):
        raise SchemaError("schema document must be a JSON object")
    declared = doc.get("dialect", dialect or SSL)
    if dialect is not None and declared != dialect:
        raise DialectError(f"document is {declared}, expected {dialect}")
    if declared not in DIALECTS:
        raise SchemaError(f"unknown dialect {declared!r}")
    shapes = doc.get("shapes", {})
    if not isinstance(shapes, dict):
        raise SchemaError("'shapes' must be an object")
    cat = Catalogue({name: shape_from_json(tree) for name, tree in shapes.items()}, declared)
    targets = doc.get("targets", [])
    if not isinstance(targets, list):
        raise SchemaError("'targets' must be a list")
    selectors = []
    for t in targets:
        if not isinstance(t, dict):
            raise SchemaError("malformed target entry")
        selectors.append((_field(t, "shape"), shape_from_json(_field(t, "selector"))))
    sch = Schema(cat, tuple(selectors), tuple(doc.get("provenance", ())))
    check_schema(sch, strict_selectors)
    return sch


def parse_schema(text: str, dialect: str | None = None, strict_selectors: bool = False) -> Schema:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed document: {exc}") from None
    return schema_from_json(doc, dialect, strict_selectors)

