"""Shape-by-shape correspondence between ShEx₀ and SHACL₀, and the fixpoint bridge."""

from __future__ import annotations

from ..errors import FragmentViolation
from ..schema.analysis import SHACL0, SHEX0, closed_expr, closed_form, count_expr, count_form, dualize, selector_names
from ..schema.ast import (
    SHACL,
    SHEX,
    TOP_NEIGH,
    And,
    Bot,
    Closed,
    Geq,
    Leq,
    Neigh,
    Not,
    Or,
    Ref,
    Schema,
    Test,
    TestType,
    Top,
    atomic_step,
    fresh_name,
    is_top_expr,
    show,
    step_path,
)


def shex0_shape_to_shacl0(shape):
    if isinstance(shape, (Test, TestType, Ref)):
        return shape
    if isinstance(shape, Not):
        return Not(shex0_shape_to_shacl0(shape.arg))
    if isinstance(shape, (And, Or)):
        return type(shape)(tuple(shex0_shape_to_shacl0(a) for a in shape.args))
    if isinstance(shape, Neigh):
        if is_top_expr(shape.expr):
            return Top()
        preds = closed_form(shape.expr)
        if preds is not None:
            return Closed(preds)
        form = count_form(shape.expr)
        if form is not None:
            pred, inverse, body, n = form
            return Geq(n, step_path(pred, inverse), shex0_shape_to_shacl0(body))
    raise FragmentViolation(SHEX0, [f"no SHACL0 counterpart for {show(shape)}"])


def shacl0_shape_to_shex0(shape):
    if isinstance(shape, (Test, TestType, Ref)):
        return shape
    if isinstance(shape, Top):
        return TOP_NEIGH
    if isinstance(shape, Bot):
        return Not(TOP_NEIGH)
    if isinstance(shape, Not):
        return Not(shacl0_shape_to_shex0(shape.arg))
    if isinstance(shape, (And, Or)):
        return type(shape)(tuple(shacl0_shape_to_shex0(a) for a in shape.args))
    if isinstance(shape, Closed):
        return Neigh(closed_expr(shape.preds))
    if isinstance(shape, (Geq, Leq)):
        step = atomic_step(shape.path)
        if step is None:
            raise FragmentViolation(SHACL0, [f"counting over a non-atomic path: {show(shape)}"])
        body = shacl0_shape_to_shex0(shape.shape)
        if isinstance(shape, Geq):
            return TOP_NEIGH if shape.n == 0 else Neigh(count_expr(step[0], step[1], body, shape.n))
        # ≤n π.φ ≡ ¬(≥n+1 π.φ)
        return Not(Neigh(count_expr(step[0], step[1], body, shape.n + 1)))
    raise FragmentViolation(SHACL0, [f"no ShEx0 counterpart for {show(shape)}"])


def shex0_to_shacl0(sch: Schema) -> Schema:
    c = sch.catalogue.mapped(shex0_shape_to_shacl0, SHACL)
    sel = tuple((s, shex0_shape_to_shacl0(tau)) for s, tau in sch.selectors)
    return Schema(c, sel, sch.provenance)


def shacl0_to_shex0(sch: Schema) -> Schema:
    c = sch.catalogue.mapped(shacl0_shape_to_shex0, SHEX)
    sel = tuple((s, shacl0_shape_to_shex0(tau)) for s, tau in sch.selectors)
    return Schema(c, sel, sch.provenance)


def dualize_schema(sch: Schema) -> Schema:
    """Swap the fixpoint commitment of a SHACL schema.

    The dual catalogue's least (greatest) fixpoint is the complement of the
    original's greatest (least) one, so each selected name ``s`` is read
    through a fresh ``s⁺: ¬s`` added on top of the dual.
    """
    dual = dualize(sch.catalogue)
    taken = set(dual) | set(selector_names(sch))
    plus: dict[str, str] = {}
    for s, _tau in sch.selectors:
        if s not in plus:
            plus[s] = fresh_name(f"__co__{s}__", s, taken)
            taken.add(plus[s])
    c = dual.updated({p: Not(Ref(s)) for s, p in plus.items()})
    sel = tuple((plus[s], tau) for s, tau in sch.selectors)
    return Schema(c, sel, sch.provenance)

