"""Eliminating complex paths from restricted SHACL (valid under LFP)."""

from __future__ import annotations

from ..engine.paths import compile_path
from ..schema.ast import (
    And,
    Bot,
    Catalogue,
    Exists,
    Forall,
    Geq,
    Leq,
    Not,
    Or,
    Ref,
    atomic_step,
    fresh_name,
    show,
    step_path,
)


def shacl_to_shacl0(c: Catalogue) -> Catalogue:
    """Replace every ``∃π.φ`` by counting over single predicates.

    Atomic paths become ``≥1 p.φ`` (and ``∀p.φ`` becomes ``≤0 p.¬φ``).  For
    other paths each automaton state ``q`` gets a name ``s_q`` declared as
    the disjunction of ``s_φ`` (when accepting) and ``≥1 r.s_q'`` per
    transition.  Least fixpoints make this the reachability reading.
    """
    decls: dict = {}
    taken = set(c)
    made: dict = {}

    def fresh(prefix: str, payload: str) -> str:
        name = fresh_name(prefix, payload, taken)
        taken.add(name)
        return name

    def eliminate(path, body):
        key = (path, body)
        if key in made:
            return Ref(made[key])
        tag = show(Exists(path, body))
        root = fresh("__path__", tag)
        made[key] = root
        target = fresh("__path_body__", tag)
        decls[target] = body
        nfa = compile_path(path)
        states = {q: fresh(f"__path_q{q}__", tag) for q in range(nfa.n_states)}
        options: dict[int, list] = {q: [] for q in range(nfa.n_states)}
        for q in sorted(nfa.accepting):
            options[q].append(Ref(target))
        for src, (pred, inverse), dst in nfa.transitions:
            options[src].append(Geq(1, step_path(pred, inverse), Ref(states[dst])))
        for q, opts in options.items():
            decls[states[q]] = _disjunction(opts)
        decls[root] = _disjunction([Ref(states[q]) for q in sorted(nfa.initial)])
        return Ref(root)

    def walk(shape):
        if isinstance(shape, Not):
            return Not(walk(shape.arg))
        if isinstance(shape, (And, Or)):
            return type(shape)(tuple(walk(a) for a in shape.args))
        if isinstance(shape, Exists):
            body = walk(shape.shape)
            if atomic_step(shape.path) is not None:
                return Geq(1, shape.path, body)
            return eliminate(shape.path, body)
        if isinstance(shape, Forall):
            if atomic_step(shape.path) is None:
                raise ValueError(f"universal over a non-atomic path: {show(shape)}")
            return Leq(0, shape.path, Not(walk(shape.shape)))
        if isinstance(shape, (Geq, Leq)):
            return type(shape)(shape.n, shape.path, walk(shape.shape))
        return shape

    out = {name: walk(shape) for name, shape in c.items()}
    out.update(decls)
    return Catalogue(out, c.dialect)


def _disjunction(opts: list):
    if not opts:
        return Bot()
    return opts[0] if len(opts) == 1 else Or(tuple(opts))
