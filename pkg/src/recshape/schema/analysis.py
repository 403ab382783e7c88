"""Catalogue analyses: constants, stratification, negation normal form,
duality, selector embedding and fragment membership."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from ..errors import NonDualizable, NotStratified
from ..model import Term
from .ast import (
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
    Leq,
    Neigh,
    Not,
    Open,
    OpenInv,
    Or,
    Ref,
    Schema,
    TAlt,
    TC,
    Test,
    TestType,
    Top,
    TOP_NEIGH,
    TSeq,
    TStar,
    all_of,
    any_of,
    atomic_step,
    fresh_name,
    is_top_expr,
    seq,
    show,
    split_tails,
    tests,
)
from .io import dialect_problems


def constants(c: Catalogue) -> frozenset[Term]:
    """Every ``c`` with ``test(c)`` somewhere in the catalogue."""
    out: set[Term] = set()
    for shape in c.values():
        out |= tests(shape)
    return frozenset(out)


# -- dependencies and stratification ----------------------------------------


def dependencies(shape) -> set[tuple[str, bool]]:
    """``(name, negative)`` for every reference, with its polarity.

    Polarity flips under ``¬`` and under ``≤n`` (an upper bound is a negated
    lower bound).  Everything else, including triple constraints, is
    monotone in its sub-shapes.
    """
    out: set[tuple[str, bool]] = set()

    def go(node, negative: bool) -> None:
        if isinstance(node, Ref):
            out.add((node.name, negative))
        elif isinstance(node, Not):
            go(node.arg, not negative)
        elif isinstance(node, Leq):
            go(node.shape, not negative)
        elif isinstance(node, (And, Or)):
            for a in node.args:
                go(a, negative)
        elif isinstance(node, (Exists, Forall, Geq)):
            go(node.shape, negative)
        elif isinstance(node, Neigh):
            go(node.expr, negative)
        elif isinstance(node, (TSeq, TAlt)):
            for a in node.args:
                go(a, negative)
        elif isinstance(node, TStar):
            go(node.expr, negative)
        elif isinstance(node, TC):
            go(node.shape, negative)

    go(shape, False)
    return out


def dependency_graph(c: Catalogue) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(c)
    for s, shape in c.items():
        for t, negative in dependencies(shape):
            if g.has_edge(s, t):
                g[s][t]["negative"] = g[s][t]["negative"] or negative
            else:
                g.add_edge(s, t, negative=negative)
    return g


@dataclass(frozen=True)
class Stratification:
    strata: tuple[frozenset[str], ...]
    _level: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._level.update({n: i for i, layer in enumerate(self.strata) for n in layer})

    def level(self, name: str) -> int:
        return self._level[name]

    def __iter__(self):
        return iter(self.strata)

    def __len__(self):
        return len(self.strata)


def _negative_cycle(g: nx.DiGraph, s: str, t: str) -> list[str]:
    if s == t:
        return [s, s]
    back = nx.shortest_path(g, t, s)
    return [s] + back


def stratify(c: Catalogue) -> Stratification:
    """Canonical stratification: a name's stratum is the largest number of
    negative edges on any dependency path leaving it."""
    g = dependency_graph(c)
    sccs = list(nx.strongly_connected_components(g))
    comp = {n: i for i, scc in enumerate(sccs) for n in scc}
    for s, t, data in sorted(g.edges(data=True)):
        if data["negative"] and comp[s] == comp[t]:
            raise NotStratified(_negative_cycle(g.subgraph(sccs[comp[s]]), s, t))
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(sccs)))
    for s, t, data in g.edges(data=True):
        a, b = comp[s], comp[t]
        if a != b:
            w = 1 if data["negative"] else 0
            if not dag.has_edge(a, b) or dag[a][b]["w"] < w:
                dag.add_edge(a, b, w=w)
    level: dict[int, int] = {}
    for x in reversed(list(nx.topological_sort(dag))):
        level[x] = max((level[y] + d["w"] for _, y, d in dag.out_edges(x, data=True)), default=0)
    layers: dict[int, set[str]] = {}
    for n in c:
        layers.setdefault(level[comp[n]], set()).add(n)
    return Stratification(tuple(frozenset(layers[k]) for k in sorted(layers)))


def is_stratified(c: Catalogue) -> bool:
    try:
        stratify(c)
    except NotStratified:
        return False
    return True


def check_stratification(c: Catalogue, strata) -> bool:
    """Independent check of the two stratification conditions."""
    level = {}
    for i, layer in enumerate(strata):
        for n in layer:
            if n in level:
                return False
            level[n] = i
    if set(level) != set(c):
        return False
    for s, shape in c.items():
        for t, negative in dependencies(shape):
            if level[t] > level[s] or (negative and level[t] == level[s]):
                return False
    return True


# -- negation normal form ----------------------------------------------------


def _map_expr(expr, fn):
    if isinstance(expr, TC):
        return TC(expr.pred, fn(expr.shape), expr.inverse)
    if isinstance(expr, TSeq):
        return TSeq(tuple(_map_expr(a, fn) for a in expr.args))
    if isinstance(expr, TAlt):
        return TAlt(tuple(_map_expr(a, fn) for a in expr.args))
    if isinstance(expr, TStar):
        return TStar(_map_expr(expr.expr, fn))
    return expr


def map_atoms(expr, fn):
    """Apply ``fn`` to the shape of every triple constraint in ``expr``."""
    return _map_expr(expr, fn)


def nnf(shape, negate: bool = False):
    """Push negation down to test atoms, refs, closed/eq/disj and neigh."""
    if isinstance(shape, Bot):
        return Top() if negate else shape
    if isinstance(shape, Top):
        return Bot() if negate else shape
    if isinstance(shape, (Test, TestType, Ref, Closed, Eq, Disj)):
        return Not(shape) if negate else shape
    if isinstance(shape, Not):
        return nnf(shape.arg, not negate)
    if isinstance(shape, (And, Or)):
        parts = [nnf(a, negate) for a in shape.args]
        conj = isinstance(shape, And) != negate
        return all_of(*parts) if conj else any_of(*parts)
    if isinstance(shape, (Exists, Forall)):
        flip = isinstance(shape, Exists) == negate
        cls = Forall if flip else Exists
        return cls(shape.path, nnf(shape.shape, negate))
    if isinstance(shape, Geq):
        if shape.n == 0:
            return Bot() if negate else Top()
        inner = nnf(shape.shape)
        return Leq(shape.n - 1, shape.path, inner) if negate else Geq(shape.n, shape.path, inner)
    if isinstance(shape, Leq):
        inner = nnf(shape.shape)
        return Geq(shape.n + 1, shape.path, inner) if negate else Leq(shape.n, shape.path, inner)
    if isinstance(shape, Neigh):
        body = Neigh(map_atoms(shape.expr, nnf))
        return Not(body) if negate else body
    raise TypeError(shape)


def normalize_negation(c: Catalogue) -> Catalogue:
    """Equivalent catalogue where ``¬`` only wraps atoms and refs.

    Negation is pushed inline (De Morgan, quantifier and counting duals);
    a negated triple-expression shape ``¬{e}`` gets an auxiliary name.
    """
    decls = {name: nnf(shape) for name, shape in c.items()}
    taken = set(decls)
    aux: dict = {}

    def lift(shape):
        if isinstance(shape, Not) and isinstance(shape.arg, Neigh):
            body = Neigh(map_atoms(shape.arg.expr, lift))
            if body not in aux:
                name = fresh_name("__neg__", show(body), taken)
                taken.add(name)
                aux[body] = name
            return Not(Ref(aux[body]))
        if isinstance(shape, (And, Or)):
            return type(shape)(tuple(lift(a) for a in shape.args))
        if isinstance(shape, Neigh):
            return Neigh(map_atoms(shape.expr, lift))
        if isinstance(shape, (Exists, Forall, Geq, Leq)):
            return type(shape)(*([shape.n] if isinstance(shape, (Geq, Leq)) else []), shape.path, lift(shape.shape))
        return shape

    out = {name: lift(shape) for name, shape in decls.items()}
    out.update({name: body for body, name in aux.items()})
    return Catalogue(out, c.dialect)


def is_normalized(shape) -> bool:
    for node in _walk_shapes(shape):
        if isinstance(node, Not) and not isinstance(node.arg, (Test, TestType, Ref, Closed, Eq, Disj)):
            return False
    return True


def _walk_shapes(shape):
    stack = [shape]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, (And, Or)):
            stack.extend(n.args)
        elif isinstance(n, (Exists, Forall, Geq, Leq)):
            stack.append(n.shape)
        elif isinstance(n, Neigh):
            stack.extend(_expr_shapes(n.expr))


def _expr_shapes(expr):
    if isinstance(expr, TC):
        return [expr.shape]
    if isinstance(expr, (TSeq, TAlt)):
        return [s for a in expr.args for s in _expr_shapes(a)]
    if isinstance(expr, TStar):
        return _expr_shapes(expr.expr)
    return []


# -- duality -----------------------------------------------------------------


def dual_shape(shape):
    """Dual of a negation-normalized shape.

    Beyond the core swaps, ``≥n π.φ`` and ``≤(n-1) π.¬φ̃`` are duals, and
    ``closed(Q)`` / ``test(vtype)`` swap with their negations like
    ``test(c)`` does.
    """
    if isinstance(shape, Bot):
        return Top()
    if isinstance(shape, Top):
        return Bot()
    if isinstance(shape, (Test, TestType, Closed)):
        return Not(shape)
    if isinstance(shape, Ref):
        return shape
    if isinstance(shape, Not):
        if isinstance(shape.arg, (Test, TestType, Closed)):
            return shape.arg
        if isinstance(shape.arg, Ref):
            return shape
        raise NonDualizable(f"negation must be normalized first: {show(shape)}")
    if isinstance(shape, And):
        return Or(tuple(dual_shape(a) for a in shape.args))
    if isinstance(shape, Or):
        return And(tuple(dual_shape(a) for a in shape.args))
    if isinstance(shape, Exists):
        return Forall(shape.path, dual_shape(shape.shape))
    if isinstance(shape, Forall):
        return Exists(shape.path, dual_shape(shape.shape))
    if isinstance(shape, Geq):
        if shape.n == 0:
            return Bot()
        return Leq(shape.n - 1, shape.path, nnf(dual_shape(shape.shape), True))
    if isinstance(shape, Leq):
        return Geq(shape.n + 1, shape.path, nnf(dual_shape(shape.shape), True))
    raise NonDualizable(f"no dual is defined for {type(shape).__name__}: {show(shape)}")


def dualize(c: Catalogue) -> Catalogue:
    if c.dialect == SHEX:
        raise NonDualizable("triple-expression shapes have no dual; translate to SHACL first")
    return Catalogue({name: dual_shape(nnf(shape)) for name, shape in c.items()}, c.dialect)


# -- selectors ---------------------------------------------------------------


def selector_names(sch: Schema) -> dict[str, tuple[str, object]]:
    """Fresh sentinel name for every selector, mapped to its ``(s, τ)``."""
    taken = set(sch.catalogue)
    out: dict[str, tuple[str, object]] = {}
    for s, tau in sch.selectors:
        name = fresh_name(f"__sel__{s}__", show(tau), taken)
        taken.add(name)
        out[name] = (s, tau)
    return out


def embed_selectors(sch: Schema) -> Catalogue:
    """The catalogue extended with ``t_{s,τ}: τ ∧ ¬s`` per selector."""
    extra = {t: And((tau, Not(Ref(s)))) for t, (s, tau) in selector_names(sch).items()}
    return sch.catalogue.updated(extra)


# -- normal-form recognisers -------------------------------------------------


def count_form(expr) -> tuple[Term, bool, object, int] | None:
    """``(p, inverse, φ, n)`` for ``q.φⁿ ; ⊤``; n = 0 means plain ``⊤``."""
    f, r, q = split_tails(expr)
    if r != frozenset() or q != frozenset():
        return None
    atoms = [f] if not isinstance(f, TSeq) else list(f.args)
    if atoms == [Eps()]:
        return None
    if not atoms or any(not isinstance(a, TC) or a != atoms[0] for a in atoms):
        return None
    a = atoms[0]
    return a.pred, a.inverse, a.shape, len(atoms)


def closed_form(expr) -> frozenset[Term] | None:
    """``Q`` for ``p₁.⟨⊤⟩* ; … ; pₙ.⟨⊤⟩* ; (¬∅⁻)*``."""
    f, r, q = split_tails(expr)
    if r != frozenset() or q is not None:
        return None
    parts = [] if isinstance(f, Eps) else (list(f.args) if isinstance(f, TSeq) else [f])
    preds = []
    for part in parts:
        if not (isinstance(part, TStar) and isinstance(part.expr, TC)):
            return None
        tc = part.expr
        if tc.inverse or tc.shape != TOP_NEIGH:
            return None
        preds.append(tc.pred)
    if len(set(preds)) != len(preds):
        return None
    return frozenset(preds)


def count_expr(pred: Term, inverse: bool, shape, n: int):
    return seq(*([TC(pred, shape, inverse)] * n), OpenInv(), Open())


def closed_expr(preds) -> object:
    parts = [TStar(TC(p, TOP_NEIGH)) for p in sorted(preds)]
    return seq(*parts, OpenInv())


# -- fragments ---------------------------------------------------------------

RESTRICTED_SHEX = "RestrictedShEx"
RESTRICTED_SHACL = "RestrictedSHACL"
SHEX0 = "ShEx0"
SHACL0 = "SHACL0"
FRAGMENTS = (SSL, RESTRICTED_SHEX, RESTRICTED_SHACL, SHEX0, SHACL0)
_FRAGMENT_DIALECT = {SSL: SSL, RESTRICTED_SHEX: SHEX, SHEX0: SHEX, RESTRICTED_SHACL: SHACL, SHACL0: SHACL}


@dataclass(frozen=True)
class FragmentReport:
    fragment: str
    problems: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok


def _star_free_alt(expr) -> bool:
    if isinstance(expr, (Eps, TC)):
        return True
    if isinstance(expr, TAlt):
        return all(_star_free_alt(a) for a in expr.args)
    return False


def _restricted_closed(expr, pos: str, out: list) -> None:
    if isinstance(expr, TStar):
        if not _star_free_alt(expr.expr):
            out.append((pos, f"star over an expression with ';' or '*': {show(expr)}"))
    elif isinstance(expr, (TSeq, TAlt)):
        for i, a in enumerate(expr.args):
            _restricted_closed(a, f"{pos}/{i}", out)


def _fragment_walk(shape, fragment: str, pos: str, out: list) -> None:
    if isinstance(shape, Not):
        _fragment_walk(shape.arg, fragment, pos + "/0", out)
    elif isinstance(shape, (And, Or)):
        for i, a in enumerate(shape.args):
            _fragment_walk(a, fragment, f"{pos}/{i}", out)
    elif isinstance(shape, (Eq, Disj)) and fragment in (RESTRICTED_SHACL, SHACL0):
        out.append((pos, f"{type(shape).__name__.lower()} is outside {fragment}"))
    elif isinstance(shape, (Geq, Leq)):
        if fragment in (RESTRICTED_SHACL, SHACL0) and atomic_step(shape.path) is None:
            out.append((pos, f"counting over a non-atomic path: {show(shape)}"))
        _fragment_walk(shape.shape, fragment, pos + "/1", out)
    elif isinstance(shape, (Exists, Forall)):
        if fragment == SHACL0:
            out.append((pos, f"quantifier outside {fragment}: {show(shape)}"))
        elif fragment == RESTRICTED_SHACL and isinstance(shape, Forall) and atomic_step(shape.path) is None:
            out.append((pos, f"universal over a non-atomic path: {show(shape)}"))
        _fragment_walk(shape.shape, fragment, pos + "/1", out)
    elif isinstance(shape, Neigh):
        if fragment == RESTRICTED_SHEX:
            f, _r, _q = split_tails(shape.expr)
            _restricted_closed(f, pos + "/expr", out)
            for i, atom in enumerate(_expr_shapes(shape.expr)):
                _fragment_walk(atom, fragment, f"{pos}/atom{i}", out)
        elif fragment == SHEX0:
            if is_top_expr(shape.expr) or closed_form(shape.expr) is not None:
                return
            form = count_form(shape.expr)
            if form is None:
                out.append((pos, f"triple expression outside {fragment}: {show(shape)}"))
            else:
                _fragment_walk(form[2], fragment, pos + "/atom", out)


def check_fragment(sch: Schema, fragment: str) -> FragmentReport:
    """Which subexpressions (by position) keep ``sch`` out of ``fragment``."""
    if fragment not in FRAGMENTS:
        raise ValueError(f"unknown fragment {fragment}")
    problems: list[tuple[str, str]] = []
    want = _FRAGMENT_DIALECT[fragment]
    if sch.dialect != want:
        problems.append(("", f"{fragment} needs a {want} schema, got {sch.dialect}"))
        return FragmentReport(fragment, tuple(problems))
    for name, shape in sch.catalogue.items():
        problems.extend((name, msg) for msg in dialect_problems(shape, want))
        _fragment_walk(shape, fragment, name, problems)
    for i, (s, tau) in enumerate(sch.selectors):
        problems.extend((f"targets/{i}", msg) for msg in dialect_problems(tau, want))
    return FragmentReport(fragment, tuple(problems))

