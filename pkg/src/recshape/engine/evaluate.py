"""Shape semantics over the universe of graph nodes plus catalogue constants.

Every shape is evaluated against a pair of environments: ``pos`` is read by
references under an even number of negations, ``neg`` by those under an odd
number (``≤n`` counts as a negation of its body).  Exact evaluation passes
the same assignment twice; the supported-model search passes a lower and an
upper bound to get interval bounds in one walk.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from ..model import Graph, Term, neighborhood, nodes
from ..schema.analysis import constants
from ..schema.ast import (
    And,
    Bot,
    Catalogue,
    Closed,
    Disj,
    Eq,
    Exists,
    Forall,
    Geq,
    Leq,
    Neigh,
    Not,
    Or,
    Pred,
    Ref,
    Test,
    TestType,
    Top,
    atomic_step,
    tests,
    value_type_holds,
)
from .assignment import ShapeAssignment
from .paths import eval_path
from .triples import check_shallow, match_neighbourhood, match_neighbourhood_oracle

Env = Mapping[str, frozenset[Term]]


class Evaluator:
    """Evaluates shapes over one graph; caches path reachability and neighbourhoods."""

    def __init__(self, g: Graph, catalogue: Catalogue | None = None, extra: Iterable[Term] = ()):
        self.graph = g
        consts = constants(catalogue) if catalogue is not None else frozenset()
        self.universe: frozenset[Term] = nodes(g) | consts | frozenset(extra)
        self.ordered = sorted(self.universe, key=Term.sort_key)
        self._paths: dict = {}
        self._neigh: dict[Term, frozenset] = {}

    def reach(self, path, v: Term) -> frozenset[Term]:
        key = (path, v)
        hit = self._paths.get(key)
        if hit is None:
            hit = self._paths[key] = eval_path(path, self.graph, v)
        return hit

    def neighbourhood(self, v: Term) -> frozenset:
        hit = self._neigh.get(v)
        if hit is None:
            hit = self._neigh[v] = neighborhood(self.graph, v)
        return hit

    def _pre_exists(self, path, target: frozenset[Term]) -> frozenset[Term]:
        step = atomic_step(path)
        if step is not None:
            pred, inverse = step
            if inverse:
                return frozenset(t.object for t in self.graph.with_predicate(pred) if t.subject in target)
            return frozenset(t.subject for t in self.graph.with_predicate(pred) if t.object in target)
        return frozenset(v for v in self.universe if self.reach(path, v) & target)

    def eval(self, shape, pos: Env, neg: Env | None = None) -> frozenset[Term]:
        return self._eval(shape, pos, pos if neg is None else neg)

    def _eval(self, shape, pos: Env, neg: Env) -> frozenset[Term]:
        nc = self.universe
        if isinstance(shape, Top):
            return nc
        if isinstance(shape, Bot):
            return frozenset()
        if isinstance(shape, Test):
            return frozenset({shape.term}) & nc
        if isinstance(shape, TestType):
            return frozenset(u for u in nc if value_type_holds(shape.vtype, u))
        if isinstance(shape, Ref):
            return pos.get(shape.name, frozenset())
        if isinstance(shape, Not):
            return nc - self._eval(shape.arg, neg, pos)
        if isinstance(shape, And):
            out = nc
            for a in shape.args:
                out = out & self._eval(a, pos, neg)
                if not out:
                    break
            return out
        if isinstance(shape, Or):
            out = frozenset()
            for a in shape.args:
                out = out | self._eval(a, pos, neg)
            return out
        if isinstance(shape, Exists):
            return self._pre_exists(shape.path, self._eval(shape.shape, pos, neg))
        if isinstance(shape, Forall):
            target = self._eval(shape.shape, pos, neg)
            return frozenset(v for v in nc if self.reach(shape.path, v) <= target)
        if isinstance(shape, Geq):
            if shape.n == 0:
                return nc
            target = self._eval(shape.shape, pos, neg)
            if shape.n == 1:
                return self._pre_exists(shape.path, target)
            return frozenset(v for v in nc if len(self.reach(shape.path, v) & target) >= shape.n)
        if isinstance(shape, Leq):
            target = self._eval(shape.shape, neg, pos)
            return frozenset(v for v in nc if len(self.reach(shape.path, v) & target) <= shape.n)
        if isinstance(shape, Eq):
            direct = Pred(shape.pred)
            return frozenset(v for v in nc if self.reach(shape.path, v) == self.reach(direct, v))
        if isinstance(shape, Disj):
            direct = Pred(shape.pred)
            return frozenset(v for v in nc if not (self.reach(shape.path, v) & self.reach(direct, v)))
        if isinstance(shape, Closed):
            return frozenset(
                v for v in nc if all(t.predicate in shape.preds for t in self.graph.outgoing(v))
            )
        if isinstance(shape, Neigh):
            cache: dict = {}

            def satisfied(atom_shape):
                if atom_shape not in cache:
                    cache[atom_shape] = self._eval(atom_shape, pos, neg)
                return cache[atom_shape]

            return frozenset(v for v in nc if match_neighbourhood(self.neighbourhood(v), shape.expr, satisfied))
        raise TypeError(f"not a shape: {shape!r}")


def eval_shape(shape, g: Graph, assignment: ShapeAssignment | Env, catalogue: Catalogue | None = None) -> frozenset[Term]:
    """⟦shape⟧ under ``assignment``; the universe includes the shape's own constants."""
    env = assignment.as_map() if isinstance(assignment, ShapeAssignment) else assignment
    ev = Evaluator(g, catalogue, extra=tests(shape))
    return ev.eval(shape, env)


def conforms_node(shape, g: Graph, assignment: ShapeAssignment | Env, v: Term, catalogue: Catalogue | None = None) -> bool:
    return v in eval_shape(shape, g, assignment, catalogue)


def match_triple_expression(
    g: Graph,
    assignment: ShapeAssignment | Env,
    v: Term,
    expr,
    catalogue: Catalogue | None = None,
) -> bool:
    """Does ``v``'s neighbourhood match ``expr``?  Atom shapes must be shallow."""
    check_shallow(expr)
    env = assignment.as_map() if isinstance(assignment, ShapeAssignment) else assignment
    ev = Evaluator(g, catalogue, extra=[v])
    return match_neighbourhood(ev.neighbourhood(v), expr, lambda s: ev.eval(s, env))


def match_triple_expression_oracle(
    g: Graph,
    assignment: ShapeAssignment | Env,
    v: Term,
    expr,
    catalogue: Catalogue | None = None,
    bound: int = 8,
) -> bool:
    """Brute-force counterpart of match_triple_expression, for cross-checking."""
    check_shallow(expr)
    env = assignment.as_map() if isinstance(assignment, ShapeAssignment) else assignment
    ev = Evaluator(g, catalogue, extra=[v])
    return match_neighbourhood_oracle(ev.neighbourhood(v), expr, lambda s: ev.eval(s, env), bound)
