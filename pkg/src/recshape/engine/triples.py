"""Matching a node's neighbourhood against a triple expression.

The fast matcher abstracts each neighbour into an edge type: its oriented
predicate (or "other" when the predicate never occurs in the expression)
together with the set of atom shapes its far end satisfies.  Matching then
works on multisets of types, which is what keeps it polynomial for a fixed
expression.  The oracle enumerates bags of atoms directly and is only meant
as an independent cross-check on small inputs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Callable, Iterable

from ..errors import BoundExceeded, NotShallow
from ..model import INVERSE, OrientedTriple, Term
from ..schema.ast import TC, Eps, Open, OpenInv, TAlt, TSeq, TStar, is_boolean_atomic

OTHER = "other"


def expr_nodes(expr):
    """Sub-expressions of a triple expression, without entering atom shapes."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (TSeq, TAlt)):
            stack.extend(reversed(node.args))
        elif isinstance(node, TStar):
            stack.append(node.expr)


def atoms(expr) -> list[TC]:
    out: list[TC] = []
    for node in expr_nodes(expr):
        if isinstance(node, TC) and node not in out:
            out.append(node)
    return out


def check_shallow(expr) -> None:
    for tc in atoms(expr):
        if not is_boolean_atomic(tc.shape):
            raise NotShallow(f"atom shape is not a Boolean combination of names and tests: {tc}")


def _mentioned_preds(expr) -> set[Term]:
    preds: set[Term] = set()
    for node in expr_nodes(expr):
        if isinstance(node, TC):
            preds.add(node.pred)
        elif isinstance(node, (Open, OpenInv)):
            preds |= node.preds
    return preds


class _Compiled:
    """Expression flattened into an indexed node table, binary sequences only."""

    def __init__(self, expr):
        self.nodes: list[tuple] = []
        self.root = self._add(expr)

    def _add(self, x) -> int:
        if isinstance(x, Eps):
            node = ("eps",)
        elif isinstance(x, TC):
            node = ("tc", x.key, x.shape)
        elif isinstance(x, TSeq):
            if not x.args:
                return self._add(Eps())
            if len(x.args) == 1:
                return self._add(x.args[0])
            node = ("seq", self._add(x.args[0]), self._add(TSeq(x.args[1:])))
        elif isinstance(x, TAlt):
            node = ("alt", tuple(self._add(a) for a in x.args))
        elif isinstance(x, TStar):
            node = ("star", self._add(x.expr))
        elif isinstance(x, OpenInv):
            node = ("openinv", x.preds)
        elif isinstance(x, Open):
            node = ("open", x.preds)
        else:
            raise TypeError(x)
        self.nodes.append(node)
        return len(self.nodes) - 1


def _submultisets(m: tuple[int, ...]):
    return itertools.product(*(range(c + 1) for c in m))


def match_neighbourhood(
    neighbourhood: Iterable[OrientedTriple],
    expr,
    satisfied: Callable[[object], frozenset[Term]],
) -> bool:
    """Does the neighbourhood match ``expr``, given the extension of each atom shape?"""
    comp = _Compiled(expr)
    shapes_by_key: dict[tuple[Term, bool], list] = {}
    for tc in atoms(expr):
        shapes_by_key.setdefault(tc.key, [])
        if tc.shape not in shapes_by_key[tc.key]:
            shapes_by_key[tc.key].append(tc.shape)
    ext = {s: satisfied(s) for ss in shapes_by_key.values() for s in ss}
    mentioned = _mentioned_preds(expr)

    counts: Counter = Counter()
    for ot in neighbourhood:
        inverse = ot.direction == INVERSE
        if ot.predicate in mentioned:
            q = (ot.predicate, inverse)
            sat = frozenset(s for s in shapes_by_key.get(q, ()) if ot.target in ext[s])
            counts[(q, sat)] += 1
        else:
            counts[(((OTHER,), inverse), frozenset())] += 1
    types = [t for t, n in counts.items() if n > 0]
    start = tuple(counts[t] for t in types)

    def type_ok_for_tail(t, inverse_tail: bool, preds: frozenset) -> bool:
        (head, inverse), _ = t
        if inverse != inverse_tail:
            return False
        return head == (OTHER,) or head not in preds

    memo: dict[tuple[int, tuple[int, ...]], bool] = {}

    def rec(i: int, m: tuple[int, ...]) -> bool:
        key = (i, m)
        if key in memo:
            return memo[key]
        node = comp.nodes[i]
        kind = node[0]
        total = sum(m)
        if kind == "eps":
            res = total == 0
        elif kind == "tc":
            res = False
            if total == 1:
                t = types[m.index(1)]
                q, sat = t
                res = q == node[1] and node[2] in sat
        elif kind in ("openinv", "open"):
            res = all(c == 0 or type_ok_for_tail(types[j], kind == "openinv", node[1]) for j, c in enumerate(m))
        elif kind == "alt":
            res = any(rec(j, m) for j in node[1])
        elif kind == "seq":
            a, b = node[1], node[2]
            res = any(
                rec(a, m1) and rec(b, tuple(x - y for x, y in zip(m, m1)))
                for m1 in _submultisets(m)
            )
        elif kind == "star":
            if total == 0:
                res = True
            else:
                res = any(
                    sum(m1) > 0 and rec(node[1], m1) and rec(i, tuple(x - y for x, y in zip(m, m1)))
                    for m1 in _submultisets(m)
                )
        else:  # pragma: no cover
            raise TypeError(kind)
        memo[key] = res
        return res

    return rec(comp.root, start)


# -- oracle ------------------------------------------------------------------


def _bags(expr, n: int, index: dict) -> set[tuple[int, ...]]:
    """Bags (sorted tuples of atom ids) of size ≤ n in the language of ``expr``."""

    def combine(xs, ys):
        return {tuple(sorted(a + b)) for a in xs for b in ys if len(a) + len(b) <= n}

    def star(base):
        base = {b for b in base if b}
        out = {()}
        frontier = {()}
        while frontier:
            frontier = combine(frontier, base) - out
            out |= frontier
        return out

    if isinstance(expr, Eps):
        return {()}
    if isinstance(expr, TC):
        return {(index[expr],)} if n >= 1 else set()
    if isinstance(expr, (Open, OpenInv)):
        return star({(index[expr],)})
    if isinstance(expr, TSeq):
        out = {()}
        for a in expr.args:
            out = combine(out, _bags(a, n, index))
        return out
    if isinstance(expr, TAlt):
        return set().union(*(_bags(a, n, index) for a in expr.args))
    if isinstance(expr, TStar):
        return star(_bags(expr.expr, n, index))
    raise TypeError(expr)


def match_neighbourhood_oracle(
    neighbourhood: Iterable[OrientedTriple],
    expr,
    satisfied: Callable[[object], frozenset[Term]],
    bound: int = 8,
) -> bool:
    """Brute-force matching by bag enumeration; raises BoundExceeded past ``bound`` neighbours."""
    neigh = sorted(neighbourhood, key=lambda ot: ot.sort_key())
    if len(neigh) > bound:
        raise BoundExceeded(f"neighbourhood of size {len(neigh)} exceeds oracle bound {bound}")
    classes = [x for x in expr_nodes(expr) if isinstance(x, (TC, Open, OpenInv))]
    index: dict = {}
    for x in classes:
        index.setdefault(x, len(index))
    by_id = {i: x for x, i in index.items()}
    ext = {x.shape: satisfied(x.shape) for x in classes if isinstance(x, TC)}

    def fits(ot: OrientedTriple, atom) -> bool:
        inverse = ot.direction == INVERSE
        if isinstance(atom, TC):
            return ot.predicate == atom.pred and inverse == atom.inverse and ot.target in ext[atom.shape]
        if isinstance(atom, OpenInv):
            return inverse and ot.predicate not in atom.preds
        return not inverse and ot.predicate not in atom.preds

    def assign(i: int, remaining: Counter) -> bool:
        if i == len(neigh):
            return True
        for a, c in remaining.items():
            if c and fits(neigh[i], by_id[a]):
                remaining[a] -= 1
                if assign(i + 1, remaining):
                    return True
                remaining[a] += 1
        return False

    for bag in _bags(expr, len(neigh), index):
        if len(bag) == len(neigh) and assign(0, Counter(bag)):
            return True
    return False
