"""Supported-model search: enumerate fixpoints of T_C for arbitrary catalogues.

The search keeps, for every shape name, a lower and an upper bound on its
extension.  Propagation evaluates each definition with the lower bound on
positive references and the upper bound on negative ones (and vice versa),
which brackets T_C(α) for every α between the bounds.  A supported model
equals its own image, so anything outside the upper image can be dropped and
anything inside the lower image must be kept.  When propagation stalls the
search branches on the first undecided (name, term) pair, trying "absent"
first.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from ..errors import SearchBudgetExceeded
from ..model import Graph, Term
from ..schema.ast import Catalogue
from .assignment import ShapeAssignment
from .evaluate import Evaluator

Atom = tuple[str, Term]
Bounds = dict[str, frozenset[Term]]


@dataclass(frozen=True)
class SearchBudget:
    max_atoms: int = 50_000
    max_nodes: int = 200_000


class _Search:
    def __init__(self, c: Catalogue, g: Graph, budget: SearchBudget | None):
        self.c = c
        self.names = sorted(c)
        self.ev = Evaluator(g, c)
        self.budget = budget or SearchBudget()
        n_atoms = len(self.names) * len(self.ev.universe)
        if n_atoms > self.budget.max_atoms:
            raise SearchBudgetExceeded(f"{n_atoms} candidate atoms exceed the cap of {self.budget.max_atoms}")
        self.nodes = 0

    def propagate(self, lo: Bounds, hi: Bounds) -> tuple[Bounds, Bounds] | None:
        lo, hi = dict(lo), dict(hi)
        changed = True
        while changed:
            changed = False
            for s in self.names:
                lower = self.ev.eval(self.c[s], lo, hi)
                upper = self.ev.eval(self.c[s], hi, lo)
                if not lower <= hi[s] or not lo[s] <= upper:
                    return None
                new_lo, new_hi = lo[s] | lower, hi[s] & upper
                if new_lo != lo[s] or new_hi != hi[s]:
                    lo[s], hi[s] = new_lo, new_hi
                    changed = True
        return lo, hi

    def undecided(self, lo: Bounds, hi: Bounds) -> Atom | None:
        for u in self.ev.ordered:
            for s in self.names:
                if u in hi[s] and u not in lo[s]:
                    return s, u
        return None

    def run(self, force_true: Iterable[Atom] = (), force_false: Iterable[Atom] = ()) -> Iterator[ShapeAssignment]:
        lo: Bounds = {s: frozenset() for s in self.names}
        hi: Bounds = {s: self.ev.universe for s in self.names}
        for s, u in force_true:
            lo[s] = lo[s] | {u}
        for s, u in force_false:
            hi[s] = hi[s] - {u}
        if any(not lo[s] <= hi[s] for s in self.names):
            return
        yield from self._dfs(lo, hi)

    def _dfs(self, lo: Bounds, hi: Bounds) -> Iterator[ShapeAssignment]:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise SearchBudgetExceeded(f"search exceeded {self.budget.max_nodes} nodes")
        bounds = self.propagate(lo, hi)
        if bounds is None:
            return
        lo, hi = bounds
        pick = self.undecided(lo, hi)
        if pick is None:
            yield ShapeAssignment.from_map(lo)
            return
        s, u = pick
        yield from self._dfs(lo, {**hi, s: hi[s] - {u}})
        yield from self._dfs({**lo, s: lo[s] | {u}}, hi)


def search_models(
    c: Catalogue,
    g: Graph,
    force_true: Iterable[Atom] = (),
    force_false: Iterable[Atom] = (),
    budget: SearchBudget | None = None,
) -> Iterator[ShapeAssignment]:
    """Supported models within the forced constraints, in search order."""
    return _Search(c, g, budget).run(force_true, force_false)


def sms_assignments(c: Catalogue, g: Graph, budget: SearchBudget | None = None) -> Iterator[ShapeAssignment]:
    """Every supported model of ``c`` over ``g``, sorted by (name, term) pairs."""
    found = list(search_models(c, g, budget=budget))
    yield from sorted(found, key=ShapeAssignment.sort_key)
