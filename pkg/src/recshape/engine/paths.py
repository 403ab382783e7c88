"""Path expressions as ε-free automata, and their evaluation over a graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from ..model import Graph, Term
from ..schema.ast import Id, Inv, PAlt, Pred, PSeq, PStar

Label = tuple[Term, bool]  # (predicate, inverse)


@dataclass(frozen=True)
class PathAutomaton:
    """NFA over oriented predicates; states are ``0..n_states-1``."""

    n_states: int
    initial: frozenset[int]
    accepting: frozenset[int]
    transitions: tuple[tuple[int, Label, int], ...]

    def successors(self, state: int) -> list[tuple[Label, int]]:
        return [(lab, dst) for src, lab, dst in self.transitions if src == state]

    def accepts(self, word: list[Label]) -> bool:
        current = set(self.initial)
        for letter in word:
            current = {dst for src, lab, dst in self.transitions if src in current and lab == letter}
        return bool(current & self.accepting)


class _Builder:
    def __init__(self):
        self.n = 0
        self.eps: dict[int, set[int]] = {}
        self.edges: list[tuple[int, Label, int]] = []

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def epsilon(self, a: int, b: int) -> None:
        self.eps.setdefault(a, set()).add(b)

    def build(self, path, inverse: bool) -> tuple[int, int]:
        """Thompson fragment for ``path`` (inverted when ``inverse``)."""
        if isinstance(path, Id):
            s = self.state()
            return s, s
        if isinstance(path, Pred):
            a, b = self.state(), self.state()
            self.edges.append((a, (path.iri, inverse), b))
            return a, b
        if isinstance(path, Inv):
            return self.build(path.path, not inverse)
        if isinstance(path, PSeq):
            parts = [self.build(p, inverse) for p in path.args]
            if inverse:
                parts.reverse()
            for (_, end), (start, _) in zip(parts, parts[1:]):
                self.epsilon(end, start)
            return parts[0][0], parts[-1][1]
        if isinstance(path, PAlt):
            a, b = self.state(), self.state()
            for p in path.args:
                s, e = self.build(p, inverse)
                self.epsilon(a, s)
                self.epsilon(e, b)
            return a, b
        if isinstance(path, PStar):
            a = self.state()
            s, e = self.build(path.path, inverse)
            self.epsilon(a, s)
            self.epsilon(e, a)
            return a, a
        raise TypeError(path)

    def closure(self, q: int) -> set[int]:
        seen, stack = {q}, [q]
        while stack:
            for r in self.eps.get(stack.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen


@lru_cache(maxsize=4096)
def compile_path(path) -> PathAutomaton:
    """ε-free NFA accepting the oriented-predicate words of ``path``."""
    b = _Builder()
    start, end = b.build(path, False)
    closures = {q: b.closure(q) for q in range(b.n)}
    moves: dict[int, set[tuple[Label, int]]] = {}
    for q in range(b.n):
        for src, lab, dst in b.edges:
            if src in closures[q]:
                moves.setdefault(q, set()).add((lab, dst))
    # keep only states reachable from the start, renumbered in BFS order
    order, index = [start], {start: 0}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for _lab, dst in sorted(moves.get(q, ()), key=lambda m: (m[0][0].sort_key(), m[0][1], m[1])):
            if dst not in index:
                index[dst] = len(order)
                order.append(dst)
                queue.append(dst)
    transitions = sorted(
        {(index[q], lab, index[dst]) for q in order for lab, dst in moves.get(q, ())},
        key=lambda t: (t[0], t[1][0].sort_key(), t[1][1], t[2]),
    )
    accepting = frozenset(index[q] for q in order if end in closures[q])
    return PathAutomaton(len(order), frozenset({0}), accepting, tuple(transitions))


def _step(g: Graph, node: Term, label: Label) -> list[Term]:
    pred, inverse = label
    if inverse:
        return [t.subject for t in g.incoming(node) if t.predicate == pred]
    return [t.object for t in g.outgoing(node) if t.predicate == pred]


def eval_path(path, g: Graph, v: Term) -> frozenset[Term]:
    """Nodes reachable from ``v`` along a word of ``path`` (BFS over the product)."""
    nfa = compile_path(path)
    table: dict[int, list[tuple[Label, int]]] = {}
    for src, lab, dst in nfa.transitions:
        table.setdefault(src, []).append((lab, dst))
    seen = {(q, v) for q in nfa.initial}
    queue = deque(seen)
    found = set()
    while queue:
        q, node = queue.popleft()
        if q in nfa.accepting:
            found.add(node)
        for lab, dst in table.get(q, ()):
            for nxt in _step(g, node, lab):
                if (dst, nxt) not in seen:
                    seen.add((dst, nxt))
                    queue.append((dst, nxt))
    return frozenset(found)
