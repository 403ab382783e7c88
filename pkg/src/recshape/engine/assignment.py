from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from ..model import Term


@dataclass(frozen=True)
class ShapeAssignment:
    """A relation between shape names and terms."""

    pairs: frozenset[tuple[str, Term]] = frozenset()

    @classmethod
    def from_map(cls, m: Mapping[str, Iterable[Term]]) -> "ShapeAssignment":
        return cls(frozenset((s, u) for s, us in m.items() for u in us))

    @classmethod
    def of_pairs(cls, *pairs: tuple[str, Term]) -> "ShapeAssignment":
        return cls(frozenset(pairs))

    def of(self, name: str) -> frozenset[Term]:
        return frozenset(u for s, u in self.pairs if s == name)

    def as_map(self, names: Iterable[str] = ()) -> dict[str, frozenset[Term]]:
        out: dict[str, set[Term]] = {n: set() for n in names}
        for s, u in self.pairs:
            out.setdefault(s, set()).add(u)
        return {s: frozenset(us) for s, us in out.items()}

    def restrict(self, names: Iterable[str]) -> "ShapeAssignment":
        keep = set(names)
        return ShapeAssignment(frozenset(p for p in self.pairs if p[0] in keep))

    def sorted_pairs(self) -> list[tuple[str, Term]]:
        return sorted(self.pairs, key=lambda p: (p[0], p[1].sort_key()))

    def sort_key(self):
        return tuple((s, u.sort_key()) for s, u in self.sorted_pairs())

    def to_records(self) -> list[dict[str, str]]:
        return [{"shape": s, "node": u.n3()} for s, u in self.sorted_pairs()]

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __le__(self, other: "ShapeAssignment") -> bool:
        return self.pairs <= other.pairs

    def __or__(self, other: "ShapeAssignment") -> "ShapeAssignment":
        return ShapeAssignment(self.pairs | other.pairs)

    def __sub__(self, other: "ShapeAssignment") -> "ShapeAssignment":
        return ShapeAssignment(self.pairs - other.pairs)

    def __repr__(self):
        body = ", ".join(f"({s},{u.short()})" for s, u in self.sorted_pairs())
        return "{" + body + "}"


def omega(names: Iterable[str], universe: Iterable[Term]) -> ShapeAssignment:
    universe = list(universe)
    return ShapeAssignment(frozenset((s, u) for s in names for u in universe))
