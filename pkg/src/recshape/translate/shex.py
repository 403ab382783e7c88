"""Normalizing restricted ShEx: shallow atoms, deterministic triple expressions, ShEx₀."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from ..errors import FragmentViolation, SizeLimitExceeded
from ..model import Term
from ..schema.analysis import SHEX0, closed_expr, count_expr, map_atoms
from ..schema.ast import (
    SHEX,
    TC,
    TOP_NEIGH,
    And,
    Catalogue,
    Eps,
    Neigh,
    Not,
    Or,
    Ref,
    TAlt,
    TSeq,
    TStar,
    fresh_name,
    is_boolean_atomic,
    seq,
    show,
    size,
    split_tails,
    with_tails,
)

DEFAULT_SIZE_LIMIT = 10_000

Key = tuple[Term, bool]  # (predicate, inverse)


def _guard(node, limit: int, what: str):
    n = size(node)
    if n > limit:
        raise SizeLimitExceeded(f"{what} has {n} AST nodes, over the limit of {limit}")
    return node


# -- shallow atoms -----------------------------------------------------------


def shallowify(c: Catalogue) -> Catalogue:
    """Give every non-shallow atom shape its own declaration."""
    decls = dict(c)
    taken = set(decls)
    names: dict = {}

    def atom(shape):
        if is_boolean_atomic(shape):
            return shape
        if shape not in names:
            name = fresh_name("__atom__", show(shape), taken)
            taken.add(name)
            names[shape] = name
            decls[name] = walk(shape)
        return Ref(names[shape])

    def walk(shape):
        if isinstance(shape, Not):
            return Not(walk(shape.arg))
        if isinstance(shape, (And, Or)):
            return type(shape)(tuple(walk(a) for a in shape.args))
        if isinstance(shape, Neigh):
            return Neigh(map_atoms(shape.expr, atom))
        return shape

    for name in list(c):
        decls[name] = walk(c[name])
    return Catalogue(decls, c.dialect)


# -- triple constraint table -------------------------------------------------


def _tcs(expr) -> list[TC]:
    out: list[TC] = []

    def go(x):
        if isinstance(x, TC):
            if x not in out:
                out.append(x)
        elif isinstance(x, (TSeq, TAlt)):
            for a in x.args:
                go(a)
        elif isinstance(x, TStar):
            go(x.expr)

    go(expr)
    return out


@dataclass(frozen=True)
class TripleConstraintTable:
    """Triple constraints of a shallow expression, grouped by oriented predicate."""

    constraints: tuple[TC, ...]
    by_key: dict

    @classmethod
    def of(cls, expr) -> "TripleConstraintTable":
        tcs = _tcs(expr)
        by_key: dict[Key, list] = {}
        for tc in tcs:
            shapes = by_key.setdefault(tc.key, [])
            if tc.shape not in shapes:
                shapes.append(tc.shape)
        return cls(tuple(tcs), {k: tuple(v) for k, v in by_key.items()})

    @property
    def keys(self) -> list[Key]:
        return list(self.by_key)

    def preds(self, inverse: bool | None = None) -> set[Term]:
        return {p for p, inv in self.by_key if inverse is None or inv == inverse}

    def shapes(self, key: Key) -> tuple:
        return self.by_key.get(key, ())


def nbtc(f, tc: TC) -> int:
    """Unstarred occurrences of ``tc`` in ``f``."""
    if isinstance(f, TC):
        return int(f == tc)
    if isinstance(f, (TSeq, TAlt)):
        return sum(nbtc(a, tc) for a in f.args)
    return 0


# -- determinization ---------------------------------------------------------


def pad(expr):
    """Add ``p.⟨⊤⟩*`` / ``p⁻.⟨⊤⟩*`` so every mentioned predicate is covered by a tail set."""
    f, r, q = split_tails(expr)
    table = TripleConstraintTable.of(f)
    extra = []
    if r is not None:
        for p in sorted(table.preds(True) - r):
            extra.append(TStar(TC(p, TOP_NEIGH, True)))
        r = r | table.preds(True)
    if q is not None:
        for p in sorted(table.preds(False) - q):
            extra.append(TStar(TC(p, TOP_NEIGH)))
        q = q | table.preds(False)
    return with_tails(seq(f, *extra), r, q)


def _negate(shape):
    return shape.arg if isinstance(shape, Not) else Not(shape)


def phi(shapes: tuple, chosen: frozenset):
    """``⋀X ∧ ⋀¬(rest)``, simplified; None when trivially unsatisfiable."""
    lits = [s for s in shapes if s in chosen] + [_negate(s) for s in shapes if s not in chosen]
    out = []
    for lit in lits:
        if lit == TOP_NEIGH:
            continue
        if lit == Not(TOP_NEIGH) or _negate(lit) in out:
            return None
        if lit not in out:
            out.append(lit)
    if not out:
        return TOP_NEIGH
    return out[0] if len(out) == 1 else And(tuple(out))


def _prop_atoms(shape, out: list) -> bool:
    if isinstance(shape, Not):
        return _prop_atoms(shape.arg, out)
    if isinstance(shape, (And, Or)):
        return all(_prop_atoms(a, out) for a in shape.args)
    if is_boolean_atomic(shape):
        if shape not in out:
            out.append(shape)
        return True
    return False


def _prop_value(shape, world: dict) -> bool:
    if isinstance(shape, Not):
        return not _prop_value(shape.arg, world)
    if isinstance(shape, And):
        return all(_prop_value(a, world) for a in shape.args)
    if isinstance(shape, Or):
        return any(_prop_value(a, world) for a in shape.args)
    return world[shape]


def unsatisfiable(shape, max_atoms: int = 12) -> bool:
    """True when ``shape`` is false under every truth assignment to its atoms.

    Atoms are treated as independent, so a True answer is always sound;
    ``⟨⊤⟩`` is the one atom known to hold everywhere.
    """
    atoms: list = []
    if not _prop_atoms(shape, atoms) or len(atoms) > max_atoms:
        return False
    free = [a for a in atoms if a != TOP_NEIGH]
    for bits in product((False, True), repeat=len(free)):
        world = dict(zip(free, bits))
        world[TOP_NEIGH] = True
        if _prop_value(shape, world):
            return False
    return True


def _subsets(shapes: tuple):
    for mask in range(1 << len(shapes)):
        yield frozenset(s for i, s in enumerate(shapes) if mask >> i & 1)


def determinize(expr, table: TripleConstraintTable | None = None, limit: int = DEFAULT_SIZE_LIMIT):
    """Equivalent expression where each oriented triple matches at most one constraint."""
    f, r, q = split_tails(expr)
    table = table or TripleConstraintTable.of(f)
    cache: dict[TC, object] = {}

    def det(tc: TC):
        if tc not in cache:
            shapes = table.shapes(tc.key)
            alts = []
            for chosen in _subsets(shapes):
                if tc.shape not in chosen:
                    continue
                body = phi(shapes, chosen)
                if body is not None and not unsatisfiable(body):
                    alts.append(TC(tc.pred, body, tc.inverse))
            cache[tc] = alts[0] if len(alts) == 1 else TAlt(tuple(alts))
        return cache[tc]

    def go(x):
        if isinstance(x, TC):
            return det(x)
        if isinstance(x, TSeq):
            return TSeq(tuple(go(a) for a in x.args))
        if isinstance(x, TAlt):
            return TAlt(tuple(go(a) for a in x.args))
        if isinstance(x, TStar):
            return TStar(go(x.expr))
        return x

    return _guard(with_tails(go(f), r, q), limit, "determinized expression")


# -- disjunctive form and the count/closed rewrite ---------------------------

Disjunct = tuple[Counter, frozenset]


def _freeze(d: Disjunct):
    return (frozenset(d[0].items()), d[1])


def disjuncts(f, limit: int = DEFAULT_SIZE_LIMIT) -> list[Disjunct]:
    """``f`` as ``F₁ | … | Fₙ`` with each Fᵢ = unstarred bag ; starred set."""

    def go(x) -> list[Disjunct]:
        if isinstance(x, Eps):
            return [(Counter(), frozenset())]
        if isinstance(x, TC):
            return [(Counter({x: 1}), frozenset())]
        if isinstance(x, TAlt):
            out = []
            for a in x.args:
                out.extend(go(a))
            return out
        if isinstance(x, TSeq):
            out = [(Counter(), frozenset())]
            for a in x.args:
                parts = go(a)
                out = [(u1 + u2, s1 | s2) for (u1, s1), (u2, s2) in product(out, parts)]
                if len(out) > limit:
                    raise SizeLimitExceeded(f"more than {limit} disjuncts")
            return out
        if isinstance(x, TStar):
            # (f₁|f₂)* ≡ f₁*;f₂* for star-free alternations of constraints
            body = go(x.expr)
            if any(sum(u.values()) > 1 or s for u, s in body):
                raise FragmentViolation(SHEX0, [f"star over a non-atomic expression: {show(x)}"])
            return [(Counter(), frozenset(tc for u, _ in body for tc in u))]
        raise FragmentViolation(SHEX0, [f"unexpected triple expression {show(x)}"])

    seen, out = set(), []
    for d in go(f):
        key = _freeze(d)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def _count(key: Key, shape, n: int):
    return Neigh(count_expr(key[0], key[1], shape, n))


def disjunct_to_conjunction(d: Disjunct, r: frozenset, q: frozenset | None):
    """The conjunction Ψ equivalent to ``⟨F ; (¬R⁻)* [; (¬Q)*]⟩`` for deterministic F."""
    unstarred, starred = d
    tcs = list(dict.fromkeys(list(unstarred) + sorted(starred, key=show)))
    by_key: dict[Key, list] = {}
    for tc in tcs:
        by_key.setdefault(tc.key, [])
        if tc.shape not in by_key[tc.key]:
            by_key[tc.key].append(tc.shape)
    parts = []
    # (3) at least as many matching edges as unstarred occurrences
    for tc, n in unstarred.items():
        parts.append(_count(tc.key, tc.shape, n))
    # (4) no more than that, unless the constraint is also starred.  With a
    # single shape for the predicate, (5) already forces every such edge to
    # match it, so counting plain edges is equivalent and keeps the atom
    # shape out of negative position.
    for tc, n in unstarred.items():
        if tc in starred:
            continue
        body = TOP_NEIGH if len(by_key[tc.key]) == 1 else tc.shape
        parts.append(Not(_count(tc.key, body, n + 1)))
    # (5) no edge of a mentioned predicate that matches none of its constraints
    for key, shapes in by_key.items():
        negs = [_negate(s) for s in shapes]
        none_of = negs[0] if len(negs) == 1 else And(tuple(negs))
        if unsatisfiable(none_of):
            continue
        parts.append(Not(_count(key, none_of, 1)))
    # (6) no stray incoming edges on R-predicates the disjunct does not mention
    for p in sorted(r):
        if (p, True) not in by_key:
            parts.append(Not(_count((p, True), TOP_NEIGH, 1)))
    # (7) likewise for outgoing edges on Q; without an outgoing tail the
    # disjunct admits no outgoing edge outside its own predicates, which is
    # exactly the closed form over those predicates.
    forward = {p for p, inv in by_key if not inv}
    if q is not None:
        for p in sorted(q):
            if p not in forward:
                parts.append(Not(_count((p, False), TOP_NEIGH, 1)))
    else:
        parts.append(Neigh(closed_expr(forward)))
    if not parts:
        return TOP_NEIGH
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def neigh_to_shex0(expr, limit: int = DEFAULT_SIZE_LIMIT):
    padded = pad(expr)
    det = determinize(padded, limit=limit)
    f, r, q = split_tails(det)
    if r is None:
        raise FragmentViolation(SHEX0, [f"triple expression without an incoming tail: {show(expr)}"])
    ds = disjuncts(f, limit)
    if not ds:
        return Not(TOP_NEIGH)
    psis = [disjunct_to_conjunction(d, r, q) for d in ds]
    out = psis[0] if len(psis) == 1 else Or(tuple(dict.fromkeys(psis)))
    return _guard(out, limit, "ShEx0 shape")


def shex_to_shex0(c: Catalogue, limit: int = DEFAULT_SIZE_LIMIT) -> Catalogue:
    """Rewrite every triple-expression shape into count and closed forms.

    Expects shallow atoms (see ``shallowify``).
    """

    def walk(shape):
        if isinstance(shape, Not):
            return Not(walk(shape.arg))
        if isinstance(shape, (And, Or)):
            return type(shape)(tuple(walk(a) for a in shape.args))
        if isinstance(shape, Neigh):
            return neigh_to_shex0(shape.expr, limit)
        return shape

    return Catalogue({name: walk(shape) for name, shape in c.items()}, SHEX)


def determinize_catalogue(c: Catalogue, limit: int = DEFAULT_SIZE_LIMIT) -> Catalogue:
    """Pad and determinize every triple expression in place."""

    def walk(shape):
        if isinstance(shape, Not):
            return Not(walk(shape.arg))
        if isinstance(shape, (And, Or)):
            return type(shape)(tuple(walk(a) for a in shape.args))
        if isinstance(shape, Neigh):
            return Neigh(determinize(pad(shape.expr), limit=limit))
        return shape

    return Catalogue({name: walk(shape) for name, shape in c.items()}, c.dialect)

