"""Graph 3-colourability as brave supported-model conformance."""

from __future__ import annotations

from collections.abc import Hashable, Iterable
from itertools import product

from ..model import Graph, iri
from ..schema.ast import SSL, And, Catalogue, Exists, Not, Or, Pred, Ref, Schema, Test

EDGE, SELF, SPY = iri("edge"), iri("self"), iri("spy")
APEX = iri("s")
COLOURS = ("Colour1", "Colour2", "Colour3")


def node_iri(v: Hashable):
    return iri(f"v{v}")


def colouring_catalogue() -> Catalogue:
    colour = {c: Exists(Pred(SELF), Ref(c)) for c in COLOURS}
    uncoloured = And(tuple(Not(Ref(c)) for c in COLOURS))
    clash = tuple(And((Ref(c), Exists(Pred(EDGE), Ref(c)))) for c in COLOURS)
    error = Or((uncoloured, *clash))
    ok = Not(Exists(Pred(SPY), Ref("Error")))
    return Catalogue({**colour, "Error": error, "Ok": ok}, SSL)


def gen_3col(nodes: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]) -> tuple[Graph, Schema]:
    """RDF graph and fixed schema; ``h`` is 3-colourable iff brave conformance holds."""
    nodes = list(nodes)
    triples = [(node_iri(u), EDGE, node_iri(v)) for u, v in edges]
    triples += [(node_iri(v), SELF, node_iri(v)) for v in nodes]
    triples += [(APEX, SPY, node_iri(v)) for v in nodes]
    return Graph.from_tuples(*triples), Schema(colouring_catalogue(), (("Ok", Test(APEX)),))


def three_colourable(nodes: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]) -> bool:
    """Brute force over all 3ⁿ colourings."""
    nodes, edges = list(nodes), list(edges)
    for colours in product(range(3), repeat=len(nodes)):
        colour = dict(zip(nodes, colours))
        if all(colour[u] != colour[v] for u, v in edges):
            return True
    return False
