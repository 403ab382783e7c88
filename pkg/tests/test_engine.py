import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

import randgen
from recshape.engine import (
    BRAVE,
    CAUTIOUS,
    GFP,
    LFP,
    SEMANTICS,
    Evaluator,
    SearchBudget,
    ShapeAssignment,
    apply_operator,
    compile_path,
    conforms_node,
    eval_path,
    eval_shape,
    gfp_assignment,
    is_correct,
    lfp_assignment,
    match_triple_expression,
    match_triple_expression_oracle,
    omega,
    sms_assignments,
    validate,
)
from recshape.errors import BoundExceeded, NotShallow, NotStratified, SearchBudgetExceeded
from recshape.model import Graph, iri, literal
from recshape.schema import Stratification, dualize, stratify
from recshape.schema.analysis import dependency_graph
from recshape.schema.ast import (
    SHACL,
    SHEX,
    TC,
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
    Id,
    Inv,
    Leq,
    Neigh,
    Not,
    Open,
    OpenInv,
    Or,
    PAlt,
    Pred,
    PSeq,
    PStar,
    Ref,
    Schema,
    Test,
    TestType,
    Top,
    TSeq,
    TStar,
)

A, B, C, D = iri("a"), iri("b"), iri("c"), literal("d")
p, q = iri("p"), iri("q")
P, Q = Pred(p), Pred(q)
SMALL = Graph.from_tuples((A, p, B), (B, p, A), (B, q, D))
CHAIN_C = Catalogue({"s1": Test(D), "s2": Exists(Q, Ref("s1")), "s3": Exists(P, Ref("s2"))})
ALPHA1 = ShapeAssignment.of_pairs(("s1", D), ("s2", B), ("s3", A))
LOOP = Graph.from_tuples((A, p, A))
REACH = Catalogue({"s": Exists(P, Ref("s"))})


# -- shapes and paths -----------------------------------------------------------


def test_eval_existential_under_alpha1():
    assert eval_shape(Exists(P, Ref("s2")), SMALL, ALPHA1, CHAIN_C) == {A}


def test_top_and_bottom():
    universe = {A, B, D}
    assert eval_shape(Top(), SMALL, ShapeAssignment(), CHAIN_C) == universe
    assert eval_shape(Bot(), SMALL, ShapeAssignment(), CHAIN_C) == frozenset()


def test_universe_includes_catalogue_constants():
    c = Catalogue({"s": Test(C)})
    assert eval_shape(Top(), SMALL, ShapeAssignment(), c) == {A, B, C, D}
    assert eval_shape(Test(C), SMALL, ShapeAssignment(), c) == {C}


def test_closed_at_b():
    assert not conforms_node(Closed(frozenset({p})), SMALL, ShapeAssignment(), B)
    assert conforms_node(Closed(frozenset({p, q})), SMALL, ShapeAssignment(), B)
    assert conforms_node(Closed(frozenset()), SMALL, ShapeAssignment(), D)


def test_value_types():
    ev = Evaluator(SMALL)
    assert ev.eval(TestType("AnyIRI"), {}) == {A, B}
    assert ev.eval(TestType("AnyLiteral"), {}) == {D}
    assert ev.eval(Not(TestType("AnyLiteral")), {}) == {A, B}


def test_counting():
    g = Graph.from_tuples((A, p, B), (A, p, C), (A, p, D))
    ev = Evaluator(g)
    assert A in ev.eval(Geq(3, P, Top()), {})
    assert A not in ev.eval(Geq(2, P, TestType("AnyLiteral")), {})
    assert A in ev.eval(Leq(1, P, TestType("AnyLiteral")), {})
    assert ev.eval(Geq(1, Inv(P), Top()), {}) == {B, C, D}


def test_equality_and_disjointness():
    g = Graph.from_tuples((A, p, B), (A, q, B), (C, p, B), (C, q, D))
    ev = Evaluator(g)
    assert A in ev.eval(Eq(P, q), {}) and C not in ev.eval(Eq(P, q), {})
    assert C in ev.eval(Disj(P, q), {}) and A not in ev.eval(Disj(P, q), {})


def test_paths_on_small_graph():
    assert eval_path(P, SMALL, A) == {B}
    assert eval_path(Id(), SMALL, C) == {C}
    assert eval_path(PStar(P), SMALL, A) == {A, B}
    assert eval_path(PSeq((P, Q)), SMALL, A) == {D}
    assert eval_path(Inv(Q), SMALL, D) == {B}
    assert eval_path(PAlt((Q, PSeq((P, P)))), SMALL, B) == {D, B}


def _closure_oracle(path, g, v):
    """Reference semantics by set algebra over all graph nodes."""
    universe = set(g.nodes) | {v}

    def rel(x):
        if isinstance(x, Id):
            return {(u, u) for u in universe}
        if isinstance(x, Pred):
            return {(t.subject, t.object) for t in g.with_predicate(x.iri)}
        if isinstance(x, Inv):
            return {(b, a) for a, b in rel(x.path)}
        if isinstance(x, PSeq):
            out = {(u, u) for u in universe}
            for a in x.args:
                r = rel(a)
                out = {(u, w) for u, v1 in out for v2, w in r if v1 == v2}
            return out
        if isinstance(x, PAlt):
            return set().union(*(rel(a) for a in x.args))
        r = rel(x.path)
        out = {(u, u) for u in universe}
        while True:
            bigger = out | {(u, w) for u, v1 in out for v2, w in r if v1 == v2}
            if bigger == out:
                return out
            out = bigger

    return {w for u, w in rel(path) if u == v}


@given(st.randoms(use_true_random=False))
def test_path_automaton_matches_relational_semantics(rng):
    path = randgen._random_path(rng, (p, q), depth=3)
    g = randgen.random_graph(rng, max_nodes=5)
    for v in sorted(g.nodes, key=lambda t: t.sort_key())[:3]:
        assert eval_path(path, g, v) == _closure_oracle(path, g, v)


def test_compiled_path_is_epsilon_free():
    nfa = compile_path(PSeq((PStar(P), Q)))
    assert nfa.initial == {0}
    assert nfa.accepts([(p, False), (p, False), (q, False)])
    assert not nfa.accepts([(p, False)])
    assert nfa.accepts([(q, False)])


# -- triple expressions ----------------------------------------------------------

TOP_EXPR = TSeq((Eps(), OpenInv(), Open()))


def test_top_expression_matches_empty_neighbourhood():
    g = Graph.from_tuples((B, p, C))
    assert match_triple_expression(g, ShapeAssignment(), A, TOP_EXPR)
    assert match_triple_expression_oracle(g, ShapeAssignment(), A, TOP_EXPR)


def test_open_expression_at_b():
    alpha = ShapeAssignment.of_pairs(("s1", D))
    e = TSeq((TC(q, Ref("s1")), OpenInv(), Open(frozenset({q}))))
    assert match_triple_expression(SMALL, alpha, B, e)


def test_closed_expression_at_b():
    alpha = ShapeAssignment.of_pairs(("s1", D))
    e = TSeq((TC(q, Ref("s1")), OpenInv()))
    assert not match_triple_expression(SMALL, alpha, B, e)
    assert not match_triple_expression_oracle(SMALL, alpha, B, e)


def test_epsilon_only_matches_empty():
    assert match_triple_expression(Graph(), ShapeAssignment(), A, Eps())
    assert not match_triple_expression(LOOP, ShapeAssignment(), A, Eps())
    assert not match_triple_expression_oracle(Graph.from_tuples((A, p, B)), ShapeAssignment(), A, Eps())


def test_non_shallow_atoms_are_rejected():
    nested = TC(p, Neigh(TSeq((TC(q, Top()), OpenInv()))))
    with pytest.raises(NotShallow):
        match_triple_expression(SMALL, ShapeAssignment(), A, nested)


def test_oracle_bound():
    g = Graph.from_tuples(*[(A, p, iri(f"n{i}")) for i in range(9)])
    with pytest.raises(BoundExceeded):
        match_triple_expression_oracle(g, ShapeAssignment(), A, TOP_EXPR)


def test_star_and_counts():
    g = Graph.from_tuples((A, p, B), (A, p, C), (A, q, D))
    star = TSeq((TStar(TC(p, Top())), TC(q, Top()), OpenInv()))
    assert match_triple_expression(g, ShapeAssignment(), A, star)
    two_p = TSeq((TC(p, Top()), TC(p, Top()), OpenInv(), Open(frozenset({p}))))
    assert match_triple_expression(g, ShapeAssignment(), A, two_p)
    three_p = TSeq((TC(p, Top()), TC(p, Top()), TC(p, Top()), OpenInv(), Open(frozenset({p}))))
    assert not match_triple_expression(g, ShapeAssignment(), A, three_p)


def test_neighbourhood_shape_in_catalogue():
    expr = TSeq((TC(p, Ref("s")), OpenInv(), Open(frozenset({p}))))
    c = Catalogue({"s": Neigh(expr)}, SHEX)
    assert gfp_assignment(c, LOOP) == ShapeAssignment.of_pairs(("s", A))
    assert lfp_assignment(c, LOOP) == ShapeAssignment()


@given(st.randoms(use_true_random=False))
def test_matcher_agrees_with_oracle(rng):
    g = randgen.random_neighbourhood_graph(rng)
    names = ["s0", "s1"]
    expr = randgen.random_triple_expr(rng, names)
    universe = Evaluator(g).universe
    alpha = ShapeAssignment.of_pairs(*((n, u) for n in names for u in universe if rng.random() < 0.5))
    v = randgen.NODES[0]
    assert match_triple_expression(g, alpha, v, expr) == match_triple_expression_oracle(g, alpha, v, expr)


# -- operator and fixpoints -------------------------------------------------------


def test_operator_iterates_to_alpha1():
    first = apply_operator(CHAIN_C, SMALL, ShapeAssignment())
    assert first == ShapeAssignment.of_pairs(("s1", D))
    second = apply_operator(CHAIN_C, SMALL, first)
    assert second == ShapeAssignment.of_pairs(("s1", D), ("s2", B))
    assert apply_operator(CHAIN_C, SMALL, second) == ALPHA1
    assert apply_operator(CHAIN_C, SMALL, ALPHA1) == ALPHA1


def test_correctness_on_small_graph():
    assert is_correct(CHAIN_C, SMALL, ALPHA1)
    assert not is_correct(CHAIN_C, SMALL, ALPHA1 | ShapeAssignment.of_pairs(("s3", B)))
    assert is_correct(REACH, SMALL, ShapeAssignment())
    assert is_correct(REACH, SMALL, ShapeAssignment.of_pairs(("s", A), ("s", B)))


def test_fixpoints_on_worked_examples():
    assert lfp_assignment(CHAIN_C, SMALL) == ALPHA1 == gfp_assignment(CHAIN_C, SMALL)
    frozen = Catalogue({"r": Or((Test(A), Exists(P, Ref("r")))), "s": Or((Not(Ref("r")), Exists(Q, Ref("s"))))})
    assert lfp_assignment(frozen, SMALL) == ShapeAssignment.of_pairs(("r", A), ("r", B), ("s", B), ("s", D))
    assert lfp_assignment(REACH, SMALL) == ShapeAssignment()
    assert lfp_assignment(Catalogue(), SMALL) == ShapeAssignment()
    unreachable = Catalogue({"s": And((Not(Test(B)), Forall(P, Ref("s"))))})
    assert gfp_assignment(unreachable, SMALL) == ShapeAssignment.of_pairs(("s", D))
    assert gfp_assignment(REACH, LOOP) == ShapeAssignment.of_pairs(("s", A))
    assert lfp_assignment(REACH, LOOP) == ShapeAssignment()


def test_unstratified_catalogue_is_refused():
    with pytest.raises(NotStratified):
        lfp_assignment(Catalogue({"s": Exists(P, Not(Ref("s")))}), SMALL)


def test_shacl_catalogue_with_paths():
    c = Catalogue({"r": Exists(PStar(P), Test(A))}, SHACL)
    assert lfp_assignment(c, SMALL) == ShapeAssignment.of_pairs(("r", A), ("r", B))


def _random_stratification(c: Catalogue, rng: random.Random) -> Stratification:
    """One stratum per strongly connected component, in a random topological order."""
    dag = nx.condensation(dependency_graph(c))
    order = []
    pending = {n: dag.out_degree(n) for n in dag}
    ready = [n for n, k in pending.items() if k == 0]
    while ready:
        n = ready.pop(rng.randrange(len(ready)))
        order.append(frozenset(dag.nodes[n]["members"]))
        for m in dag.predecessors(n):
            pending[m] -= 1
            if pending[m] == 0:
                ready.append(m)
    return Stratification(tuple(order))


@given(st.randoms(use_true_random=False))
def test_results_do_not_depend_on_the_stratification(rng):
    c = randgen.random_stratified_ssl(rng)
    g = randgen.random_graph(rng)
    other = _random_stratification(c, rng)
    assert lfp_assignment(c, g, other) == lfp_assignment(c, g)
    assert gfp_assignment(c, g, other) == gfp_assignment(c, g)


@given(st.randoms(use_true_random=False))
def test_fixpoints_are_correct(rng):
    c = randgen.random_stratified_ssl(rng)
    g = randgen.random_graph(rng)
    assert is_correct(c, g, lfp_assignment(c, g))
    assert is_correct(c, g, gfp_assignment(c, g))


@given(st.randoms(use_true_random=False))
def test_iteration_is_monotone_within_a_stratum(rng):
    c = randgen.random_stratified_ssl(rng)
    g = randgen.random_graph(rng)
    universe = Evaluator(g, c).universe
    for fix, grows in ((lfp_assignment, True), (gfp_assignment, False)):
        trace = []
        fix(c, g, on_step=lambda level, step, alpha: trace.append((level, step, alpha)))
        by_level = {}
        for level, step, alpha in trace:
            by_level.setdefault(level, []).append(alpha)
        strata = stratify(c).strata
        for level, alphas in by_level.items():
            layer = strata[level]
            seq = [a.restrict(layer) for a in alphas]
            assert len(seq) <= len(layer) * len(universe) + 1
            for before, after in zip(seq, seq[1:]):
                assert (before <= after) if grows else (after <= before)


@given(st.randoms(use_true_random=False))
def test_operator_is_monotone_without_negation(rng):
    c = randgen.random_negation_free_ssl(rng)
    g = randgen.random_graph(rng, max_nodes=4)
    universe = Evaluator(g, c).universe
    small = ShapeAssignment.of_pairs(*((s, u) for s in c for u in universe if rng.random() < 0.3))
    big = small | ShapeAssignment.of_pairs(*((s, u) for s in c for u in universe if rng.random() < 0.3))
    assert apply_operator(c, g, small) <= apply_operator(c, g, big)


@given(st.randoms(use_true_random=False))
def test_duality(rng):
    c = randgen.random_stratified_ssl(rng)
    g = randgen.random_graph(rng, max_nodes=5)
    full = omega(sorted(c), Evaluator(g, c).universe)
    assert gfp_assignment(c, g) == full - lfp_assignment(dualize(c), g)
    assert lfp_assignment(c, g) == full - gfp_assignment(dualize(c), g)


# -- supported models ------------------------------------------------------------------


def _brute_force_models(c, g):
    names = sorted(c)
    universe = sorted(Evaluator(g, c).universe, key=lambda t: t.sort_key())
    atoms = [(s, u) for s in names for u in universe]
    out = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        alpha = ShapeAssignment.of_pairs(*(a for a, keep in zip(atoms, bits) if keep))
        if is_correct(c, g, alpha):
            out.append(alpha)
    return sorted(out, key=ShapeAssignment.sort_key)


def test_supported_models_of_reach():
    assert list(sms_assignments(REACH, SMALL)) == [ShapeAssignment(), ShapeAssignment.of_pairs(("s", A), ("s", B))]


def test_inconsistent_catalogue_has_no_models():
    cons1 = Catalogue({"s": Exists(P, Ref("s2")), "s2": Not(Ref("s"))})
    assert list(sms_assignments(cons1, LOOP)) == []


def test_odd_loop_has_two_models():
    c = Catalogue({"s": Exists(P, Not(Ref("s")))})
    g = Graph.from_tuples((A, p, B), (B, p, A))
    assert list(sms_assignments(c, g)) == [ShapeAssignment.of_pairs(("s", A)), ShapeAssignment.of_pairs(("s", B))]


@given(st.randoms(use_true_random=False))
def test_search_finds_exactly_the_correct_assignments(rng):
    names = ["s0", "s1"][: rng.randint(1, 2)]
    c = Catalogue({n: randgen._ssl_shape(rng, 2, names, names) for n in names})
    g = randgen.random_graph(rng, max_nodes=3, literals=False)
    if len(c) * len(Evaluator(g, c).universe) > 10:
        g = Graph.from_tuples(*list(g)[:2])
    assert list(sms_assignments(c, g)) == _brute_force_models(c, g)


@given(st.randoms(use_true_random=False))
def test_models_lie_between_the_fixpoints_without_negation(rng):
    c = randgen.random_negation_free_ssl(rng, max_names=2, depth=2)
    g = randgen.random_graph(rng, max_nodes=3)
    lo, hi = lfp_assignment(c, g), gfp_assignment(c, g)
    models = list(sms_assignments(c, g))
    assert lo in models and hi in models
    assert all(lo <= m <= hi for m in models)


def test_search_budget():
    g = Graph.from_tuples(*[(iri(f"v{i}"), p, iri(f"v{i + 1}")) for i in range(30)])
    with pytest.raises(SearchBudgetExceeded):
        list(sms_assignments(REACH, g, SearchBudget(max_atoms=10)))
    with pytest.raises(SearchBudgetExceeded):
        validate(Schema(REACH, (("s", Test(A)),)), g, BRAVE, SearchBudget(max_atoms=10))


# -- validation ----------------------------------------------------------------------

BSEP1 = Schema(REACH, (("s", Test(A)),))


def test_bsep1_verdicts():
    assert validate(BSEP1, LOOP, GFP).conforms
    verdict = validate(BSEP1, LOOP, LFP)
    assert not verdict.conforms
    (violation,) = verdict.violations
    assert (violation.shape, violation.node) == ("s", A)


def test_fresh_constant_conforms_everywhere():
    g = Graph.from_tuples((A, p, B), (B, p, C), (C, p, A))
    sch = Schema(Catalogue({"s": Top()}), (("s", Test(iri("d"))),))
    assert all(validate(sch, g, sem).conforms for sem in SEMANTICS)


def test_gfp_witness_is_the_fixpoint():
    verdict = validate(BSEP1, LOOP, GFP)
    assert verdict.witness.restrict(["s"]) == gfp_assignment(REACH, LOOP)


def test_brave_witness_is_correct():
    verdict = validate(BSEP1, LOOP, BRAVE)
    assert verdict.conforms
    assert ("s", A) in verdict.witness


def test_cautious_on_inconsistent_catalogue():
    cons1 = Schema(Catalogue({"s": Exists(P, Ref("s2")), "s2": Not(Ref("s"))}), (("s", Test(A)),))
    for sem in (BRAVE, CAUTIOUS):
        verdict = validate(cons1, LOOP, sem)
        assert not verdict.conforms and verdict.inconsistent
        assert "inconsistent" in verdict.diagnostics


def test_unknown_semantics():
    with pytest.raises(ValueError):
        validate(BSEP1, LOOP, "wfs")


@given(st.randoms(use_true_random=False))
def test_non_recursive_catalogues_agree_under_all_semantics(rng):
    sch = randgen.random_ssl_schema(rng, randgen.random_nonrecursive_ssl)
    g = randgen.random_graph(rng)
    verdicts = {sem: validate(sch, g, sem).conforms for sem in SEMANTICS}
    assert len(set(verdicts.values())) == 1, verdicts
