import itertools
import sys

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from recshape.engine import validate
from recshape.harness import (
    SEPARATION_IDS,
    Outcome,
    builtin_tests,
    classify,
    format_report,
    format_table,
    gen_3col,
    get_test,
    parse_adapters,
    published_results,
    run_external,
    run_internal,
    run_testsuite,
    three_colourable,
)
from recshape.harness.adapters import AdapterConfigError, EngineAdapter, export_test
from recshape.harness.classify import CONSISTENT, IGNORING_FAILURES, INCONSISTENT
from recshape.harness.corpus import COLUMNS, FEATURE_IDS, SEPARATION
from recshape.harness.run import summarize
from recshape.model import parse_ntriples, serialize_ntriples
from recshape.schema import parse_schema

PY = sys.executable


def adapter(command: str, timeout: float = 5.0, **kw) -> EngineAdapter:
    return EngineAdapter(name="probe", command=command, yes="^conforms", no="^does not conform", timeout=timeout, **kw)


# -- corpus ------------------------------------------------------------------


def test_corpus_ids_and_kinds():
    tests = builtin_tests()
    assert [t.id for t in tests if t.kind == SEPARATION] == list(SEPARATION_IDS)
    assert {t.id for t in tests} == set(SEPARATION_IDS) | set(FEATURE_IDS)
    assert len(tests) == 13
    for t in tests:
        if t.kind == SEPARATION:
            assert set(t.expected) == set(COLUMNS)


def test_corpus_expectations():
    assert get_test("bsep1").expected == {"GFP": "yes", "LFP": "no", "braveSMS": "yes", "cautiousSMS": "no"}
    assert get_test("reach2").expected == {"GFP": "no", "LFP": "yes", "braveSMS": "yes", "cautiousSMS": "no"}
    assert get_test("cons1").passing_condition == "the validator rejects"
    with pytest.raises(KeyError):
        get_test("nope")


def test_run_internal_examples():
    assert run_internal(get_test("bsep1"), "GFP") == Outcome.yes()
    assert run_internal(get_test("bsep1"), "lfp") == Outcome.no()
    assert run_internal(get_test("nstrat2"), "LFP") == Outcome.fail("not-stratified")
    assert run_internal(get_test("fresh"), "cautiousSMS") == Outcome.yes()
    with pytest.raises(ValueError):
        run_internal(get_test("bsep1"), "wfs")


def test_testsuite_matches_expectations():
    rows = run_testsuite()
    assert summarize(rows) == (32, 32, 20, 20)


def test_feature_contract():
    for tid in ("nstrat1", "nstrat2", "cons1", "cons2"):
        for col in ("LFP", "GFP"):
            assert run_internal(get_test(tid), col) == Outcome.fail("not-stratified")
    for tid in ("cons1", "cons2"):
        t = get_test(tid)
        assert run_internal(t, "braveSMS") == Outcome.no()
        verdict = validate(t.schema, t.graph, "cautious")
        assert not verdict.conforms
        assert verdict.inconsistent == ("cautiousSMS" in t.inconsistent_under)
    # cons1 has no supported model at all; cons2 has two, but its selectors contradict each other
    assert "cautiousSMS" in get_test("cons1").inconsistent_under
    assert not get_test("cons2").inconsistent_under
    for col in COLUMNS:
        assert run_internal(get_test("fresh"), col) == Outcome.yes()


def test_export_roundtrip(tmp_path):
    t = get_test("reach1")
    graph, schema = export_test(t, tmp_path)
    assert parse_ntriples(graph.read_text()) == t.graph
    assert parse_schema(schema.read_text()) == t.schema
    assert serialize_ntriples(t.graph) == graph.read_text()


# -- outcomes and adapters ---------------------------------------------------


def test_outcome_parse():
    assert Outcome.parse("yes") == Outcome.yes()
    assert Outcome.parse("fail") == Outcome.fail("error")
    assert Outcome.parse("fail(timeout)") == Outcome.fail("timeout")
    assert str(Outcome.fail("crash")) == "fail(crash)"
    with pytest.raises(ValueError):
        Outcome.parse("maybe")


def test_decoder_is_total():
    a = adapter("x", exit_codes={"3": "no"})
    assert a.decode(0, "conforms\n") == Outcome.yes()
    assert a.decode(1, "does not conform\n") == Outcome.no()
    assert a.decode(3, "") == Outcome.no()
    assert a.decode(1, "") == Outcome.fail("crash")
    assert a.decode(1, "Traceback ...") == Outcome.fail("error")
    assert a.decode(0, "hello") == Outcome.fail("undecodable")
    assert a.decode(0, "conforms\ndoes not conform\n") == Outcome.fail("undecodable")


def test_run_external_echo(tmp_path):
    a = adapter(f"{PY} -c \"print('conforms')\" {{graph}} {{schema}}")
    assert run_external(a, get_test("bsep1"), tmp_path) == Outcome.yes()
    assert (tmp_path / "probe" / "bsep1" / "bsep1.nt").exists()


def test_run_external_timeout(tmp_path):
    a = adapter(f"{PY} -c \"import time; time.sleep(10)\"", timeout=0.5)
    assert run_external(a, get_test("bsep1"), tmp_path) == Outcome.fail("timeout")


def test_run_external_crash(tmp_path):
    a = adapter(f"{PY} -c \"raise SystemExit(4)\"")
    assert run_external(a, get_test("bsep1"), tmp_path) == Outcome.fail("crash")
    missing = adapter("no-such-validator-anywhere {graph}")
    assert run_external(missing, get_test("bsep1"), tmp_path) == Outcome.fail("crash")


def test_parse_adapters():
    text = """
[[adapter]]
name = "v"
command = "v {graph} {schema}"
timeout = 2
decode.yes = "ok"
decode.no = "bad"
exit_codes = { "0" = "yes", "2" = "fail(error)" }
"""
    (a,) = parse_adapters(text)
    assert (a.name, a.timeout, a.yes, a.no) == ("v", 2.0, "ok", "bad")
    assert a.decode(2, "") == Outcome.fail("error")
    assert a.argv("g.nt", "s.json") == ["v", "g.nt", "s.json"]


@pytest.mark.parametrize(
    "text",
    [
        '[[adapter]]\nname = "v"\ncommand = "v"\n',
        '[[adapter]]\nname = "v"\ncommand = "v"\ndecode.yes = "("\ndecode.no = "x"\n',
        '[[adapter]]\nname = "v"\ncommand = "v"\ngraph_format = "ttl"\ndecode.yes = "a"\ndecode.no = "b"\n',
        '[[adapter]]\nname = "v"\ncommand = "v"\ndecode.yes = "a"\ndecode.no = "b"\nexit_codes = { "0" = "maybe" }\n',
        "adapter = 3\n",
        "[[adapter\n",
    ],
)
def test_bad_adapter_configs(text):
    with pytest.raises(AdapterConfigError):
        parse_adapters(text)


# -- classification ----------------------------------------------------------


def test_classify_all_gfp_row():
    report = classify(published_results()["rudof-ShEx"])
    assert report.status == {
        "GFP": CONSISTENT,
        "LFP": INCONSISTENT,
        "braveSMS": INCONSISTENT,
        "cautiousSMS": INCONSISTENT,
    }
    assert len(report.evidence["LFP"]) == 8
    assert [t for t, _, _ in report.evidence["braveSMS"]] == ["reach2"]


def test_classify_topbraid_inconsistent_everywhere():
    report = classify(published_results()["Topbraid"])
    assert all(report.status[c] == INCONSISTENT for c in COLUMNS)
    assert all(report.evidence[c] for c in COLUMNS)


def test_classify_pyshacl_brave_ignoring_failures():
    report = classify(published_results()["pySHACL"])
    assert report.status["braveSMS"] == IGNORING_FAILURES
    assert report.consistent_with("braveSMS", ignore_failures=True)
    assert not report.consistent_with("braveSMS")


def test_classify_missing_tests():
    with pytest.raises(ValueError, match="bsep2"):
        classify({"bsep1": "yes"})


outcome = st.sampled_from(["yes", "no", "fail(error)"])


@given(st.lists(outcome, min_size=8, max_size=8), st.sets(st.sampled_from(SEPARATION_IDS)))
def test_classify_monotone_in_failures(row, to_fail):
    results = dict(zip(SEPARATION_IDS, row))
    before = classify(results)
    worse = {t: ("fail(timeout)" if t in to_fail else o) for t, o in results.items()}
    after = classify(worse)
    for col in COLUMNS:
        if before.consistent_with(col, ignore_failures=True):
            assert after.consistent_with(col, ignore_failures=True)
        if before.status[col] == INCONSISTENT:
            assert before.evidence[col]


def test_format_table_and_report():
    rows = published_results()
    table = format_table({"pySHACL": rows["pySHACL"], "rudof-ShEx": rows["rudof-ShEx"]})
    lines = table.splitlines()
    assert lines[0].split() == ["test", "pySHACL", "rudof-ShEx", *COLUMNS]
    assert lines[1].split() == ["bsep1", "y", "y", "y", "n", "y", "n"]
    assert lines[3].split()[1] == "X"
    text = format_report("pySHACL", classify(rows["pySHACL"]))
    assert "braveSMS: consistent-ignoring-failures" in text


# -- 3-colouring -------------------------------------------------------------


def brave(nodes, edges) -> bool:
    g, sch = gen_3col(nodes, edges)
    return validate(sch, g, "brave").conforms


def test_3col_examples():
    k3 = list(itertools.permutations(range(3), 2))
    k4 = list(itertools.combinations(range(4), 2))
    assert brave(range(3), k3)
    assert not brave(range(4), k4)
    assert brave([0], [])


def test_3col_small_graphs():
    for h in nx.graph_atlas_g()[1:20]:
        edges = list(h.edges())
        assert brave(h.nodes(), edges) == three_colourable(h.nodes(), edges), edges


def test_3col_graph_layout():
    g, sch = gen_3col([0, 1], [(0, 1)])
    assert len(g) == 1 + 2 + 2
    assert sch.selectors[0][0] == "Ok"
