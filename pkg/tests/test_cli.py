import json
import shutil
from pathlib import Path

import pytest

from recshape.cli import EXIT_ERROR, EXIT_NO, EXIT_YES, main
from recshape.schema import parse_schema

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
SMALL = str(SAMPLES / "small.nt")
CHAIN = str(SAMPLES / "chain.json")
LOOP = str(SAMPLES / "loop.json")


@pytest.fixture
def loop_graph(tmp_path):
    path = tmp_path / "loop.nt"
    path.write_text("<a> <p> <a> .\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_exit_codes(capsys, loop_graph):
    code, out, _ = run(capsys, "validate", "-g", loop_graph, "-s", LOOP, "--semantics", "lfp")
    assert code == EXIT_NO
    assert out.startswith("does not conform")
    code, out, _ = run(capsys, "validate", "-g", loop_graph, "-s", LOOP, "--semantics", "gfp", "--format", "json")
    assert code == EXIT_YES
    doc = json.loads(out)
    assert doc["conforms"] and doc["semantics"] == "gfp" and doc["violations"] == []


def test_validate_chain(capsys):
    code, out, _ = run(capsys, "validate", "-g", SMALL, "-s", CHAIN, "--semantics", "cautious")
    assert (code, out.strip()) == (EXIT_YES, "conforms")


def test_assignment_lfp(capsys):
    code, out, _ = run(capsys, "assignment", "-g", SMALL, "-s", CHAIN, "--semantics", "lfp")
    assert code == EXIT_YES
    lines = out.splitlines()
    assert 's1 "d"' in lines and "s2 b" in lines and "s3 a" in lines


def test_assignment_sms(capsys, loop_graph):
    code, out, _ = run(capsys, "assignment", "-g", loop_graph, "-s", LOOP, "--semantics", "brave")
    assert code == EXIT_YES
    assert out.count("# assignment") == 2
    code, out, _ = run(capsys, "assignment", "-g", loop_graph, "-s", LOOP, "--semantics", "brave", "-n", "1")
    assert out.count("# assignment") == 1


def test_assignment_empty_catalogue(capsys, tmp_path):
    schema = tmp_path / "empty.json"
    schema.write_text('{"dialect": "SSL", "shapes": {}, "targets": []}')
    code, out, _ = run(capsys, "assignment", "-g", SMALL, "-s", str(schema), "--semantics", "gfp")
    assert (code, out) == (EXIT_YES, "")


def test_assignment_json(capsys, loop_graph):
    code, out, _ = run(capsys, "assignment", "-g", loop_graph, "-s", LOOP, "--semantics", "gfp", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_YES and len(doc["assignments"]) == 1


def test_translate_to_file(capsys, tmp_path):
    out_path = tmp_path / "dual.json"
    code, out, _ = run(capsys, "translate", LOOP, "--stage", "dualize", "-o", str(out_path))
    assert (code, out) == (EXIT_YES, "")
    dual = parse_schema(out_path.read_text())
    assert dual.dialect == "SSL" and "s" in dual.catalogue


def test_translate_direction_error_is_tagged(capsys):
    code, _, err = run(capsys, "translate", LOOP, "--direction", "shex-gfp-to-shacl-lfp")
    assert code == EXIT_ERROR
    assert err.startswith("error: [check]")


def test_translate_needs_direction_or_stage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["translate", LOOP])
    assert info.value.code == 2


def test_check(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "-s", CHAIN, "--fragment", "SSL", "--fragment", "SHACL0")
    assert code == EXIT_NO
    assert "stratified: 1 stratum" in out and "SSL: yes" in out and "SHACL0: no" in out
    nstrat = tmp_path / "nstrat.json"
    nstrat.write_text(
        json.dumps(
            {
                "dialect": "SSL",
                "shapes": {"s": {"op": "exists", "path": "p", "shape": {"op": "not", "shape": {"op": "ref", "name": "s"}}}},
                "targets": [],
            }
        )
    )
    code, out, _ = run(capsys, "check", "-s", str(nstrat), "--format", "json")
    assert code == EXIT_NO
    assert json.loads(out)["cycle"] == ["s", "s"]


def test_testsuite(capsys, tmp_path):
    code, out, _ = run(capsys, "testsuite", "--export", str(tmp_path))
    assert code == EXIT_YES
    assert "32/32 separation verdicts match the golden expectations" in out
    assert "20/20 feature expectations met" in out
    assert (tmp_path / "bsep1.nt").exists() and (tmp_path / "cons2.json").exists()


def test_classify_published(capsys):
    code, out, _ = run(capsys, "classify", "--published", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_YES
    assert doc["Topbraid"]["report"]["GFP"]["status"] == "inconsistent"


def test_classify_missing_binary(capsys, tmp_path):
    config = tmp_path / "adapters.toml"
    config.write_text('[[adapter]]\nname = "gone"\ncommand = "no-such-validator {graph}"\ndecode.yes = "y"\ndecode.no = "n"\n')
    code, out, _ = run(capsys, "classify", "--adapters", str(config), "--workdir", str(tmp_path / "work"))
    assert code == EXIT_YES
    assert "gone:" in out and "GFP: consistent-ignoring-failures" in out


@pytest.mark.skipif(shutil.which("recshape") is None, reason="console script not installed")
def test_classify_example_adapters(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--adapters", str(SAMPLES / "adapters.example.toml"), "--workdir", str(tmp_path))
    assert code == EXIT_YES
    assert "recshape-gfp:\n  GFP: consistent\n" in out


def test_classify_needs_input(capsys):
    code, _, err = run(capsys, "classify")
    assert code == EXIT_ERROR and "nothing to classify" in err


def test_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "-g", str(tmp_path / "missing.nt"), "-s", LOOP, "--semantics", "lfp")
    assert code == EXIT_ERROR and err.startswith("error: cannot read")
    bad = tmp_path / "bad.nt"
    bad.write_text("<a> <p> .\n")
    code, _, err = run(capsys, "validate", "-g", str(bad), "-s", LOOP, "--semantics", "lfp")
    assert code == EXIT_ERROR and "line 1" in err


def test_assignment_sms_on_small_graph(capsys):
    code, out, _ = run(capsys, "assignment", "-g", SMALL, "-s", LOOP, "--semantics", "cautious")
    assert code == EXIT_YES
    blocks = [b.strip().splitlines()[1:] for b in out.split("# assignment")[1:]]
    assert sorted(blocks) == [[], ["s a", "s b"]]


def test_translate_stage_dualize_example(capsys, tmp_path):
    from recshape.model import iri
    from recshape.schema.ast import Exists, Or, Pred, Ref, Test

    src = tmp_path / "unreachable.json"
    src.write_text(
        json.dumps(
            {
                "dialect": "SSL",
                "shapes": {
                    "s": {
                        "op": "and",
                        "args": [
                            {"op": "not", "shape": {"op": "test", "term": "b"}},
                            {"op": "forall", "path": "p", "shape": {"op": "ref", "name": "s"}},
                        ],
                    }
                },
                "targets": [],
            }
        )
    )
    code, out, _ = run(capsys, "translate", str(src), "--stage", "dualize")
    assert code == EXIT_YES
    dual = parse_schema(out)
    assert dual.catalogue["s"] == Or((Test(iri("b")), Exists(Pred(iri("p")), Ref("s"))))
    assert dual.provenance == ("dualize",)


def test_translate_sample_preserves_verdict(capsys, tmp_path, loop_graph):
    out_path = tmp_path / "shacl.json"
    code, _, _ = run(capsys, "translate", str(SAMPLES / "shex.json"), "--direction", "shex-gfp-to-shacl-lfp", "-o", str(out_path))
    assert code == EXIT_YES
    code, out, _ = run(capsys, "check", "-s", str(out_path), "--fragment", "SHACL0")
    assert code == EXIT_YES and "SHACL0: yes" in out
    src, _, _ = run(capsys, "validate", "-g", loop_graph, "-s", str(SAMPLES / "shex.json"), "--semantics", "gfp")
    dst, _, _ = run(capsys, "validate", "-g", loop_graph, "-s", str(out_path), "--semantics", "lfp")
    assert src == dst == EXIT_YES
