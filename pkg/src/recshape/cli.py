"""Command-line entry point.

Exit statuses: 0 when the answer is positive (conforms, stratified, all
expectations met), 1 when it is negative, 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .engine import SEMANTICS, SearchBudget, gfp_assignment, lfp_assignment, sms_assignments, validate
from .engine.assignment import ShapeAssignment
from .errors import NotStratified, RecshapeError
from .harness import (
    SEPARATION_IDS,
    builtin_tests,
    classify,
    format_report,
    format_table,
    load_adapters,
    published_results,
    run_external,
    run_testsuite,
)
from .harness.adapters import export_test
from .harness.run import summarize
from .model import Graph, parse_ntriples
from .schema import FRAGMENTS, Schema, check_fragment, dump_schema, parse_schema, show, stratify
from .translate import DIRECTIONS, STAGES, run_stage, translate_schema

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2
TEXT, JSON = "text", "json"


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: Path | None = None
    schema: Path | None = None
    semantics: str | None = None
    strict_selectors: bool = False
    sms_cap: int = SearchBudget.max_atoms
    format: str = TEXT

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            graph=getattr(args, "graph", None),
            schema=getattr(args, "schema", None),
            semantics=getattr(args, "semantics", None),
            strict_selectors=getattr(args, "strict_selectors", False),
            sms_cap=getattr(args, "sms_cap", SearchBudget.max_atoms),
            format=getattr(args, "format", TEXT),
        )

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(max_atoms=self.sms_cap)


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RecshapeError(f"cannot read {path}: {exc.strerror}") from None


def _load_schema(cfg: RunConfig) -> Schema:
    return parse_schema(_read(cfg.schema), strict_selectors=cfg.strict_selectors)


def _load_graph(cfg: RunConfig) -> Graph:
    return parse_ntriples(_read(cfg.graph))


# -- commands ----------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> int:
    sch, g = _load_schema(cfg), _load_graph(cfg)
    verdict = validate(sch, g, cfg.semantics, cfg.budget)
    if cfg.format == JSON:
        _emit_json(
            {
                "conforms": verdict.conforms,
                "semantics": verdict.semantics,
                "inconsistent": verdict.inconsistent,
                "diagnostics": verdict.diagnostics,
                "violations": [
                    {"shape": v.shape, "node": v.node.n3(), "selector": show(v.selector)} for v in verdict.violations
                ],
            }
        )
    else:
        print("conforms" if verdict.conforms else "does not conform")
        for v in verdict.violations:
            print(f"  {v.describe()}")
        if verdict.diagnostics:
            print(f"  {verdict.diagnostics}")
    return EXIT_YES if verdict.conforms else EXIT_NO


def _assignments(cfg: RunConfig, sch: Schema, g: Graph, limit: int) -> list[ShapeAssignment]:
    if cfg.semantics == "lfp":
        return [lfp_assignment(sch.catalogue, g)]
    if cfg.semantics == "gfp":
        return [gfp_assignment(sch.catalogue, g)]
    found = []
    for alpha in sms_assignments(sch.catalogue, g, cfg.budget):
        if len(found) == limit:
            break
        found.append(alpha)
    return found


def cmd_assignment(cfg: RunConfig, limit: int) -> int:
    sch, g = _load_schema(cfg), _load_graph(cfg)
    found = _assignments(cfg, sch, g, limit)
    fixpoint = cfg.semantics in ("lfp", "gfp")
    if cfg.format == JSON:
        records = [alpha.to_records() for alpha in found]
        _emit_json({"semantics": cfg.semantics, "assignments": records})
        return EXIT_YES
    for i, alpha in enumerate(found, 1):
        if not fixpoint:
            print(f"# assignment {i}: {len(alpha)} pairs")
        for s, u in alpha:
            print(f"{s} {u.short()}")
    if not fixpoint and not found:
        print("# no supported model")
    return EXIT_YES


def cmd_translate(cfg: RunConfig, direction: str | None, stage: str | None, output: Path | None) -> int:
    sch = _load_schema(cfg)
    out = translate_schema(sch, direction) if direction else run_stage(sch, stage)
    text = dump_schema(out)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_check(cfg: RunConfig, fragments: list[str]) -> int:
    sch = _load_schema(cfg)
    doc: dict = {"fragments": {}}
    ok = True
    try:
        strata = stratify(sch.catalogue)
        doc["stratified"] = True
        doc["strata"] = [sorted(layer) for layer in strata]
    except NotStratified as exc:
        ok = False
        doc["stratified"] = False
        doc["cycle"] = exc.cycle
    for frag in fragments:
        report = check_fragment(sch, frag)
        ok = ok and report.ok
        doc["fragments"][frag] = [{"where": w, "problem": p} for w, p in report.problems]
    if cfg.format == JSON:
        _emit_json(doc)
    else:
        if doc["stratified"]:
            n = len(doc["strata"])
            print(f"stratified: {n} {'stratum' if n == 1 else 'strata'}")
            for i, layer in enumerate(doc["strata"]):
                print(f"  {i}: {' '.join(layer)}")
        else:
            print(f"not stratified: negative cycle {' -> '.join(doc['cycle'])}")
        for frag, problems in doc["fragments"].items():
            print(f"{frag}: {'yes' if not problems else 'no'}")
            for p in problems:
                print(f"  {p['where'] or 'schema'}: {p['problem']}")
    return EXIT_YES if ok else EXIT_NO


def cmd_testsuite(cfg: RunConfig, export: Path | None) -> int:
    if export:
        for t in builtin_tests():
            export_test(t, Path(export))
    rows = run_testsuite()
    sep_ok, sep_n, feat_ok, feat_n = summarize(rows)
    if cfg.format == JSON:
        _emit_json(
            {
                "rows": [
                    {"test": t.id, "semantics": col, "observed": str(obs), "expected": str(exp)}
                    for t, col, obs, exp in rows
                ],
                "separation": {"matched": sep_ok, "total": sep_n},
                "feature": {"matched": feat_ok, "total": feat_n},
            }
        )
    else:
        for t, col, obs, exp in rows:
            mark = "ok" if obs == exp else "MISMATCH"
            print(f"{t.id:8} {col:12} {str(obs):22} expected {str(exp):22} {mark}")
        print(f"{sep_ok}/{sep_n} separation verdicts match the golden expectations")
        print(f"{feat_ok}/{feat_n} feature expectations met")
    return EXIT_YES if (sep_ok, feat_ok) == (sep_n, feat_n) else EXIT_NO


def cmd_classify(cfg: RunConfig, adapters: Path | None, published: bool, workdir: Path | None, jobs: int) -> int:
    results: dict[str, dict] = {}
    if published:
        results.update(published_results())
    if adapters:
        tests = [t for t in builtin_tests() if t.id in SEPARATION_IDS]
        with tempfile.TemporaryDirectory(prefix="recshape-") as tmp:
            base = Path(workdir) if workdir else Path(tmp)
            for a in load_adapters(adapters):
                with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
                    outcomes = list(pool.map(lambda t: run_external(a, t, base), tests))
                results[a.name] = {t.id: o for t, o in zip(tests, outcomes)}
    if not results:
        raise RecshapeError("nothing to classify: pass --adapters FILE or --published")
    reports = {name: classify(r) for name, r in results.items()}
    if cfg.format == JSON:
        _emit_json(
            {
                name: {
                    "results": {t: str(o) for t, o in results[name].items()},
                    "report": reports[name].to_json(),
                }
                for name in results
            }
        )
    else:
        sys.stdout.write(format_table(results))
        print()
        for name, report in reports.items():
            sys.stdout.write(format_report(name, report))
    return EXIT_YES


# -- argument parsing --------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recshape", description="Validate RDF graphs against recursive shape schemas.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph: bool = True, semantics: bool = True):
        if graph:
            sp.add_argument("-g", "--graph", type=Path, required=True, help="N-Triples data graph")
        if semantics:
            sp.add_argument("--semantics", required=True, choices=SEMANTICS)
            sp.add_argument("--sms-cap", type=int, default=SearchBudget.max_atoms, help="max (shape, node) atoms searched")
        sp.add_argument("--strict-selectors", action="store_true", help="only test atoms as selectors")
        sp.add_argument("--format", choices=(TEXT, JSON), default=TEXT)

    v = sub.add_parser("validate", help="check a graph against a schema")
    v.add_argument("-s", "--schema", type=Path, required=True)
    common(v)

    a = sub.add_parser("assignment", help="print the fixpoint or the supported-model assignments")
    a.add_argument("-s", "--schema", type=Path, required=True)
    common(a)
    a.add_argument("-n", type=int, default=10, help="enumerate at most N supported models")

    t = sub.add_parser("translate", help="rewrite a schema")
    t.add_argument("schema", type=Path)
    how = t.add_mutually_exclusive_group(required=True)
    how.add_argument("--direction", choices=DIRECTIONS)
    how.add_argument("--stage", choices=STAGES)
    t.add_argument("-o", "--output", type=Path)
    common(t, graph=False, semantics=False)

    c = sub.add_parser("check", help="report stratification and fragment membership")
    c.add_argument("-s", "--schema", type=Path, required=True)
    c.add_argument("--fragment", action="append", choices=FRAGMENTS, default=[])
    common(c, graph=False, semantics=False)

    ts = sub.add_parser("testsuite", help="run the built-in tests on the internal engine")
    ts.add_argument("--export", type=Path, metavar="DIR", help="also write each test's graph and schema to DIR")
    ts.add_argument("--format", choices=(TEXT, JSON), default=TEXT)

    cl = sub.add_parser("classify", help="classify validators by the semantics they agree with")
    cl.add_argument("--adapters", type=Path, help="TOML file describing external validators")
    cl.add_argument("--published", action="store_true", help="include the published results of eight validators")
    cl.add_argument("--workdir", type=Path, help="keep exported test files here")
    cl.add_argument("-j", "--jobs", type=int, default=4)
    cl.add_argument("--format", choices=(TEXT, JSON), default=TEXT)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        if cfg.command == "validate":
            return cmd_validate(cfg)
        if cfg.command == "assignment":
            return cmd_assignment(cfg, args.n)
        if cfg.command == "translate":
            return cmd_translate(cfg, args.direction, args.stage, args.output)
        if cfg.command == "check":
            return cmd_check(cfg, args.fragment)
        if cfg.command == "testsuite":
            return cmd_testsuite(cfg, args.export)
        return cmd_classify(cfg, args.adapters, args.published, args.workdir, args.jobs)
    except RecshapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
