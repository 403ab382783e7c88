"""Test corpus, external validator adapters, classifier and generators."""

from .adapters import EngineAdapter, load_adapters, parse_adapters, run_external
from .classify import ConsistencyReport, classify, format_report, format_table
from .corpus import ENGINE_ROWS, SEPARATION_IDS, TestCase, builtin_tests, get_test, published_results
from .outcome import Outcome
from .run import run_internal, run_testsuite
from .threecol import gen_3col, three_colourable

__all__ = [
    "ENGINE_ROWS",
    "SEPARATION_IDS",
    "ConsistencyReport",
    "EngineAdapter",
    "Outcome",
    "TestCase",
    "builtin_tests",
    "classify",
    "format_report",
    "format_table",
    "gen_3col",
    "get_test",
    "load_adapters",
    "parse_adapters",
    "published_results",
    "run_external",
    "run_internal",
    "run_testsuite",
    "three_colourable",
]
