"""End-to-end translation between restricted ShEx (GFP) and restricted SHACL (LFP)."""

from __future__ import annotations

from collections.abc import Callable

from ..errors import FragmentViolation, NotStratified, RecshapeError, StageError
from ..schema.analysis import (
    RESTRICTED_SHACL,
    RESTRICTED_SHEX,
    SHACL0,
    SHEX0,
    check_fragment,
    normalize_negation,
    stratify,
)
from ..schema.ast import Schema
from .bridge import dualize_schema, shacl0_to_shex0, shex0_to_shacl0
from .shacl import shacl_to_shacl0
from .shex import DEFAULT_SIZE_LIMIT, determinize_catalogue, shallowify, shex_to_shex0

SHEX_TO_SHACL = "shex-gfp-to-shacl-lfp"
SHACL_TO_SHEX = "shacl-lfp-to-shex-gfp"
DIRECTIONS = (SHEX_TO_SHACL, SHACL_TO_SHEX)

STAGES = ("shallowify", "determinize", "shex0", "shacl0", "dualize")


def _run(stage: str, fn: Callable[[], Schema]) -> Schema:
    try:
        return fn()
    except NotStratified as exc:
        raise NotStratified(exc.cycle, stage) from exc
    except StageError:
        raise
    except (RecshapeError, ValueError) as exc:
        raise StageError(stage, exc) from exc


def _require(sch: Schema, fragment: str) -> Schema:
    report = check_fragment(sch, fragment)
    if not report.ok:
        raise FragmentViolation(fragment, [f"{pos}: {msg}" if pos else msg for pos, msg in report.problems])
    return sch


def _with_catalogue(sch: Schema, c, stage: str) -> Schema:
    return Schema(c, sch.selectors, sch.provenance + (stage,))


def _stamp(sch: Schema, stage: str) -> Schema:
    return Schema(sch.catalogue, sch.selectors, sch.provenance + (stage,))


def _stratified(stage: str, sch: Schema) -> None:
    try:
        stratify(sch.catalogue)
    except NotStratified as exc:
        raise NotStratified(exc.cycle, stage) from exc


def run_stage(sch: Schema, stage: str, limit: int = DEFAULT_SIZE_LIMIT) -> Schema:
    """Apply a single named stage, as exposed on the command line."""
    if stage == "shallowify":
        return _run(stage, lambda: _with_catalogue(sch, shallowify(sch.catalogue), stage))
    if stage == "determinize":
        return _run(stage, lambda: _with_catalogue(sch, determinize_catalogue(shallowify(sch.catalogue), limit), stage))
    if stage == "shex0":
        return _run(stage, lambda: _with_catalogue(sch, shex_to_shex0(shallowify(sch.catalogue), limit), stage))
    if stage == "shacl0":
        if sch.dialect == "ShEx":
            return _run(stage, lambda: _stamp(shex0_to_shacl0(_require(sch, SHEX0)), stage))
        return _run(stage, lambda: _with_catalogue(sch, shacl_to_shacl0(sch.catalogue), stage))
    if stage == "dualize":
        return _run(stage, lambda: _stamp(dualize_schema(sch), stage))
    raise ValueError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")


def translate_schema(sch: Schema, direction: str, limit: int = DEFAULT_SIZE_LIMIT) -> Schema:
    """Translate between the two restricted fragments, preserving verdicts.

    ``shex-gfp-to-shacl-lfp``: a restricted ShEx schema read under greatest
    fixpoints becomes a SHACL₀ schema with the same verdicts under least
    fixpoints.  ``shacl-lfp-to-shex-gfp`` goes the other way.  Stage
    failures are re-raised tagged with the stage name.
    """
    if direction == SHEX_TO_SHACL:
        _run("check", lambda: _require(sch, RESTRICTED_SHEX))
        _stratified("check", sch)
        out = _with_catalogue(sch, _run("shallowify", lambda: shallowify(sch.catalogue)), "shallowify")
        out = _with_catalogue(out, _run("shex0", lambda: shex_to_shex0(out.catalogue, limit)), "shex0")
        out = _run("shacl0", lambda: _stamp(shex0_to_shacl0(_require(out, SHEX0)), "shacl0"))
        out = _run("dualize", lambda: _stamp(dualize_schema(normalized(out)), "dualize"))
        _run("dualize", lambda: _require(out, SHACL0))
        _stratified("dualize", out)
        return out
    if direction == SHACL_TO_SHEX:
        _run("check", lambda: _require(sch, RESTRICTED_SHACL))
        _stratified("check", sch)
        out = _with_catalogue(sch, _run("shacl0", lambda: shacl_to_shacl0(sch.catalogue)), "shacl0")
        out = _run("dualize", lambda: _stamp(dualize_schema(normalized(out)), "dualize"))
        _stratified("dualize", out)
        out = _run("shex0", lambda: _stamp(shacl0_to_shex0(out), "shex0"))
        _run("shex0", lambda: _require(out, SHEX0))
        return out
    raise ValueError(f"unknown direction {direction!r}; expected one of {', '.join(DIRECTIONS)}")


def normalized(sch: Schema) -> Schema:
    return Schema(normalize_negation(sch.catalogue), sch.selectors, sch.provenance)
