"""Normalizations and the ShEx/SHACL translation pipeline."""

from .bridge import dualize_schema, shacl0_to_shex0, shex0_to_shacl0
from .pipeline import DIRECTIONS, SHACL_TO_SHEX, SHEX_TO_SHACL, STAGES, run_stage, translate_schema
from .shacl import shacl_to_shacl0
from .shex import (
    DEFAULT_SIZE_LIMIT,
    TripleConstraintTable,
    determinize,
    determinize_catalogue,
    pad,
    shallowify,
    shex_to_shex0,
)

__all__ = [
    "DEFAULT_SIZE_LIMIT",
    "DIRECTIONS",
    "SHACL_TO_SHEX",
    "SHEX_TO_SHACL",
    "STAGES",
    "TripleConstraintTable",
    "determinize",
    "determinize_catalogue",
    "dualize_schema",
    "pad",
    "run_stage",
    "shacl0_to_shex0",
    "shacl_to_shacl0",
    "shallowify",
    "shex0_to_shacl0",
    "shex_to_shex0",
    "translate_schema",
]
