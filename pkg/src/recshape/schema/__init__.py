"""Shape ASTs, the interchange format and catalogue analyses."""

from .analysis import (
    FRAGMENTS,
    RESTRICTED_SHACL,
    RESTRICTED_SHEX,
    SHACL0,
    SHEX0,
    FragmentReport,
    Stratification,
    check_fragment,
    check_stratification,
    constants,
    dependencies,
    dual_shape,
    dualize,
    embed_selectors,
    is_stratified,
    nnf,
    normalize_negation,
    selector_names,
    stratify,
)
from .ast import *  # noqa: F401,F403
from .ast import SHACL, SHEX, SSL, Catalogue, Schema, show
from .io import dump_schema, parse_schema, schema_from_json, schema_to_json

__all__ = [
    "FRAGMENTS",
    "RESTRICTED_SHACL",
    "RESTRICTED_SHEX",
    "SHACL",
    "SHACL0",
    "SHEX",
    "SHEX0",
    "SSL",
    "Catalogue",
    "FragmentReport",
    "Schema",
    "Stratification",
    "check_fragment",
    "check_stratification",
    "constants",
    "dependencies",
    "dual_shape",
    "dualize",
    "dump_schema",
    "embed_selectors",
    "is_stratified",
    "nnf",
    "normalize_negation",
    "parse_schema",
    "schema_from_json",
    "schema_to_json",
    "selector_names",
    "show",
    "stratify",
]
