"""Evaluation, fixpoints, supported-model search and validation."""

from .assignment import ShapeAssignment, omega
from .evaluate import Evaluator, conforms_node, eval_shape, match_triple_expression, match_triple_expression_oracle
from .fixpoint import apply_operator, gfp_assignment, is_correct, lfp_assignment
from .paths import PathAutomaton, compile_path, eval_path
from .sms import SearchBudget, search_models, sms_assignments
from .triples import match_neighbourhood, match_neighbourhood_oracle
from .validate import BRAVE, CAUTIOUS, GFP, LFP, SEMANTICS, Verdict, Violation, validate

__all__ = [
    "BRAVE",
    "CAUTIOUS",
    "GFP",
    "LFP",
    "SEMANTICS",
    "Evaluator",
    "PathAutomaton",
    "SearchBudget",
    "ShapeAssignment",
    "Verdict",
    "Violation",
    "apply_operator",
    "compile_path",
    "conforms_node",
    "eval_path",
    "eval_shape",
    "gfp_assignment",
    "is_correct",
    "lfp_assignment",
    "match_neighbourhood",
    "match_neighbourhood_oracle",
    "match_triple_expression",
    "match_triple_expression_oracle",
    "omega",
    "search_models",
    "sms_assignments",
    "validate",
]
