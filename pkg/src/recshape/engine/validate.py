"""Graph validation under the four semantics."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import Graph, Term
from ..schema.analysis import embed_selectors, selector_names
from ..schema.ast import Schema, show
from .assignment import ShapeAssignment
from .evaluate import Evaluator
from .fixpoint import gfp_assignment, lfp_assignment
from .sms import SearchBudget, search_models

LFP = "lfp"
GFP = "gfp"
BRAVE = "brave"
CAUTIOUS = "cautious"
SEMANTICS = (LFP, GFP, BRAVE, CAUTIOUS)


@dataclass(frozen=True)
class Violation:
    shape: str
    selector: object
    node: Term

    def describe(self) -> str:
        return f"{self.shape} {self.node.short()} (selector {show(self.selector)})"


@dataclass
class Verdict:
    conforms: bool
    semantics: str
    witness: ShapeAssignment | None = None
    violations: list[Violation] = field(default_factory=list)
    inconsistent: bool = False
    diagnostics: str = ""


def _violations(witness: ShapeAssignment, sentinels: dict) -> list[Violation]:
    out = []
    for t, (s, tau) in sentinels.items():
        for u in sorted(witness.of(t), key=Term.sort_key):
            out.append(Violation(s, tau, u))
    return sorted(out, key=lambda v: (v.shape, v.node.sort_key(), show(v.selector)))


def validate(sch: Schema, g: Graph, semantics: str = LFP, budget: SearchBudget | None = None) -> Verdict:
    """Check ``g`` against ``sch``; raises NotStratified for lfp/gfp on unstratified input."""
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    sentinels = selector_names(sch)
    c = embed_selectors(sch)

    if semantics in (LFP, GFP):
        fix = lfp_assignment if semantics == LFP else gfp_assignment
        alpha = fix(c, g)
        bad = _violations(alpha, sentinels)
        return Verdict(not bad, semantics, alpha, bad)

    if semantics == BRAVE:
        blocked = [(t, u) for t in sentinels for u in Evaluator(g, c).universe]
        for model in search_models(c, g, force_false=blocked, budget=budget):
            return Verdict(True, semantics, model)
        consistent = next(iter(search_models(c, g, budget=budget)), None) is not None
        if consistent:
            return Verdict(False, semantics, diagnostics="no supported model satisfies every selector")
        return Verdict(False, semantics, inconsistent=True, diagnostics="inconsistent catalogue: no supported model")

    ev = Evaluator(g, c)
    for t, (s, tau) in sentinels.items():
        for u in sorted(ev.eval(tau, {}), key=Term.sort_key):
            model = next(iter(search_models(c, g, force_true=[(t, u)], budget=budget)), None)
            if model is not None:
                return Verdict(False, semantics, model, _violations(model, sentinels))
    if next(iter(search_models(c, g, budget=budget)), None) is None:
        return Verdict(False, semantics, inconsistent=True, diagnostics="inconsistent catalogue: no supported model")
    return Verdict(True, semantics)
