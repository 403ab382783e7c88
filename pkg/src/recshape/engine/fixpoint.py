"""Least and greatest fixpoint assignments of stratified catalogues."""

from __future__ import annotations

from collections.abc import Callable

from ..model import Graph, Term
from ..schema.analysis import Stratification, stratify
from ..schema.ast import Catalogue
from .assignment import ShapeAssignment
from .evaluate import Env, Evaluator

StepHook = Callable[[int, int, ShapeAssignment], None]


def apply_operator(c: Catalogue, g: Graph, alpha: ShapeAssignment | Env, evaluator: Evaluator | None = None) -> ShapeAssignment:
    """One application of the immediate-consequence operator T_C."""
    ev = evaluator or Evaluator(g, c)
    env = alpha.as_map() if isinstance(alpha, ShapeAssignment) else alpha
    return ShapeAssignment.from_map({s: ev.eval(shape, env) for s, shape in c.items()})


def is_correct(c: Catalogue, g: Graph, alpha: ShapeAssignment, evaluator: Evaluator | None = None) -> bool:
    """A correct assignment is a fixpoint of T_C, restricted to C's names."""
    return apply_operator(c, g, alpha, evaluator) == alpha.restrict(c)


def _fixpoint(
    c: Catalogue,
    g: Graph,
    greatest: bool,
    stratification: Stratification | None,
    on_step: StepHook | None,
) -> ShapeAssignment:
    strata = stratification if stratification is not None else stratify(c)
    ev = Evaluator(g, c)
    env: dict[str, frozenset[Term]] = {}
    for level, layer in enumerate(strata):
        names = sorted(layer)
        start = ev.universe if greatest else frozenset()
        env.update({s: start for s in names})
        step = 0
        while True:
            new = {s: ev.eval(c[s], env) for s in names}
            if on_step is not None:
                on_step(level, step, ShapeAssignment.from_map({**env, **new}))
            step += 1
            if all(new[s] == env[s] for s in names):
                break
            env.update(new)
    return ShapeAssignment.from_map(env)


def lfp_assignment(
    c: Catalogue,
    g: Graph,
    stratification: Stratification | None = None,
    on_step: StepHook | None = None,
) -> ShapeAssignment:
    """Stratum-by-stratum least fixpoint; raises NotStratified."""
    return _fixpoint(c, g, False, stratification, on_step)


def gfp_assignment(
    c: Catalogue,
    g: Graph,
    stratification: Stratification | None = None,
    on_step: StepHook | None = None,
) -> ShapeAssignment:
    """Stratum-by-stratum greatest fixpoint; raises NotStratified."""
    return _fixpoint(c, g, True, stratification, on_step)
