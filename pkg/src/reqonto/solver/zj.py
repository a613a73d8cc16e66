"""Classical reduction: K, S |- R on models without attitudes or defeasibility."""

from __future__ import annotations

from reqonto.engine.closure import StrictBase
from reqonto.ontology import Kind, Model


class ModeNotApplicable(ValueError):
    code = "mode-not-applicable"


def zj_preconditions(model: Model) -> list[str]:
    problems = []
    if model.attitudes:
        problems.append("model has attitudes")
    if model.elements_of(Kind.SOFTGOAL):
        problems.append("model has softgoals")
    if any(not e.compulsory for e in model.elements):
        problems.append("model has optional elements")
    if model.defeasible_rules:
        problems.append("model has defeasible rules")
    if model.alternatives:
        problems.append("model has alternatives groups")
    return problems


def zj_mode(model: Model) -> bool:
    """True iff the assumptions and plans classically entail every goal and constraint.

    An inconsistent base entails nothing here: it is reported as false so the
    verdict matches the solver, which rejects inconsistent candidates.
    """
    problems = zj_preconditions(model)
    if problems:
        raise ModeNotApplicable("; ".join(problems))
    facts = {e.holds for e in model.elements if e.kind in (Kind.DOMAIN_ASSUMPTION, Kind.PLAN)}
    closure = StrictBase(model.strict_rules).closure(facts)
    if closure is None:
        return False
    required = [e.holds for e in model.elements if e.kind in (Kind.GOAL, Kind.QUALITY_CONSTRAINT)]
    return all(lit in closure for lit in required)
