"""Feasibility checks for a single candidate (entailment, approximation coverage, projection)."""

from __future__ import annotations

from dataclasses import dataclass

from reqonto.diagnostics import Diagnostic, error
from reqonto.engine.reasoner import DefeasibleProgram, Reasoner
from reqonto.ontology import Model
from reqonto.solver.candidates import Candidate
from reqonto.solver.preferences import AggregatePreference

C1_UNWARRANTED = "c1-unwarranted"
C1_ASSUMPTION_VIOLATED = "c1-assumption-violated"
C1_INCONSISTENT = "c1-inconsistent-base"
C4_UNCOVERED = "c4-uncovered-softgoal"
C5_UNPROJECTED = "c5-unprojected-preference"


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    passed: bool
    diagnostics: tuple[Diagnostic, ...] = ()

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "passed": self.passed,
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }


def candidate_program(model: Model, cand: Candidate) -> DefeasibleProgram:
    index = model.element_index
    facts = frozenset(index[i].holds for i in cand.K | cand.P)
    return DefeasibleProgram.from_rules(facts, model.rules, model.priorities)


class ReasonerCache:
    """Reasoners keyed by fact set; candidates that share K* and P* share one."""

    def __init__(self, model: Model):
        self.model = model
        self._by_facts: dict[frozenset, Reasoner] = {}

    def get(self, cand: Candidate) -> Reasoner:
        program = candidate_program(self.model, cand)
        if program.facts not in self._by_facts:
            self._by_facts[program.facts] = Reasoner(program)
        return self._by_facts[program.facts]


def check_entailment(model: Model, cand: Candidate, reasoner: Reasoner | None = None) -> ConditionVerdict:
    index = model.element_index
    reasoner = reasoner or Reasoner(candidate_program(model, cand))
    if not reasoner.consistent:
        facts = reasoner.program.facts
        violated = []
        for k in sorted(cand.K):
            lit = index[k].holds
            cl = reasoner.base.closure(facts - {lit})
            if cl is not None and lit.complement() in cl:
                violated.append(k)
        if violated:
            return ConditionVerdict("c1", False, tuple(
                error(C1_ASSUMPTION_VIOLATED, f"the specification violates domain assumption {k} ({index[k].holds})", element=k)
                for k in violated
            ))
        return ConditionVerdict("c1", False, (
            error(C1_INCONSISTENT, "assumptions, plans and strict rules are inconsistent"),
        ))
    diags = []
    for k in sorted(cand.K):
        if reasoner.warranted(index[k].holds.complement()):
            diags.append(error(C1_ASSUMPTION_VIOLATED, f"domain assumption {k} is defeated", element=k))
    for eid in sorted(cand.G | cand.Q):
        lit = index[eid].holds
        if not reasoner.warranted(lit):
            diags.append(error(C1_UNWARRANTED, f"{eid} requires {lit}, which is not warranted", element=eid))
    return ConditionVerdict("c1", not diags, tuple(diags))


def check_approx_coverage(model: Model, cand: Candidate) -> ConditionVerdict:
    diags = []
    for sg in sorted(cand.QS):
        if not any(a.softgoal == sg and a.qc in cand.Q for a in model.approximations):
            diags.append(error(C4_UNCOVERED, f"softgoal {sg} has no justified approximation by a chosen quality constraint", element=sg))
    return ConditionVerdict("c4", not diags, tuple(diags))


def check_preference_projection(model: Model, cand: Candidate, agg: AggregatePreference) -> ConditionVerdict:
    approx: dict[str, set[str]] = {}
    for a in model.approximations:
        if a.qc in cand.Q:
            approx.setdefault(a.softgoal, set()).add(a.qc)
    qc_orders = {(p.preferred, p.dispreferred) for p in agg.over(cand.Q)}
    diags = []
    for p in agg.over(cand.QS):
        ok = any(
            (qa, qb) in qc_orders
            for qa in approx.get(p.preferred, ())
            for qb in approx.get(p.dispreferred, ())
        )
        if not ok:
            diags.append(error(
                C5_UNPROJECTED,
                f"softgoal preference {p.id} ({p.preferred} > {p.dispreferred}) has no mirroring quality-constraint preference",
                element=p.id,
            ))
    return ConditionVerdict("c5", not diags, tuple(diags))
