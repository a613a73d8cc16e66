from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from reqonto.diagnostics import Diagnostic, error, warning
from reqonto.engine.closure import StrictBase
from reqonto.ontology import Literal, Model, partition_by_optionality
from reqonto.solver.candidates import (
    Candidate,
    UnsatisfiableCore,
    enumerate_candidates,
    enumerate_compulsory_combinations,
)
from reqonto.solver.conditions import (
    ConditionVerdict,
    ReasonerCache,
    check_approx_coverage,
    check_entailment,
    check_preference_projection,
)
from reqonto.solver.dominance import dominates
from reqonto.solver.preferences import AggregatePreference, resolve_meta_preferences

DEFAULT_MAX_CANDIDATES = 200_000
CONDITION_ORDER = ("c1", "c4", "c5")


@dataclass(frozen=True)
class Solution:
    candidate: Candidate
    verdicts: dict[str, ConditionVerdict]
    warranted: frozenset[Literal]

    @property
    def plans(self) -> frozenset[str]:
        return self.candidate.P


@dataclass
class SolveResult:
    solutions: list[Solution]
    diagnostics: list[Diagnostic]
    exhaustive: bool
    aggregate: AggregatePreference | None
    evaluated: int = 0
    feasible: int = 0
    dominated: int = 0
    feasible_candidates: list[Candidate] = field(default_factory=list, repr=False)


def evaluate_candidate(model: Model, cand: Candidate, agg: AggregatePreference, cache: ReasonerCache) -> dict[str, ConditionVerdict]:
    return {
        "c1": check_entailment(model, cand, cache.get(cand)),
        "c4": check_approx_coverage(model, cand),
        "c5": check_preference_projection(model, cand, agg),
    }


def _no_solution_diagnostics(failures: dict, first_failure: dict) -> list[Diagnostic]:
    diags = []
    for combo_label in sorted(failures):
        counts: Counter = failures[combo_label]
        total = counts.pop("_total")
        blocking = [c for c in CONDITION_ORDER if counts[c] == total]
        strongest = blocking[0] if blocking else max(CONDITION_ORDER, key=lambda c: (counts[c], -CONDITION_ORDER.index(c)))
        diags.append(error(
            "no-solution",
            f"combination [{combo_label}]: condition {strongest} fails for {counts[strongest]} of {total} candidates",
        ))
        diags.extend(first_failure[(combo_label, strongest)])
    return diags


def solve(
    model: Model,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    all_solutions: bool = True,
) -> SolveResult:
    """Find the non-dominated candidates that pass every feasibility condition.

    Candidates containing a disfavoured element are only considered when no
    candidate without one is feasible.  ``all_solutions=False`` keeps the
    first non-dominated candidate in signature order.
    """
    base = StrictBase(model.strict_rules)
    try:
        combos = enumerate_compulsory_combinations(model, base)
    except UnsatisfiableCore as exc:
        return SolveResult([], [error(UnsatisfiableCore.code, str(exc))], True, None)
    agg = resolve_meta_preferences(model.attitudes, model)
    diags: list[Diagnostic] = list(agg.diagnostics)
    cache = ReasonerCache(model)
    partition = partition_by_optionality(model)
    optional_ids = frozenset().union(*(partition[f"{k}_O"] for k in ("K", "G", "Q", "QS", "P")))
    disfavored = model.disfavored() & optional_ids

    exhaustive = True
    evaluated = 0
    feasible: list[Candidate] = []
    verdicts: dict[Candidate, dict[str, ConditionVerdict]] = {}
    failures: dict[str, Counter] = {}
    first_failure: dict[tuple[str, str], tuple[Diagnostic, ...]] = {}
    phases = [optional_ids - disfavored] + ([optional_ids] if disfavored else [])
    for allow in phases:
        for cand in enumerate_candidates(model, combos, allow):
            if allow is not phases[0] and not (cand.members & disfavored):
                continue  # already seen in the first phase
            if evaluated >= max_candidates:
                exhaustive = False
                break
            evaluated += 1
            v = evaluate_candidate(model, cand, agg, cache)
            if all(x.passed for x in v.values()):
                feasible.append(cand)
                verdicts[cand] = v
                continue
            counts = failures.setdefault(cand.combo.label(), Counter())
            counts["_total"] += 1
            for name, x in v.items():
                if not x.passed:
                    counts[name] += 1
                    first_failure.setdefault((cand.combo.label(), name), x.diagnostics)
        if feasible or not exhaustive:
            break

    if not exhaustive:
        diags.append(warning(
            "budget-exceeded",
            f"stopped after {max_candidates} candidates; results are not exhaustive",
        ))
    if not feasible:
        if exhaustive:
            diags.extend(_no_solution_diagnostics(failures, first_failure))
        return SolveResult([], diags, exhaustive, agg, evaluated, 0, 0)

    winners = [c for c in feasible if not any(dominates(d, c, agg, model) for d in feasible if d is not c)]
    dominated = len(feasible) - len(winners)
    winners.sort(key=lambda c: c.signature)
    if not all_solutions:
        winners = winners[:1]
    solutions = []
    for cand in winners:
        v = dict(verdicts[cand])
        # c2 and c3 hold by construction of the candidate space
        v["c2"] = ConditionVerdict("c2", True)
        v["c3"] = ConditionVerdict("c3", True)
        solutions.append(Solution(cand, dict(sorted(v.items())), cache.get(cand).consequences()))
    return SolveResult(solutions, diags, exhaustive, agg, evaluated, len(feasible), dominated, feasible)
