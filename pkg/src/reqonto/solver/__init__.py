from reqonto.solver.candidates import (
    Candidate,
    CompulsoryCombo,
    UnsatisfiableCore,
    count_candidates,
    enumerate_candidates,
    enumerate_compulsory_combinations,
)
from reqonto.solver.conditions import (
    ConditionVerdict,
    check_approx_coverage,
    check_entailment,
    check_preference_projection,
)
from reqonto.solver.dominance import dominates
from reqonto.solver.preferences import AggregatePreference, preferences_conflict, resolve_meta_preferences
from reqonto.solver.solve import Solution, SolveResult, solve
from reqonto.solver.verify import verify_solution
from reqonto.solver.zj import ModeNotApplicable, zj_mode

__all__ = [
    "AggregatePreference",
    "Candidate",
    "CompulsoryCombo",
    "ConditionVerdict",
    "ModeNotApplicable",
    "Solution",
    "SolveResult",
    "UnsatisfiableCore",
    "check_approx_coverage",
    "check_entailment",
    "check_preference_projection",
    "count_candidates",
    "dominates",
    "enumerate_candidates",
    "enumerate_compulsory_combinations",
    "preferences_conflict",
    "resolve_meta_preferences",
    "solve",
    "verify_solution",
    "zj_mode",
]
