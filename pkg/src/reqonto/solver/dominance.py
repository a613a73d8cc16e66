from __future__ import annotations

from reqonto.ontology import Model
from reqonto.solver.candidates import RANKED_KINDS, Candidate
from reqonto.solver.preferences import AggregatePreference


def dominates(c1: Candidate, c2: Candidate, agg: AggregatePreference, model: Model | None = None) -> bool:
    """Strict dominance between candidates.

    Candidates built on different compulsory combinations compare only by
    the aggregate preference over those combinations.  On the same
    combination, c1 must hold a superset of c2's optional assumptions, goals
    and quality constraints and be weakly preferred, and be strictly better
    on at least one of the two.  ``model`` is accepted for symmetry with the
    condition checks; candidates already carry everything compared here.
    """
    if c1.combo != c2.combo:
        return agg.prefers(c1.combo.members, c2.combo.members)
    superset = all(c1.optional(k) >= c2.optional(k) for k in RANKED_KINDS)
    if not superset:
        return False
    larger = any(c1.optional(k) > c2.optional(k) for k in RANKED_KINDS)
    weak, strict = agg.compare(c1.members, c2.members)
    return weak and (larger or strict)
