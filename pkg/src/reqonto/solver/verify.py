"""Independent audit of a solver result.

Feasibility is re-derived with the brute-force warrant oracle, and the
candidate space is rebuilt from a bitmask over every non-fixed element
rather than from the solver's slot enumeration.
"""

from __future__ import annotations

from reqonto.engine.oracle import naive_consequences, naive_consistent
from reqonto.engine.reasoner import DefeasibleProgram
from reqonto.ontology import Kind, Model
from reqonto.solver.candidates import RANKED_KINDS, Candidate, CompulsoryCombo
from reqonto.solver.preferences import resolve_meta_preferences
from reqonto.solver.solve import Solution

_FACT_KINDS = (Kind.DOMAIN_ASSUMPTION, Kind.PLAN)
_HOLD_KINDS = (Kind.DOMAIN_ASSUMPTION, Kind.GOAL, Kind.QUALITY_CONSTRAINT, Kind.PLAN)


class _Auditor:
    def __init__(self, model: Model):
        self.model = model
        self.index = model.element_index
        self.strict = list(model.strict_rules)
        self.agg = resolve_meta_preferences(model.attitudes, model)
        self._consequences: dict[frozenset, frozenset | None] = {}
        self._cores: dict[frozenset, bool] = {}

    def consequences(self, members: frozenset[str]):
        facts = frozenset(self.index[m].holds for m in members if self.index[m].kind in _FACT_KINDS)
        if facts not in self._consequences:
            if not naive_consistent(facts, self.strict):
                self._consequences[facts] = None
            else:
                program = DefeasibleProgram.from_rules(facts, self.model.rules, self.model.priorities)
                self._consequences[facts] = naive_consequences(program)
        return self._consequences[facts]

    def c1(self, members: frozenset[str]) -> bool:
        warranted = self.consequences(members)
        if warranted is None:
            return False
        for m in members:
            e = self.index[m]
            if e.kind in (Kind.GOAL, Kind.QUALITY_CONSTRAINT) and e.holds not in warranted:
                return False
            if e.kind is Kind.DOMAIN_ASSUMPTION and e.holds.complement() in warranted:
                return False
        return True

    def c4(self, members: frozenset[str]) -> bool:
        covered = {a.softgoal for a in self.model.approximations if a.qc in members}
        return all(m in covered for m in members if self.index[m].kind is Kind.SOFTGOAL)

    def c5(self, members: frozenset[str]) -> bool:
        orders = [self.agg.orders[p] for p in self.agg.effective]
        chosen = {o.id: o for o in orders if o.preferred in members and o.dispreferred in members}
        for o in chosen.values():
            if self.index.get(o.preferred) is None or self.index[o.preferred].kind is not Kind.SOFTGOAL:
                continue
            qa = {a.qc for a in self.model.approximations if a.softgoal == o.preferred and a.qc in members}
            qb = {a.qc for a in self.model.approximations if a.softgoal == o.dispreferred and a.qc in members}
            if not any(x.preferred in qa and x.dispreferred in qb for x in chosen.values()):
                return False
        return True

    def feasible(self, members: frozenset[str]) -> bool:
        return self.c4(members) and self.c5(members) and self.c1(members)

    def pareto(self, a: frozenset[str], b: frozenset[str]) -> tuple[bool, bool]:
        def score(o, s):
            return 2 if o.preferred in s else 1 if o.dispreferred in s else 0

        pairs = [(score(self.agg.orders[p], a), score(self.agg.orders[p], b)) for p in self.agg.effective]
        weak = all(x >= y for x, y in pairs)
        return weak, weak and any(x > y for x, y in pairs)

    def dominates(self, a: tuple[frozenset, frozenset], b: tuple[frozenset, frozenset]) -> bool:
        """``a`` and ``b`` are (compulsory core, members) pairs."""
        core_a, mem_a = a
        core_b, mem_b = b
        if core_a != core_b:
            return self.pareto(core_a, core_b)[1]
        ranked = lambda s: {m for m in s - core_a if self.index[m].kind in RANKED_KINDS}
        ra, rb = ranked(mem_a), ranked(mem_b)
        if not ra >= rb:
            return False
        weak, strict = self.pareto(mem_a, mem_b)
        return weak and (ra > rb or strict)

    def space(self):
        """Every structurally valid (core, members) pair."""
        groups = [frozenset(g) for g in self.model.alternatives]
        grouped = set().union(*groups) if groups else set()
        fixed = frozenset(e.id for e in self.model.elements if e.compulsory and e.id not in grouped)
        free = sorted(e.id for e in self.model.elements if e.id not in fixed)
        for mask in range(1 << len(free)):
            picked = frozenset(free[i] for i in range(len(free)) if mask >> i & 1)
            core = set(fixed)
            ok = True
            for g in groups:
                inside = picked & g
                if len(inside) > 1:
                    ok = False
                    break
                comp = {m for m in g if self.index[m].compulsory}
                if comp:
                    if not inside or not inside <= comp:
                        ok = False
                        break
                    core |= inside
            if not ok:
                continue
            core = frozenset(core)
            if not self._core_consistent(core):
                continue
            yield core, fixed | picked

    def _core_consistent(self, core: frozenset[str]) -> bool:
        if core not in self._cores:
            lits = {self.index[m].holds for m in core if self.index[m].kind in _HOLD_KINDS}
            self._cores[core] = naive_consistent(lits, self.strict)
        return self._cores[core]


def _structurally_valid(model: Model, cand: Candidate) -> bool:
    index = model.element_index
    members = cand.members
    if any(m not in index or index[m].kind.letter != k for k in ("K", "P", "G", "Q", "QS") for m in getattr(cand, k)):
        return False
    combo: CompulsoryCombo = cand.combo
    if not combo.members <= members:
        return False
    for g in model.alternatives:
        inside = [m for m in g if m in members]
        if len(inside) > 1:
            return False
        if any(index[m].compulsory for m in g) and (not inside or not index[inside[0]].compulsory):
            return False
    for m in members - combo.members:
        if index[m].compulsory:
            return False
    return all(index[m].compulsory for m in combo.members)


def verify_solution(model: Model, s: Solution) -> bool:
    """True iff ``s`` passes every condition and no feasible candidate dominates it."""
    cand = s.candidate
    if not _structurally_valid(model, cand):
        return False
    if any(not v.passed for v in s.verdicts.values()) or set(s.verdicts) != {"c1", "c2", "c3", "c4", "c5"}:
        return False
    audit = _Auditor(model)
    members = cand.members
    if not audit.feasible(members):
        return False
    if audit.consequences(members) != s.warranted:
        return False
    if not audit._core_consistent(cand.combo.members):
        return False

    disfavored = frozenset(model.disfavored()) & frozenset(e.id for e in model.elements if not e.compulsory)
    uses_disfavored = bool(members & disfavored)
    target = (cand.combo.members, members)
    for core, other in audit.space():
        if other == members:
            continue
        clean = not (other & disfavored)
        if uses_disfavored and clean and audit.feasible(other):
            return False  # a feasible candidate without disfavoured elements exists
        if not uses_disfavored and not clean:
            continue
        if audit.dominates((core, other), target) and audit.feasible(other):
            return False
    return True

