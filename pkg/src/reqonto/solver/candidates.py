from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass

from reqonto.engine.closure import StrictBase
from reqonto.ontology import Kind, Model

ENTAILED_KINDS = (Kind.DOMAIN_ASSUMPTION, Kind.GOAL, Kind.QUALITY_CONSTRAINT, Kind.PLAN)
RANKED_KINDS = (Kind.DOMAIN_ASSUMPTION, Kind.GOAL, Kind.QUALITY_CONSTRAINT)


class UnsatisfiableCore(Exception):
    code = "unsatisfiable-compulsory-core"


@dataclass(frozen=True)
class CompulsoryCombo:
    chosen: tuple[tuple[tuple[str, ...], str], ...]  # (group, member) pairs
    fixed: frozenset[str]

    @property
    def members(self) -> frozenset[str]:
        return self.fixed | {m for _, m in self.chosen}

    def label(self) -> str:
        return ",".join(m for _, m in self.chosen) or "-"


@dataclass(frozen=True)
class Candidate:
    """One choice of assumptions, plans, goals, quality constraints and softgoals."""

    K: frozenset[str]
    P: frozenset[str]
    G: frozenset[str]
    Q: frozenset[str]
    QS: frozenset[str]
    combo: CompulsoryCombo

    def of(self, kind: Kind) -> frozenset[str]:
        return getattr(self, kind.letter)

    @property
    def members(self) -> frozenset[str]:
        return self.K | self.P | self.G | self.Q | self.QS

    def optional(self, kind: Kind) -> frozenset[str]:
        return self.of(kind) - self.combo.members

    @property
    def optional_count(self) -> int:
        return len(self.members - self.combo.members)

    @property
    def signature(self) -> str:
        return ";".join(
            f"{name}[{','.join(sorted(getattr(self, name)))}]" for name in ("K", "G", "Q", "QS", "P")
        )

    @classmethod
    def from_members(cls, model: Model, members, combo: CompulsoryCombo) -> Candidate:
        index = model.element_index
        by_kind = {k: set() for k in Kind}
        for m in members:
            by_kind[index[m].kind].add(m)
        return cls(
            frozenset(by_kind[Kind.DOMAIN_ASSUMPTION]),
            frozenset(by_kind[Kind.PLAN]),
            frozenset(by_kind[Kind.GOAL]),
            frozenset(by_kind[Kind.QUALITY_CONSTRAINT]),
            frozenset(by_kind[Kind.SOFTGOAL]),
            combo,
        )


def induced_literals(model: Model, members) -> set:
    index = model.element_index
    return {index[m].holds for m in members if index[m].kind in ENTAILED_KINDS}


def enumerate_compulsory_combinations(model: Model, base: StrictBase | None = None) -> list[CompulsoryCombo]:
    """One compulsory member per alternatives group, filtered by consistency."""
    index = model.element_index
    base = base or StrictBase(model.strict_rules)
    grouped = {m for g in model.alternatives for m in g}
    fixed = frozenset(e.id for e in model.elements if e.compulsory and e.id not in grouped)
    choice_groups = []
    for g in model.alternatives:
        comp = [m for m in g if index[m].compulsory]
        if comp:
            choice_groups.append((g, comp))
    combos = []
    for picks in itertools.product(*(comp for _, comp in choice_groups)):
        combo = CompulsoryCombo(tuple((g, m) for (g, _), m in zip(choice_groups, picks)), fixed)
        if base.consistent(induced_literals(model, combo.members)):
            combos.append(combo)
    if not combos:
        raise UnsatisfiableCore("no choice of compulsory alternatives is consistent")
    return sorted(combos, key=lambda c: [m for _, m in c.chosen])


def optional_slots(model: Model, combo: CompulsoryCombo, allow: frozenset[str] | None = None) -> list[tuple[str, ...]]:
    """Independent optional choices for a combo; each slot picks at most one id.

    ``allow`` restricts which optional elements may be picked at all.
    """
    index = model.element_index
    occupied = {tuple(g) for g, _ in combo.chosen}
    grouped = {m for g in model.alternatives for m in g}
    slots: list[tuple[str, ...]] = []
    for e in model.elements:
        if not e.compulsory and e.id not in grouped and (allow is None or e.id in allow):
            slots.append((e.id,))
    for g in model.alternatives:
        if tuple(g) in occupied:
            continue
        members = tuple(m for m in g if not index[m].compulsory and (allow is None or m in allow))
        if members:
            slots.append(members)
    return sorted(slots)


def count_candidates(model: Model, combos: list[CompulsoryCombo], allow=None) -> int:
    total = 0
    for combo in combos:
        n = 1
        for slot in optional_slots(model, combo, allow):
            n *= len(slot) + 1
        total += n
    return total


def enumerate_candidates(model: Model, combos: list[CompulsoryCombo], allow=None) -> Iterator[Candidate]:
    """All candidates, most optional elements first, then by signature."""
    per_combo = [(combo, optional_slots(model, combo, allow)) for combo in combos]
    top = max((len(slots) for _, slots in per_combo), default=0)
    for k in range(top, -1, -1):
        level = []
        for combo, slots in per_combo:
            if k > len(slots):
                continue
            for picked in itertools.combinations(slots, k):
                for members in itertools.product(*picked):
                    level.append(Candidate.from_members(model, combo.members | set(members), combo))
        level.sort(key=lambda c: c.signature)
        yield from level
