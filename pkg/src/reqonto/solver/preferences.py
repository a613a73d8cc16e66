"""Meta-preference resolution and the aggregate comparator it induces."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from reqonto.diagnostics import Diagnostic, warning
from reqonto.engine.closure import StrictBase
from reqonto.ontology import Attitude, AttitudeForm, Model, priority_closure


@dataclass(frozen=True)
class AggregatePreference:
    """Element-level preferences that survived conflict resolution.

    A member set satisfies a preference best when it contains the preferred
    element, less well when it holds only the dispreferred one, and not at all
    when it holds neither.
    """

    effective: tuple[str, ...]
    orders: dict[str, Attitude] = field(compare=False)
    dropped: dict[str, str] = field(default_factory=dict, compare=False)
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def score(self, pref_id: str, members: frozenset[str]) -> int:
        p = self.orders[pref_id]
        if p.preferred in members:
            return 2
        if p.dispreferred in members:
            return 1
        return 0

    def compare(self, a: frozenset[str], b: frozenset[str]) -> tuple[bool, bool]:
        """(a weakly better on every order, a strictly better on at least one)."""
        weak, strict = True, False
        for pid in self.effective:
            sa, sb = self.score(pid, a), self.score(pid, b)
            if sa < sb:
                weak = False
                break
            if sa > sb:
                strict = True
        return weak, strict and weak

    def prefers(self, a: frozenset[str], b: frozenset[str]) -> bool:
        weak, strict = self.compare(a, b)
        return weak and strict

    def over(self, ids: Iterable[str]) -> list[Attitude]:
        ids = set(ids)
        return [self.orders[p] for p in self.effective if self.orders[p].preferred in ids and self.orders[p].dispreferred in ids]


def preferences_conflict(p: Attitude, q: Attitude, model: Model, base: StrictBase | None = None) -> bool:
    """Two orders conflict when their best alternatives cannot both be chosen."""
    a, b = p.preferred, q.preferred
    if a == b:
        return False
    if any(a in g and b in g for g in model.alternatives):
        return True
    elements = model.element_index
    if a not in elements or b not in elements:
        return False
    base = base or StrictBase(model.strict_rules)
    return not base.consistent({elements[a].holds, elements[b].holds})


def resolve_meta_preferences(attitudes: Iterable[Attitude], model: Model) -> AggregatePreference:
    attitudes = list(attitudes)
    prefs = {a.id: a for a in attitudes if a.form is AttitudeForm.PREFERENCE}
    meta = priority_closure(
        (a.preferred, a.dispreferred) for a in attitudes if a.form is AttitudeForm.META_PREFERENCE
    )
    if meta is None:
        raise ValueError("meta-preference graph has a cycle")
    base = StrictBase(model.strict_rules)
    ids = sorted(prefs)
    conflicts = {
        (x, y)
        for i, x in enumerate(ids)
        for y in ids[i + 1:]
        if preferences_conflict(prefs[x], prefs[y], model, base)
    }

    def beats(x: str, y: str) -> bool:
        if (x, y) in meta:
            return True
        if (y, x) in meta:
            return False
        return prefs[x].compulsory and not prefs[y].compulsory

    attackers: dict[str, set[str]] = {p: set() for p in ids}
    for x, y in conflicts:
        if beats(x, y):
            attackers[y].add(x)
        elif beats(y, x):
            attackers[x].add(y)

    # grounded labelling of the "beats in conflict" graph
    retained: set[str] = set()
    dropped: dict[str, str] = {}
    changed = True
    while changed:
        changed = False
        for p in ids:
            if p in retained or p in dropped:
                continue
            winners = sorted(attackers[p] & retained)
            if winners:
                dropped[p] = winners[0]
                changed = True
            elif attackers[p] <= set(dropped):
                retained.add(p)
                changed = True
    undecided = [p for p in ids if p not in retained and p not in dropped]
    retained.update(undecided)

    diags = []
    for x, y in sorted(conflicts):
        if x in retained and y in retained:
            diags.append(
                warning(
                    "unresolved-preference-conflict",
                    f"preferences {x} and {y} conflict and no meta-preference settles which matters more",
                    element=x,
                )
            )
    return AggregatePreference(tuple(p for p in ids if p in retained), prefs, dropped, tuple(diags))
