"""Argument construction, priority-based defeat and dialectical-tree warrant.

An argument for a literal L is a set A of defeasible rules such that the
facts, the strict rules and A derive L, the derivation is consistent, and no
proper subset of A derives L.  An attacker defeats a target when its
conclusion disagrees (is jointly inconsistent with the facts and strict
rules) with the conclusion of some sub-argument of the target and the
attacker is not strictly weaker than that sub-argument under the rule
priorities.  A literal is warranted when some argument for it is undefeated
in its dialectical tree, where lines may not repeat an argument.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum

from reqonto.engine.closure import StrictBase, atom_components
from reqonto.ontology import Literal, Rule, Strength, priority_closure


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class DefeasibleProgram:
    facts: frozenset[Literal] = frozenset()
    strict_rules: tuple[Rule, ...] = ()
    defeasible_rules: tuple[Rule, ...] = ()
    priorities: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(self, "strict_rules", tuple(sorted(self.strict_rules, key=lambda r: r.id)))
        object.__setattr__(self, "defeasible_rules", tuple(sorted(self.defeasible_rules, key=lambda r: r.id)))
        object.__setattr__(self, "priorities", frozenset(self.priorities))
        if any(r.strength is not Strength.STRICT for r in self.strict_rules):
            raise ProgramError("strict_rules contains a defeasible rule")
        if any(r.strength is not Strength.DEFEASIBLE for r in self.defeasible_rules):
            raise ProgramError("defeasible_rules contains a strict rule")
        ids = [r.id for r in self.strict_rules + self.defeasible_rules]
        if len(ids) != len(set(ids)):
            raise ProgramError("duplicate rule id")
        known = {r.id for r in self.defeasible_rules}
        for hi, lo in self.priorities:
            if hi not in known or lo not in known:
                raise ProgramError(f"priority {hi} > {lo} names a non-defeasible rule")
        if priority_closure(self.priorities) is None:
            raise ProgramError("priorities contain a cycle")

    @classmethod
    def from_rules(cls, facts: Iterable[Literal], rules: Iterable[Rule], priorities=()) -> DefeasibleProgram:
        rules = list(rules)
        return cls(
            frozenset(facts),
            tuple(r for r in rules if r.strict),
            tuple(r for r in rules if not r.strict),
            frozenset(priorities),
        )

    def atoms(self) -> set[str]:
        atoms = {f.atom for f in self.facts}
        for r in self.strict_rules + self.defeasible_rules:
            atoms.add(r.head.atom)
            atoms.update(b.atom for b in r.body)
        return atoms

    def literals(self) -> list[Literal]:
        return sorted(Literal(a, neg) for a in self.atoms() for neg in (False, True))


def consistent(facts: Iterable[Literal], strict_rules: Iterable[Rule]) -> bool:
    """True iff the classical strict closure of the facts has no complementary pair."""
    return StrictBase(strict_rules).consistent(facts)


@dataclass(frozen=True)
class Argument:
    conclusion: Literal
    support: frozenset[str]
    derivation: tuple[str, ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        rules = ", ".join(sorted(self.support)) or "facts"
        return f"<{{{rules}}}, {self.conclusion}>"

    @property
    def sort_key(self):
        return (len(self.support), sorted(self.support), self.conclusion)


def weaker(attacker: frozenset[str], target: frozenset[str], prio: set[tuple[str, str]]) -> bool:
    """Attacker support is strictly weaker: some rule is beaten and none beats back."""
    below = any((t, a) in prio for a in attacker for t in target)
    above = any((a, t) in prio for a in attacker for t in target)
    return below and not above


class Mark(str, Enum):
    UNDEFEATED = "undefeated"
    DEFEATED = "defeated"


class Verdict(str, Enum):
    WARRANTED = "warranted"
    NOT_WARRANTED = "not_warranted"


@dataclass
class DialecticalTree:
    root: Argument
    children: list[DialecticalTree]
    mark: Mark
    proper: bool | None = None  # defeat kind against the parent; None at the root

    def nodes(self) -> Iterator[DialecticalTree]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def render(self, indent: str = "") -> str:
        kind = "" if self.proper is None else (" [proper defeater]" if self.proper else " [blocking defeater]")
        lines = [f"{indent}{self.root} {self.mark.value}{kind}"]
        for c in self.children:
            lines.append(c.render(indent + "  "))
        return "\n".join(lines)


class _Slice:
    """Arguments of one connected component of the program."""

    def __init__(self, reasoner: Reasoner, atoms: set[str]):
        self.r = reasoner
        self.atoms = atoms
        self.facts = frozenset(f for f in reasoner.program.facts if f.atom in atoms)
        self.rules = {
            r.id: r
            for r in reasoner.program.defeasible_rules
            if r.head.atom in atoms
        }
        self._derive_cache: dict[frozenset[str], tuple[frozenset[Literal], tuple[str, ...]] | None] = {}
        self.arguments = self._build()
        self.by_conclusion: dict[Literal, list[Argument]] = {}
        for arg in self.arguments:
            self.by_conclusion.setdefault(arg.conclusion, []).append(arg)

    def derive(self, support: frozenset[str]):
        """Literals derivable with the given rules, and the order they fired in."""
        if support in self._derive_cache:
            return self._derive_cache[support]
        lits = set(self.facts)
        order: list[str] = []
        pending = sorted(support)
        result = None
        while True:
            cl = self.r.base.closure(lits)
            if cl is None:
                break
            fired = [rid for rid in pending if self.rules[rid].body <= cl]
            if not fired:
                result = (frozenset(x for x in cl if x.atom in self.atoms), tuple(order))
                break
            for rid in fired:
                lits.add(self.rules[rid].head)
                order.append(rid)
                pending.remove(rid)
        self._derive_cache[support] = result
        return result

    def _build(self) -> list[Argument]:
        args: set[Argument] = set()
        seen: set[frozenset[str]] = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for support in frontier:
                got = self.derive(support)
                if got is None:
                    continue
                lits, order = got
                if len(order) != len(support):
                    continue
                reduced = [self.derive(support - {rid}) for rid in support]
                for lit in lits:
                    if all(d is not None and lit not in d[0] for d in reduced):
                        args.add(Argument(lit, support, order))
                for rid, rule in self.rules.items():
                    if rid in support or not rule.body <= lits or rule.head in lits:
                        continue
                    grown = support | {rid}
                    if grown not in seen:
                        seen.add(grown)
                        nxt.append(grown)
            frontier = nxt
        return sorted(args, key=lambda a: a.sort_key)


class Reasoner:
    """Query interface over one :class:`DefeasibleProgram`.

    Caches are per instance; separate instances share nothing mutable.
    """

    def __init__(self, program: DefeasibleProgram):
        self.program = program
        self.base = StrictBase(program.strict_rules)
        self.prio = priority_closure(program.priorities) or set()
        groups = [[f.atom] for f in program.facts]
        groups += [[r.head.atom, *(b.atom for b in r.body)] for r in program.strict_rules + program.defeasible_rules]
        self._atom_comp: dict[str, frozenset[str]] = {}
        for comp in atom_components(groups):
            fs = frozenset(comp)
            for a in comp:
                self._atom_comp[a] = fs
        self._slices: dict[frozenset[str], _Slice] = {}
        self._defeaters: dict[Argument, list[tuple[Argument, bool]]] = {}
        self._disagree: dict[frozenset[Literal], bool] = {}
        self._consistent = self.base.consistent(program.facts)

    @property
    def consistent(self) -> bool:
        return self._consistent

    def _slice(self, atom: str) -> _Slice | None:
        comp = self._atom_comp.get(atom)
        if comp is None:
            return None
        if comp not in self._slices:
            self._slices[comp] = _Slice(self, set(comp))
        return self._slices[comp]

    def _require_consistent(self):
        if not self._consistent:
            raise ProgramError("facts and strict rules are inconsistent")

    def arguments_for(self, literal: Literal) -> list[Argument]:
        self._require_consistent()
        sl = self._slice(literal.atom)
        return list(sl.by_conclusion.get(literal, ())) if sl else []

    def all_arguments(self) -> list[Argument]:
        self._require_consistent()
        out = []
        for atom in sorted(self.program.atoms()):
            sl = self._slice(atom)
            if sl.arguments and atom == min(sl.atoms):
                out.extend(sl.arguments)
        return out

    def disagree(self, a: Literal, b: Literal) -> bool:
        if a == b.complement():
            return True
        key = frozenset((a, b))
        if key not in self._disagree:
            self._disagree[key] = self.base.closure(self.program.facts | key) is None
        return self._disagree[key]

    def sub_arguments(self, arg: Argument) -> list[Argument]:
        sl = self._slice(arg.conclusion.atom)
        return [a for a in sl.arguments if a.support and a.support <= arg.support]

    def attack_points(self, attacker: Argument, target: Argument) -> list[Argument]:
        return [s for s in self.sub_arguments(target) if self.disagree(attacker.conclusion, s.conclusion)]

    def defeats(self, attacker: Argument, target: Argument) -> bool:
        return any(
            not weaker(attacker.support, s.support, self.prio)
            for s in self.attack_points(attacker, target)
        )

    def defeaters(self, target: Argument) -> list[tuple[Argument, bool]]:
        """Defeaters of ``target`` paired with whether the defeat is proper."""
        if target in self._defeaters:
            return self._defeaters[target]
        out = []
        if target.support:
            sl = self._slice(target.conclusion.atom)
            for cand in sl.arguments:
                points = self.attack_points(cand, target)
                winning = [s for s in points if not weaker(cand.support, s.support, self.prio)]
                if winning:
                    proper = any(weaker(s.support, cand.support, self.prio) for s in winning)
                    out.append((cand, proper))
        self._defeaters[target] = out
        return out

    def _undefeated(self, arg: Argument, line: frozenset[Argument]) -> bool:
        for d, _ in self.defeaters(arg):
            if d not in line and self._undefeated(d, line | {d}):
                return False
        return True

    def warrant(self, literal: Literal) -> Verdict:
        for arg in self.arguments_for(literal):
            if self._undefeated(arg, frozenset((arg,))):
                return Verdict.WARRANTED
        return Verdict.NOT_WARRANTED

    def warranted(self, literal: Literal) -> bool:
        return self.warrant(literal) is Verdict.WARRANTED

    def consequences(self) -> frozenset[Literal]:
        return frozenset(l for l in self.program.literals() if self.warranted(l))

    def tree(self, arg: Argument, line: frozenset[Argument] | None = None, proper: bool | None = None) -> DialecticalTree:
        line = line if line is not None else frozenset((arg,))
        children = [
            self.tree(d, line | {d}, p)
            for d, p in self.defeaters(arg)
            if d not in line
        ]
        mark = Mark.DEFEATED if any(c.mark is Mark.UNDEFEATED for c in children) else Mark.UNDEFEATED
        return DialecticalTree(arg, children, mark, proper)

    def trees(self, literal: Literal) -> list[DialecticalTree]:
        return [self.tree(a) for a in self.arguments_for(literal)]


# functional surface -----------------------------------------------------------


def arguments_for(program: DefeasibleProgram, literal: Literal) -> list[Argument]:
    return Reasoner(program).arguments_for(literal)


def defeats(program: DefeasibleProgram, attacker: Argument, target: Argument) -> bool:
    return Reasoner(program).defeats(attacker, target)


def warrant(program: DefeasibleProgram, literal: Literal) -> Verdict:
    return Reasoner(program).warrant(literal)


def consequences(program: DefeasibleProgram) -> frozenset[Literal]:
    return Reasoner(program).consequences()
