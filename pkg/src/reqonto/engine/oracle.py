"""Brute-force reference implementation of warrant.

Deliberately naive and kept separate from :mod:`reqonto.engine.reasoner`:
truth tables over plain tuples, every subset of defeasible rules, every
dialectical tree built in full without pruning.  Only the slicing of the
program into independent atom components is shared in spirit, and it is
reimplemented here by breadth-first search.
"""

from __future__ import annotations

import itertools
from collections import deque

from reqonto.engine.reasoner import DefeasibleProgram
from reqonto.ontology import Literal, Rule


def _component(program: DefeasibleProgram, atom: str) -> set[str]:
    rules = program.strict_rules + program.defeasible_rules
    links: dict[str, set[str]] = {}
    for r in rules:
        atoms = {r.head.atom} | {b.atom for b in r.body}
        for a in atoms:
            links.setdefault(a, set()).update(atoms)
    seen = {atom}
    queue = deque([atom])
    while queue:
        a = queue.popleft()
        for b in links.get(a, ()):
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def _holds(lit: Literal, assignment: dict[str, bool]) -> bool:
    return assignment[lit.atom] != lit.negated


class NaiveOracle:
    def __init__(self, program: DefeasibleProgram, atom: str):
        self.atoms = sorted(_component(program, atom))
        inside = set(self.atoms)
        self.facts = [f for f in program.facts if f.atom in inside]
        self.strict = [r for r in program.strict_rules if r.head.atom in inside]
        self.defeasible = [r for r in program.defeasible_rules if r.head.atom in inside]
        self.prio = self._closure(program.priorities)
        self.models = []
        for values in itertools.product((False, True), repeat=len(self.atoms)):
            assignment = dict(zip(self.atoms, values))
            if all(not all(_holds(b, assignment) for b in r.body) or _holds(r.head, assignment) for r in self.strict):
                self.models.append(assignment)
        self._derived: dict[frozenset[str], set[Literal] | None] = {}
        self._closed: dict[frozenset[Literal], set[Literal] | None] = {}
        self._defeat: dict[tuple, bool] = {}
        self.arguments = self._arguments()

    @staticmethod
    def _closure(pairs) -> set[tuple[str, str]]:
        rel = set(pairs)
        while True:
            extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
            if not extra:
                return rel
            rel |= extra

    def closure(self, lits) -> set[Literal] | None:
        key = frozenset(lits)
        if key not in self._closed:
            self._closed[key] = self._closure_uncached(key)
        return self._closed[key]

    def _closure_uncached(self, lits) -> set[Literal] | None:
        models = [m for m in self.models if all(_holds(l, m) for l in lits)]
        if not models:
            return None
        out = set()
        for atom in self.atoms:
            values = {m[atom] for m in models}
            if values == {True}:
                out.add(Literal(atom))
            elif values == {False}:
                out.add(Literal(atom, True))
        return out

    def derive(self, rule_ids: frozenset[str]) -> set[Literal] | None:
        if rule_ids in self._derived:
            return self._derived[rule_ids]
        rules = [r for r in self.defeasible if r.id in rule_ids]
        premises = set(self.facts)
        result = None
        while True:
            cl = self.closure(premises)
            if cl is None:
                break
            new = {r.head for r in rules if r.body <= cl and r.head not in premises}
            if not new:
                result = cl
                break
            premises |= new
        self._derived[rule_ids] = result
        return result

    def _arguments(self) -> list[tuple[Literal, frozenset[str]]]:
        ids = [r.id for r in self.defeasible]
        found = []
        for size in range(len(ids) + 1):
            for combo in itertools.combinations(ids, size):
                support = frozenset(combo)
                lits = self.derive(support)
                if lits is None:
                    continue
                for lit in lits:
                    if all(lit not in (self.derive(support - {r}) or set()) for r in support):
                        found.append((lit, support))
        return found

    def disagree(self, a: Literal, b: Literal) -> bool:
        return self.closure(set(self.facts) | {a, b}) is None

    def weaker(self, attacker, target) -> bool:
        below = any((t, a) in self.prio for a in attacker for t in target)
        above = any((a, t) in self.prio for a in attacker for t in target)
        return below and not above

    def defeats(self, attacker, target) -> bool:
        key = (attacker, target)
        if key not in self._defeat:
            self._defeat[key] = self._defeats_uncached(attacker, target)
        return self._defeat[key]

    def _defeats_uncached(self, attacker, target) -> bool:
        a_lit, a_sup = attacker
        for s_lit, s_sup in self.arguments:
            if s_sup and s_sup <= target[1] and self.disagree(a_lit, s_lit) and not self.weaker(a_sup, s_sup):
                return True
        return False

    def mark_undefeated(self, node, line) -> bool:
        children = [
            self.mark_undefeated(d, line + [d])
            for d in self.arguments
            if d not in line and self.defeats(d, node)
        ]
        return all(not c for c in children)

    def warranted(self, lit: Literal) -> bool:
        roots = [a for a in self.arguments if a[0] == lit]
        return any(self.mark_undefeated(a, [a]) for a in roots)


def naive_consistent(facts, strict_rules: list[Rule]) -> bool:
    program = DefeasibleProgram(frozenset(facts), tuple(strict_rules))
    for atom in sorted(program.atoms()):
        oracle = NaiveOracle(program, atom)
        if oracle.closure(oracle.facts) is None:
            return False
    return True


def naive_arguments(program: DefeasibleProgram, lit: Literal) -> set[tuple[Literal, frozenset[str]]]:
    oracle = NaiveOracle(program, lit.atom)
    return {a for a in oracle.arguments if a[0] == lit}


def naive_warrant(program: DefeasibleProgram, lit: Literal) -> bool:
    return NaiveOracle(program, lit.atom).warranted(lit)


def naive_consequences(program: DefeasibleProgram) -> frozenset[Literal]:
    out = set()
    oracles: dict[str, NaiveOracle] = {}
    for atom in sorted(program.atoms()):
        if atom not in oracles:
            oracle = NaiveOracle(program, atom)
            for a in oracle.atoms:
                oracles[a] = oracle
        oracle = oracles[atom]
        for lit in (Literal(atom), Literal(atom, True)):
            if oracle.warranted(lit):
                out.add(lit)
    return frozenset(out)
