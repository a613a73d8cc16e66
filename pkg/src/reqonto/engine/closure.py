"""Classical closure of literal sets under strict rules.

Strict rules are read as material implications ``body -> head``.  The closure
of a literal set S is every literal true in all models of S plus the strict
rules, computed exhaustively per connected component of the strict
vocabulary.  Literals on atoms outside the strict vocabulary pass through.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from reqonto.ontology import Literal, Rule

MAX_COMPONENT_ATOMS = 22


class VocabularyTooLarge(ValueError):
    pass


def atom_components(groups: Iterable[Iterable[str]]) -> list[list[str]]:
    """Connected components of atoms, where each group links its atoms together."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in groups:
        group = list(group)
        for atom in group:
            parent.setdefault(atom, atom)
        for atom in group[1:]:
            ra, rb = find(group[0]), find(atom)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps: dict[str, list[str]] = {}
    for atom in parent:
        comps.setdefault(find(atom), []).append(atom)
    return sorted(sorted(c) for c in comps.values())


class _Component:
    def __init__(self, atoms: list[str], rules: list[Rule]):
        if len(atoms) > MAX_COMPONENT_ATOMS:
            raise VocabularyTooLarge(
                f"strict rules connect {len(atoms)} atoms; at most {MAX_COMPONENT_ATOMS} supported"
            )
        self.atoms = atoms
        self.bit = {a: 1 << i for i, a in enumerate(atoms)}
        self.full = (1 << len(atoms)) - 1
        models = np.arange(1 << len(atoms), dtype=np.int64)
        for rule in rules:
            pos, neg = self.masks(rule.body)
            fires = ((models & pos) == pos) & ((models & neg) == 0)
            hb = self.bit[rule.head.atom]
            head_true = (models & hb) == 0 if rule.head.negated else (models & hb) != 0
            models = models[~fires | head_true]
        self.models = models
        self._cache: dict[tuple[int, int], tuple[int, int] | None] = {}

    def masks(self, lits: Iterable[Literal]) -> tuple[int, int]:
        pos = neg = 0
        for lit in lits:
            if lit.negated:
                neg |= self.bit[lit.atom]
            else:
                pos |= self.bit[lit.atom]
        return pos, neg

    def entailed(self, pos: int, neg: int) -> tuple[int, int] | None:
        key = (pos, neg)
        if key in self._cache:
            return self._cache[key]
        if pos & neg:
            result = None
        else:
            m = self.models[((self.models & pos) == pos) & ((self.models & neg) == 0)]
            if m.size == 0:
                result = None
            else:
                always = int(np.bitwise_and.reduce(m))
                never = int(np.bitwise_and.reduce(~m)) & self.full
                result = (always, never)
        self._cache[key] = result
        return result


class StrictBase:
    """Closure operator for one set of strict rules."""

    def __init__(self, strict_rules: Iterable[Rule]):
        rules = list(strict_rules)
        comps = atom_components([r.head.atom, *(b.atom for b in r.body)] for r in rules)
        self._components: list[_Component] = []
        self._owner: dict[str, _Component] = {}
        for atoms in comps:
            atom_set = set(atoms)
            comp = _Component(atoms, [r for r in rules if r.head.atom in atom_set])
            self._components.append(comp)
            for a in atoms:
                self._owner[a] = comp
        self._cache: dict[frozenset[Literal], frozenset[Literal] | None] = {}

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self._owner)

    def closure(self, literals: Iterable[Literal]) -> frozenset[Literal] | None:
        """Every literal classically entailed, or None when the set is inconsistent."""
        key = frozenset(literals)
        if key in self._cache:
            return self._cache[key]
        result: set[Literal] | None = set()
        outside = [lit for lit in key if lit.atom not in self._owner]
        for lit in outside:
            if lit.complement() in key:
                result = None
                break
        if result is not None:
            result.update(outside)
            by_comp: dict[int, list[Literal]] = {}
            for lit in key:
                comp = self._owner.get(lit.atom)
                if comp is not None:
                    by_comp.setdefault(id(comp), []).append(lit)
            for comp in self._components:
                found = comp.entailed(*comp.masks(by_comp.get(id(comp), ())))
                if found is None:
                    result = None
                    break
                always, never = found
                for atom, bit in comp.bit.items():
                    if always & bit:
                        result.add(Literal(atom))
                    elif never & bit:
                        result.add(Literal(atom, True))
        frozen = None if result is None else frozenset(result)
        self._cache[key] = frozen
        return frozen

    def consistent(self, literals: Iterable[Literal]) -> bool:
        return self.closure(literals) is not None
