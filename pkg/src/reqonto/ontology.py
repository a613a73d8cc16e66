"""Core ontology: literals, qualities, elements, attitudes, rules and models.

All domain objects are frozen dataclasses.  Collections on :class:`Model` are
stored as tuples sorted by id so that two models declaring the same things in
a different order compare equal.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum

from reqonto.diagnostics import Diagnostic, Severity, SourceSpan

ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

DEFAULT_APPROX_THRESHOLD = 0.5


class OntologyError(ValueError):
    """Raised for malformed ontology input that cannot be reported as a diagnostic."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True, order=True)
class Literal:
    atom: str
    negated: bool = False

    def __post_init__(self):
        if not ATOM_RE.match(self.atom):
            raise OntologyError("invalid-atom", f"invalid atom {self.atom!r}")

    def complement(self) -> Literal:
        return Literal(self.atom, not self.negated)

    @classmethod
    def parse(cls, text: str) -> Literal:
        text = text.strip()
        if text.startswith("~"):
            return cls(text[1:].strip(), True)
        return cls(text)

    def __str__(self) -> str:
        return f"~{self.atom}" if self.negated else self.atom


class Level(str, Enum):
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    INTERVAL = "interval"
    RATIO = "ratio"


class Structure(str, Enum):
    WELL_DEFINED_SHARED = "well_defined_shared"
    SUBJECTIVE_ILL_DEFINED = "subjective_ill_defined"


class Kind(str, Enum):
    DOMAIN_ASSUMPTION = "DomainAssumption"
    GOAL = "Goal"
    QUALITY_CONSTRAINT = "QualityConstraint"
    SOFTGOAL = "Softgoal"
    PLAN = "Plan"

    @property
    def letter(self) -> str:
        return _KIND_LETTER[self]


_KIND_LETTER = {
    Kind.DOMAIN_ASSUMPTION: "K",
    Kind.GOAL: "G",
    Kind.QUALITY_CONSTRAINT: "Q",
    Kind.SOFTGOAL: "QS",
    Kind.PLAN: "P",
}

KIND_ORDER = (
    Kind.DOMAIN_ASSUMPTION,
    Kind.GOAL,
    Kind.QUALITY_CONSTRAINT,
    Kind.SOFTGOAL,
    Kind.PLAN,
)


class Optionality(str, Enum):
    COMPULSORY = "compulsory"
    OPTIONAL = "optional"


class AttitudeForm(str, Enum):
    EVALUATION = "evaluation"
    PREFERENCE = "preference"
    META_PREFERENCE = "meta_preference"


class Sign(str, Enum):
    FAVOR = "favor"
    DISFAVOR = "disfavor"


class Strength(str, Enum):
    STRICT = "strict"
    DEFEASIBLE = "defeasible"


@dataclass(frozen=True)
class QualityType:
    """A quality together with the space its values live in."""

    id: str
    level: Level
    structure: Structure
    domain: str | None = None


@dataclass(frozen=True)
class Element:
    id: str
    kind: Kind
    holds: Literal
    optionality: Optionality = Optionality.COMPULSORY
    quality: str | None = None
    constraint_expr: str | None = None
    params: tuple[str, ...] = ()
    source_utterance: str | None = None

    @property
    def compulsory(self) -> bool:
        return self.optionality is Optionality.COMPULSORY


@dataclass(frozen=True)
class JustifiedApproximation:
    softgoal: str
    qc: str
    correlation: float
    justification: str

    @property
    def key(self) -> tuple[str, str]:
        return (self.softgoal, self.qc)


@dataclass(frozen=True)
class Attitude:
    """An evaluation of one element, or an order between two elements or preferences.

    For evaluations ``target`` and ``sign`` are set; for preferences and
    meta-preferences ``preferred`` and ``dispreferred`` are set.
    """

    id: str
    form: AttitudeForm
    optionality: Optionality = Optionality.COMPULSORY
    target: str | None = None
    sign: Sign | None = None
    preferred: str | None = None
    dispreferred: str | None = None
    source_utterance: str | None = None

    @property
    def compulsory(self) -> bool:
        return self.optionality is Optionality.COMPULSORY


@dataclass(frozen=True)
class Rule:
    id: str
    body: frozenset[Literal]
    head: Literal
    strength: Strength = Strength.DEFEASIBLE

    @property
    def strict(self) -> bool:
        return self.strength is Strength.STRICT

    def __str__(self) -> str:
        arrow = "->" if self.strict else "=>"
        body = " & ".join(str(lit) for lit in sorted(self.body))
        return f"{self.id}: {body} {arrow} {self.head}"


def _sorted_by_id(items: Iterable) -> tuple:
    return tuple(sorted(items, key=lambda x: x.id))


@dataclass(frozen=True)
class Model:
    qualities: tuple[QualityType, ...] = ()
    elements: tuple[Element, ...] = ()
    approximations: tuple[JustifiedApproximation, ...] = ()
    attitudes: tuple[Attitude, ...] = ()
    rules: tuple[Rule, ...] = ()
    priorities: tuple[tuple[str, str], ...] = ()
    alternatives: tuple[tuple[str, ...], ...] = ()
    spans: Mapping[str, SourceSpan] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "qualities", _sorted_by_id(self.qualities))
        set_(self, "elements", _sorted_by_id(self.elements))
        set_(self, "approximations", tuple(sorted(self.approximations, key=lambda a: a.key)))
        set_(self, "attitudes", _sorted_by_id(self.attitudes))
        set_(self, "rules", _sorted_by_id(self.rules))
        set_(self, "priorities", tuple(sorted(set(self.priorities))))
        set_(self, "alternatives", tuple(sorted(tuple(sorted(g)) for g in self.alternatives)))

    # lookups ---------------------------------------------------------------

    @property
    def quality_index(self) -> dict[str, QualityType]:
        return {q.id: q for q in self.qualities}

    @property
    def element_index(self) -> dict[str, Element]:
        return {e.id: e for e in self.elements}

    @property
    def attitude_index(self) -> dict[str, Attitude]:
        return {a.id: a for a in self.attitudes}

    def elements_of(self, kind: Kind) -> tuple[Element, ...]:
        return tuple(e for e in self.elements if e.kind is kind)

    def attitudes_of(self, form: AttitudeForm) -> tuple[Attitude, ...]:
        return tuple(a for a in self.attitudes if a.form is form)

    @property
    def strict_rules(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.strict)

    @property
    def defeasible_rules(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if not r.strict)

    def atoms(self) -> set[str]:
        atoms = {e.holds.atom for e in self.elements}
        for r in self.rules:
            atoms.add(r.head.atom)
            atoms.update(lit.atom for lit in r.body)
        return atoms

    def disfavored(self) -> frozenset[str]:
        """Ids of elements that some evaluation marks with disfavor."""
        return frozenset(
            a.target
            for a in self.attitudes
            if a.form is AttitudeForm.EVALUATION and a.sign is Sign.DISFAVOR
        )

    def with_(self, **changes) -> Model:
        return replace(self, **changes)


def default_optionality(element_id: str, attitudes: Iterable[Attitude]) -> Optionality:
    """Optionality for an element whose declaration does not state one.

    Any single-target evaluation, favourable or not, makes the target optional;
    everything else is compulsory.
    """
    for a in attitudes:
        if a.form is AttitudeForm.EVALUATION and a.target == element_id:
            return Optionality.OPTIONAL
    return Optionality.COMPULSORY


# classification of desired content ----------------------------------------


def classify_directive_content(
    holds: Literal,
    quality: str | None,
    constraint_expr: str | None,
    registry: Mapping[str, QualityType],
) -> Kind:
    """Return Goal, QualityConstraint or Softgoal for desired content."""
    del holds  # the content literal never affects the kind
    if quality is None:
        if constraint_expr is not None:
            raise OntologyError(
                "constraint-without-quality",
                "a constraint expression needs a quality reference",
            )
        return Kind.GOAL
    qt = registry.get(quality)
    if qt is None:
        raise OntologyError("dangling-reference", f"unknown quality {quality!r}")
    if qt.structure is Structure.SUBJECTIVE_ILL_DEFINED:
        return Kind.SOFTGOAL
    if constraint_expr is None or not constraint_expr.strip():
        raise OntologyError(
            "constraint-required",
            f"constraint expression required for well-defined quality {quality!r}",
        )
    return Kind.QUALITY_CONSTRAINT


# optionality partition ------------------------------------------------------

PARTITION_CELLS = tuple(
    f"{letter}_{half}" for letter in ("K", "G", "Q", "QS", "P", "A") for half in ("C", "O")
)


@dataclass(frozen=True)
class Partition:
    cells: Mapping[str, frozenset[str]]

    def __getitem__(self, name: str) -> frozenset[str]:
        return self.cells[name]

    def compulsory(self, kind: Kind) -> frozenset[str]:
        return self.cells[f"{kind.letter}_C"]

    def optional(self, kind: Kind) -> frozenset[str]:
        return self.cells[f"{kind.letter}_O"]


def partition_by_optionality(model: Model) -> Partition:
    cells: dict[str, set[str]] = {name: set() for name in PARTITION_CELLS}
    for e in model.elements:
        half = "C" if e.compulsory else "O"
        cells[f"{e.kind.letter}_{half}"].add(e.id)
    for a in model.attitudes:
        cells["A_C" if a.compulsory else "A_O"].add(a.id)
    return Partition({k: frozenset(v) for k, v in cells.items()})


# priorities -----------------------------------------------------------------


def priority_closure(pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]] | None:
    """Transitive closure of ``higher > lower`` pairs, or None if it has a cycle."""
    succ: dict[str, set[str]] = {}
    for hi, lo in pairs:
        succ.setdefault(hi, set()).add(lo)
    closure: set[tuple[str, str]] = set()
    for start in succ:
        stack = list(succ[start])
        seen: set[str] = set()
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(succ.get(node, ()))
        closure.update((start, n) for n in seen)
    if any(a == b for a, b in closure):
        return None
    return closure


def find_cycle(edges: Iterable[tuple[str, str]]) -> list[str] | None:
    succ: dict[str, list[str]] = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)
    state: dict[str, int] = {}
    path: list[str] = []

    def visit(node: str) -> list[str] | None:
        state[node] = 1
        path.append(node)
        for nxt in sorted(succ.get(node, ())):
            if state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            if nxt not in state:
                found = visit(nxt)
                if found:
                    return found
        path.pop()
        state[node] = 2
        return None

    for node in sorted(succ):
        if node not in state:
            found = visit(node)
            if found:
                return found
    return None


# validation -----------------------------------------------------------------


def validate_model(model: Model, threshold: float = DEFAULT_APPROX_THRESHOLD) -> list[Diagnostic]:
    """Check every ontology invariant; never raises."""
    diags: list[Diagnostic] = []

    def err(code: str, ident: str | None, message: str) -> None:
        span = model.spans.get(ident) if ident else None
        diags.append(Diagnostic(Severity.ERROR, code, message, span=span, element=ident))

    qualities = model.quality_index
    elements = model.element_index
    attitudes = model.attitude_index
    rules = {r.id: r for r in model.rules}

    for qt in model.qualities:
        if not IDENT_RE.match(qt.id):
            err("invalid-identifier", qt.id, f"invalid quality id {qt.id!r}")
        if qt.structure is Structure.WELL_DEFINED_SHARED and not (qt.domain or "").strip():
            err("missing-domain", qt.id, f"quality {qt.id} has a well-defined space but no domain")

    for e in model.elements:
        if not IDENT_RE.match(e.id):
            err("invalid-identifier", e.id, f"invalid element id {e.id!r}")
        if e.kind in (Kind.QUALITY_CONSTRAINT, Kind.SOFTGOAL):
            qt = qualities.get(e.quality) if e.quality else None
            if e.quality is None:
                err("missing-quality", e.id, f"{e.kind.value} {e.id} must reference a quality")
            elif qt is None:
                err("dangling-reference", e.id, f"{e.id} references unknown quality {e.quality!r}")
            elif e.kind is Kind.SOFTGOAL and qt.structure is not Structure.SUBJECTIVE_ILL_DEFINED:
                err("softgoal-quality", e.id, "softgoal requires subjective quality space")
            elif e.kind is Kind.QUALITY_CONSTRAINT and qt.structure is not Structure.WELL_DEFINED_SHARED:
                err("qc-quality", e.id, "quality constraint requires a well-defined shared quality space")
            if e.kind is Kind.QUALITY_CONSTRAINT and not (e.constraint_expr or "").strip():
                err("constraint-required", e.id, f"quality constraint {e.id} needs a constraint expression")
            if e.kind is Kind.SOFTGOAL and e.constraint_expr is not None:
                err("unexpected-constraint", e.id, f"softgoal {e.id} cannot carry a constraint expression")
        else:
            if e.quality is not None or e.constraint_expr is not None:
                err("unexpected-quality", e.id, f"{e.kind.value} {e.id} cannot reference a quality")
        if e.params and e.kind is not Kind.GOAL:
            err("unexpected-params", e.id, f"only goals take parameters ({e.id})")

    for ap in model.approximations:
        ident = f"{ap.softgoal}<-{ap.qc}"
        sg, qc = elements.get(ap.softgoal), elements.get(ap.qc)
        if sg is None or sg.kind is not Kind.SOFTGOAL:
            err("dangling-reference", ident, f"approximation source {ap.softgoal!r} is not a softgoal")
        if qc is None or qc.kind is not Kind.QUALITY_CONSTRAINT:
            err("dangling-reference", ident, f"approximation target {ap.qc!r} is not a quality constraint")
        if not -1.0 <= ap.correlation <= 1.0:
            err("correlation-range", ident, f"correlation {ap.correlation} outside [-1, 1]")
        elif abs(ap.correlation) < threshold:
            err(
                "insufficient-correlation",
                ident,
                f"insufficient correlation |{ap.correlation}| < {threshold}",
            )
        if not ap.justification.strip():
            err("missing-justification", ident, "approximation needs a justification record")

    pref_ids = {a.id for a in model.attitudes if a.form is AttitudeForm.PREFERENCE}
    meta_edges = []
    for a in model.attitudes:
        if a.form is AttitudeForm.EVALUATION:
            if a.target not in elements:
                err("dangling-reference", a.id, f"evaluation {a.id} targets unknown element {a.target!r}")
            if a.sign is None:
                err("missing-sign", a.id, f"evaluation {a.id} has no sign")
        elif a.form is AttitudeForm.PREFERENCE:
            hi, lo = elements.get(a.preferred), elements.get(a.dispreferred)
            if hi is None or lo is None:
                missing = a.preferred if hi is None else a.dispreferred
                err("dangling-reference", a.id, f"preference {a.id} orders unknown element {missing!r}")
            elif hi.kind is not lo.kind:
                err("mixed-order", a.id, f"preference {a.id} orders a {hi.kind.value} against a {lo.kind.value}")
            if a.preferred == a.dispreferred:
                err("reflexive-preference", a.id, f"preference {a.id} orders an element against itself")
        else:
            for end in (a.preferred, a.dispreferred):
                if end not in pref_ids:
                    err("dangling-reference", a.id, f"meta-preference {a.id} endpoint {end!r} is not a preference")
            meta_edges.append((a.preferred, a.dispreferred))
    cycle = find_cycle(meta_edges)
    if cycle:
        err("meta-preference-cycle", None, "meta-preference cycle: " + " > ".join(cycle))

    for r in model.rules:
        if not IDENT_RE.match(r.id):
            err("invalid-identifier", r.id, f"invalid rule id {r.id!r}")
        if not r.body:
            err("empty-body", r.id, f"rule {r.id} has an empty body; state facts as elements")
    for hi, lo in model.priorities:
        for rid in (hi, lo):
            rule = rules.get(rid)
            if rule is None:
                err("dangling-reference", f"{hi}>{lo}", f"priority names unknown rule {rid!r}")
            elif rule.strict:
                err("strict-priority", f"{hi}>{lo}", f"priority over strict rule {rid!r}")
    if priority_closure(model.priorities) is None:
        err("priority-cycle", None, "rule priorities are not a strict partial order")

    seen_members: dict[str, int] = {}
    for i, group in enumerate(model.alternatives):
        label = "|".join(group)
        if len(set(group)) < 2:
            err("alternatives-size", label, "an alternatives group needs at least two elements")
        members = [elements.get(m) for m in group]
        if any(m is None for m in members):
            err("dangling-reference", label, f"alternatives group {label} names an unknown element")
        elif len({m.kind for m in members}) > 1:
            err("alternatives-kind", label, f"alternatives group {label} mixes element kinds")
        for m in group:
            if seen_members.setdefault(m, i) != i:
                err("alternatives-overlap", m, f"element {m} belongs to more than one alternatives group")

    return diags


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)


# parameterised goals ----------------------------------------------------------


def ground_parameters(model: Model, domains: Mapping[str, Iterable[str]]) -> Model:
    """Expand every parameterised goal into one ground goal per parameter assignment.

    A goal ``g`` with params ``(x, y)`` and holds ``booked`` becomes goals
    ``g__x_v1__y_w1`` ... holding ``booked__x_v1__y_w1``.  Goals whose
    parameters have no declared domain are left untouched.
    """
    new_elements: list[Element] = []
    renamed: dict[str, list[str]] = {}
    for e in model.elements:
        if not e.params or any(p not in domains for p in e.params):
            new_elements.append(e)
            continue
        values = [sorted(set(domains[p])) for p in e.params]
        ids = []
        for combo in itertools.product(*values):
            suffix = "".join(f"__{p}_{v}" for p, v in zip(e.params, combo))
            ids.append(e.id + suffix)
            new_elements.append(
                replace(
                    e,
                    id=e.id + suffix,
                    holds=Literal(e.holds.atom + suffix, e.holds.negated),
                    params=(),
                )
            )
        renamed[e.id] = ids
    if not renamed:
        return model

    attitudes = []
    for a in model.attitudes:
        if a.form is AttitudeForm.EVALUATION and a.target in renamed:
            attitudes.extend(
                replace(a, id=f"{a.id}__{i}", target=t) for i, t in enumerate(renamed[a.target])
            )
        elif a.form is AttitudeForm.PREFERENCE and (a.preferred in renamed or a.dispreferred in renamed):
            raise OntologyError(
                "parametric-preference",
                f"preference {a.id} orders a parameterised goal; ground it explicitly",
            )
        else:
            attitudes.append(a)
    alternatives = []
    for group in model.alternatives:
        if any(m in renamed for m in group):
            raise OntologyError(
                "parametric-alternative",
                f"alternatives group {'|'.join(group)} contains a parameterised goal",
            )
        alternatives.append(group)
    return model.with_(elements=tuple(new_elements), attitudes=tuple(attitudes), alternatives=tuple(alternatives))
