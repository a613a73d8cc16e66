"""From annotated stakeholder utterances to ontology instances.

The illocutionary force of every utterance is supplied by the annotator; it
is never guessed from the text.  Compound utterances are flattened to their
atomic parts before anything else happens.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import Enum

from reqonto.diagnostics import Diagnostic, SourceSpan, error
from reqonto.ontology import (
    Attitude,
    AttitudeForm,
    Element,
    Kind,
    Literal,
    Model,
    OntologyError,
    Optionality,
    Sign,
    classify_directive_content,
    default_optionality,
)


class Force(str, Enum):
    ASSERTIVE = "assertive"
    DECLARATIVE = "declarative"
    REPRESENTATIVE_DECLARATIVE = "representative_declarative"
    DIRECTIVE = "directive"
    COMMISSIVE = "commissive"
    EXPRESSIVE = "expressive"


class Modality(str, Enum):
    BELIEF = "B"
    DESIRE = "D"
    INTENTION = "I"
    ATTITUDE = "A"


class Connective(str, Enum):
    AND = "and"
    OR = "or"
    IF_THEN = "if_then"


FORCE_MODALITY = {
    Force.ASSERTIVE: Modality.BELIEF,
    Force.DECLARATIVE: Modality.BELIEF,
    Force.REPRESENTATIVE_DECLARATIVE: Modality.BELIEF,
    Force.DIRECTIVE: Modality.DESIRE,
    Force.COMMISSIVE: Modality.INTENTION,
    Force.EXPRESSIVE: Modality.ATTITUDE,
}


class ClassificationError(ValueError):
    def __init__(self, code: str, message: str, utterance: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.utterance = utterance


@dataclass(frozen=True)
class Content:
    """Structured payload of a leaf utterance."""

    holds: Literal | None = None
    quality: str | None = None
    constraint_expr: str | None = None
    params: tuple[str, ...] = ()
    optionality: Optionality | None = None
    sign: Sign | None = None
    target: str | None = None
    preferred: str | None = None
    dispreferred: str | None = None
    over_preferences: bool = False

    @property
    def is_evaluation(self) -> bool:
        return self.sign is not None

    @property
    def is_preference(self) -> bool:
        return self.preferred is not None


@dataclass(frozen=True)
class Utterance:
    id: str
    text: str = ""
    force: Force | None = None
    content: Content | None = None
    connective: Connective | None = None
    children: tuple[Utterance, ...] = ()
    span: SourceSpan | None = field(default=None, compare=False)

    @property
    def is_leaf(self) -> bool:
        return self.connective is None


@dataclass(frozen=True)
class ModalContent:
    modality: Modality
    content: Content
    source: str


def decompose(u: Utterance) -> list[Utterance]:
    """Atomic utterances of ``u`` in document order."""
    if u.is_leaf:
        if u.force is None or u.content is None:
            raise ClassificationError("malformed-utterance", f"leaf utterance {u.id} needs a force and content", u.id)
        return [u]
    if len(u.children) < 2:
        raise ClassificationError("malformed-utterance", f"compound {u.id} needs at least two parts", u.id)
    if u.connective is Connective.IF_THEN and len(u.children) != 2:
        raise ClassificationError("malformed-utterance", f"if_then compound {u.id} needs exactly two parts", u.id)
    leaves: list[Utterance] = []
    for child in u.children:
        leaves.extend(decompose(child))
    return leaves


def modalize(u: Utterance) -> ModalContent:
    if not u.is_leaf:
        raise ClassificationError("malformed-utterance", f"cannot modalize compound {u.id}", u.id)
    return ModalContent(FORCE_MODALITY[u.force], u.content, u.id)


def classify(mc: ModalContent, registry: Model) -> Element | Attitude:
    """Map modalized content to the ontology instance it communicates.

    ``registry`` supplies the quality types plus any elements and preferences
    that attitudes may refer to.
    """
    c = mc.content
    optionality = c.optionality or Optionality.COMPULSORY
    if mc.modality is Modality.ATTITUDE:
        return _classify_attitude(mc, registry, optionality)
    if c.holds is None:
        raise ClassificationError("missing-content", f"{mc.source} has no content literal", mc.source)
    if mc.modality is Modality.BELIEF:
        kind = Kind.DOMAIN_ASSUMPTION
    elif mc.modality is Modality.INTENTION:
        kind = Kind.PLAN
    else:
        try:
            kind = classify_directive_content(c.holds, c.quality, c.constraint_expr, registry.quality_index)
        except OntologyError as exc:
            raise ClassificationError(exc.code, f"{mc.source}: {exc.message}", mc.source) from None
    if kind in (Kind.DOMAIN_ASSUMPTION, Kind.PLAN) and (c.quality or c.constraint_expr):
        raise ClassificationError(
            "unexpected-quality",
            f"{mc.source}: only desired content may describe qualities",
            mc.source,
        )
    return Element(
        id=mc.source,
        kind=kind,
        holds=c.holds,
        optionality=optionality,
        quality=c.quality,
        constraint_expr=c.constraint_expr if kind is Kind.QUALITY_CONSTRAINT else None,
        params=c.params if kind is Kind.GOAL else (),
        source_utterance=mc.source,
    )


def _classify_attitude(mc: ModalContent, registry: Model, optionality: Optionality) -> Attitude:
    c = mc.content
    elements = registry.element_index
    if c.is_evaluation:
        if c.target not in elements:
            raise ClassificationError("dangling-reference", f"{mc.source} evaluates unknown element {c.target!r}", mc.source)
        return Attitude(mc.source, AttitudeForm.EVALUATION, optionality, target=c.target, sign=c.sign, source_utterance=mc.source)
    if not c.is_preference:
        raise ClassificationError("missing-content", f"{mc.source} neither evaluates nor compares anything", mc.source)
    if c.over_preferences:
        prefs = {a.id for a in registry.attitudes if a.form is AttitudeForm.PREFERENCE}
        for end in (c.preferred, c.dispreferred):
            if end not in prefs:
                raise ClassificationError("dangling-reference", f"{mc.source} orders unknown preference {end!r}", mc.source)
        form = AttitudeForm.META_PREFERENCE
    else:
        for end in (c.preferred, c.dispreferred):
            if end not in elements:
                raise ClassificationError("dangling-reference", f"{mc.source} orders unknown element {end!r}", mc.source)
        hi, lo = elements[c.preferred], elements[c.dispreferred]
        if hi.kind is not lo.kind:
            raise ClassificationError(
                "mixed-order",
                f"{mc.source} orders a {hi.kind.value} against a {lo.kind.value}",
                mc.source,
            )
        form = AttitudeForm.PREFERENCE
    return Attitude(
        mc.source,
        form,
        optionality,
        preferred=c.preferred,
        dispreferred=c.dispreferred,
        source_utterance=mc.source,
    )


@dataclass
class ClassificationResult:
    model: Model
    classified: dict[str, Element | Attitude]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def label(self, ident: str) -> str:
        return instance_label(self.classified[ident])


_LABELS = {
    Kind.DOMAIN_ASSUMPTION: "k",
    Kind.GOAL: "g",
    Kind.QUALITY_CONSTRAINT: "q",
    Kind.SOFTGOAL: "qs",
    Kind.PLAN: "p",
}


def instance_label(item: Element | Attitude) -> str:
    """Short tag: k, g, q, qs, p, or a:<form> for attitudes."""
    if isinstance(item, Element):
        return _LABELS[item.kind]
    return f"a:{item.form.value}"


def classify_utterances(utterances: Iterable[Utterance], registry: Model | None = None) -> ClassificationResult:
    """Decompose, modalize and classify every utterance against a registry model.

    Beliefs, desires and intentions are classified first so that attitudes
    may refer to elements stated anywhere in the same file; preferences
    precede meta-preferences for the same reason.
    """
    registry = registry or Model()
    diags: list[Diagnostic] = []
    leaves: list[Utterance] = []
    for u in utterances:
        try:
            leaves.extend(decompose(u))
        except ClassificationError as exc:
            diags.append(error(exc.code, exc.message, u.span, u.id))
    modal = [(leaf, modalize(leaf)) for leaf in leaves]

    def stage(mc: ModalContent) -> int:
        if mc.modality is not Modality.ATTITUDE:
            return 0
        return 2 if mc.content.over_preferences else 1

    classified: dict[str, Element | Attitude] = {}
    explicit: set[str] = set()
    current = registry
    taken = {e.id for e in registry.elements} | {a.id for a in registry.attitudes}
    for level in (0, 1, 2):
        for leaf, mc in modal:
            if stage(mc) != level:
                continue
            if leaf.id in taken:
                diags.append(error("duplicate-id", f"utterance id {leaf.id!r} is already declared", leaf.span, leaf.id))
                continue
            try:
                item = classify(mc, current)
            except ClassificationError as exc:
                diags.append(error(exc.code, exc.message, leaf.span, leaf.id))
                continue
            taken.add(leaf.id)
            classified[leaf.id] = item
            if mc.content.optionality is not None:
                explicit.add(leaf.id)
            if isinstance(item, Element):
                current = current.with_(elements=current.elements + (item,))
            else:
                current = current.with_(attitudes=current.attitudes + (item,))

    elements = []
    evaluated = {a.target for a in classified.values() if isinstance(a, Attitude) and a.target}
    for e in current.elements:
        if e.id in classified and e.id not in explicit:
            e = replace(e, optionality=default_optionality(e.id, current.attitudes))
            classified[e.id] = e
        elif e.id in evaluated:
            # registry elements carry no record of explicit optionality
            e = replace(e, optionality=default_optionality(e.id, current.attitudes))
        elements.append(e)
    spans = dict(registry.spans)
    spans.update({leaf.id: leaf.span for leaf in leaves if leaf.span is not None})
    model = current.with_(elements=tuple(elements), spans=spans)
    return ClassificationResult(model, classified, diags)
