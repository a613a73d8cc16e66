from __future__ import annotations

from reqonto.dsl.lexer import quote
from reqonto.ontology import KIND_ORDER, AttitudeForm, Kind, Model, Optionality

HEADER = "// reqonto model v1"

_KEYWORD = {
    Kind.DOMAIN_ASSUMPTION: "assumption",
    Kind.GOAL: "goal",
    Kind.QUALITY_CONSTRAINT: "qc",
    Kind.SOFTGOAL: "softgoal",
    Kind.PLAN: "plan",
}


def _number(x: float) -> str:
    return repr(float(x))


def render_model(model: Model) -> str:
    """Canonical text for a model; parses back to an equal model."""
    out = [HEADER]

    def section(lines: list[str]) -> None:
        if lines:
            out.append("")
            out.extend(lines)

    section([
        f"quality {q.id} {{ level: {q.level.value}, structure: {q.structure.value}"
        + (f", domain: {quote(q.domain)}" if q.domain is not None else "")
        + " }"
        for q in model.qualities
    ])
    for kind in KIND_ORDER:
        lines = []
        for e in model.elements_of(kind):
            fields = [f"holds: {e.holds}"]
            if e.quality is not None:
                fields.append(f"quality: {e.quality}")
            if e.constraint_expr is not None:
                fields.append(f"constraint: {quote(e.constraint_expr)}")
            if e.params:
                fields.append(f"params: [{', '.join(e.params)}]")
            if e.source_utterance is not None:
                fields.append(f"source: {e.source_utterance}")
            lines.append(f"{_KEYWORD[kind]} {e.id} {e.optionality.value} {{ {', '.join(fields)} }}")
        section(lines)
    section([
        f"approx {a.softgoal} <- {a.qc} {{ correlation: {_number(a.correlation)}, justification: {quote(a.justification)} }}"
        for a in model.approximations
    ])
    section([
        f"rule {r.id}: {' & '.join(str(b) for b in sorted(r.body))}{' ' if r.body else ''}{'->' if r.strict else '=>'} {r.head}"
        for r in model.rules
    ])
    section([f"priority {hi} > {lo}" for hi, lo in model.priorities])

    def opt(a) -> str:
        return " optional" if a.optionality is Optionality.OPTIONAL else ""

    def src(a) -> str:
        return f" {{ source: {a.source_utterance} }}" if a.source_utterance is not None else ""

    section([
        f"evaluate {a.id}{opt(a)}: {a.sign.value} {a.target}{src(a)}"
        for a in model.attitudes_of(AttitudeForm.EVALUATION)
    ])
    section([
        f"prefer {a.id}{opt(a)}: {a.preferred} > {a.dispreferred}{src(a)}"
        for a in model.attitudes_of(AttitudeForm.PREFERENCE)
    ])
    section([
        f"prefer {a.id}{opt(a)}: pref {a.preferred} > {a.dispreferred}{src(a)}"
        for a in model.attitudes_of(AttitudeForm.META_PREFERENCE)
    ])
    section([f"alternatives {{ {' | '.join(g)} }}" for g in model.alternatives])
    return "\n".join(out) + "\n"
