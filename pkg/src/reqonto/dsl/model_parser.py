"""Parser for the line-oriented requirements model format.

    quality screens { level: ordinal, structure: well_defined_shared, domain: 1..50 }
    goal g1 compulsory { holds: booking_confirmed }
    qc q1 { holds: few_screens, quality: screens, constraint: "< 5" }
    rule r1: a & b => c
    priority r1 > r2
    approx sg1 <- q1 { correlation: 0.7, justification: "usability study" }
    prefer a1: g1 > g2
    prefer m1: pref a1 > a2
    evaluate e1: favor g1
    alternatives { g1 | g2 }
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from reqonto.diagnostics import Diagnostic, SourceSpan, error
from reqonto.dsl.lexer import DslSyntaxError, Token, TokenStream, tokenize
from reqonto.ontology import (
    DEFAULT_APPROX_THRESHOLD,
    Attitude,
    AttitudeForm,
    Element,
    JustifiedApproximation,
    Kind,
    Level,
    Literal,
    Model,
    OntologyError,
    Optionality,
    QualityType,
    Rule,
    Sign,
    Strength,
    Structure,
    default_optionality,
    validate_model,
)

ELEMENT_KEYWORDS = {
    "assumption": Kind.DOMAIN_ASSUMPTION,
    "goal": Kind.GOAL,
    "qc": Kind.QUALITY_CONSTRAINT,
    "softgoal": Kind.SOFTGOAL,
    "plan": Kind.PLAN,
}
KEYWORDS = set(ELEMENT_KEYWORDS) | {
    "quality",
    "rule",
    "priority",
    "approx",
    "prefer",
    "evaluate",
    "alternatives",
}


@dataclass
class ParseResult:
    model: Model
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(d.severity.value == "error" for d in self.diagnostics)


def parse_literal(tok: Token, negated: bool) -> Literal:
    try:
        return Literal(tok.text, negated)
    except OntologyError as exc:
        raise DslSyntaxError(exc.message, tok.span, "invalid-atom") from None


def read_literal(ts: TokenStream) -> Literal:
    negated = ts.accept("punct", "~") is not None
    return parse_literal(ts.expect("ident", what="literal"), negated)


def read_enum(ts: TokenStream, enum_cls, what: str):
    tok = ts.expect("ident", what=what)
    try:
        return enum_cls(tok.text)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise DslSyntaxError(f"unknown {what} {tok.text!r} (expected one of {allowed})", tok.span) from None


def read_optionality(ts: TokenStream) -> Optionality | None:
    if ts.peek.kind == "ident" and ts.peek.text in ("compulsory", "optional"):
        return Optionality(ts.next().text)
    return None


def read_fields(ts: TokenStream, readers: dict) -> dict[str, tuple[object, Token]]:
    """Parse ``{ key: value, ... }`` dispatching each key to its reader."""
    ts.expect("punct", "{")
    out: dict[str, tuple[object, Token]] = {}
    while not ts.accept("punct", "}"):
        key = ts.expect("ident", what="field name")
        if key.text not in readers:
            raise DslSyntaxError(
                f"unknown field {key.text!r} (expected one of {', '.join(sorted(readers))})", key.span
            )
        if key.text in out:
            raise DslSyntaxError(f"field {key.text!r} given twice", key.span)
        ts.expect("punct", ":")
        out[key.text] = (readers[key.text](ts), key)
        if not ts.accept("punct", ","):
            ts.expect("punct", "}", what="',' or '}'")
            break
    return out


def read_text(ts: TokenStream) -> str:
    if ts.peek.kind == "string":
        return ts.next().text
    text, _ = ts.raw_until({",", "}"})
    return text


def read_string(ts: TokenStream) -> str:
    return ts.expect("string", what="quoted string").text


def read_ident(ts: TokenStream) -> str:
    return ts.expect("ident", what="identifier").text


def read_ident_list(ts: TokenStream) -> tuple[str, ...]:
    ts.expect("punct", "[")
    items: list[str] = []
    while not ts.accept("punct", "]"):
        items.append(ts.expect("ident", what="identifier").text)
        if not ts.accept("punct", ","):
            ts.expect("punct", "]", what="',' or ']'")
            break
    return tuple(items)


def read_number(ts: TokenStream) -> float:
    tok = ts.expect("number", what="number")
    return float(tok.text)


class _ModelParser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.ts = TokenStream(tokenize(text, file), text)
        self.diags: list[Diagnostic] = []
        self.qualities: dict[str, QualityType] = {}
        self.elements: dict[str, Element] = {}
        self.explicit_optionality: set[str] = set()
        self.approximations: dict[tuple[str, str], JustifiedApproximation] = {}
        self.attitudes: dict[str, Attitude] = {}
        self.rules: dict[str, Rule] = {}
        self.priorities: list[tuple[str, str]] = []
        self.alternatives: list[tuple[str, ...]] = []
        self.spans: dict[str, SourceSpan] = {}

    def run(self) -> ParseResult:
        ts = self.ts
        while ts.peek.kind != "eof":
            start = ts.peek
            try:
                self.declaration()
            except DslSyntaxError as exc:
                self.diags.append(error(exc.code, exc.message, exc.span))
                self.recover(start)
        elements = []
        for e in self.elements.values():
            if e.id not in self.explicit_optionality:
                e = replace(e, optionality=default_optionality(e.id, self.attitudes.values()))
            elements.append(e)
        model = Model(
            qualities=tuple(self.qualities.values()),
            elements=tuple(elements),
            approximations=tuple(self.approximations.values()),
            attitudes=tuple(self.attitudes.values()),
            rules=tuple(self.rules.values()),
            priorities=tuple(self.priorities),
            alternatives=tuple(self.alternatives),
            spans=self.spans,
        )
        return ParseResult(model, self.diags)

    def recover(self, start: Token) -> None:
        ts = self.ts
        if ts.peek is start:
            ts.next()
        while ts.peek.kind != "eof":
            tok = ts.peek
            prev = ts.tokens[ts.i - 1] if ts.i else None
            if tok.kind == "ident" and tok.text in KEYWORDS and (prev is None or prev.span.line < tok.span.line):
                return
            ts.next()

    def register(self, table: dict, key, value, tok: Token, label: str) -> None:
        if key in table:
            self.diags.append(error("duplicate-id", f"duplicate {label} id {key!r}", tok.span, str(key)))
            return
        table[key] = value
        self.spans[key if isinstance(key, str) else "<-".join(key)] = tok.span

    def declaration(self) -> None:
        ts = self.ts
        kw = ts.expect("ident", what="declaration keyword")
        if kw.text == "quality":
            self.quality_decl(kw)
        elif kw.text in ELEMENT_KEYWORDS:
            self.element_decl(kw, ELEMENT_KEYWORDS[kw.text])
        elif kw.text == "rule":
            self.rule_decl(kw)
        elif kw.text == "priority":
            hi = read_ident(ts)
            ts.expect("punct", ">")
            lo = read_ident(ts)
            self.priorities.append((hi, lo))
            self.spans.setdefault(f"{hi}>{lo}", kw.span)
        elif kw.text == "approx":
            self.approx_decl(kw)
        elif kw.text == "prefer":
            self.prefer_decl(kw)
        elif kw.text == "evaluate":
            self.evaluate_decl(kw)
        elif kw.text == "alternatives":
            self.alternatives_decl(kw)
        else:
            raise DslSyntaxError(f"unknown declaration {kw.text!r}", kw.span)

    def quality_decl(self, kw: Token) -> None:
        ts = self.ts
        ident = ts.expect("ident", what="quality id")
        fields = read_fields(
            ts,
            {
                "level": lambda t: read_enum(t, Level, "level"),
                "structure": lambda t: read_enum(t, Structure, "structure"),
                "domain": read_text,
            },
        )
        for req in ("level", "structure"):
            if req not in fields:
                raise DslSyntaxError(f"quality {ident.text} is missing {req!r}", ident.span, "missing-field")
        qt = QualityType(
            ident.text,
            fields["level"][0],
            fields["structure"][0],
            fields["domain"][0] if "domain" in fields else None,
        )
        self.register(self.qualities, qt.id, qt, ident, "quality")

    def element_decl(self, kw: Token, kind: Kind) -> None:
        ts = self.ts
        ident = ts.expect("ident", what=f"{kw.text} id")
        optionality = read_optionality(ts)
        fields = read_fields(
            ts,
            {
                "holds": read_literal,
                "quality": read_ident,
                "constraint": read_text,
                "params": read_ident_list,
                "source": read_ident,
            },
        )
        if "holds" not in fields:
            raise DslSyntaxError(f"{kw.text} {ident.text} is missing 'holds'", ident.span, "missing-field")
        element = Element(
            id=ident.text,
            kind=kind,
            holds=fields["holds"][0],
            optionality=optionality or Optionality.COMPULSORY,
            quality=fields["quality"][0] if "quality" in fields else None,
            constraint_expr=fields["constraint"][0] if "constraint" in fields else None,
            params=fields["params"][0] if "params" in fields else (),
            source_utterance=fields["source"][0] if "source" in fields else None,
        )
        if ident.text not in self.elements and optionality is not None:
            self.explicit_optionality.add(ident.text)
        self.register(self.elements, element.id, element, ident, "element")

    def rule_decl(self, kw: Token) -> None:
        ts = self.ts
        ident = ts.expect("ident", what="rule id")
        ts.expect("punct", ":")
        body: list[Literal] = []
        arrow = ts.accept("punct", "->") or ts.accept("punct", "=>")
        while arrow is None:
            body.append(read_literal(ts))
            if ts.accept("punct", "&"):
                continue
            arrow = ts.accept("punct", "->") or ts.accept("punct", "=>")
            if arrow is None:
                tok = ts.peek
                raise DslSyntaxError(f"expected '&', '->' or '=>', found {tok.text!r}", tok.span)
        head = read_literal(ts)
        strength = Strength.STRICT if arrow.text == "->" else Strength.DEFEASIBLE
        self.register(self.rules, ident.text, Rule(ident.text, frozenset(body), head, strength), ident, "rule")

    def approx_decl(self, kw: Token) -> None:
        ts = self.ts
        sg = ts.expect("ident", what="softgoal id")
        ts.expect("punct", "<-")
        qc = ts.expect("ident", what="quality constraint id")
        fields = read_fields(ts, {"correlation": read_number, "justification": read_string})
        if "correlation" not in fields:
            raise DslSyntaxError("approx is missing 'correlation'", sg.span, "missing-field")
        ap = JustifiedApproximation(
            sg.text,
            qc.text,
            fields["correlation"][0],
            fields["justification"][0] if "justification" in fields else "",
        )
        self.register(self.approximations, ap.key, ap, sg, "approximation")

    def prefer_decl(self, kw: Token) -> None:
        ts = self.ts
        ident = ts.expect("ident", what="preference id")
        optionality = read_optionality(ts) or Optionality.COMPULSORY
        ts.expect("punct", ":")
        form = AttitudeForm.PREFERENCE
        if ts.accept("ident", "pref"):
            form = AttitudeForm.META_PREFERENCE
        hi = read_ident(ts)
        ts.expect("punct", ">")
        lo = read_ident(ts)
        att = Attitude(ident.text, form, optionality, preferred=hi, dispreferred=lo, source_utterance=self.attitude_source())
        self.register(self.attitudes, att.id, att, ident, "attitude")

    def attitude_source(self) -> str | None:
        """Optional trailing ``{ source: <utterance-id> }``."""
        if self.ts.peek.kind == "punct" and self.ts.peek.text == "{":
            fields = read_fields(self.ts, {"source": read_ident})
            if "source" in fields:
                return fields["source"][0]
        return None

    def evaluate_decl(self, kw: Token) -> None:
        ts = self.ts
        ident = ts.expect("ident", what="evaluation id")
        optionality = read_optionality(ts) or Optionality.COMPULSORY
        ts.expect("punct", ":")
        sign = read_enum(ts, Sign, "sign")
        target = read_ident(ts)
        att = Attitude(
            ident.text, AttitudeForm.EVALUATION, optionality, target=target, sign=sign, source_utterance=self.attitude_source()
        )
        self.register(self.attitudes, att.id, att, ident, "attitude")

    def alternatives_decl(self, kw: Token) -> None:
        ts = self.ts
        ts.expect("punct", "{")
        members = [read_ident(ts)]
        while ts.accept("punct", "|"):
            members.append(read_ident(ts))
        ts.expect("punct", "}", what="'|' or '}'")
        group = tuple(members)
        self.alternatives.append(group)
        self.spans.setdefault("|".join(sorted(group)), kw.span)


def parse_model(
    text: str,
    file: str = "<input>",
    threshold: float = DEFAULT_APPROX_THRESHOLD,
    validate: bool = True,
) -> ParseResult:
    """Parse a model document; syntax and validation problems come back as diagnostics."""
    try:
        result = _ModelParser(text, file).run()
    except DslSyntaxError as exc:  # lexical errors abort the whole document
        return ParseResult(Model(), [error(exc.code, exc.message, exc.span)])
    if validate:
        result.diagnostics.extend(validate_model(result.model, threshold))
    return result
