"""Parser for annotated utterance files.

    utterance ex2 force directive { text: "booking always confirmed", holds: booking_confirmed }
    utterance ex9 force expressive { disfavor: ex1 }
    utterance ex14 force expressive { prefer: g_e_tickets > g_paper_tickets }
    compound c1 if_then [ex1, ex2]

Records not referenced by any compound are returned as top-level utterances
in document order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from reqonto.diagnostics import Diagnostic, error
from reqonto.dsl.lexer import DslSyntaxError, Token, TokenStream, quote, tokenize
from reqonto.dsl.model_parser import (
    read_ident,
    read_ident_list,
    read_literal,
    read_string,
    read_text,
)
from reqonto.ontology import Optionality, Sign
from reqonto.speech_acts import Connective, Content, Force, Utterance


@dataclass
class UtteranceParseResult:
    utterances: list[Utterance]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def _read_preference(ts: TokenStream):
    over = ts.accept("ident", "pref") is not None
    hi = read_ident(ts)
    ts.expect("punct", ">")
    lo = read_ident(ts)
    return over, hi, lo


def _read_optionality(ts: TokenStream) -> Optionality:
    tok = ts.expect("ident", what="compulsory or optional")
    try:
        return Optionality(tok.text)
    except ValueError:
        raise DslSyntaxError(f"unknown optionality {tok.text!r}", tok.span) from None


_READERS = {
    "text": read_string,
    "holds": read_literal,
    "quality": read_ident,
    "constraint": read_text,
    "params": read_ident_list,
    "optionality": _read_optionality,
    "favor": read_ident,
    "disfavor": read_ident,
    "prefer": _read_preference,
}


@dataclass
class _Record:
    id: str
    tok: Token
    text: str = ""
    force: Force | None = None
    content: Content | None = None
    connective: Connective | None = None
    children: tuple[str, ...] = ()


def _leaf(ts: TokenStream, ident: Token) -> _Record:
    ts.expect("ident", "force")
    force_tok = ts.expect("ident", what="force")
    try:
        force = Force(force_tok.text)
    except ValueError:
        raise DslSyntaxError(f"unknown force {force_tok.text!r}", force_tok.span, "unknown-force") from None
    ts.expect("punct", "{")
    values: dict[str, object] = {}
    while not ts.accept("punct", "}"):
        key = ts.expect("ident", what="field name")
        if key.text not in _READERS:
            raise DslSyntaxError(f"unknown field {key.text!r}", key.span)
        if key.text in values:
            raise DslSyntaxError(f"field {key.text!r} given twice", key.span)
        ts.expect("punct", ":")
        values[key.text] = _READERS[key.text](ts)
        if not ts.accept("punct", ","):
            ts.expect("punct", "}", what="',' or '}'")
            break
    evaluations = [k for k in ("favor", "disfavor", "prefer") if k in values]
    if len(evaluations) > 1:
        raise DslSyntaxError(f"utterance {ident.text} mixes {' and '.join(evaluations)}", ident.span)
    if force is Force.EXPRESSIVE:
        if not evaluations:
            raise DslSyntaxError(
                f"expressive utterance {ident.text} needs favor, disfavor or prefer", ident.span, "missing-content"
            )
    elif "holds" not in values:
        raise DslSyntaxError(f"utterance {ident.text} is missing 'holds'", ident.span, "missing-content")
    elif evaluations:
        raise DslSyntaxError(f"only expressive utterances can {evaluations[0]}", ident.span)
    sign = target = hi = lo = None
    over = False
    if "favor" in values or "disfavor" in values:
        sign = Sign.FAVOR if "favor" in values else Sign.DISFAVOR
        target = values.get("favor") or values.get("disfavor")
    if "prefer" in values:
        over, hi, lo = values["prefer"]
    content = Content(
        holds=values.get("holds"),
        quality=values.get("quality"),
        constraint_expr=values.get("constraint"),
        params=values.get("params", ()),
        optionality=values.get("optionality"),
        sign=sign,
        target=target,
        preferred=hi,
        dispreferred=lo,
        over_preferences=over,
    )
    return _Record(ident.text, ident, values.get("text", ""), force, content)


def _compound(ts: TokenStream, ident: Token) -> _Record:
    conn_tok = ts.expect("ident", what="connective")
    try:
        connective = Connective(conn_tok.text)
    except ValueError:
        raise DslSyntaxError(f"unknown connective {conn_tok.text!r}", conn_tok.span) from None
    children = read_ident_list(ts)
    if len(children) < 2:
        raise DslSyntaxError(f"compound {ident.text} needs at least two parts", ident.span, "malformed-utterance")
    if connective is Connective.IF_THEN and len(children) != 2:
        raise DslSyntaxError(f"if_then compound {ident.text} needs exactly two parts", ident.span, "malformed-utterance")
    return _Record(ident.text, ident, connective=connective, children=children)


def parse_utterances(text: str, file: str = "<input>") -> UtteranceParseResult:
    try:
        ts = TokenStream(tokenize(text, file), text)
    except DslSyntaxError as exc:
        return UtteranceParseResult([], [error(exc.code, exc.message, exc.span)])
    diags: list[Diagnostic] = []
    records: dict[str, _Record] = {}
    order: list[str] = []
    while ts.peek.kind != "eof":
        start = ts.peek
        try:
            kw = ts.expect("ident", what="'utterance' or 'compound'")
            if kw.text not in ("utterance", "compound"):
                raise DslSyntaxError(f"unknown record {kw.text!r}", kw.span)
            ident = ts.expect("ident", what="utterance id")
            rec = _leaf(ts, ident) if kw.text == "utterance" else _compound(ts, ident)
            if rec.id in records:
                diags.append(error("duplicate-id", f"duplicate utterance id {rec.id!r}", ident.span, rec.id))
            else:
                records[rec.id] = rec
                order.append(rec.id)
        except DslSyntaxError as exc:
            diags.append(error(exc.code, exc.message, exc.span))
            if ts.peek is start:
                ts.next()
            while ts.peek.kind != "eof" and not (
                ts.peek.kind == "ident" and ts.peek.text in ("utterance", "compound")
                and ts.tokens[ts.i - 1].span.line < ts.peek.span.line
            ):
                ts.next()

    parent: dict[str, str] = {}
    for rid in order:
        for child in records[rid].children:
            if child not in records:
                diags.append(error("dangling-reference", f"compound {rid} names unknown part {child!r}", records[rid].tok.span, rid))
            elif child in parent:
                diags.append(error("shared-part", f"utterance {child} is part of both {parent[child]} and {rid}", records[rid].tok.span, rid))
            else:
                parent[child] = rid

    def build(rid: str, stack: tuple[str, ...]) -> Utterance:
        rec = records[rid]
        if rid in stack:
            raise DslSyntaxError(f"compound {rid} contains itself", rec.tok.span, "cyclic-compound")
        kids = tuple(build(c, stack + (rid,)) for c in rec.children if c in records and parent.get(c) == rid)
        return Utterance(rec.id, rec.text, rec.force, rec.content, rec.connective, kids, rec.tok.span)

    roots = []
    for rid in order:
        if rid in parent:
            continue
        try:
            roots.append(build(rid, ()))
        except DslSyntaxError as exc:
            diags.append(error(exc.code, exc.message, exc.span, rid))
    for rid in order:
        if rid in parent and not _reaches_root(rid, parent):
            diags.append(error("cyclic-compound", f"utterance {rid} sits on a compound cycle", records[rid].tok.span, rid))
    return UtteranceParseResult(roots, diags)


def _reaches_root(rid: str, parent: dict[str, str]) -> bool:
    seen = set()
    while rid in parent:
        if rid in seen:
            return False
        seen.add(rid)
        rid = parent[rid]
    return True


def render_utterances(utterances: list[Utterance]) -> str:
    """Canonical text for utterance trees (children emitted before their compound)."""
    lines: list[str] = []

    def emit(u: Utterance) -> None:
        if not u.is_leaf:
            for c in u.children:
                emit(c)
            lines.append(f"compound {u.id} {u.connective.value} [{', '.join(c.id for c in u.children)}]")
            return
        c = u.content
        fields = []
        if u.text:
            fields.append(f"text: {quote(u.text)}")
        if c.holds is not None:
            fields.append(f"holds: {c.holds}")
        if c.quality is not None:
            fields.append(f"quality: {c.quality}")
        if c.constraint_expr is not None:
            fields.append(f"constraint: {quote(c.constraint_expr)}")
        if c.params:
            fields.append(f"params: [{', '.join(c.params)}]")
        if c.optionality is not None:
            fields.append(f"optionality: {c.optionality.value}")
        if c.sign is not None:
            fields.append(f"{c.sign.value}: {c.target}")
        if c.preferred is not None:
            fields.append(f"prefer: {'pref ' if c.over_preferences else ''}{c.preferred} > {c.dispreferred}")
        lines.append(f"utterance {u.id} force {u.force.value} {{ {', '.join(fields)} }}")

    for u in utterances:
        emit(u)
    return "\n".join(lines) + ("\n" if lines else "")
