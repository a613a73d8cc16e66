import random

import pytest

from reqonto.dsl import parse_model, parse_utterances, render_model, render_utterances
from reqonto.dsl.render import HEADER
from reqonto.ontology import AttitudeForm, Kind, Literal, Model, Optionality
from reqonto.speech_acts import Connective, Force
from tests.conftest import FIXTURES, fixture_text, random_model

MODEL_FIXTURES = sorted(p.name for p in FIXTURES.glob("*.req"))


def test_empty_input():
    result = parse_model("")
    assert result.model == Model() and result.diagnostics == []


def test_single_goal():
    result = parse_model("goal g1 compulsory { holds: booking_confirmed }")
    assert result.diagnostics == []
    (g,) = result.model.elements
    assert (g.id, g.kind, g.holds, g.optionality) == ("g1", Kind.GOAL, Literal("booking_confirmed"), Optionality.COMPULSORY)


def test_full_flight_fixture(flight_model):
    m = flight_model
    assert len(m.elements_of(Kind.DOMAIN_ASSUMPTION)) == 2
    assert len(m.elements_of(Kind.GOAL)) >= 2
    assert len(m.elements_of(Kind.QUALITY_CONSTRAINT)) >= 1
    assert len(m.elements_of(Kind.SOFTGOAL)) >= 1
    assert m.elements_of(Kind.PLAN)
    assert len(m.approximations) >= 1
    assert {"ex9", "ex10", "ex11", "ex12", "ex13", "ex14", "ex15"} <= set(m.attitude_index)
    assert m.attitude_index["m_tickets"].form is AttitudeForm.META_PREFERENCE


def test_spans_are_recorded():
    text = "// header\ngoal g1 { holds: a }\n  plan p1 { holds: b }\nrule r1: b => a\n"
    spans = parse_model(text, "m.req").model.spans
    assert (spans["g1"].line, spans["g1"].column) == (2, 6)
    assert (spans["p1"].line, spans["p1"].column) == (3, 8)
    assert spans["r1"].line == 4 and spans["r1"].file == "m.req"


def test_syntax_error_has_span_and_recovers():
    text = "goal g1 { holds: a }\ngoal g2 { holds a }\nplan p1 { holds: b }\n"
    result = parse_model(text, "bad.req")
    assert [d.code for d in result.diagnostics] == ["syntax-error"]
    assert result.diagnostics[0].span.line == 2
    assert {e.id for e in result.model.elements} == {"g1", "p1"}


def test_duplicate_id():
    result = parse_model("goal g1 { holds: a }\ngoal g1 { holds: b }\n")
    assert [d.code for d in result.diagnostics] == ["duplicate-id"]
    assert result.diagnostics[0].span.line == 2


def test_dangling_reference_and_meta_cycle():
    text = """
    goal g1 { holds: a }
    goal g2 { holds: b }
    prefer p1: g1 > g2
    prefer p2: g2 > g1
    prefer m1: pref p1 > p2
    prefer m2: pref p2 > p1
    evaluate e1: favor ghost
    """
    codes = sorted(d.code for d in parse_model(text).diagnostics)
    assert codes == ["dangling-reference", "meta-preference-cycle"]


def test_lexical_error():
    result = parse_model("goal g1 { holds: a } $")
    assert [d.code for d in result.diagnostics] == ["lexical-error"]
    assert result.diagnostics[0].span.column == 22


def test_spans_point_inside_input():
    text = "goal g1 { holds: a }\nqc q1 { holds: b, quality: nope, constraint: \"< 3\" }\nrule r1 a => b\n"
    lines = text.splitlines()
    for d in parse_model(text, "x").diagnostics:
        assert d.span is not None
        assert 1 <= d.span.line <= len(lines)
        assert 1 <= d.span.column <= len(lines[d.span.line - 1]) + 1


def test_default_optionality_from_evaluations():
    m = parse_model("goal g1 { holds: a }\ngoal g2 compulsory { holds: b }\nevaluate e1: favor g1\nevaluate e2: favor g2\n").model
    idx = m.element_index
    assert idx["g1"].optionality is Optionality.OPTIONAL
    assert idx["g2"].optionality is Optionality.COMPULSORY


def test_render_empty_model():
    assert render_model(Model()) == HEADER + "\n"


def test_render_one_goal():
    doc = render_model(parse_model("goal g1 { holds: booking_confirmed }").model)
    assert doc == HEADER + "\n\ngoal g1 compulsory { holds: booking_confirmed }\n"


@pytest.mark.parametrize("name", MODEL_FIXTURES)
def test_fixture_round_trip(name):
    model = parse_model(fixture_text(name), name).model
    again = parse_model(render_model(model))
    assert again.diagnostics == []
    assert again.model == model


def test_random_models_round_trip():
    for seed in range(120):
        rng = random.Random(seed)
        model = random_model(rng, size=rng.randint(1, 4))
        again = parse_model(render_model(model))
        assert again.diagnostics == [], seed
        assert again.model == model, seed


def test_parse_is_deterministic(flight_model):
    text = fixture_text("flight.req")
    a, b = parse_model(text, "f"), parse_model(text, "f")
    assert a.model == b.model and a.diagnostics == b.diagnostics
    assert render_model(a.model) == render_model(b.model)


class TestUtterances:
    def test_directive_leaf(self):
        result = parse_utterances("utterance u1 force directive { holds: booking_confirmed }")
        assert result.diagnostics == []
        (u,) = result.utterances
        assert u.force is Force.DIRECTIVE and u.content.holds == Literal("booking_confirmed") and u.is_leaf

    def test_unknown_force(self):
        result = parse_utterances("utterance u1 force telepathic { holds: x }")
        assert [d.code for d in result.diagnostics] == ["unknown-force"]

    def test_missing_content(self):
        codes = [d.code for d in parse_utterances("utterance u1 force directive { text: \"hi\" }").diagnostics]
        assert codes == ["missing-content"]

    def test_if_then_needs_two_parts(self):
        text = """
        utterance a force assertive { holds: x }
        utterance b force directive { holds: y }
        utterance c force directive { holds: z }
        compound k if_then [a, b, c]
        """
        assert [d.code for d in parse_utterances(text).diagnostics] == ["malformed-utterance"]

    def test_compound_nesting(self):
        text = """
        utterance a force assertive { holds: paid }
        utterance b force directive { holds: booked }
        compound k if_then [a, b]
        """
        result = parse_utterances(text)
        assert result.diagnostics == []
        (root,) = result.utterances
        assert root.connective is Connective.IF_THEN and [c.id for c in root.children] == ["a", "b"]

    def test_flight_file_has_fifteen_utterances(self):
        assert len(parse_utterances(fixture_text("flight_utterances.utt")).utterances) == 15

    def test_round_trip(self):
        utts = parse_utterances(fixture_text("flight_utterances.utt")).utterances
        assert parse_utterances(render_utterances(utts)).utterances == utts
