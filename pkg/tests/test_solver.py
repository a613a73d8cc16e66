import dataclasses
import random

import pytest

from reqonto.dsl import parse_model
from reqonto.engine import StrictBase
from reqonto.ontology import Literal, Model
from reqonto.solver import (
    Candidate,
    CompulsoryCombo,
    ModeNotApplicable,
    UnsatisfiableCore,
    check_approx_coverage,
    check_entailment,
    check_preference_projection,
    dominates,
    enumerate_candidates,
    enumerate_compulsory_combinations,
    resolve_meta_preferences,
    solve,
    verify_solution,
    zj_mode,
)
from reqonto.solver.conditions import (
    C1_ASSUMPTION_VIOLATED,
    C1_UNWARRANTED,
    C4_UNCOVERED,
    C5_UNPROJECTED,
    ReasonerCache,
)
from reqonto.solver.verify import _Auditor
from tests.conftest import brute_force, load_model, random_model


def model_of(text: str) -> Model:
    result = parse_model(text)
    assert not result.diagnostics, [str(d) for d in result.diagnostics]
    return result.model


def only_candidate(model: Model) -> Candidate:
    """All compulsory elements, without the combination consistency filter."""
    combo = CompulsoryCombo((), frozenset(e.id for e in model.elements if e.compulsory))
    return Candidate.from_members(model, combo.members, combo)


class TestCombinations:
    def test_no_groups(self):
        m = model_of("goal g1 { holds: a }\nplan p1 { holds: b }")
        (combo,) = enumerate_compulsory_combinations(m)
        assert combo.members == {"g1", "p1"} and combo.chosen == ()

    def test_one_binary_group(self):
        m = model_of("assumption k1 { holds: a }\nassumption k1b { holds: b }\nalternatives { k1 | k1b }")
        assert [c.label() for c in enumerate_compulsory_combinations(m)] == ["k1", "k1b"]

    def test_cross_inconsistent_pairing(self):
        m = model_of(
            """
            assumption k1 { holds: a }
            assumption k2 { holds: b }
            plan p1 { holds: c }
            plan p2 { holds: d }
            alternatives { k1 | k2 }
            alternatives { p1 | p2 }
            rule s1: a -> ~d
            """
        )
        combos = enumerate_compulsory_combinations(m)
        assert [c.label() for c in combos] == ["k1,p1", "k2,p1", "k2,p2"]
        # oracle: brute consistency over the four pairings
        base = StrictBase(m.strict_rules)
        idx = m.element_index
        pairs = [(k, p) for k in ("k1", "k2") for p in ("p1", "p2") if base.consistent({idx[k].holds, idx[p].holds})]
        assert len(pairs) == len(combos) == 3

    def test_unsatisfiable_core(self):
        m = model_of("assumption k1 { holds: a }\nplan p1 { holds: b }\nrule s1: b -> ~a")
        with pytest.raises(UnsatisfiableCore):
            enumerate_compulsory_combinations(m)
        result = solve(m)
        assert [d.code for d in result.diagnostics] == ["unsatisfiable-compulsory-core"]


class TestMetaPreferences:
    def test_single_preference(self):
        m = model_of("goal g1 { holds: a }\ngoal g2 { holds: b }\nprefer p1: g1 > g2")
        agg = resolve_meta_preferences(m.attitudes, m)
        assert agg.effective == ("p1",) and agg.diagnostics == ()

    def test_flight_ticket_conflict(self, flight_model):
        agg = resolve_meta_preferences(flight_model.attitudes, flight_model)
        assert "ex15" in agg.effective and "ex14" not in agg.effective
        assert agg.dropped == {"ex14": "ex15"}

    def test_unresolved_conflict(self, flight_model):
        attitudes = [a for a in flight_model.attitudes if a.id != "m_tickets"]
        agg = resolve_meta_preferences(attitudes, flight_model)
        assert {"ex14", "ex15"} <= set(agg.effective)
        assert [d.code for d in agg.diagnostics] == ["unresolved-preference-conflict"]
        e, p = frozenset({"g_e_tickets"}), frozenset({"g_paper_tickets"})
        assert not agg.prefers(e, p) and not agg.prefers(p, e)

    def test_optional_preference_yields_to_compulsory(self):
        m = model_of(
            "goal g1 { holds: a }\ngoal g2 { holds: b }\nalternatives { g1 | g2 }\n"
            "prefer p1: g1 > g2\nprefer p2 optional: g2 > g1"
        )
        agg = resolve_meta_preferences(m.attitudes, m)
        assert agg.effective == ("p1",) and agg.diagnostics == ()

    def test_strict_inconsistency_is_a_conflict(self):
        m = model_of(
            "plan p1 optional { holds: a }\nplan p2 optional { holds: b }\nplan p3 optional { holds: c }\n"
            "rule s1: a -> ~b\nprefer x: p1 > p3\nprefer y: p2 > p3\nprefer m: pref y > x"
        )
        agg = resolve_meta_preferences(m.attitudes, m)
        assert agg.effective == ("y",)


ENTAIL = """
assumption k1 { holds: k1_holds }
goal g1 { holds: booking_confirmed }
plan p1 { holds: p1_does }
rule r1: p1_does => booking_confirmed
"""


class TestConditions:
    def test_entailment_passes(self):
        m = model_of(ENTAIL)
        assert check_entailment(m, only_candidate(m)).passed

    def test_assumption_violated(self):
        m = model_of(ENTAIL + "rule s1: p1_does -> ~k1_holds\n")
        v = check_entailment(m, only_candidate(m))
        assert not v.passed and [d.code for d in v.diagnostics] == [C1_ASSUMPTION_VIOLATED]

    def test_facts_survive_defeasible_attack(self):
        m = model_of(ENTAIL + "rule r2: p1_does => ~k1_holds\n")
        assert check_entailment(m, only_candidate(m)).passed

    def test_unwarranted_goal(self):
        m = model_of(ENTAIL + "goal g2 { holds: flight_booked }\n")
        v = check_entailment(m, only_candidate(m))
        assert not v.passed
        assert [(d.code, d.element) for d in v.diagnostics] == [(C1_UNWARRANTED, "g2")]
        assert "flight_booked" in v.diagnostics[0].message

    def test_coverage_vacuous(self):
        m = model_of(ENTAIL)
        assert check_approx_coverage(m, only_candidate(m)).passed

    def test_coverage_flight(self, flight_model):
        combo = enumerate_compulsory_combinations(flight_model)[0]
        cand = Candidate.from_members(flight_model, combo.members, combo)
        assert check_approx_coverage(flight_model, cand).passed
        without = dataclasses.replace(cand, Q=cand.Q - {"ex7"})
        v = check_approx_coverage(flight_model, without)
        assert not v.passed and [(d.code, d.element) for d in v.diagnostics] == [(C4_UNCOVERED, "ex8")]

    def test_projection(self, flight_model):
        agg = resolve_meta_preferences(flight_model.attitudes, flight_model)
        combo = enumerate_compulsory_combinations(flight_model)[0]
        cand = Candidate.from_members(flight_model, combo.members, combo)
        assert check_preference_projection(flight_model, cand, agg).passed
        unmirrored = flight_model.with_(attitudes=tuple(a for a in flight_model.attitudes if a.id != "m13"))
        agg2 = resolve_meta_preferences(unmirrored.attitudes, unmirrored)
        v = check_preference_projection(unmirrored, cand, agg2)
        assert not v.passed and [(d.code, d.element) for d in v.diagnostics] == [(C5_UNPROJECTED, "ex13")]

    def test_projection_vacuous(self):
        m = model_of(ENTAIL)
        agg = resolve_meta_preferences(m.attitudes, m)
        assert check_preference_projection(m, only_candidate(m), agg).passed


class TestDominance:
    def test_irreflexive(self, flight_model):
        agg = resolve_meta_preferences(flight_model.attitudes, flight_model)
        combos = enumerate_compulsory_combinations(flight_model)
        c = next(enumerate_candidates(flight_model, combos))
        assert not dominates(c, c, agg, flight_model)

    def test_optional_goal_superset(self):
        m = model_of("goal g1 { holds: a }\ngoal g_opt optional { holds: b }\nplan p1 { holds: c }")
        agg = resolve_meta_preferences(m.attitudes, m)
        (combo,) = enumerate_compulsory_combinations(m)
        with_opt = Candidate.from_members(m, combo.members | {"g_opt"}, combo)
        without = Candidate.from_members(m, combo.members, combo)
        assert dominates(with_opt, without, agg, m) and not dominates(without, with_opt, agg, m)

    def test_paper_tickets_dominate(self, flight_model):
        agg = resolve_meta_preferences(flight_model.attitudes, flight_model)
        combos = enumerate_compulsory_combinations(flight_model)
        cands = list(enumerate_candidates(flight_model, combos))
        paper = [c for c in cands if "g_paper_tickets" in c.G and "q_split_form" in c.Q]
        eticket = [c for c in cands if "g_e_tickets" in c.G]
        for p in paper[:40]:
            for e in eticket[:40]:
                assert dominates(p, e, agg, flight_model)
                assert not dominates(e, p, agg, flight_model)

    def test_partial_order_laws(self, flight_model):
        agg = resolve_meta_preferences(flight_model.attitudes, flight_model)
        cands = list(enumerate_candidates(flight_model, enumerate_compulsory_combinations(flight_model)))
        rng = random.Random(5)
        for _ in range(300):
            a, b, c = rng.sample(cands, 3)
            assert not dominates(a, a, agg)
            assert not (dominates(a, b, agg) and dominates(b, a, agg))
            if dominates(a, b, agg) and dominates(b, c, agg):
                assert dominates(a, c, agg)


class TestSolve:
    def test_single_plan(self):
        m = model_of("goal g1 { holds: booked }\nplan p1 { holds: book }\nrule r1: book => booked")
        result = solve(m)
        (s,) = result.solutions
        assert s.plans == {"p1"}
        assert all(v.passed for v in s.verdicts.values()) and sorted(s.verdicts) == ["c1", "c2", "c3", "c4", "c5"]
        assert verify_solution(m, s)

    def test_flight(self, flight_model):
        result = solve(flight_model)
        assert result.exhaustive and result.diagnostics == []
        (s,) = result.solutions
        assert "p_paper_mail" in s.plans and "p_eticket_service" not in s.plans
        assert Literal("paper_tickets_for_all") in s.warranted
        assert s.candidate.G >= {"g_paper_tickets", "g_special_offers", "g_quick_confirmation"}
        assert "ex1" not in s.candidate.K
        assert verify_solution(flight_model, s)

    def test_uncovered_softgoal(self):
        result = solve(load_model("uncovered_softgoal.req"))
        assert result.solutions == []
        codes = [d.code for d in result.diagnostics]
        assert codes == ["no-solution", C4_UNCOVERED]
        assert "c4" in result.diagnostics[0].message

    def test_unprojected_preference(self):
        result = solve(load_model("unprojected_preference.req"))
        assert result.solutions == []
        assert [d.code for d in result.diagnostics] == ["no-solution", C5_UNPROJECTED]

    def test_budget_is_flagged(self, flight_model):
        result = solve(flight_model, max_candidates=10)
        assert not result.exhaustive
        assert "budget-exceeded" in [d.code for d in result.diagnostics]

    def test_monotone_budget(self, flight_model):
        full = {s.candidate for s in solve(flight_model).solutions}
        for budget in (50, 400, 1000, 1500):
            for s in solve(flight_model, max_candidates=budget).solutions:
                if verify_solution(flight_model, s):
                    assert s.candidate in full

    def test_first_solution_only(self):
        m = model_of("goal g1 { holds: x }\nplan p1 optional { holds: a }\nplan p2 optional { holds: b }\n"
                     "rule r1: a => x\nrule r2: b => x\nrule s1: a -> ~b")
        assert len(solve(m).solutions) == 2
        assert len(solve(m, all_solutions=False).solutions) == 1

    def test_disfavored_elements_are_a_last_resort(self):
        base = "goal g1 { holds: x }\nplan p1 { holds: a }\nplan p2 { holds: b }\nevaluate e1: disfavor p2\n"
        m = model_of(base + "rule r1: a => x\nrule r2: b => x\n")
        (s,) = solve(m).solutions
        assert s.plans == {"p1"}
        assert verify_solution(m, s)
        only = model_of(base + "rule r2: b => x\n")
        (s,) = solve(only).solutions
        assert s.plans == {"p1", "p2"}
        assert verify_solution(only, s)

    def test_optionality_maximality(self, flight_model):
        (s,) = solve(flight_model).solutions
        audit = _Auditor(flight_model)
        grouped = {m: g for g in flight_model.alternatives for m in g}
        for e in flight_model.elements:
            if e.compulsory or e.id in s.candidate.members or e.id in flight_model.disfavored():
                continue
            if any(o in s.candidate.members for o in grouped.get(e.id, ())):
                continue
            bigger = s.candidate.members | {e.id}
            assert not audit.feasible(bigger), e.id

    def test_completeness_on_random_models(self):
        checked = 0
        for seed in range(60):
            rng = random.Random(seed)
            model = random_model(rng, size=2)
            result = solve(model)
            found = {s.candidate.members for s in result.solutions}
            assert found == brute_force(model), seed
            for s in result.solutions:
                assert verify_solution(model, s), seed
            checked += bool(found)
        assert checked >= 10


class TestVerify:
    def test_removed_goal_literal(self, flight_model):
        (s,) = solve(flight_model).solutions
        tampered = dataclasses.replace(s, warranted=s.warranted - {Literal("booking_confirmed")})
        assert not verify_solution(flight_model, tampered)

    def test_dominated_candidate(self, flight_model):
        result = solve(flight_model)
        (s,) = result.solutions
        loser = next(c for c in result.feasible_candidates if c != s.candidate)
        fake = dataclasses.replace(s, candidate=loser, warranted=ReasonerCache(flight_model).get(loser).consequences())
        assert not verify_solution(flight_model, fake)

    def test_failed_verdict(self, flight_model):
        (s,) = solve(flight_model).solutions
        verdicts = dict(s.verdicts)
        verdicts["c4"] = dataclasses.replace(verdicts["c4"], passed=False)
        assert not verify_solution(flight_model, dataclasses.replace(s, verdicts=verdicts))


class TestZaveJackson:
    def test_entailed(self):
        assert zj_mode(load_model("zj_entailed.req"))

    def test_not_entailed_without_rule(self):
        m = load_model("zj_entailed.req")
        assert not zj_mode(m.with_(rules=()))

    def test_agrees_with_solve(self):
        m = load_model("zj_entailed.req")
        assert len(solve(m).solutions) == 1
        assert solve(m.with_(rules=())).solutions == []

    def test_preconditions(self, flight_model):
        with pytest.raises(ModeNotApplicable) as exc:
            zj_mode(flight_model)
        assert exc.value.code == "mode-not-applicable"
