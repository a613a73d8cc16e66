from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from reqonto.dsl import parse_model, parse_utterances
from reqonto.engine import DefeasibleProgram, consistent
from reqonto.ontology import (
    Attitude,
    AttitudeForm,
    Element,
    JustifiedApproximation,
    Kind,
    Level,
    Literal,
    Model,
    Optionality,
    QualityType,
    Rule,
    Sign,
    Strength,
    Structure,
    has_errors,
    validate_model,
)
from reqonto.solver.verify import _Auditor

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_model(name: str) -> Model:
    result = parse_model(fixture_text(name), name)
    assert not has_errors(result.diagnostics), [str(d) for d in result.diagnostics]
    return result.model


def load_utterances(name: str):
    result = parse_utterances(fixture_text(name), name)
    assert not result.diagnostics, [str(d) for d in result.diagnostics]
    return result.utterances


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])


@pytest.fixture(scope="session")
def flight_model() -> Model:
    return load_model("flight.req")


# random defeasible programs -------------------------------------------------


def random_program(rng: random.Random, max_atoms: int = 8, max_rules: int = 12) -> DefeasibleProgram:
    """A program with a consistent strict base, at most ``max_rules`` rules over ``max_atoms`` atoms."""
    while True:
        atoms = [f"a{i}" for i in range(rng.randint(2, max_atoms))]

        def lit():
            return Literal(rng.choice(atoms), rng.random() < 0.4)

        facts = frozenset(lit() for _ in range(rng.randint(1, 3)))
        n_rules = rng.randint(1, max_rules)
        n_strict = rng.randint(0, min(3, n_rules))
        rules = [
            Rule(
                f"r{i}",
                frozenset(lit() for _ in range(rng.randint(1, 2))),
                lit(),
                Strength.STRICT if i < n_strict else Strength.DEFEASIBLE,
            )
            for i in range(n_rules)
        ]
        order = [r.id for r in rules if not r.strict]
        rng.shuffle(order)
        prio = {
            (order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, len(order))
            if rng.random() < 0.25
        }
        program = DefeasibleProgram.from_rules(facts, rules, prio)
        if consistent(program.facts, program.strict_rules):
            return program


# random models ----------------------------------------------------------------

_KIND_PREFIX = {
    Kind.DOMAIN_ASSUMPTION: "k",
    Kind.GOAL: "g",
    Kind.QUALITY_CONSTRAINT: "q",
    Kind.SOFTGOAL: "s",
    Kind.PLAN: "p",
}


def random_model(rng: random.Random, size: int = 3) -> Model:
    """A random model that passes validation; exercises every declaration form."""
    atoms = [f"x{i}" for i in range(2 * size + 2)]

    def lit():
        return Literal(rng.choice(atoms), rng.random() < 0.3)

    qualities = [
        QualityType("qw", Level.RATIO, Structure.WELL_DEFINED_SHARED, "0..100"),
        QualityType("qs", rng.choice(list(Level)), Structure.SUBJECTIVE_ILL_DEFINED, rng.choice([None, "vague scale"])),
    ]
    elements: list[Element] = []
    for kind, prefix in _KIND_PREFIX.items():
        for i in range(rng.randint(0, size)):
            eid = f"{prefix}{i}"
            quality = constraint = None
            params: tuple[str, ...] = ()
            if kind is Kind.QUALITY_CONSTRAINT:
                quality, constraint = "qw", rng.choice(["< 5", "= 3", ">= 10 and < 20"])
            elif kind is Kind.SOFTGOAL:
                quality = "qs"
            elif kind is Kind.GOAL and rng.random() < 0.2:
                params = ("who",)
            elements.append(
                Element(
                    eid,
                    kind,
                    lit(),
                    rng.choice(list(Optionality)),
                    quality,
                    constraint,
                    params,
                    rng.choice([None, "u1"]),
                )
            )
    by_kind = {k: [e.id for e in elements if e.kind is k] for k in Kind}

    approximations = []
    for sg in by_kind[Kind.SOFTGOAL]:
        for qc in by_kind[Kind.QUALITY_CONSTRAINT]:
            if rng.random() < 0.5:
                approximations.append(
                    JustifiedApproximation(sg, qc, rng.choice([0.5, 0.75, -0.9, 1.0, 0.625]), f"{qc} tracks {sg}")
                )

    attitudes: list[Attitude] = []
    for e in elements:
        if rng.random() < 0.2:
            attitudes.append(
                Attitude(
                    f"ev_{e.id}",
                    AttitudeForm.EVALUATION,
                    rng.choice(list(Optionality)),
                    target=e.id,
                    sign=rng.choice(list(Sign)),
                    source_utterance=rng.choice([None, "u2"]),
                )
            )
    prefs = []
    for kind in Kind:
        ids = by_kind[kind]
        for a, b in itertools.combinations(ids, 2):
            if rng.random() < 0.3:
                hi, lo = (a, b) if rng.random() < 0.5 else (b, a)
                pid = f"pr_{hi}_{lo}"
                prefs.append(pid)
                attitudes.append(
                    Attitude(
                        pid,
                        AttitudeForm.PREFERENCE,
                        rng.choice(list(Optionality)),
                        preferred=hi,
                        dispreferred=lo,
                        source_utterance=rng.choice([None, "u3"]),
                    )
                )
    rng.shuffle(prefs)
    for i, j in itertools.combinations(range(len(prefs)), 2):
        if rng.random() < 0.2:
            attitudes.append(
                Attitude(f"m{i}_{j}", AttitudeForm.META_PREFERENCE, Optionality.COMPULSORY, preferred=prefs[i], dispreferred=prefs[j])
            )

    rules = []
    for i in range(rng.randint(0, 2 * size)):
        body = frozenset(lit() for _ in range(rng.randint(1, 3)))
        rules.append(Rule(f"r{i}", body, lit(), rng.choice(list(Strength))))
    defeasible = [r.id for r in rules if not r.strict]
    priorities = [
        (defeasible[i], defeasible[j])
        for i, j in itertools.combinations(range(len(defeasible)), 2)
        if rng.random() < 0.3
    ]

    alternatives = []
    used: set[str] = set()
    for kind in Kind:
        free = [i for i in by_kind[kind] if i not in used]
        if len(free) >= 2 and rng.random() < 0.5:
            group = tuple(rng.sample(free, rng.randint(2, len(free))))
            used.update(group)
            alternatives.append(group)

    model = Model(
        tuple(qualities),
        tuple(elements),
        tuple(approximations),
        tuple(attitudes),
        tuple(rules),
        tuple(priorities),
        tuple(alternatives),
    )
    assert not validate_model(model), [str(d) for d in validate_model(model)]
    return model


# brute force -------------------------------------------------------------------


def brute_force(model: Model) -> set[frozenset[str]]:
    """Non-dominated feasible member sets, computed without the solver."""
    audit = _Auditor(model)
    space = list(audit.space())
    disfavored = model.disfavored() & {e.id for e in model.elements if not e.compulsory}
    feasible = [(core, m) for core, m in space if audit.feasible(m)]
    clean = [(core, m) for core, m in feasible if not m & disfavored]
    pool = clean or feasible
    return {m for core, m in pool if not any(audit.dominates(o, (core, m)) for o in pool if o[1] != m)}
