"""Command-line interface: check, classify, solve and explain."""

from __future__ import annotations

import json
import sys

import click

from reqonto.diagnostics import Diagnostic, Severity, error
from reqonto.dsl import parse_model, parse_utterances, render_model
from reqonto.engine import ProgramError, Reasoner
from reqonto.engine.reasoner import DefeasibleProgram
from reqonto.ontology import Kind, Literal, Model, OntologyError, has_errors
from reqonto.solver import ModeNotApplicable, enumerate_compulsory_combinations, solve, zj_mode
from reqonto.solver.candidates import UnsatisfiableCore
from reqonto.solver.solve import DEFAULT_MAX_CANDIDATES, Solution
from reqonto.speech_acts import classify_utterances

REPORT_VERSION = "1"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2
EXIT_BUDGET = 3


class _Abort(Exception):
    def __init__(self, status: int, diagnostics: list[Diagnostic]):
        self.status = status
        self.diagnostics = diagnostics


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _Abort(EXIT_IO, [error("io-error", f"cannot read {path}: {exc}")]) from None


def _load_model(path: str, threshold: float) -> tuple[Model, list[Diagnostic]]:
    result = parse_model(_read(path), path, threshold)
    if has_errors(result.diagnostics):
        raise _Abort(EXIT_FAILURE, result.diagnostics)
    return result.model, result.diagnostics


def solution_summary(s: Solution, effective: tuple[str, ...]) -> dict:
    cand = s.candidate
    members = cand.members
    return {
        "assumptions": sorted(cand.K),
        "goals": sorted(cand.G),
        "quality_constraints": sorted(cand.Q),
        "softgoals": sorted(cand.QS),
        "plans": sorted(cand.P),
        "verdicts": {name: v.to_dict() for name, v in sorted(s.verdicts.items())},
        "effective_preferences": list(effective),
        "signature": cand.signature,
        "warranted": sorted(str(lit) for lit in s.warranted),
        "optional_count": len(members - cand.combo.members),
    }


def build_report(command: str, diagnostics, solutions=(), exhaustive: bool = True, **extra) -> dict:
    report = {
        "version": REPORT_VERSION,
        "command": command,
        "diagnostics": [d.to_dict() for d in diagnostics],
        "solutions": list(solutions),
        "exhaustive": exhaustive,
    }
    report.update(extra)
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _write_report(path: str | None, report: dict) -> None:
    if path is None:
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_report(report))
    except OSError as exc:
        raise _Abort(EXIT_IO, [error("io-error", f"cannot write {path}: {exc}")]) from None


def _echo_diagnostics(diagnostics) -> None:
    for d in diagnostics:
        click.echo(str(d), err=d.severity is Severity.ERROR)


def _finish(command: str, report_path: str | None, body) -> None:
    """Run ``body`` and translate aborts into a report plus an exit status."""
    try:
        status, report = body()
    except _Abort as exc:
        _echo_diagnostics(exc.diagnostics)
        status, report = exc.status, build_report(command, exc.diagnostics)
    try:
        _write_report(report_path, report)
    except _Abort as exc:
        _echo_diagnostics(exc.diagnostics)
        status = exc.status
    sys.exit(status)


report_option = click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write a JSON report here.")
threshold_option = click.option(
    "--approx-threshold",
    type=click.FloatRange(0.0, 1.0),
    default=0.5,
    show_default=True,
    help="Minimum correlation a justified approximation must reach.",
)


@click.group()
@click.version_option(package_name="reqonto")
def main():
    """Ontology-based requirements problem toolkit."""


@main.command()
@click.argument("model_path")
@threshold_option
@report_option
def check(model_path, approx_threshold, report_path):
    """Parse and validate a model document."""

    def body():
        result = parse_model(_read(model_path), model_path, approx_threshold)
        _echo_diagnostics(result.diagnostics)
        status = EXIT_FAILURE if has_errors(result.diagnostics) else EXIT_OK
        if status == EXIT_OK:
            m = result.model
            click.echo(f"{model_path}: ok ({len(m.elements)} elements, {len(m.attitudes)} attitudes, {len(m.rules)} rules)")
        return status, build_report("check", result.diagnostics)

    _finish("check", report_path, body)


@main.command()
@click.argument("utterances_path")
@click.option("--registry", "registry_path", help="Model supplying qualities and referenced elements.")
@click.option("--output", "output_path", type=click.Path(dir_okay=False), help="Write the model document here instead of stdout.")
@report_option
def classify(utterances_path, registry_path, output_path, report_path):
    """Classify utterances into ontology instances and emit a model document."""

    def body():
        registry = Model()
        if registry_path:
            registry, _ = _load_model(registry_path, 0.5)
        parsed = parse_utterances(_read(utterances_path), utterances_path)
        if parsed.diagnostics:
            raise _Abort(EXIT_FAILURE, parsed.diagnostics)
        result = classify_utterances(parsed.utterances, registry)
        _echo_diagnostics(result.diagnostics)
        if result.diagnostics:
            return EXIT_FAILURE, build_report("classify", result.diagnostics)
        document = render_model(result.model)
        if output_path:
            try:
                with open(output_path, "w", encoding="utf-8") as fh:
                    fh.write(document)
            except OSError as exc:
                raise _Abort(EXIT_IO, [error("io-error", f"cannot write {output_path}: {exc}")]) from None
        else:
            click.echo(document, nl=False)
        labels = {ident: result.label(ident) for ident in sorted(result.classified)}
        return EXIT_OK, build_report("classify", [], classified=labels)

    _finish("classify", report_path, body)


@main.command("solve")
@click.argument("model_path")
@click.option("--all-solutions/--first-solution", default=True, show_default=True, help="Return every non-dominated solution.")
@click.option("--max-candidates", type=click.IntRange(min=1), default=DEFAULT_MAX_CANDIDATES, show_default=True)
@click.option("--zj", is_flag=True, help="Decide classical entailment on a strict-only model instead.")
@threshold_option
@report_option
def solve_cmd(model_path, all_solutions, max_candidates, zj, approx_threshold, report_path):
    """Find non-dominated specifications for a model."""

    def body():
        model, warnings = _load_model(model_path, approx_threshold)
        if zj:
            try:
                holds = zj_mode(model)
            except ModeNotApplicable as exc:
                raise _Abort(EXIT_FAILURE, [error(ModeNotApplicable.code, str(exc))]) from None
            diags = list(warnings)
            if not holds:
                diags.append(error("not-entailed", "assumptions and plans do not classically entail every goal and constraint"))
            _echo_diagnostics(diags)
            click.echo("entailed" if holds else "not entailed")
            return (EXIT_OK if holds else EXIT_FAILURE), build_report("solve", diags, entailed=holds, mode="zj")

        result = solve(model, max_candidates=max_candidates, all_solutions=all_solutions)
        diags = list(warnings) + result.diagnostics
        _echo_diagnostics(diags)
        effective = result.aggregate.effective if result.aggregate else ()
        summaries = [solution_summary(s, effective) for s in result.solutions]
        for i, s in enumerate(summaries, 1):
            click.echo(f"solution {i}: plans {', '.join(s['plans']) or '-'}")
            click.echo(f"  goals {', '.join(s['goals']) or '-'}")
            click.echo(f"  quality constraints {', '.join(s['quality_constraints']) or '-'}")
            click.echo(f"  softgoals {', '.join(s['softgoals']) or '-'}")
            click.echo(f"  assumptions {', '.join(s['assumptions']) or '-'}")
        click.echo(
            f"{len(summaries)} solution(s); {result.evaluated} candidates evaluated, "
            f"{result.feasible} feasible, {result.dominated} dominated"
            + ("" if result.exhaustive else "; search not exhaustive")
        )
        if summaries:
            status = EXIT_OK
        elif not result.exhaustive:
            status = EXIT_BUDGET
        else:
            status = EXIT_FAILURE
        report = build_report(
            "solve",
            diags,
            summaries,
            result.exhaustive,
            dominated=result.dominated,
            evaluated=result.evaluated,
            feasible=result.feasible,
        )
        return status, report

    _finish("solve", report_path, body)


def default_members(model: Model) -> frozenset[str]:
    """All compulsory elements, taking the first consistent choice per alternatives group."""
    combos = enumerate_compulsory_combinations(model)
    return combos[0].members


@main.command()
@click.argument("model_path")
@click.option("--query", required=True, help="Literal to explain, e.g. booked or ~booked.")
@click.option("--candidate", "candidate_ids", help="Comma-separated element ids to use as the candidate.")
@threshold_option
def explain(model_path, query, candidate_ids, approx_threshold):
    """Print the dialectical trees deciding a literal."""

    def body():
        model, _ = _load_model(model_path, approx_threshold)
        try:
            lit = Literal.parse(query)
        except OntologyError:
            raise _Abort(EXIT_FAILURE, [error("invalid-literal", f"cannot parse literal {query!r}")]) from None
        if lit.atom not in model.atoms():
            raise _Abort(EXIT_FAILURE, [error("unknown-atom", f"atom {lit.atom!r} does not occur in the model")])
        index = model.element_index
        if candidate_ids:
            members = frozenset(i.strip() for i in candidate_ids.split(",") if i.strip())
            unknown = sorted(members - set(index))
            if unknown:
                raise _Abort(EXIT_FAILURE, [error("unknown-element", f"unknown element ids: {', '.join(unknown)}")])
        else:
            try:
                members = default_members(model)
            except UnsatisfiableCore as exc:
                raise _Abort(EXIT_FAILURE, [error(UnsatisfiableCore.code, str(exc))]) from None
        facts = {index[m].holds for m in members if index[m].kind in (Kind.DOMAIN_ASSUMPTION, Kind.PLAN)}
        reasoner = Reasoner(DefeasibleProgram.from_rules(facts, model.rules, model.priorities))
        try:
            trees = reasoner.trees(lit)
            verdict = reasoner.warrant(lit)
        except ProgramError as exc:
            raise _Abort(EXIT_FAILURE, [error("inconsistent-base", str(exc))]) from None
        click.echo(f"facts: {', '.join(sorted(str(f) for f in facts)) or '-'}")
        if not trees:
            click.echo(f"no argument for {lit}")
        for tree in trees:
            click.echo(tree.render())
        click.echo(f"verdict: {verdict.value}")
        return EXIT_OK, build_report("explain", [])

    _finish("explain", None, body)


if __name__ == "__main__":
    main()
