from reqonto.engine.closure import StrictBase
from reqonto.engine.reasoner import (
    Argument,
    DefeasibleProgram,
    DialecticalTree,
    Mark,
    ProgramError,
    Reasoner,
    Verdict,
    arguments_for,
    consequences,
    consistent,
    defeats,
    warrant,
)

__all__ = [
    "Argument",
    "DefeasibleProgram",
    "DialecticalTree",
    "Mark",
    "ProgramError",
    "Reasoner",
    "StrictBase",
    "Verdict",
    "arguments_for",
    "consequences",
    "consistent",
    "defeats",
    "warrant",
]
