from reqonto.dsl.lexer import DslSyntaxError
from reqonto.dsl.model_parser import ParseResult, parse_model
from reqonto.dsl.render import render_model
from reqonto.dsl.utterance_parser import UtteranceParseResult, parse_utterances, render_utterances

__all__ = [
    "DslSyntaxError",
    "ParseResult",
    "UtteranceParseResult",
    "parse_model",
    "parse_utterances",
    "render_model",
    "render_utterances",
]
