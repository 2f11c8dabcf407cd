"""Learn small-step operational semantics from evaluation examples."""

from ._milsem import (
    BuiltinError,
    ParseError,
    SemanticError,
    check,
    evaluate,
    learn,
    learn_chain,
    parse_program,
    parse_term,
    query,
    reference_eval,
    scenario_names,
    scenario_text,
    substitute,
)

__all__ = [
    "BuiltinError",
    "ParseError",
    "SemanticError",
    "check",
    "evaluate",
    "learn",
    "learn_chain",
    "learn_scenario",
    "parse_program",
    "parse_term",
    "query",
    "reference_eval",
    "scenario_names",
    "scenario_text",
    "substitute",
]


def learn_scenario(name, **kwargs):
    """Learn one of the shipped scenarios by name."""
    return learn(scenario_text(name), task=name, **kwargs)
