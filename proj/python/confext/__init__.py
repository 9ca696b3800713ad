"""Numerical verification of sharp conformally invariant extension inequalities."""

import json

from ._core import (
    ConfigError,
    DomainError,
    Inadmissible,
    NonConvergent,
    QuotientReport,
    carleman_quotient,
    limit_at_origin,
    maximizer_search,
    normalization,
    run_command,
    sharp_constant,
    sharp_constant_closed_form,
    theorem1_quotient,
    theorem2_quotient,
)


def run(command, **options):
    """Runs a CLI command and returns (exit_code, report dict)."""
    code, text = run_command(command, **options)
    return code, json.loads(text)


__all__ = [
    "ConfigError",
    "DomainError",
    "Inadmissible",
    "NonConvergent",
    "QuotientReport",
    "carleman_quotient",
    "limit_at_origin",
    "maximizer_search",
    "normalization",
    "run",
    "run_command",
    "sharp_constant",
    "sharp_constant_closed_form",
    "theorem1_quotient",
    "theorem2_quotient",
]
