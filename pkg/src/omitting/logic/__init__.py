"""Monadic first-order logic with equality and counting quantifiers."""

from .normal import normal_form
from .parser import (
    FormulaSyntaxError, UnboundVariableError, UnknownPredicateError, format_formula, parse_formula,
)
from .semantics import FiniteModel, compile_formula, evaluate, expand_counting, models_by_counts
from .solver import (
    INF, Infinite, RegionProfile, entails, materialize, profile_of_model, profile_truth,
    sat_profile, sat_profile_exhaustive, truncation_bound,
)
from .syntax import (
    FALSE, TRUE, And, Atom, Const, CountExists, Eq, Exists, Forall, Formula, Implies, Not, Or,
    Pred, conj, disj, free_vars, is_sentence, predicates, quantifier_weight, simplify,
)

__all__ = [
    "normal_form",
    "FormulaSyntaxError",
    "UnboundVariableError",
    "UnknownPredicateError",
    "format_formula",
    "parse_formula",
    "FiniteModel",
    "compile_formula",
    "evaluate",
    "expand_counting",
    "models_by_counts",
    "INF",
    "Infinite",
    "RegionProfile",
    "entails",
    "materialize",
    "profile_of_model",
    "profile_truth",
    "sat_profile",
    "sat_profile_exhaustive",
    "truncation_bound",
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "Const",
    "CountExists",
    "Eq",
    "Exists",
    "Forall",
    "Formula",
    "Implies",
    "Not",
    "Or",
    "Pred",
    "conj",
    "disj",
    "free_vars",
    "is_sentence",
    "predicates",
    "quantifier_weight",
    "simplify",
]
