"""Three-valued first-order logic with partial functions.

The package parses and prints formulas, evaluates them in finite
structures, computes definedness formulas, checks proofs in a natural
deduction calculus and searches bounded countermodels.
"""

from .core import (
    FALSE, TRUE, And, App, Const, Eq, Exists, FalseLit, Forall, Formula, Not, Or, Rel,
    Signature, Term, TrueLit, Var, conj, disj, free_vars, substitute,
)
from .errors import (
    BoundExceeded, KernelError, ParseError, SideConditionViolated, StepFailed, TernlogError,
)
from .formats import format_theory, parse_theory
from .isdef import Theory, isdef_formula, isdef_term, validate_isdef_map
from .regularity import check_regular_formula, check_regular_truth_table
from .semantics import (
    F, T, U, Assignment, CounterModel, NoneUpToBound, Structure, TruthValue, eval_formula,
    eval_term, find_countermodel, format_structure, parse_structure,
)
from .surface import parse_formula, parse_term, print_formula, print_term
from .translate import desugar, guard_rewrite

__version__ = "0.1.0"

__all__ = [
    "FALSE", "TRUE", "And", "App", "Assignment", "BoundExceeded", "Const", "CounterModel",
    "Eq", "Exists", "F", "FalseLit", "Forall", "Formula", "KernelError", "NoneUpToBound",
    "Not", "Or", "ParseError", "Rel", "SideConditionViolated", "Signature", "StepFailed",
    "Structure", "T", "Term", "TernlogError", "Theory", "TrueLit", "TruthValue", "U", "Var",
    "check_regular_formula", "check_regular_truth_table", "conj", "desugar", "disj",
    "eval_formula", "eval_term", "find_countermodel", "format_structure", "format_theory",
    "free_vars", "guard_rewrite", "isdef_formula", "isdef_term", "parse_formula",
    "parse_structure", "parse_term", "parse_theory", "print_formula", "print_term",
    "substitute", "validate_isdef_map",
]
