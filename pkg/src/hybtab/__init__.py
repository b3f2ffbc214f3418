"""Tableau prover and countermodel generator for hybrid product modal logics."""

from .engine import (
    Branch, BranchFormula, Budget, Mode, Proved, Refuted, RuleInstance, Tableau, Unknown,
    applicable_instances, expand, init_tableau, is_closed, prove, prove_sequent,
)
from .extract import extract_model, nominal_classes, right_nominals, urfather, verify_extraction
from .saturation import is_saturated
from .semantics import KripkeDProduct, KripkeProduct, WorldPair, evaluate
from .syntax import ParseError, parse, print_formula, random_formula

__all__ = [
    "Branch", "BranchFormula", "Budget", "KripkeDProduct", "KripkeProduct", "Mode", "ParseError",
    "Proved", "Refuted", "RuleInstance", "Tableau", "Unknown", "WorldPair", "applicable_instances",
    "evaluate", "expand", "extract_model", "init_tableau", "is_closed", "is_saturated",
    "nominal_classes", "parse", "print_formula", "prove", "prove_sequent", "random_formula",
    "right_nominals", "urfather", "verify_extraction",
]
