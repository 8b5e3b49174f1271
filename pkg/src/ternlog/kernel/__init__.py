"""Proof kernel: rule schemas, derivations, derived rules and proof scripts."""

from .derivation import (
    Derivation, Replay, Step, check_derivation, expand, hyp, lemma, replay, rule, step_map,
)
from .lemmas import LEMMAS, PERMUTATIONS, derive_lemma, lemma_statement
from .rules import GUARDED, OPTIONAL, RULES, Judgment, RuleInstance, apply_rule, canonical_name
from .script import (
    ProofScript, format_script, load_script, param_kinds, parse_compressed, parse_script,
)

__all__ = [
    "Derivation", "GUARDED", "Judgment", "OPTIONAL", "ProofScript", "LEMMAS", "PERMUTATIONS", "RULES", "Replay", "RuleInstance",
    "Step", "apply_rule", "canonical_name", "check_derivation", "derive_lemma", "expand",
    "format_script", "hyp", "lemma", "lemma_statement", "load_script", "param_kinds",
    "parse_compressed", "parse_script", "replay", "rule", "step_map",
]
