"""Primitive rule schemas.

:func:`apply_rule` is the whole trusted base: it turns a rule instance and
the judgments it cites into the schema's conclusion, recomputing every
isdef formula itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from ..core import (
    And, Eq, Exists, FALSE, Forall, Formula, Not, Or, Term, all_vars, check_formula,
    check_term, free_vars, is_free_for, substitute, Var,
)
from ..errors import (
    IsdefMismatch, SchemaMismatch, SideConditionViolated, WellFormednessError,
)
from ..isdef import Theory, isdef_formula, isdef_term
from ..surface import print_formula, print_term


@dataclass(frozen=True)
class Judgment:
    """``context |- conclusion`` with a finite context."""

    context: frozenset
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "context", frozenset(self.context))

    def __str__(self):
        ctx = ", ".join(sorted(print_formula(f) for f in self.context))
        return f"{{{ctx}}} |- {print_formula(self.conclusion)}"


# parameter kinds: formula, term, var, int, formulas (finite set), perm
RULES: dict[str, tuple[tuple[tuple[str, str], ...], int]] = {
    "P1": ((("phi", "formula"),), 0),
    "P2": ((("delta", "formulas"),), 1),
    "P3": ((), 2),
    "C1": ((("phi", "formula"),), 0),
    "C2": ((("phi", "formula"),), 0),
    "C3": ((("phi", "formula"),), 0),
    "D1": ((("phi", "formula"),), 0),
    "and-I": ((("phi", "formula"), ("psi", "formula")), 0),
    "and-E1": ((("phi", "formula"), ("psi", "formula")), 0),
    "and-E2": ((("phi", "formula"), ("psi", "formula")), 0),
    "or-I1": ((("phi", "formula"), ("psi", "formula")), 0),
    "or-I2": ((("phi", "formula"), ("psi", "formula")), 0),
    "or-E": ((("phi", "formula"), ("psi", "formula")), 2),
    "eq-1": ((("t", "term"),), 0),
    "eq-2": ((("phi", "formula"), ("x", "var"), ("t", "term"), ("t2", "term")), 0),
    "all-E": ((("phi", "formula"), ("x", "var"), ("t", "term")), 0),
    "all-I": ((("x", "var"),), 1),
    "ex-I": ((("phi", "formula"), ("x", "var"), ("t", "term")), 0),
    "ex-E": ((("phi", "formula"), ("x", "var"), ("y", "var")), 1),
}

# optional parameters: an explicit context for or-E and a claimed guard where one appears
OPTIONAL: dict[str, tuple[tuple[str, str], ...]] = {
    "or-E": (("gamma", "formulas"),),
    "C1": (("guard", "formula"),),
    "D1": (("guard", "formula"),),
    "eq-1": (("guard", "formula"),),
    "all-E": (("guard", "formula"),),
}

# rules whose statement contains a computed isdef formula
GUARDED = frozenset({"C1", "D1", "eq-1", "all-E"})

_ALIASES = {"∧": "and-", "∨": "or-", "∀": "all-", "∃": "ex-", "=": "eq-"}


def canonical_name(name: str) -> str:
    """Map unicode spellings such as ``∨-E`` or ``=-1`` to the ASCII tags."""
    name = name.strip().replace("′", "'").replace("’", "'")
    for sym, ascii_ in _ALIASES.items():
        if name.startswith(sym + "-"):
            return ascii_ + name[len(sym) + 1:]
    return name


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    args: Mapping[str, Any] = field(default_factory=dict)
    premises: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rule", canonical_name(self.rule))
        object.__setattr__(self, "args", dict(self.args))
        object.__setattr__(self, "premises", tuple(self.premises))

    def __hash__(self):
        return hash((self.rule, tuple(sorted((k, _hashable(v)) for k, v in self.args.items())),
                     self.premises))


def _hashable(v):
    return tuple(v) if isinstance(v, list) else v


def _args(th: Theory, rule: str, args: Mapping[str, Any]) -> dict:
    if rule not in RULES:
        raise SchemaMismatch(rule, "unknown rule")
    params, _ = RULES[rule]
    allowed = {name for name, _ in params} | {n for n, _ in OPTIONAL.get(rule, ())}
    extra = set(args) - allowed
    if extra:
        raise SchemaMismatch(rule, f"unexpected arguments {sorted(extra)}")
    out = {}
    for name, kind in (*params, *OPTIONAL.get(rule, ())):
        if name not in args:
            if any(name == n for n, _ in params):
                raise SchemaMismatch(rule, f"missing argument {name!r}")
            continue
        value = args[name]
        try:
            if kind == "formula":
                check_formula(th.sig, value)
            elif kind == "formulas":
                value = frozenset(value)
                for f in value:
                    check_formula(th.sig, f)
            elif kind == "term":
                check_term(th.sig, value)
            elif kind == "var":
                if not isinstance(value, int) or value < 1:
                    raise WellFormednessError(f"{name} must be a variable index")
        except WellFormednessError as exc:
            raise SchemaMismatch(rule, f"argument {name}: {exc}") from None
        out[name] = value
    return out


def _expect_guard(rule: str, a: dict, computed: Formula) -> None:
    if "guard" in a and a["guard"] != computed:
        raise IsdefMismatch(rule, print_formula(a["guard"]), print_formula(computed))


def _free_for(rule: str, t: Term, x: int, phi: Formula) -> None:
    if not is_free_for(t, x, phi):
        raise SideConditionViolated(rule, "term is not free for the variable",
                                    f"{print_term(t)} for v{x}")


def apply_rule(th: Theory, inst: RuleInstance, premises: Sequence[Judgment]) -> Judgment:
    """Conclusion of ``inst`` given the judgments it cites, or a :class:`KernelError`."""
    rule = inst.rule
    a = _args(th, rule, inst.args)
    need = RULES[rule][1]
    if len(premises) != need:
        raise SchemaMismatch(rule, f"expects {need} premise judgments, got {len(premises)}")
    J = Judgment
    if rule == "P1":
        return J({a["phi"]}, a["phi"])
    if rule == "P2":
        (p,) = premises
        return J(p.context | a["delta"], p.conclusion)
    if rule == "P3":
        first, second = premises
        if second.context != first.context | {first.conclusion}:
            raise SchemaMismatch(
                rule, "second premise context must be the first context plus its conclusion")
        return J(first.context, second.conclusion)
    if rule == "C1":
        phi = a["phi"]
        guard = isdef_formula(th, phi)
        _expect_guard(rule, a, guard)
        return J(frozenset(), Or(Or(phi, Not(phi)), Not(guard)))
    if rule == "C2":
        return J({FALSE}, a["phi"])
    if rule == "C3":
        return J({a["phi"], Not(a["phi"])}, FALSE)
    if rule == "D1":
        guard = isdef_formula(th, a["phi"])
        _expect_guard(rule, a, guard)
        return J({a["phi"]}, guard)
    if rule == "and-I":
        return J({a["phi"], a["psi"]}, And(a["phi"], a["psi"]))
    if rule in ("and-E1", "and-E2"):
        both = And(a["phi"], a["psi"])
        return J({both}, a["phi"] if rule == "and-E1" else a["psi"])
    if rule in ("or-I1", "or-I2"):
        return J({a["phi"] if rule == "or-I1" else a["psi"]}, Or(a["phi"], a["psi"]))
    if rule == "or-E":
        left, right = premises
        phi, psi = a["phi"], a["psi"]
        if left.conclusion != right.conclusion:
            raise SchemaMismatch(rule, "both cases must prove the same formula")
        gamma = a.get("gamma")
        if gamma is None:
            gamma = (left.context - {phi}) | (right.context - {psi})
        if left.context != gamma | {phi} or right.context != gamma | {psi}:
            raise SchemaMismatch(rule, "case contexts must be gamma plus the case formula")
        return J(gamma | {Or(phi, psi)}, left.conclusion)
    if rule == "eq-1":
        t = a["t"]
        guard = isdef_term(th, t)
        _expect_guard(rule, a, guard)
        return J({guard}, Eq(t, t))
    if rule == "eq-2":
        phi, x, t, t2 = a["phi"], a["x"], a["t"], a["t2"]
        _free_for(rule, t, x, phi)
        _free_for(rule, t2, x, phi)
        return J({Eq(t, t2), substitute(phi, x, t)}, substitute(phi, x, t2))
    if rule == "all-E":
        phi, x, t = a["phi"], a["x"], a["t"]
        _free_for(rule, t, x, phi)
        guard = isdef_term(th, t)
        _expect_guard(rule, a, guard)
        return J({guard, Forall(x, phi)}, substitute(phi, x, t))
    if rule == "all-I":
        (p,) = premises
        x = a["x"]
        if any(x in free_vars(g) for g in p.context):
            raise SideConditionViolated(rule, "variable occurs free in the context", f"v{x}")
        return J(p.context, Forall(x, p.conclusion))
    if rule == "ex-I":
        phi, x, t = a["phi"], a["x"], a["t"]
        _free_for(rule, t, x, phi)
        return J({substitute(phi, x, t)}, Exists(x, phi))
    if rule == "ex-E":
        (p,) = premises
        phi, x, y = a["phi"], a["x"], a["y"]
        ex = Exists(x, phi)
        if y in all_vars(ex):
            raise SideConditionViolated(rule, "variable occurs in the existential formula", f"v{y}")
        if y in all_vars(p.conclusion):
            raise SideConditionViolated(rule, "variable occurs in the conclusion", f"v{y}")
        instance = substitute(phi, x, Var(y))
        if instance not in p.context:
            raise SchemaMismatch(rule, f"premise context lacks {print_formula(instance)}")
        gamma = p.context - {instance}
        if any(y in all_vars(g) for g in gamma):
            raise SideConditionViolated(rule, "variable occurs in the context", f"v{y}")
        return J(gamma | {ex}, p.conclusion)
    raise SchemaMismatch(rule, "unknown rule")  # pragma: no cover
