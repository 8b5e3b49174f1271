"""Theories and the "is defined" formulas of terms and formulas.

A theory pairs every function symbol with a formula over ``v1..v_arity``
saying where the function is defined.  :func:`isdef_term` and
:func:`isdef_formula` lift that map to arbitrary terms and formulas by
structural recursion.  The outputs are never simplified, since the proof
kernel compares them literally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import (
    FALSE, TRUE, And, App, Const, Eq, Exists, FalseLit, Forall, Formula, Not, Or, Rel,
    Signature, Term, TrueLit, Var, check_formula, conj, free_vars,
    functions_in, renumber_binders, substitute_many, term_vars,
)
from .errors import WellFormednessError
from .surface import EBang, Star


@dataclass(frozen=True)
class Theory:
    """Signature, axioms and isdef map.

    Function symbols missing from ``isdef_map`` are total (their guard is T).
    """

    sig: Signature
    axioms: tuple[Formula, ...] = ()
    isdef_map: Mapping[str, Formula] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        unknown = set(self.isdef_map) - set(self.sig.functions)
        if unknown:
            raise WellFormednessError(f"isdef given for unknown functions: {sorted(unknown)}")
        full = {f: self.isdef_map.get(f, TRUE) for f in sorted(self.sig.functions)}
        object.__setattr__(self, "isdef_map", full)
        for phi in (*self.axioms, *full.values()):
            check_formula(self.sig, phi)

    def __hash__(self):
        return hash((self.sig, self.axioms, tuple(self.isdef_map.items())))

    def guard(self, f: str) -> Formula:
        return self.isdef_map[f]

    def total_functions(self) -> list[str]:
        return [f for f, g in self.isdef_map.items() if g == TRUE]

    def with_axioms(self, axioms: Iterable[Formula]) -> Theory:
        return Theory(self.sig, tuple(axioms), self.isdef_map)


@dataclass(frozen=True)
class Violation:
    function: str
    condition: str
    detail: str

    def __str__(self):
        return f"isdef of {self.function}: {self.condition}: {self.detail}"


@dataclass(frozen=True)
class IsdefReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_isdef_map(th: Theory) -> IsdefReport:
    """Check that each guard only mentions its own argument variables and total functions."""
    found = []
    for f, guard in th.isdef_map.items():
        arity = th.sig.functions[f]
        extra = sorted(i for i in free_vars(guard) if i > arity)
        if extra:
            names = ", ".join(f"v{i}" for i in extra)
            found.append(Violation(f, "free-variables", f"{names} beyond arity {arity}"))
        partial = sorted(g for g in functions_in(guard) if th.isdef_map[g] != TRUE)
        if partial:
            found.append(Violation(f, "nested-partial", "uses non-total " + ", ".join(partial)))
    return IsdefReport(tuple(found))


def instantiate_guard(th: Theory, f: str, args: tuple[Term, ...]) -> Formula:
    """The guard of ``f`` with its argument variables replaced by ``args``.

    Binders are first renumbered above every index in the arguments and
    above the arity, so the substitution cannot capture.
    """
    guard = th.isdef_map[f]
    base = max([len(args), *(max(term_vars(a), default=0) for a in args)])
    guard = renumber_binders(guard, base)
    return substitute_many(guard, {i + 1: a for i, a in enumerate(args)})


def isdef_term(th: Theory, t: Term) -> Formula:
    if isinstance(t, (Var, Const)):
        return TRUE
    if isinstance(t, App):
        parts = [isdef_term(th, a) for a in t.args]
        parts.append(instantiate_guard(th, t.func, t.args))
        return conj(*parts)
    raise TypeError(f"not a core term: {t!r}")


def isdef_formula(th: Theory, phi: Formula) -> Formula:
    if isinstance(phi, (FalseLit, TrueLit)):
        return TRUE
    if isinstance(phi, Eq):
        return And(isdef_term(th, phi.left), isdef_term(th, phi.right))
    if isinstance(phi, Rel):
        return conj(*(isdef_term(th, a) for a in phi.args))
    if isinstance(phi, Not):
        return isdef_formula(th, phi.body)
    if isinstance(phi, And):
        a, b = isdef_formula(th, phi.left), isdef_formula(th, phi.right)
        return Or(Or(And(a, b), And(a, Not(phi.left))), And(b, Not(phi.right)))
    if isinstance(phi, Or):
        a, b = isdef_formula(th, phi.left), isdef_formula(th, phi.right)
        return Or(Or(And(a, b), And(a, phi.left)), And(b, phi.right))
    if isinstance(phi, Forall):
        a = isdef_formula(th, phi.body)
        return Or(Forall(phi.var, a), Exists(phi.var, And(a, Not(phi.body))))
    if isinstance(phi, Exists):
        a = isdef_formula(th, phi.body)
        return Or(Forall(phi.var, a), Exists(phi.var, And(a, phi.body)))
    raise TypeError(f"not a core formula: {phi!r}")


def simplify(phi: Formula) -> Formula:
    """Drop T/F units for display.  Preserves the three-valued meaning.

    Never feed the result to the proof kernel: it compares guards literally.
    """
    if isinstance(phi, Not):
        body = simplify(phi.body)
        if body == TRUE:
            return FALSE
        if body == FALSE:
            return TRUE
        return Not(body)
    if isinstance(phi, And):
        a, b = simplify(phi.left), simplify(phi.right)
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if FALSE in (a, b):
            return FALSE
        return And(a, b)
    if isinstance(phi, Or):
        a, b = simplify(phi.left), simplify(phi.right)
        if a == FALSE:
            return b
        if b == FALSE:
            return a
        if TRUE in (a, b):
            return TRUE
        return Or(a, b)
    if isinstance(phi, (Forall, Exists)):
        body = simplify(phi.body)
        if body in (TRUE, FALSE) or phi.var not in free_vars(body):
            return body
        return type(phi)(phi.var, body)
    return phi


# -- level-by-level unfolding --------------------------------------------------

def isdef_chain(th: Theory, expr: Term | Formula) -> list[Formula]:
    """The stages of computing the isdef formula of ``expr``, one level at a time.

    Not-yet-expanded pieces are written with the surface placeholders
    ``E! t`` (for a term) and ``* phi`` (for a formula).  The first stage
    unfolds the outermost symbol; the last one contains no placeholder and
    equals :func:`isdef_term` or :func:`isdef_formula`.
    """
    stage = _unfold(th, EBang(expr) if isinstance(expr, Term) else Star(expr))
    out = [stage]
    while _has_placeholder(stage):
        stage = _unfold(th, stage)
        out.append(stage)
    return out


def _has_placeholder(phi: Formula) -> bool:
    if isinstance(phi, (EBang, Star)):
        return True
    if isinstance(phi, (Not, Forall, Exists)):
        return _has_placeholder(phi.body)
    if isinstance(phi, (And, Or)):
        return _has_placeholder(phi.left) or _has_placeholder(phi.right)
    return False


def _unfold(th: Theory, phi: Formula) -> Formula:
    if isinstance(phi, EBang):
        t = phi.term
        if isinstance(t, (Var, Const)):
            return TRUE
        return conj(*(EBang(a) for a in t.args), instantiate_guard(th, t.func, t.args))
    if isinstance(phi, Star):
        return _unfold_formula(th, phi.body)
    if isinstance(phi, Not):
        return Not(_unfold(th, phi.body))
    if isinstance(phi, (And, Or)):
        return type(phi)(_unfold(th, phi.left), _unfold(th, phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, _unfold(th, phi.body))
    return phi


def _unfold_formula(th: Theory, phi: Formula) -> Formula:
    if isinstance(phi, (FalseLit, TrueLit)):
        return TRUE
    if isinstance(phi, Eq):
        return And(EBang(phi.left), EBang(phi.right))
    if isinstance(phi, Rel):
        return conj(*(EBang(a) for a in phi.args))
    if isinstance(phi, Not):
        return Star(phi.body)
    if isinstance(phi, (And, Or)):
        a, b = Star(phi.left), Star(phi.right)
        left, right = (Not(phi.left), Not(phi.right)) if isinstance(phi, And) \
            else (phi.left, phi.right)
        return Or(Or(And(a, b), And(a, left)), And(b, right))
    a = Star(phi.body)
    body = Not(phi.body) if isinstance(phi, Forall) else phi.body
    return Or(Forall(phi.var, a), Exists(phi.var, And(a, body)))
