"""Lowering of metalanguage operators into core formulas.

Every sugared node from :mod:`ternlog.surface` has exactly one lowering.
Operators that need to talk about definedness (``~>``, ``*``, ``E!``, the
guarded implications, ``lexists``) use the theory's isdef formulas, so the
result depends on the theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    And, App, Eq, Exists, FalseLit, Forall, Formula, Not, Or, Rel, Term, TrueLit, disj,
)
from .errors import BadPath, PolarityMismatch, UnknownOperator, WellFormednessError
from .isdef import Theory, isdef_formula, isdef_term
from .surface import (
    EBang, GuardedImp, GuardedImp2, IteTerm, KleeneIff, KleeneImp, LehmannExists, LukImp,
    McCarthyAnd, McCarthyOr, Star, StrictAnd, StrictExists, StrictForall, StrictImp, StrictOr,
)


def desugar(th: Theory, phi: Formula) -> Formula:
    """Return the core formula that ``phi`` abbreviates.  Core input comes back unchanged."""
    if isinstance(phi, (FalseLit, TrueLit)):
        return phi
    if isinstance(phi, (Eq, Rel)):
        return _lower_atom(th, phi)
    if isinstance(phi, Not):
        return Not(desugar(th, phi.body))
    if isinstance(phi, (And, Or)):
        return type(phi)(desugar(th, phi.left), desugar(th, phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, desugar(th, phi.body))
    if isinstance(phi, Star):
        return isdef_formula(th, desugar(th, phi.body))
    if isinstance(phi, EBang):
        if _has_ite(phi.term):
            raise WellFormednessError("ite is only allowed directly inside atomic formulas")
        return isdef_term(th, phi.term)
    if isinstance(phi, (StrictForall, StrictExists, LehmannExists)):
        x, a = phi.var, desugar(th, phi.body)
        if isinstance(phi, StrictForall):
            return Or(Forall(x, a), Exists(x, And(a, Not(a))))
        if isinstance(phi, StrictExists):
            return And(Exists(x, a), Forall(x, Or(a, Not(a))))
        return Exists(x, And(isdef_formula(th, a), a))
    lower = _BINARY.get(type(phi))
    if lower is None:
        raise UnknownOperator(f"no lowering for {type(phi).__name__}")
    return lower(th, desugar(th, phi.left), desugar(th, phi.right))


def _kleene_imp(th, a, b):
    return Or(Not(a), b)


def _kleene_iff(th, a, b):
    return And(Or(Not(a), b), Or(Not(b), a))


def _luk_imp(th, a, b):
    return disj(Not(a), b, Not(Or(isdef_formula(th, a), isdef_formula(th, b))))


def _strict_and(th, a, b):
    return disj(And(a, Not(a)), And(b, Not(b)), And(a, b))


def _strict_or(th, a, b):
    return And(And(Or(a, Not(a)), Or(b, Not(b))), Or(a, b))


def _strict_imp(th, a, b):
    return And(And(Or(a, Not(a)), Or(b, Not(b))), Or(Not(a), b))


def _guarded_imp(th, a, b):
    return Or(Not(And(a, isdef_formula(th, a))), b)


def _guarded_imp2(th, a, b):
    return Or(Not(And(a, isdef_formula(th, a))), And(b, isdef_formula(th, b)))


def _mccarthy_and(th, a, b):
    return And(a, Or(Not(a), b))


def _mccarthy_or(th, a, b):
    return Or(a, And(Not(a), b))


_BINARY = {
    KleeneImp: _kleene_imp, KleeneIff: _kleene_iff, LukImp: _luk_imp,
    StrictImp: _strict_imp, GuardedImp: _guarded_imp, GuardedImp2: _guarded_imp2,
    StrictAnd: _strict_and, StrictOr: _strict_or,
    McCarthyAnd: _mccarthy_and, McCarthyOr: _mccarthy_or,
}


# -- if-then-else inside atoms -----------------------------------------------

def _has_ite(t: Term) -> bool:
    if isinstance(t, IteTerm):
        return True
    if isinstance(t, App):
        return any(_has_ite(a) for a in t.args)
    return False


def _first_ite(terms: Sequence[Term]):
    """Leftmost-outermost ite among ``terms``, with a rebuild function for each branch."""
    for k, t in enumerate(terms):
        found = _ite_in(t)
        if found is not None:
            ite, plug = found

            def rebuild(branch: Term, k=k, plug=plug):
                return (*terms[:k], plug(branch), *terms[k + 1:])
            return ite, rebuild
    return None


def _ite_in(t: Term):
    if isinstance(t, IteTerm):
        return t, lambda branch: branch
    if isinstance(t, App):
        inner = _first_ite(t.args)
        if inner is not None:
            ite, rebuild = inner
            return ite, lambda branch: App(t.func, rebuild(branch))
    return None


def _lower_atom(th: Theory, atom: Formula) -> Formula:
    terms = (atom.left, atom.right) if isinstance(atom, Eq) else atom.args
    found = _first_ite(terms)
    if found is None:
        return atom
    ite, rebuild = found

    def make(ts):
        return Eq(*ts) if isinstance(atom, Eq) else Rel(atom.name, ts)

    chi = desugar(th, ite.cond)
    yes = _lower_atom(th, make(rebuild(ite.then)))
    no = _lower_atom(th, make(rebuild(ite.other)))
    return disj(And(chi, yes), And(Not(chi), no), And(chi, Not(chi)))


# -- guard rewriting ---------------------------------------------------------

def _children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Not, Forall, Exists)):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    return ()


def _replace_child(phi: Formula, k: int, new: Formula) -> Formula:
    if isinstance(phi, Not):
        return Not(new)
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, new)
    return type(phi)(new, phi.right) if k == 0 else type(phi)(phi.left, new)


def subformula_at(phi: Formula, path: Sequence[int]) -> Formula:
    for step, k in enumerate(path):
        kids = _children(phi)
        if not 0 <= k < len(kids):
            raise BadPath(f"path {tuple(path)} leaves the formula at step {step}")
        phi = kids[k]
    return phi


def guard_rewrite(th: Theory, phi: Formula, path: Sequence[int], polarity: str) -> Formula:
    """Replace the subformula at ``path`` by its guarded form.

    ``path`` lists child positions (0 = left/only child, 1 = right child).
    Under an even number of negations the subformula ``psi`` becomes
    ``*psi /\\ psi``; under an odd number it becomes ``not *psi \\/ psi``.
    The set of assignments making the whole formula T does not change.
    """
    if polarity not in ("even", "odd"):
        raise ValueError("polarity must be 'even' or 'odd'")
    target = subformula_at(phi, path)
    negations, node = 0, phi
    for k in path:
        negations += isinstance(node, Not)
        node = _children(node)[k]
    actual = "even" if negations % 2 == 0 else "odd"
    if actual != polarity:
        raise PolarityMismatch(f"subformula sits under {negations} negations ({actual})")
    guard = isdef_formula(th, target)
    new = And(guard, target) if polarity == "even" else Or(Not(guard), target)
    return _put(phi, list(path), new)


def _put(phi: Formula, path: list[int], new: Formula) -> Formula:
    if not path:
        return new
    k = path[0]
    return _replace_child(phi, k, _put(_children(phi)[k], path[1:], new))


# -- partial relations -------------------------------------------------------

@dataclass(frozen=True)
class PartialRelationEncoding:
    """A relation made partial through a fresh function that shares its definedness."""

    theory: Theory
    relation: str
    function: str

    def rewrite(self, phi: Formula) -> Formula:
        """Replace each ``R(ts)`` by ``R(ts) /\\ f_R(ts) = f_R(ts)``."""
        if isinstance(phi, Rel) and phi.name == self.relation:
            probe = App(self.function, phi.args)
            return And(phi, Eq(probe, probe))
        if isinstance(phi, Not):
            return Not(self.rewrite(phi.body))
        if isinstance(phi, (And, Or)):
            return type(phi)(self.rewrite(phi.left), self.rewrite(phi.right))
        if isinstance(phi, (Forall, Exists)):
            return type(phi)(phi.var, self.rewrite(phi.body))
        return phi


def encode_partial_relation(th: Theory, relation: str, guard: Formula,
                            function: str | None = None) -> PartialRelationEncoding:
    """Add a fresh function ``f_R`` with isdef ``guard`` so ``R`` is undefined where ``f_R`` is."""
    if relation not in th.sig.relations:
        raise WellFormednessError(f"unknown relation {relation!r}")
    arity = th.sig.relations[relation]
    taken = th.sig.constants | set(th.sig.functions) | set(th.sig.relations)
    name = function or f"f_{relation}"
    while name in taken:
        name += "_"
    sig = th.sig.extend(functions={name: arity})
    return PartialRelationEncoding(
        Theory(sig, th.axioms, {**th.isdef_map, name: guard}), relation, name)

