"""Derived rules as derivation generators.

``derive_lemma(th, name, **args)`` returns a :class:`Derivation` whose
checked judgment is the lemma's statement.  The macros only produce steps;
every step is still checked by :func:`apply_rule` when replayed.
"""

from __future__ import annotations

from typing import Callable

from ..core import (
    App, Eq, FALSE, Not, Or, TRUE, Term, Var, check_formula, check_term, term_vars,
)
from ..errors import SchemaMismatch, WellFormednessError
from ..isdef import Theory, isdef_formula, isdef_term
from .derivation import Derivation, hyp, lemma, rule
from .rules import canonical_name

PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 1, 0), (1, 0, 2), (0, 2, 1), (2, 0, 1))
# index in the permutation chain at which each alpha \/ (beta \/ gamma) appears
_CHAIN_POSITION = dict(zip(PERMUTATIONS, (0, 2, 4, 6, 8, 10)))


def _c4(th, phi):
    guard = isdef_formula(th, phi)
    return Derivation({phi, Not(guard)}, [
        rule("D1", phi=phi),
        rule("C3", phi=guard),
    ])


def _c5(th, phi):
    guard = isdef_formula(th, phi)
    # the guard of not-phi is literally the guard of phi
    return Derivation({Not(phi), Not(guard)}, [lemma("C4", phi=Not(phi))])


def _d2(th, phi):
    g = isdef_formula(th, phi)
    return Derivation(set(), [
        rule("C1", phi=phi),                                    # 0
        rule("D1", aside=True, phi=phi),                        # 1  {phi} |- g
        rule("D1", aside=True, phi=Not(phi)),                   # 2  {not phi} |- g
        rule("or-E", [1, 2], aside=True, phi=phi, psi=Not(phi)),  # 3
        rule("or-I1", aside=True, phi=g, psi=Not(g)),           # 4  {g} |- g \/ not g
        rule("P2", [4], aside=True, delta={Or(phi, Not(phi))}),  # 5
        rule("P3", [3, 5], aside=True),                         # 6
        rule("or-I2", aside=True, phi=g, psi=Not(g)),           # 7
        rule("or-E", [6, 7], phi=Or(phi, Not(phi)), psi=Not(g)),  # 8
    ])


def _c6(th):
    return Derivation(set(), [
        lemma("D2", phi=TRUE),
        rule("P1", aside=True, phi=TRUE),
        rule("D1", aside=True, phi=Not(TRUE)),
        rule("or-E", [1, 2], phi=TRUE, psi=Not(TRUE)),
    ])


def _or_c(th, phi, psi):
    return Derivation({Or(phi, psi)}, [
        rule("or-I2", aside=True, phi=psi, psi=phi),
        rule("or-I1", aside=True, phi=psi, psi=phi),
        rule("or-E", [0, 1], phi=phi, psi=psi),
    ])


def _or_assoc(phi, psi, chi, swap: bool):
    inner = Or(chi, psi) if swap else Or(psi, chi)
    psi_in = rule("or-I2", aside=True, phi=chi, psi=psi) if swap else \
        rule("or-I1", aside=True, phi=psi, psi=chi)
    chi_in = rule("or-I1", aside=True, phi=chi, psi=psi) if swap else \
        rule("or-I2", aside=True, phi=psi, psi=chi)
    return Derivation({Or(Or(phi, psi), chi)}, [
        rule("or-I1", aside=True, phi=phi, psi=inner),   # 0 {phi} |- target
        psi_in,                                          # 1 {psi} |- inner
        rule("or-I2", aside=True, phi=phi, psi=inner),   # 2 {inner} |- target
        rule("P2", [2], aside=True, delta={psi}),        # 3 {inner, psi} |- target
        rule("P3", [1, 3], aside=True),                  # 4 {psi} |- target
        rule("or-E", [0, 4], aside=True, phi=phi, psi=psi),  # 5 {phi \/ psi} |- target
        chi_in,                                          # 6 {chi} |- inner
        rule("P2", [2], aside=True, delta={chi}),        # 7
        rule("P3", [6, 7], aside=True),                  # 8 {chi} |- target
        rule("or-E", [5, 8], phi=Or(phi, psi), psi=chi),  # 9
    ])


def _permute(th, phi, psi, chi, perm=(0, 1, 2)):
    perm = tuple(perm)
    if perm not in _CHAIN_POSITION:
        raise SchemaMismatch("permute", f"{perm} is not a permutation of (0, 1, 2)")
    a, b, c = phi, psi, chi
    chain = [
        lemma("or-A", phi=a, psi=b, chi=c),
        lemma("or-C", phi=a, psi=Or(b, c)),
        lemma("or-A", phi=b, psi=c, chi=a),
        lemma("or-C", phi=b, psi=Or(c, a)),
        lemma("or-A'", phi=c, psi=a, chi=b),
        lemma("or-C", phi=c, psi=Or(b, a)),
        lemma("or-A", phi=b, psi=a, chi=c),
        lemma("or-C", phi=b, psi=Or(a, c)),
        lemma("or-A", phi=a, psi=c, chi=b),
        lemma("or-C", phi=a, psi=Or(c, b)),
        lemma("or-A'", phi=c, psi=b, chi=a),
    ]
    return Derivation({Or(Or(a, b), c)}, chain[:_CHAIN_POSITION[perm] + 1])


def _trio(th, phi, perm):
    items = (phi, Not(phi), Not(isdef_formula(th, phi)))
    perm = tuple(perm)
    if perm not in _CHAIN_POSITION:
        raise SchemaMismatch("contradict", f"{perm} is not a permutation of (0, 1, 2)")
    return items, tuple(items[k] for k in perm)


def _contradict1(th, phi, perm=(0, 1, 2), gamma=frozenset()):
    gamma = frozenset(gamma)
    items, (alpha, beta, gam) = _trio(th, phi, perm)
    bg = Or(beta, gam)
    return Derivation(gamma, [
        hyp(gamma | {alpha}, FALSE),                              # 0
        rule("C1", phi=phi),                                      # 1
        lemma("permute", phi=items[0], psi=items[1], chi=items[2], perm=perm),  # 2
        rule("C2", aside=True, phi=bg),                           # 3 {F} |- bg
        rule("P2", [3], aside=True, delta=gamma | {alpha}),       # 4 gamma+alpha+F |- bg
        rule("P3", [0, 4], aside=True),                           # 5 gamma+alpha |- bg
        rule("P1", aside=True, phi=bg),                           # 6
        rule("P2", [6], aside=True, delta=gamma),                 # 7 gamma+bg |- bg
        rule("or-E", [5, 7], phi=alpha, psi=bg),                  # 8
    ])


def _contradict2(th, phi, perm=(0, 1, 2), gamma=frozenset()):
    gamma = frozenset(gamma)
    _, (alpha, beta, gam) = _trio(th, phi, perm)
    return Derivation(gamma, [
        hyp(gamma | {alpha}, FALSE),                              # 0
        hyp(gamma | {beta}, FALSE),                               # 1
        lemma("contradict1", [0], phi=phi, perm=perm, gamma=gamma),  # 2 gamma |- beta \/ gam
        rule("C2", aside=True, phi=gam),                          # 3
        rule("P2", [3], aside=True, delta=gamma | {beta}),        # 4
        rule("P3", [1, 4], aside=True),                           # 5 gamma+beta |- gam
        rule("P1", aside=True, phi=gam),                          # 6
        rule("P2", [6], aside=True, delta=gamma),                 # 7
        rule("or-E", [5, 7], phi=beta, psi=gam),                  # 8
    ])


def _fresh(*terms: Term) -> int:
    return max([0, *(i for t in terms for i in term_vars(t))]) + 1


def _eq3(th, t, i, t2):
    if not isinstance(t, App) or not 1 <= i <= len(t.args):
        raise SchemaMismatch("eq-3", "t must apply a function and i must pick one of its arguments")
    ti = t.args[i - 1]
    x = _fresh(t, t2)
    hole = App(t.func, (*t.args[:i - 1], Var(x), *t.args[i:]))
    return Derivation({Eq(ti, t2), isdef_term(th, t)}, [
        rule("eq-1", t=t),
        rule("eq-2", phi=Eq(t, hole), x=x, t=ti, t2=t2),
    ])


def _eq4(th, t, t2):
    x = _fresh(t, t2)
    return Derivation({Eq(t, t2)}, [
        rule("D1", phi=Eq(t, t2)),
        rule("and-E1", phi=isdef_term(th, t), psi=isdef_term(th, t2)),
        rule("eq-1", t=t),
        rule("eq-2", phi=Eq(Var(x), t), x=x, t=t, t2=t2),
    ])


def _eq5(th, t1, t2, t3):
    x = _fresh(t1, t2, t3)
    return Derivation({Eq(t1, t2), Eq(t2, t3)}, [
        lemma("eq-4", t=t1, t2=t2),
        rule("eq-2", phi=Eq(Var(x), t3), x=x, t=t2, t2=t1),
    ])


# name -> (builder, parameter kinds)
LEMMAS: dict[str, tuple[Callable[..., Derivation], tuple[tuple[str, str], ...]]] = {
    "C4": (_c4, (("phi", "formula"),)),
    "C5": (_c5, (("phi", "formula"),)),
    "D2": (_d2, (("phi", "formula"),)),
    "C6": (_c6, ()),
    "or-C": (_or_c, (("phi", "formula"), ("psi", "formula"))),
    "or-A": (lambda th, phi, psi, chi: _or_assoc(phi, psi, chi, False),
             (("phi", "formula"), ("psi", "formula"), ("chi", "formula"))),
    "or-A'": (lambda th, phi, psi, chi: _or_assoc(phi, psi, chi, True),
              (("phi", "formula"), ("psi", "formula"), ("chi", "formula"))),
    "permute": (_permute, (("phi", "formula"), ("psi", "formula"), ("chi", "formula"),
                           ("perm", "perm"))),
    "contradict1": (_contradict1, (("phi", "formula"), ("perm", "perm"), ("gamma", "formulas"))),
    "contradict2": (_contradict2, (("phi", "formula"), ("perm", "perm"), ("gamma", "formulas"))),
    "eq-3": (_eq3, (("t", "term"), ("i", "int"), ("t2", "term"))),
    "eq-4": (_eq4, (("t", "term"), ("t2", "term"))),
    "eq-5": (_eq5, (("t1", "term"), ("t2", "term"), ("t3", "term"))),
}

OPTIONAL_LEMMA_ARGS = {"perm", "gamma"}


def derive_lemma(th: Theory, name: str, **args) -> Derivation:
    """A derivation of the named derived rule for the given instance."""
    name = canonical_name(name)
    if name not in LEMMAS:
        raise SchemaMismatch(name, "unknown lemma")
    build, params = LEMMAS[name]
    known = {p for p, _ in params}
    if set(args) - known:
        raise SchemaMismatch(name, f"unexpected arguments {sorted(set(args) - known)}")
    for p, kind in params:
        if p not in args:
            if p in OPTIONAL_LEMMA_ARGS:
                continue
            raise SchemaMismatch(name, f"missing argument {p!r}")
        value = args[p]
        try:
            if kind == "formula":
                check_formula(th.sig, value)
            elif kind == "formulas":
                for f in value:
                    check_formula(th.sig, f)
            elif kind == "term":
                check_term(th.sig, value)
        except WellFormednessError as exc:
            raise SchemaMismatch(name, f"argument {p}: {exc}") from None
    return build(th, **args)


def lemma_statement(th: Theory, name: str, **args):
    """The judgment the lemma proves (computed by checking its derivation)."""
    from .derivation import replay

    d = derive_lemma(th, name, **args)
    return replay(th, d).final

