"""Shared fixtures: small signatures, seeded generators and hypothesis strategies."""

from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from ternlog import (
    FALSE, TRUE, And, App, Const, Eq, Exists, Forall, Not, Or, Rel, Signature, Theory, Var,
)
from ternlog.core import Formula, Term

DATA = Path(__file__).parent / "data"
PROOFS = DATA / "proofs"

# one constant, one unary partial function, one unary relation
SIG = Signature({"c"}, {"f": 1}, {"p": 1})
PARTIAL = Theory(SIG, (), {"f": Eq(Var(1), Const("c"))})
TOTAL = Theory(SIG)

# two constants; used where distinct closed atoms help
SIG2 = Signature({"c", "e"}, {"f": 1}, {"p": 1})
PARTIAL2 = Theory(SIG2, (), {"f": Eq(Var(1), Const("c"))})


def depth(phi: Formula) -> int:
    if isinstance(phi, Not):
        return 1 + depth(phi.body)
    if isinstance(phi, (And, Or)):
        return 1 + max(depth(phi.left), depth(phi.right))
    if isinstance(phi, (Forall, Exists)):
        return 1 + depth(phi.body)
    return 0


# -- seeded generators -------------------------------------------------------

def random_term(rng: random.Random, sig: Signature, depth: int, nvars: int) -> Term:
    choices = ["var"] * (nvars > 0) + ["const"] * bool(sig.constants)
    if depth > 0 and sig.functions:
        choices.append("app")
    kind = rng.choice(choices)
    if kind == "var":
        return Var(rng.randint(1, nvars))
    if kind == "const":
        return Const(rng.choice(sorted(sig.constants)))
    f = rng.choice(sorted(sig.functions))
    return App(f, tuple(random_term(rng, sig, depth - 1, nvars)
                        for _ in range(sig.functions[f])))


def random_atom(rng: random.Random, sig: Signature, nvars: int, term_depth: int = 1) -> Formula:
    roll = rng.random()
    if roll < 0.1:
        return rng.choice((TRUE, FALSE))
    if roll < 0.55 and sig.relations:
        r = rng.choice(sorted(sig.relations))
        return Rel(r, tuple(random_term(rng, sig, term_depth, nvars)
                            for _ in range(sig.relations[r])))
    return Eq(random_term(rng, sig, term_depth, nvars), random_term(rng, sig, term_depth, nvars))


def random_formula(rng: random.Random, sig: Signature, depth: int, nvars: int = 2,
                   term_depth: int = 1) -> Formula:
    """A core formula of connective depth at most ``depth`` over ``v1..v_nvars``."""
    if depth == 0 or rng.random() < 0.2:
        return random_atom(rng, sig, nvars, term_depth)
    kind = rng.choice(("not", "and", "or", "forall", "exists"))
    if kind == "not":
        return Not(random_formula(rng, sig, depth - 1, nvars, term_depth))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(random_formula(rng, sig, depth - 1, nvars, term_depth),
                   random_formula(rng, sig, depth - 1, nvars, term_depth))
    x = rng.randint(1, nvars)
    cls = Forall if kind == "forall" else Exists
    return cls(x, random_formula(rng, sig, depth - 1, nvars, term_depth))


# -- hypothesis strategies ---------------------------------------------------

def terms(sig: Signature, nvars: int = 2, max_depth: int = 2):
    leaves = [st.integers(1, nvars).map(Var)] if nvars else []
    if sig.constants:
        leaves.append(st.sampled_from(sorted(sig.constants)).map(Const))
    base = st.one_of(leaves)
    if not sig.functions:
        return base

    def extend(inner):
        return st.sampled_from(sorted(sig.functions)).flatmap(
            lambda f: st.tuples(*[inner] * sig.functions[f]).map(lambda args: App(f, args)))

    return st.recursive(base, extend, max_leaves=max_depth + 1)


def atoms(sig: Signature, nvars: int = 2):
    t = terms(sig, nvars)
    parts = [st.sampled_from((TRUE, FALSE)), st.builds(Eq, t, t)]
    for r, n in sorted(sig.relations.items()):
        parts.append(st.tuples(*[t] * n).map(lambda args, r=r: Rel(r, args)))
    return st.one_of(parts)


def formulas(sig: Signature, nvars: int = 2, max_leaves: int = 6):
    var = st.integers(1, nvars)

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Forall, var, inner),
            st.builds(Exists, var, inner),
        )

    return st.recursive(atoms(sig, nvars), extend, max_leaves=max_leaves)
