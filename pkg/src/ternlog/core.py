"""Abstract syntax: signatures, terms, formulas, and variable handling.

Variables are positive integer indices: ``Var(3)`` is the symbol v3.  All
nodes are frozen dataclasses, so structural equality (``==``) is literal
identity of formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import CaptureError, WellFormednessError

RESERVED = frozenset({
    "F", "T", "not", "forall", "exists", "sforall", "sexists", "lexists", "ite",
})


@dataclass(frozen=True)
class Signature:
    constants: frozenset[str] = frozenset()
    functions: Mapping[str, int] = None  # type: ignore[assignment]
    relations: Mapping[str, int] = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "functions", dict(self.functions or {}))
        object.__setattr__(self, "relations", dict(self.relations or {}))
        names = [*self.constants, *self.functions, *self.relations]
        if len(names) != len(set(names)):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise WellFormednessError(f"symbol names must be disjoint: {', '.join(dup)}")
        for name in names:
            if name in RESERVED or _is_var_name(name):
                raise WellFormednessError(f"{name!r} is a reserved symbol")
        for table in (self.functions, self.relations):
            for name, arity in table.items():
                if not isinstance(arity, int) or arity < 1:
                    raise WellFormednessError(f"arity of {name} must be a positive integer")

    def __hash__(self):
        return hash((self.constants, tuple(sorted(self.functions.items())),
                     tuple(sorted(self.relations.items()))))

    def extend(self, constants=(), functions=None, relations=None) -> Signature:
        return Signature(self.constants | frozenset(constants),
                         {**self.functions, **(functions or {})},
                         {**self.relations, **(relations or {})})


def _is_var_name(name: str) -> bool:
    return len(name) > 1 and name[0] == "v" and name[1:].isdigit()


# -- terms -------------------------------------------------------------------

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise WellFormednessError(f"variable index must be >= 1, got {self.index!r}")


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    func: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


# -- formulas ----------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class FalseLit(Formula):
    pass


@dataclass(frozen=True)
class TrueLit(Formula):
    pass


FALSE = FalseLit()
TRUE = TrueLit()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: int
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: int
    body: Formula


Quantifier = Union[Forall, Exists]
CORE_FORMULAS = (FalseLit, TrueLit, Eq, Rel, Not, And, Or, Forall, Exists)
CORE_TERMS = (Var, Const, App)


def conj(*parts: Formula) -> Formula:
    """Left-associated conjunction ``((a /\\ b) /\\ c)``."""
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    """Left-associated disjunction."""
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# -- traversal ---------------------------------------------------------------

def term_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, App):
        out: set[int] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def _atom_terms(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, Eq):
        return (phi.left, phi.right)
    if isinstance(phi, Rel):
        return phi.args
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, (And, Or)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (Forall, Exists)):
        yield from subformulas(phi.body)


def all_vars(phi: Formula) -> set[int]:
    """Every variable index occurring in ``phi``, binders included."""
    out: set[int] = set()
    for sub in subformulas(phi):
        if isinstance(sub, (Forall, Exists)):
            out.add(sub.var)
        for t in _atom_terms(sub):
            out |= term_vars(t)
    return out


def free_vars(phi: Formula) -> set[int]:
    if isinstance(phi, (Eq, Rel)):
        out: set[int] = set()
        for t in _atom_terms(phi):
            out |= term_vars(t)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    return set()


def bound_vars(phi: Formula) -> set[int]:
    return {s.var for s in subformulas(phi) if isinstance(s, (Forall, Exists))}


def arity_term(t: Term) -> int:
    return max(term_vars(t), default=0)


def arity_formula(phi: Formula) -> int:
    return max(free_vars(phi), default=0)


def functions_in(phi: Formula) -> set[str]:
    def walk(t: Term, acc: set[str]):
        if isinstance(t, App):
            acc.add(t.func)
            for a in t.args:
                walk(a, acc)

    out: set[str] = set()
    for sub in subformulas(phi):
        for t in _atom_terms(sub):
            walk(t, out)
    return out


def literally_equal(phi: Formula, psi: Formula) -> bool:
    return phi == psi


# -- well-formedness ---------------------------------------------------------

def check_term(sig: Signature, t: Term) -> None:
    if isinstance(t, Var):
        return
    if isinstance(t, Const):
        if t.name not in sig.constants:
            raise WellFormednessError(f"unknown constant {t.name!r}")
        return
    if isinstance(t, App):
        if t.func not in sig.functions:
            raise WellFormednessError(f"unknown function {t.func!r}")
        if len(t.args) != sig.functions[t.func]:
            raise WellFormednessError(
                f"{t.func} expects {sig.functions[t.func]} arguments, got {len(t.args)}")
        for a in t.args:
            check_term(sig, a)
        return
    raise WellFormednessError(f"not a core term: {t!r}")


def check_formula(sig: Signature, phi: Formula) -> None:
    """Raise ``WellFormednessError`` unless ``phi`` is a core formula over ``sig``."""
    for sub in subformulas(phi):
        if not isinstance(sub, CORE_FORMULAS):
            raise WellFormednessError(f"not a core formula: {type(sub).__name__}")
        if isinstance(sub, Rel):
            if sub.name not in sig.relations:
                raise WellFormednessError(f"unknown relation {sub.name!r}")
            if len(sub.args) != sig.relations[sub.name]:
                raise WellFormednessError(
                    f"{sub.name} expects {sig.relations[sub.name]} arguments, got {len(sub.args)}")
        if isinstance(sub, (Forall, Exists)) and (not isinstance(sub.var, int) or sub.var < 1):
            raise WellFormednessError(f"bad binder index {sub.var!r}")
        for t in _atom_terms(sub):
            check_term(sig, t)


# -- substitution ------------------------------------------------------------

def subst_term(t: Term, mapping: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, App):
        return App(t.func, tuple(subst_term(a, mapping) for a in t.args))
    return t


def _first_capture(phi: Formula, mapping: Mapping[int, Term], bound: frozenset[int]):
    """Return (index, binder) of the first capture substituting ``mapping``, or None."""
    if isinstance(phi, (Eq, Rel)):
        for t in _atom_terms(phi):
            for i in term_vars(t):
                if i in mapping:
                    hit = term_vars(mapping[i]) & bound
                    if hit:
                        return i, min(hit)
        return None
    if isinstance(phi, Not):
        return _first_capture(phi.body, mapping, bound)
    if isinstance(phi, (And, Or)):
        return (_first_capture(phi.left, mapping, bound)
                or _first_capture(phi.right, mapping, bound))
    if isinstance(phi, (Forall, Exists)):
        if phi.var in mapping:
            mapping = {k: v for k, v in mapping.items() if k != phi.var}
            if not mapping:
                return None
        return _first_capture(phi.body, mapping, bound | {phi.var})
    return None


def is_free_for(t: Term, i: int, phi: Formula) -> bool:
    return _first_capture(phi, {i: t}, frozenset()) is None


def _subst(phi: Formula, mapping: Mapping[int, Term]) -> Formula:
    if not mapping:
        return phi
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(subst_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, mapping))
    if isinstance(phi, (And, Or)):
        return type(phi)(_subst(phi.left, mapping), _subst(phi.right, mapping))
    if isinstance(phi, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, _subst(phi.body, inner))
    return phi


def substitute_many(phi: Formula, mapping: Mapping[int, Term]) -> Formula:
    """Simultaneously replace free ``v_i`` by ``mapping[i]``; refuse any capture."""
    hit = _first_capture(phi, mapping, frozenset())
    if hit is not None:
        i, binder = hit
        raise CaptureError(i, mapping[i], binder)
    return _subst(phi, mapping)


def substitute(phi: Formula, i: int, t: Term) -> Formula:
    return substitute_many(phi, {i: t})


# -- renaming bound variables ------------------------------------------------

def _rename(phi: Formula, env: dict[int, int], pick) -> Formula:
    if isinstance(phi, (Eq, Rel)):
        mapping = {k: Var(v) for k, v in env.items() if k != v}
        return _subst(phi, mapping) if mapping else phi
    if isinstance(phi, Not):
        return Not(_rename(phi.body, env, pick))
    if isinstance(phi, (And, Or)):
        return type(phi)(_rename(phi.left, env, pick), _rename(phi.right, env, pick))
    if isinstance(phi, (Forall, Exists)):
        new = pick(phi.var)
        return type(phi)(new, _rename(phi.body, {**env, phi.var: new}, pick))
    return phi


def rename_bound_fresh(phi: Formula, avoid: Iterable[int]) -> Formula:
    """Rename every binder whose index is in ``avoid`` to a fresh index.

    Fresh indices are the smallest ones not in ``avoid``, not occurring in
    ``phi`` and not handed out earlier, scanning binders in pre-order.
    """
    avoid = set(avoid)
    used = avoid | all_vars(phi)

    def pick(old: int) -> int:
        if old not in avoid:
            return old
        k = 1
        while k in used:
            k += 1
        used.add(k)
        return k

    return _rename(phi, {}, pick)


def renumber_binders(phi: Formula, start: int) -> Formula:
    """Give every binder a distinct index ``start + 1, start + 2, ...`` in pre-order.

    Free variables must all be ``<= start`` for the result to mean the same
    thing; callers guarantee that.
    """
    counter = [start]

    def pick(_old: int) -> int:
        counter[0] += 1
        return counter[0]

    return _rename(phi, {}, pick)
