"""Regularity: undefined inputs may only ever produce U, unless they are ignored.

For truth functions the check ranges over {F, U, T}.  For formulas, free
variables may additionally receive the extended value :data:`BOTTOM`, which
stands for the missing value of an undefined term; bound variables still
range over the domain only.  ``BOTTOM`` never leaves this module's API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .core import Formula, Term, arity_formula, term_vars
from .errors import BudgetExceeded, SignatureMismatch
from .semantics import Structure, TruthValue, _compile_term, compile_formula

F, U, T = TruthValue.F, TruthValue.U, TruthValue.T
DEFAULT_BUDGET = 10 ** 6


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


def _env(ext_args: Sequence, width: int) -> list:
    vals = [None if a is BOTTOM else a for a in ext_args]
    vals += [0] * max(0, width - 1 - len(vals))
    return [0, *vals]


def eval_term_ext(sigma: Structure, ext_args: Sequence, t: Term) -> Optional[int]:
    """Evaluate ``t`` with ``v_i`` bound to ``ext_args[i-1]``; ``BOTTOM`` makes ``v_i`` undefined."""
    env = _env(ext_args, max(term_vars(t), default=0) + 1)
    try:
        return _compile_term(t)(sigma, env)
    except KeyError as exc:
        raise SignatureMismatch(f"structure does not interpret {exc.args[0]!r}") from None


def eval_formula_ext(sigma: Structure, ext_args: Sequence, phi: Formula) -> TruthValue:
    c = compile_formula(phi)
    return TruthValue(c(sigma, _env(ext_args, c.width)))


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class RegularityReport:
    """Outcome of a regularity check.

    On failure ``position`` is the 1-based argument that breaks regularity and
    ``args`` the full argument tuple with the undefined marker in that place.
    """

    regular: bool
    position: Optional[int] = None
    args: Optional[tuple] = None
    checked: int = 0

    def __bool__(self):
        return self.regular

    def __str__(self):
        if self.regular:
            return f"regular ({self.checked} contexts checked)"
        shown = ", ".join(str(a) for a in self.args)
        return f"irregular at position {self.position}, arguments ({shown})"


def check_regular_function(fn: Callable[[tuple], TruthValue], arity: int,
                           defined: Sequence, undefined, budget: int = DEFAULT_BUDGET
                           ) -> RegularityReport:
    """Generic check: ``fn`` maps ``arity``-tuples over ``defined + [undefined]`` to truth values.

    For every position and every context of the other positions, either the
    value with ``undefined`` in the position is U, or it equals the value for
    every defined choice.
    """
    values = [*defined, undefined]
    size = len(values) ** max(arity - 1, 0) * arity
    if size > budget:
        raise BudgetExceeded(f"{size} contexts exceed the budget of {budget}")
    checked = 0
    for i in range(arity):
        for rest in itertools.product(values, repeat=arity - 1):
            checked += 1
            at = lambda v: (*rest[:i], v, *rest[i:])  # noqa: E731
            hole = fn(at(undefined))
            if hole == U:
                continue
            if any(fn(at(d)) != hole for d in defined):
                return RegularityReport(False, i + 1, at(undefined), checked)
    return RegularityReport(True, checked=checked)


# -- truth tables ------------------------------------------------------------

@dataclass(frozen=True)
class TruthTable:
    arity: int
    table: Mapping[tuple, TruthValue]

    def __post_init__(self):
        expected = set(itertools.product(TruthValue, repeat=self.arity))
        if set(self.table) != expected:
            raise ValueError("a truth table must be total on {F,U,T}^n")

    def __call__(self, *args: TruthValue) -> TruthValue:
        return self.table[tuple(args)]

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.table.items()))))

    @classmethod
    def from_function(cls, arity: int, fn: Callable[..., TruthValue]) -> TruthTable:
        return cls(arity, {args: TruthValue(fn(*args))
                           for args in itertools.product(TruthValue, repeat=arity)})


def _luk(p, q):
    return T if p <= q else TruthValue(2 - p + q)


KLEENE_NOT = TruthTable.from_function(1, lambda p: 2 - p)
KLEENE_AND = TruthTable.from_function(2, min)
KLEENE_OR = TruthTable.from_function(2, max)
KLEENE_IMP = TruthTable.from_function(2, lambda p, q: max(2 - p, q))
KLEENE_IFF = TruthTable.from_function(
    2, lambda p, q: min(max(2 - p, q), max(2 - q, p)))
LUKASIEWICZ_IMP = TruthTable.from_function(2, _luk)
STAR = TruthTable.from_function(1, lambda p: F if p == U else T)


def check_regular_truth_table(tt: TruthTable) -> RegularityReport:
    return check_regular_function(lambda args: tt(*args), tt.arity, (F, T), U)


def check_regular_formula(sigma: Structure, phi: Formula,
                          budget: int = DEFAULT_BUDGET) -> RegularityReport:
    """Exhaustively check regularity of ``phi`` on ``sigma`` over extended arguments."""
    c = compile_formula(phi)
    n = arity_formula(phi)

    def fn(args):
        return c(sigma, _env(args, c.width))

    return check_regular_function(fn, n, tuple(range(sigma.size)), BOTTOM, budget)
