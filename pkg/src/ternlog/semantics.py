"""Finite structures and the three-valued evaluator.

Terms evaluate to a domain element or ``UNDEF`` (``None``); partial functions
are strict.  Formulas evaluate to a :class:`TruthValue`, with ``/\\`` as min and
``\\/`` as max on F < U < T and the quantifiers as min/max over the domain.

Formulas are compiled once into closures over a mutable variable vector, which
is what makes the exhaustive sweeps in the test-suite affordable.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .core import (
    And, App, Const, Eq, Exists, FalseLit, Forall, Formula, Not, Or, Rel, Signature,
    Term, TrueLit, Var, all_vars, free_vars, term_vars,
)
from .errors import BoundExceeded, ParseError, SignatureMismatch
from .isdef import Theory, validate_isdef_map

UNDEF = None
DEFAULT_BUDGET = 10 ** 7


class TruthValue(IntEnum):
    F = 0
    U = 1
    T = 2

    def __str__(self):
        return self.name


F, U, T = TruthValue.F, TruthValue.U, TruthValue.T


# -- structures --------------------------------------------------------------

@dataclass(frozen=True)
class Structure:
    """A finite structure on the domain ``{0, ..., size-1}``.

    ``funcs[f]`` maps every argument tuple to a value or ``None`` (undefined).
    ``rel_arity`` records relation arities, which empty relations cannot show.
    """

    size: int
    consts: Mapping[str, int] = field(default_factory=dict)
    funcs: Mapping[str, Mapping[tuple, Optional[int]]] = field(default_factory=dict)
    rels: Mapping[str, frozenset] = field(default_factory=dict)
    rel_arity: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("the domain must be nonempty")
        arities = dict(self.rel_arity)
        for r, tuples in self.rels.items():
            if r not in arities:
                if not tuples:
                    raise ValueError(f"arity of empty relation {r} is unknown")
                arities[r] = len(next(iter(tuples)))
        object.__setattr__(self, "rel_arity", arities)
        object.__setattr__(self, "rels", {r: frozenset(v) for r, v in self.rels.items()})
        for name, value in self.consts.items():
            self._check_element(value, f"constant {name}")
        for f, table in self.funcs.items():
            arity = len(next(iter(table)))
            expected = set(itertools.product(range(self.size), repeat=arity))
            if set(table) != expected:
                raise ValueError(f"table of {f} must cover exactly D^{arity}")
            for v in table.values():
                if v is not None:
                    self._check_element(v, f"function {f}")
        for r, tuples in self.rels.items():
            for tup in tuples:
                if len(tup) != arities[r]:
                    raise ValueError(f"tuple {tup} has the wrong arity for {r}")
                for v in tup:
                    self._check_element(v, f"relation {r}")

    def _check_element(self, v, what):
        if not isinstance(v, int) or not 0 <= v < self.size:
            raise ValueError(f"{what}: {v!r} is not in the domain")

    def key(self):
        return (self.size, tuple(sorted(self.consts.items())),
                tuple((f, tuple(sorted(t.items()))) for f, t in sorted(self.funcs.items())),
                tuple((r, tuple(sorted(v))) for r, v in sorted(self.rels.items())),
                tuple(sorted(self.rel_arity.items())))

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def domain(self) -> range:
        return range(self.size)

    def signature(self) -> Signature:
        return Signature(frozenset(self.consts),
                         {f: len(next(iter(t))) for f, t in self.funcs.items()},
                         dict(self.rel_arity))

    def is_total(self) -> bool:
        return all(v is not None for t in self.funcs.values() for v in t.values())


@dataclass(frozen=True)
class Assignment:
    """Total valuation of variables: ``values`` where given, ``default`` elsewhere."""

    values: Mapping[int, int] = field(default_factory=dict)
    default: int = 0

    def __call__(self, i: int) -> int:
        return self.values.get(i, self.default)

    def update(self, i: int, d: int) -> Assignment:
        return Assignment({**self.values, i: d}, self.default)

    def vector(self, n: int) -> list:
        return [self.default] + [self(i) for i in range(1, n + 1)]

    def __hash__(self):
        return hash((tuple(sorted(self.values.items())), self.default))

    def __str__(self):
        return ", ".join(f"v{i} = {d}" for i, d in sorted(self.values.items()))


# -- compilation -------------------------------------------------------------

TermFn = Callable[[Structure, list], Optional[int]]
FormulaFn = Callable[[Structure, list], int]


def _compile_term(t: Term) -> TermFn:
    if isinstance(t, Var):
        i = t.index
        return lambda s, e: e[i]
    if isinstance(t, Const):
        name = t.name
        return lambda s, e: s.consts[name]
    if isinstance(t, App):
        name = t.func
        parts = [_compile_term(a) for a in t.args]
        if len(parts) == 1:
            (p,) = parts

            def app1(s, e):
                v = p(s, e)
                return None if v is None else s.funcs[name][(v,)]
            return app1

        def app(s, e):
            vals = []
            for p in parts:
                v = p(s, e)
                if v is None:
                    return None
                vals.append(v)
            return s.funcs[name][tuple(vals)]
        return app
    raise TypeError(f"cannot evaluate {t!r}")


def _compile(phi: Formula) -> FormulaFn:
    if isinstance(phi, FalseLit):
        return lambda s, e: 0
    if isinstance(phi, TrueLit):
        return lambda s, e: 2
    if isinstance(phi, Eq):
        a, b = _compile_term(phi.left), _compile_term(phi.right)

        def eq(s, e):
            x = a(s, e)
            if x is None:
                return 1
            y = b(s, e)
            if y is None:
                return 1
            return 2 if x == y else 0
        return eq
    if isinstance(phi, Rel):
        name = phi.name
        parts = [_compile_term(t) for t in phi.args]

        def rel(s, e):
            vals = []
            for p in parts:
                v = p(s, e)
                if v is None:
                    return 1
                vals.append(v)
            return 2 if tuple(vals) in s.rels[name] else 0
        return rel
    if isinstance(phi, Not):
        body = _compile(phi.body)
        return lambda s, e: 2 - body(s, e)
    if isinstance(phi, And):
        left, right = _compile(phi.left), _compile(phi.right)

        def conj(s, e):
            x = left(s, e)
            if x == 0:
                return 0
            y = right(s, e)
            return x if x < y else y
        return conj
    if isinstance(phi, Or):
        left, right = _compile(phi.left), _compile(phi.right)

        def disj(s, e):
            x = left(s, e)
            if x == 2:
                return 2
            y = right(s, e)
            return x if x > y else y
        return disj
    if isinstance(phi, (Forall, Exists)):
        body = _compile(phi.body)
        if phi.var not in free_vars(phi.body):
            return body  # the domain is nonempty, so min/max of a constant is itself
        i = phi.var
        stop, start = (0, 2) if isinstance(phi, Forall) else (2, 0)
        pick = min if isinstance(phi, Forall) else max

        def quant(s, e):
            saved = e[i]
            best = start
            for d in range(s.size):
                e[i] = d
                best = pick(best, body(s, e))
                if best == stop:
                    break
            e[i] = saved
            return best
        return quant
    raise TypeError(f"cannot evaluate {type(phi).__name__}; desugar it first")


@dataclass(frozen=True)
class Compiled:
    """A formula compiled for repeated evaluation, with the vector width it needs."""

    fn: FormulaFn
    width: int

    def __call__(self, s: Structure, env: list) -> int:
        try:
            return self.fn(s, env)
        except KeyError as exc:
            raise SignatureMismatch(f"structure does not interpret {exc.args[0]!r}") from None


@lru_cache(maxsize=4096)
def compile_formula(phi: Formula) -> Compiled:
    return Compiled(_compile(phi), max(all_vars(phi), default=0) + 1)


def _env(nu: Assignment, width: int, extra: Iterable[int] = ()) -> list:
    n = max([width - 1, *extra, *nu.values], default=0)
    return nu.vector(n)


def eval_term(sigma: Structure, nu: Assignment, t: Term) -> Optional[int]:
    env = _env(nu, max(term_vars(t), default=0) + 1)
    try:
        return _compile_term(t)(sigma, env)
    except KeyError as exc:
        raise SignatureMismatch(f"structure does not interpret {exc.args[0]!r}") from None


def eval_formula(sigma: Structure, nu: Assignment, phi: Formula) -> TruthValue:
    c = compile_formula(phi)
    return TruthValue(c(sigma, _env(nu, c.width)))


def holds(sigma: Structure, nu: Assignment, phi: Formula) -> bool:
    return eval_formula(sigma, nu, phi) is T


# -- models ------------------------------------------------------------------

def models_isdef(sigma: Structure, th: Theory) -> bool:
    """Each guard is T exactly on the argument tuples where its function is defined."""
    for f, guard in th.isdef_map.items():
        if f not in sigma.funcs:
            raise SignatureMismatch(f"structure does not interpret {f!r}")
        c = compile_formula(guard)
        arity = th.sig.functions[f]
        env = [0] * max(c.width, arity + 1)
        for args, value in sigma.funcs[f].items():
            env[1:arity + 1] = args
            if (c(sigma, env) == 2) != (value is not None):
                return False
    return True


def is_model(sigma: Structure, nu: Assignment, th: Theory) -> bool:
    return models_isdef(sigma, th) and all(holds(sigma, nu, g) for g in th.axioms)


# -- enumeration -------------------------------------------------------------

def _tuples(n: int, arity: int) -> list[tuple]:
    return list(itertools.product(range(n), repeat=arity))


def _tables(n: int, arity: int, values: Sequence) -> Iterator[dict]:
    points = _tuples(n, arity)
    for choice in itertools.product(values, repeat=len(points)):
        yield dict(zip(points, choice))


def _subsets(n: int, arity: int) -> Iterator[frozenset]:
    points = _tuples(n, arity)
    for mask in range(1 << len(points)):
        yield frozenset(p for k, p in enumerate(points) if mask >> k & 1)


def enumerate_structures(sig: Signature, n: int) -> Iterator[Structure]:
    """Every structure for ``sig`` on ``{0..n-1}``, each exactly once.

    Order: constants, then function tables, then relations, each group by
    symbol name, the last position varying fastest.  A table is enumerated
    point-wise in lexicographic argument order with undef < 0 < 1 < ...;
    a relation runs through subsets in bitmask order, bit k standing for the
    k-th tuple in lexicographic order.
    """
    if n < 1:
        raise ValueError("domain size must be at least 1")
    consts = sorted(sig.constants)
    funcs = sorted(sig.functions)
    rels = sorted(sig.relations)
    values = [None, *range(n)]
    axes = ([range(n)] * len(consts)
            + [list(_tables(n, sig.functions[f], values)) for f in funcs]
            + [list(_subsets(n, sig.relations[r])) for r in rels])
    rel_arity = {r: sig.relations[r] for r in rels}
    k, m = len(consts), len(consts) + len(funcs)
    for combo in itertools.product(*axes):
        yield Structure(n, dict(zip(consts, combo[:k])), dict(zip(funcs, combo[k:m])),
                        dict(zip(rels, combo[m:])), rel_arity)


def enumerate_isdef_models(th: Theory, n: int) -> Iterator[Structure]:
    """Every structure on ``{0..n-1}`` satisfying the theory's isdef map.

    With a valid isdef map the guards only use total functions, so the
    definedness pattern of each partial function is fixed once constants,
    total functions and relations are chosen; only the defined points need
    values.  Order: constants, total functions, relations, partial functions.
    An invalid map falls back to filtering :func:`enumerate_structures`.
    """
    sig = th.sig
    if not validate_isdef_map(th).ok:
        yield from (s for s in enumerate_structures(sig, n) if models_isdef(s, th))
        return
    total = [f for f in sorted(sig.functions) if th.isdef_map[f] == TrueLit()]
    partial = [f for f in sorted(sig.functions) if f not in total]
    consts = sorted(sig.constants)
    rels = sorted(sig.relations)
    rel_arity = {r: sig.relations[r] for r in rels}
    axes = ([range(n)] * len(consts)
            + [list(_tables(n, sig.functions[f], range(n))) for f in total]
            + [list(_subsets(n, sig.relations[r])) for r in rels])
    k, m = len(consts), len(consts) + len(total)
    guards = {f: compile_formula(th.isdef_map[f]) for f in partial}
    for combo in itertools.product(*axes):
        skeleton = Structure(n, dict(zip(consts, combo[:k])), dict(zip(total, combo[k:m])),
                             dict(zip(rels, combo[m:])), rel_arity)
        domains = []
        for f in partial:
            c = guards[f]
            arity = sig.functions[f]
            env = [0] * max(c.width, arity + 1)
            defined = []
            for args in _tuples(n, arity):
                env[1:arity + 1] = args
                if c.fn(skeleton, env) == 2:
                    defined.append(args)
            domains.append((f, arity, defined))
        choices = [itertools.product(range(n), repeat=len(d)) for _, _, d in domains]
        for picks in itertools.product(*choices):
            funcs = dict(skeleton.funcs)
            for (f, arity, defined), vals in zip(domains, picks):
                table = dict.fromkeys(_tuples(n, arity))
                table.update(zip(defined, vals))
                funcs[f] = table
            yield Structure(n, skeleton.consts, funcs, skeleton.rels, rel_arity)


def count_structures(sig: Signature, n: int) -> int:
    """Closed-form size of :func:`enumerate_structures`."""
    out = n ** len(sig.constants)
    for a in sig.functions.values():
        out *= (n + 1) ** (n ** a)
    for a in sig.relations.values():
        out *= 2 ** (n ** a)
    return out


# -- countermodel search -----------------------------------------------------

@dataclass(frozen=True)
class CounterModel:
    structure: Structure
    assignment: Assignment

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoneUpToBound:
    """No countermodel with at most ``max_n`` elements.  This is NOT validity."""

    max_n: int
    checked: int

    def __bool__(self):
        return False


def default_budget() -> int:
    raw = os.environ.get("TERNLOG_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _search_size(th: Theory, phi: Formula, n: int, limit: int, part: int, parts: int):
    """Scan structures of size ``n`` with index ``< limit`` and ``index % parts == part``.

    Returns ``(witness_index, structure, assignment, scanned, exhausted)``,
    where ``exhausted`` means the size was not finished within ``limit``.
    """
    axioms = [compile_formula(g) for g in th.axioms]
    goal = compile_formula(phi)
    width = max([goal.width, *(a.width for a in axioms)])
    k = max([0, *free_vars(phi), *(i for g in th.axioms for i in free_vars(g))])
    scanned = 0
    for index, sigma in enumerate(enumerate_isdef_models(th, n)):
        if index >= limit:
            return None, None, None, scanned, True
        if index % parts != part:
            continue
        scanned += 1
        env = [0] * width
        for values in itertools.product(range(n), repeat=k):
            env[1:k + 1] = values
            if goal(sigma, env) == 2:
                continue
            if all(a(sigma, env) == 2 for a in axioms):
                nu = Assignment({i + 1: d for i, d in enumerate(values)})
                return index, sigma, nu, scanned, False
    return None, None, None, scanned, False


def find_countermodel(th: Theory, phi: Formula, max_n: int, budget: Optional[int] = None,
                      jobs: int = 1) -> CounterModel | NoneUpToBound:
    """Search models of the theory with 1..max_n elements where ``phi`` is not T.

    Sizes are tried in increasing order and, within a size, structures in
    :func:`enumerate_isdef_models` order; the first witness in that order is
    returned whatever ``jobs`` is.  ``budget`` caps the number of candidate
    structures over the whole search.
    """
    budget = default_budget() if budget is None else budget
    checked = 0
    for n in range(1, max_n + 1):
        limit = budget - checked
        if jobs <= 1:
            results = [_search_size(th, phi, n, limit, 0, 1)]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_search_size, th, phi, n, limit, j, jobs)
                           for j in range(jobs)]
                results = [f.result() for f in futures]
        hits = [r for r in results if r[0] is not None]
        if hits:
            index, sigma, nu, _, _ = min(hits, key=lambda r: r[0])
            return CounterModel(sigma, nu)
        if any(r[4] for r in results):
            raise BoundExceeded(n, budget)
        checked += sum(r[3] for r in results)
    return NoneUpToBound(max_n, checked)


# -- structure text format ---------------------------------------------------

def format_structure(sigma: Structure) -> str:
    """Canonical text: consts, funs and rels sorted by name, tuples in lexicographic order."""
    lines = [f"domain {sigma.size}"]
    for c, v in sorted(sigma.consts.items()):
        lines.append(f"const {c} = {v}")
    for f, table in sorted(sigma.funcs.items()):
        for args, v in sorted(table.items()):
            lines.append(f"fun {f} : {' '.join(map(str, args))} -> {'undef' if v is None else v}")
    for r, tuples in sorted(sigma.rels.items()):
        body = ", ".join("(" + ", ".join(map(str, t)) + ")" for t in sorted(tuples))
        head = r if tuples else f"{r}/{sigma.rel_arity[r]}"
        lines.append(f"rel {head} : {{{body}}}")
    return "\n".join(lines) + "\n"


_FUN_RE = re.compile(r"fun\s+(\S+)\s*:\s*([0-9\s]+?)\s*->\s*(undef|[0-9]+)$")
_REL_RE = re.compile(r"rel\s+([^\s/:]+)(?:\s*/\s*([0-9]+))?\s*:\s*\{(.*)\}$")
_CONST_RE = re.compile(r"const\s+(\S+)\s*=\s*([0-9]+)$")
_TUPLE_RE = re.compile(r"\(\s*([0-9\s,]*?)\s*\)")


def parse_structure(text: str, sig: Optional[Signature] = None) -> Structure:
    """Read the structure text format.  ``sig`` supplies arities of empty relations."""
    size = None
    consts: dict[str, int] = {}
    funcs: dict[str, dict] = {}
    rels: dict[str, set] = {}
    arity: dict[str, int] = dict(sig.relations) if sig else {}
    pos = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        start = pos
        pos += len(raw)
        if not line:
            continue
        try:
            if line.startswith("domain"):
                size = int(line.split()[1])
            elif m := _CONST_RE.match(line):
                consts[m[1]] = int(m[2])
            elif m := _FUN_RE.match(line):
                args = tuple(int(x) for x in m[2].split())
                table = funcs.setdefault(m[1], {})
                if args in table:
                    raise ValueError(f"duplicate entry for {m[1]}{args}")
                table[args] = None if m[3] == "undef" else int(m[3])
            elif m := _REL_RE.match(line):
                if m[2]:
                    arity[m[1]] = int(m[2])
                tuples = {tuple(int(x) for x in t.replace(",", " ").split())
                          for t in _TUPLE_RE.findall(m[3])}
                rels[m[1]] = tuples
            else:
                raise ValueError(f"unrecognised line {line!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), start, text=text) from None
    if size is None:
        raise ParseError("missing 'domain n' header", 0, text=text)
    try:
        sigma = Structure(size, consts, funcs, rels,
                          {r: a for r, a in arity.items() if r in rels})
    except ValueError as exc:
        raise ParseError(str(exc), 0, text=text) from None
    if sig is not None:
        theirs = sigma.signature()
        if (theirs.constants != sig.constants or theirs.functions != sig.functions
                or theirs.relations != sig.relations):
            raise SignatureMismatch("structure does not match the theory's signature")
    return sigma
