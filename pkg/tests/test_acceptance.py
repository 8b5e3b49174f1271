"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
import time

import pytest

from support import (
    DATA, PARTIAL, PARTIAL2, PROOFS, SIG, SIG2, depth, random_formula, random_term,
)
from ternlog import (
    FALSE, TRUE, And, App, Assignment, Const, CounterModel, Eq, Exists, Forall, NoneUpToBound,
    Not, Or, Rel, Signature, Theory, Var, desugar, eval_formula, eval_term, find_countermodel,
    parse_formula, parse_structure, parse_term, parse_theory, print_formula,
)
from ternlog.core import all_vars, free_vars, is_free_for, substitute
from ternlog.errors import KernelError
from ternlog.isdef import isdef_chain, isdef_formula, isdef_term
from ternlog.kernel import (
    PERMUTATIONS, Judgment, RuleInstance, apply_rule, check_derivation, derive_lemma, expand,
    lemma_statement, load_script, replay,
)
from ternlog.regularity import (
    LUKASIEWICZ_IMP, check_regular_formula, check_regular_truth_table,
)
from ternlog.semantics import (
    F, T, U, count_structures, enumerate_isdef_models, enumerate_structures,
)
from ternlog.surface import KleeneIff, KleeneImp, LukImp


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return emit


def models(th, max_n=2):
    return [s for n in range(1, max_n + 1) for s in enumerate_isdef_models(th, n)]


def structures(sig, max_n=2):
    return [s for n in range(1, max_n + 1) for s in enumerate_structures(sig, n)]


def assignments(size, nvars):
    for vals in itertools.product(range(size), repeat=nvars):
        yield Assignment(dict(enumerate(vals, 1)))


# -- 1. truth tables ---------------------------------------------------------

# rows: first operand F, U, T; columns: second operand F, U, T
TABLES = {
    "and": ("FFF", "FUU", "FUT"),
    "or": ("FUT", "UUT", "TTT"),
    "imp": ("TTT", "UUT", "FUT"),
    "iff": ("TUF", "UUU", "FUT"),
    "luk": ("TTT", "UTT", "FUT"),
}
NEGATION = "TUF"


def test_criterion_1_truth_tables(report):
    start = time.perf_counter()
    th = Theory(SIG2, (), {"f": Not(Eq(Var(1), Const("c")))})
    sigma = parse_structure("domain 2\nconst c = 0\nconst e = 1\n"
                            "fun f : 0 -> undef\nfun f : 1 -> 1\nrel p/1 : {}\n")
    fc = App("f", (Const("c"),))
    atom = {F: Eq(Const("c"), Const("e")), U: Eq(fc, fc), T: Eq(Const("c"), Const("c"))}
    build = {"and": And, "or": Or, "imp": KleeneImp, "iff": KleeneIff, "luk": LukImp}
    letter = {F: "F", U: "U", T: "T"}
    wrong = []
    for k, p in enumerate((F, U, T)):
        got = letter[eval_formula(sigma, Assignment(), Not(atom[p]))]
        if got != NEGATION[k]:
            wrong.append(("not", p, got))
    for name, op in build.items():
        for (i, p), (j, q) in itertools.product(enumerate((F, U, T)), repeat=2):
            phi = desugar(th, op(atom[p], atom[q]))
            got = letter[eval_formula(sigma, Assignment(), phi)]
            if got != TABLES[name][i][j]:
                wrong.append((name, p, q, got))
    elapsed = time.perf_counter() - start
    uu = eval_formula(sigma, Assignment(), desugar(th, LukImp(atom[U], atom[U])))
    ku = eval_formula(sigma, Assignment(), desugar(th, KleeneImp(atom[U], atom[U])))
    ok = not wrong and uu is T and ku is U and elapsed < 1
    report(1, ok, f"51 table entries, {len(wrong)} wrong, U~>U={uu.name}, U->U={ku.name}, "
                  f"{elapsed:.3f}s")


# -- 2. isdef soundness ------------------------------------------------------

def test_criterion_2_isdef_soundness(report):
    start = time.perf_counter()
    assert count_structures(SIG, 2) == 72
    ms = models(PARTIAL)
    rng = random.Random(2024)
    formulas = [random_formula(rng, SIG, 3, nvars=2, term_depth=2) for _ in range(1500)]
    assert max(depth(phi) for phi in formulas) == 3
    bad, checks = [], 0
    for phi in formulas:
        guard = isdef_formula(PARTIAL, phi)
        for s in ms:
            for nu in assignments(s.size, 2):
                g = eval_formula(s, nu, guard)
                v = eval_formula(s, nu, phi)
                checks += 1
                if g is U or (g is T) != (v is not U):
                    bad.append((print_formula(phi), nu))
    terms = [random_term(rng, SIG, 3, 2) for _ in range(300)]
    for t in terms:
        guard = isdef_term(PARTIAL, t)
        for s in ms:
            for nu in assignments(s.size, 2):
                g = eval_formula(s, nu, guard)
                checks += 1
                if g is U or (g is T) != (eval_term(s, nu, t) is not None):
                    bad.append((str(t), nu))
    elapsed = time.perf_counter() - start
    report(2, not bad and elapsed < 60,
           f"{len(formulas)} formulas + {len(terms)} terms over {len(ms)} isdef models, "
           f"{checks} checks, {len(bad)} violations, {elapsed:.1f}s")


# -- 3. worked isdef expansion ----------------------------------------------

def test_criterion_3_worked_expansion(report):
    th = parse_theory((DATA / "real.3th").read_text())
    term = parse_term("div(sqrt(plus(v1, v2)), plus(v2, one))", th.sig)
    expected = [
        "E! sqrt(plus(v1, v2)) /\\ E! plus(v2, one) /\\ (not (plus(v2, one) = zero))",
        "(E! plus(v1, v2) /\\ ge(plus(v1, v2), zero)) /\\ (E! v2 /\\ E! one /\\ T)"
        " /\\ (not (plus(v2, one) = zero))",
        "((E! v1 /\\ E! v2 /\\ T) /\\ ge(plus(v1, v2), zero)) /\\ (T /\\ T /\\ T)"
        " /\\ (not (plus(v2, one) = zero))",
        "((T /\\ T /\\ T) /\\ ge(plus(v1, v2), zero)) /\\ (T /\\ T /\\ T)"
        " /\\ (not (plus(v2, one) = zero))",
    ]
    chain = isdef_chain(th, term)
    ast_ok = chain == [parse_formula(line, th.sig) for line in expected]
    text_ok = [print_formula(stage) for stage in chain] == \
        [print_formula(parse_formula(line, th.sig)) for line in expected]
    final_ok = chain[-1] == isdef_term(th, term)
    report(3, ast_ok and text_ok and final_ok,
           f"{len(chain)} stages, AST match {ast_ok}, printed match {text_ok}, "
           f"last stage is the computed isdef {final_ok}")


# -- 4. regularity -----------------------------------------------------------

def test_criterion_4_regularity(report):
    start = time.perf_counter()
    rng = random.Random(404)
    formulas = []
    while len(formulas) < 1000:
        phi = random_formula(rng, SIG, 4, nvars=3)
        if len(free_vars(phi)) <= 3:
            formulas.append(phi)
    structs = structures(SIG)
    failures, contexts = [], 0
    for phi in formulas:
        for s in structs:
            r = check_regular_formula(s, phi)
            contexts += r.checked
            if not r:
                failures.append((print_formula(phi), r))
    luk = check_regular_truth_table(LUKASIEWICZ_IMP)
    witness = (not luk) and luk.position is not None
    elapsed = time.perf_counter() - start
    report(4, not failures and witness,
           f"1000 formulas x {len(structs)} structures, {contexts} contexts, "
           f"{len(failures)} irregular; Lukasiewicz table: {luk}; {elapsed:.1f}s")


# -- 5. existential introduction at undefined terms --------------------------

def test_criterion_5_exists_intro(report):
    c = Const("c")
    th = Theory(SIG2, (), {"f": Not(Eq(Var(1), c))})
    t = App("f", (c,))
    x1 = Var(1)
    fixtures = [
        Or(Rel("p", (x1,)), Not(Rel("p", (x1,)))),
        Or(Eq(x1, x1), TRUE),
        Or(Rel("p", (x1,)), Eq(Const("e"), Const("e"))),
        Not(And(Rel("p", (x1,)), FALSE)),
        Or(TRUE, Eq(x1, c)),
        Exists(2, Or(Rel("p", (Var(2),)), Eq(x1, x1))),
    ]
    rng = random.Random(55)
    while len(fixtures) < 400:
        phi = random_formula(rng, SIG2, 3, nvars=2)
        if 1 in free_vars(phi) and is_free_for(t, 1, phi):
            fixtures.append(phi)
    ms = models(th)
    instances, bad = 0, []
    for phi in fixtures:
        inst = substitute(phi, 1, t)
        ex = Exists(1, phi)
        for s in ms:
            for nu in assignments(s.size, 2):
                assert eval_term(s, nu, t) is None
                if eval_formula(s, nu, inst) is T:
                    instances += 1
                    if eval_formula(s, nu, ex) is not T:
                        bad.append(print_formula(phi))
    # the kernel rule agrees: the instance alone yields the existential
    k = apply_rule(th, RuleInstance("ex-I", {"phi": fixtures[0], "x": 1, "t": t}), [])
    rule_ok = k == Judgment(frozenset({substitute(fixtures[0], 1, t)}), Exists(1, fixtures[0]))
    report(5, not bad and instances > 1000 and rule_ok,
           f"{len(fixtures)} formulas, {instances} true instances at an undefined term over "
           f"{len(ms)} models, {len(bad)} with a non-true existential")


# -- 6. replay of the transcribed proofs -------------------------------------

def test_criterion_6_kernel_replay(report):
    th = PARTIAL2
    scripts = ["c4", "c5", "d2", "c6", "or_c", "or_a", "or_a2", "permute",
               "contradict1", "contradict2", "contradict_use", "eq3", "eq4", "eq5"]
    failed = []
    for name in scripts:
        script = load_script(PROOFS / f"{name}.3pf")
        try:
            final = check_derivation(script.theory, script.derivation)
            flat = check_derivation(script.theory, expand(script.theory, script.derivation))
            if final != flat:
                failed.append(f"{name}: expansion differs")
        except KernelError as exc:
            failed.append(f"{name}: {exc}")

    # the permutation script passes through all six orders
    script = load_script(PROOFS / "permute.3pf")
    chained = [j.conclusion for j, s in zip(replay(script.theory, script.derivation).steps,
                                            script.derivation.steps) if not s.aside]
    a, b, g = (Rel("p", (Const("c"),)), Rel("p", (Const("e"),)), Eq(Const("c"), Const("e")))
    orders = {Or(x, Or(y, z)) for x, y, z in itertools.permutations((a, b, g))}
    if not orders <= set(chained):
        failed.append("permute: not every order reached")

    # every macro's statement, computed independently of the macro
    phi = Rel("p", (App("f", (Const("e"),)),))
    guard = isdef_formula(th, phi)
    c, e = Const("c"), Const("e")
    fc = App("f", (c,))
    J = lambda ctx, q: Judgment(frozenset(ctx), q)  # noqa: E731
    expected = {
        ("C4", ()): (dict(phi=phi), J({phi, Not(guard)}, FALSE)),
        ("C5", ()): (dict(phi=phi), J({Not(phi), Not(guard)}, FALSE)),
        ("D2", ()): (dict(phi=phi), J(set(), Or(guard, Not(guard)))),
        ("C6", ()): ({}, J(set(), TRUE)),
        ("or-C", ()): (dict(phi=a, psi=b), J({Or(a, b)}, Or(b, a))),
        ("or-A", ()): (dict(phi=a, psi=b, chi=g), J({Or(Or(a, b), g)}, Or(a, Or(b, g)))),
        ("or-A'", ()): (dict(phi=a, psi=b, chi=g), J({Or(Or(a, b), g)}, Or(a, Or(g, b)))),
        ("eq-3", ()): (dict(t=fc, i=1, t2=e), J({Eq(c, e), isdef_term(th, fc)},
                                                Eq(fc, App("f", (e,))))),
        ("eq-4", ()): (dict(t=fc, t2=e), J({Eq(fc, e)}, Eq(e, fc))),
        ("eq-5", ()): (dict(t1=c, t2=fc, t3=e), J({Eq(c, fc), Eq(fc, e)}, Eq(c, e))),
    }
    items = (a, b, g)
    for perm in PERMUTATIONS:
        x, y, z = (items[k] for k in perm)
        expected[("permute", perm)] = (dict(phi=a, psi=b, chi=g, perm=perm),
                                       J({Or(Or(a, b), g)}, Or(x, Or(y, z))))
    for (name, _), (args, statement) in expected.items():
        d = derive_lemma(th, name, **args)
        if check_derivation(th, d) != statement or \
                check_derivation(th, expand(th, d)) != statement:
            failed.append(f"macro {name}{args.get('perm', '')}")
    trio = (phi, Not(phi), Not(guard))
    gamma = frozenset({Eq(c, e)})
    for perm in PERMUTATIONS:
        al, be, ga = (trio[k] for k in perm)
        d1 = derive_lemma(th, "contradict1", phi=phi, perm=perm, gamma=gamma)
        d2 = derive_lemma(th, "contradict2", phi=phi, perm=perm, gamma=gamma)
        if check_derivation(th, d1, [J(gamma | {al}, FALSE)]) != J(gamma, Or(be, ga)):
            failed.append(f"macro contradict1{perm}")
        if check_derivation(th, d2, [J(gamma | {al}, FALSE), J(gamma | {be}, FALSE)]) != \
                J(gamma, ga):
            failed.append(f"macro contradict2{perm}")
    total = len(scripts) + len(expected) + 2 * len(PERMUTATIONS)
    report(6, not failed, f"{len(scripts)} scripts and {total - len(scripts)} macro instances "
                          f"checked; failures: {failed or 'none'}")


# -- 7. empirical soundness --------------------------------------------------

class JudgmentFactory:
    """Grows a pool of kernel-accepted judgments by random rule applications."""

    LEAF_RULES = ("P1", "C1", "C2", "C3", "D1", "and-I", "and-E1", "and-E2", "or-I1",
                  "or-I2", "eq-1", "eq-2", "all-E", "ex-I")
    LEMMAS = ("C4", "C5", "D2", "C6", "or-C", "or-A", "or-A'", "permute", "eq-3", "eq-4",
              "eq-5")

    def __init__(self, th: Theory, seed: int):
        self.th = th
        self.rng = random.Random(seed)
        self.pool: list[Judgment] = []
        self.by_conclusion: dict = {}
        self.fired: dict[str, int] = {}

    def formula(self):
        return random_formula(self.rng, self.th.sig, 3, nvars=3)

    def term(self):
        return random_term(self.rng, self.th.sig, 1, 3)

    def apply(self, name, args, premises=()):
        j = apply_rule(self.th, RuleInstance(name, args), list(premises))
        self.fired[name] = self.fired.get(name, 0) + 1
        return j

    def widen(self, j, ctx):
        return j if j.context == ctx else self.apply("P2", {"delta": ctx}, [j])

    def leaf(self):
        rng, name = self.rng, self.rng.choice(self.LEAF_RULES)
        phi, psi = self.formula(), self.formula()
        x = rng.randint(1, 3)
        if name in ("P1", "C1", "C2", "C3", "D1"):
            return self.apply(name, {"phi": phi})
        if name.startswith(("and", "or")):
            return self.apply(name, {"phi": phi, "psi": psi})
        if name == "eq-1":
            return self.apply(name, {"t": self.term()})
        if name == "eq-2":
            return self.apply(name, {"phi": phi, "x": x, "t": self.term(), "t2": self.term()})
        return self.apply(name, {"phi": phi, "x": x, "t": self.term()})

    def from_lemma(self):
        name = self.rng.choice(self.LEMMAS)
        f = [self.formula() for _ in range(3)]
        args = {
            "C4": {"phi": f[0]}, "C5": {"phi": f[0]}, "D2": {"phi": f[0]}, "C6": {},
            "or-C": {"phi": f[0], "psi": f[1]},
            "or-A": {"phi": f[0], "psi": f[1], "chi": f[2]},
            "or-A'": {"phi": f[0], "psi": f[1], "chi": f[2]},
            "permute": {"phi": f[0], "psi": f[1], "chi": f[2],
                        "perm": self.rng.choice(PERMUTATIONS)},
            "eq-3": {"t": App("f", (self.term(),)), "i": 1, "t2": self.term()},
            "eq-4": {"t": self.term(), "t2": self.term()},
            "eq-5": {"t1": self.term(), "t2": self.term(), "t3": self.term()},
        }[name]
        self.fired[name] = self.fired.get(name, 0) + 1
        return lemma_statement(self.th, name, **args)

    def weaken(self):
        j = self.rng.choice(self.pool)
        return self.widen(j, j.context | {self.formula()})

    def cut(self):
        j2 = self.rng.choice(self.pool)
        if not j2.context:
            return None
        psi = self.rng.choice(sorted(j2.context, key=print_formula))
        options = self.by_conclusion.get(psi)
        if not options:
            return None
        j1 = self.rng.choice(options)
        gamma = j1.context | (j2.context - {psi})
        return self.apply("P3", {}, [self.widen(j1, gamma), self.widen(j2, gamma | {psi})])

    def cases(self):
        j1 = self.rng.choice(self.pool)
        options = self.by_conclusion.get(j1.conclusion, [])
        j2 = self.rng.choice(options)
        if not j1.context or not j2.context:
            return None
        phi = self.rng.choice(sorted(j1.context, key=print_formula))
        psi = self.rng.choice(sorted(j2.context, key=print_formula))
        gamma = (j1.context - {phi}) | (j2.context - {psi})
        return self.apply("or-E", {"phi": phi, "psi": psi, "gamma": gamma},
                          [self.widen(j1, gamma | {phi}), self.widen(j2, gamma | {psi})])

    def generalise(self):
        j = self.rng.choice(self.pool)
        return self.apply("all-I", {"x": self.rng.randint(1, 3)}, [j])

    def witness(self):
        j = self.rng.choice(self.pool)
        if not j.context:
            return None
        inst = self.rng.choice(sorted(j.context, key=print_formula))
        ys = sorted(free_vars(inst))
        if not ys:
            return None
        y = self.rng.choice(ys)
        x = max(all_vars(inst)) + 1
        phi = substitute(inst, y, Var(x))
        return self.apply("ex-E", {"phi": phi, "x": x, "y": y}, [j])

    def step(self):
        moves = [self.leaf, self.leaf, self.from_lemma]
        if self.pool:
            moves += [self.weaken, self.cut, self.cut, self.cases, self.generalise, self.witness]
        try:
            j = self.rng.choice(moves)()
        except KernelError:
            return None
        if j is None or len(j.context) > 3:
            return None
        if j not in self.by_conclusion.get(j.conclusion, []):
            self.pool.append(j)
            self.by_conclusion.setdefault(j.conclusion, []).append(j)
        return j


def test_criterion_7_empirical_soundness(report):
    start = time.perf_counter()
    th = PARTIAL2
    factory = JudgmentFactory(th, seed=7)
    while len(factory.pool) < 500:
        factory.step()
    judgments = factory.pool[:500]
    refuted = []
    for j in judgments:
        res = find_countermodel(th.with_axioms(sorted(j.context, key=print_formula)),
                                j.conclusion, 3)
        if isinstance(res, CounterModel):
            refuted.append(str(j))
    # sensitivity: dropping the definedness premise of all-E is detected
    p = Rel("p", (Var(1),))
    unsound = find_countermodel(th.with_axioms([Forall(1, p)]),
                                Rel("p", (App("f", (Const("e"),)),)), 3)
    composite = sum(factory.fired.get(k, 0) for k in ("P3", "or-E", "all-I", "ex-E"))
    elapsed = time.perf_counter() - start
    report(7, not refuted and bool(unsound) and elapsed < 600,
           f"{len(judgments)} judgments (|context| <= 3, {composite} cut/case/quantifier "
           f"steps), {len(refuted)} with a countermodel at |D| <= 3; unguarded all-E "
           f"refuted: {bool(unsound)}; {elapsed:.1f}s")


# -- 8. trichotomy -----------------------------------------------------------

def test_criterion_8_trichotomy(report):
    rng = random.Random(8)
    formulas = [random_formula(rng, SIG, 3, nvars=2, term_depth=2) for _ in range(1000)]
    ms = models(PARTIAL)
    bad, checks = [], 0
    for phi in formulas:
        three = (phi, Not(phi), Not(isdef_formula(PARTIAL, phi)))
        for s in ms:
            for nu in assignments(s.size, 2):
                checks += 1
                if sum(eval_formula(s, nu, x) is T for x in three) != 1:
                    bad.append(print_formula(phi))
    report(8, not bad, f"{len(formulas)} formulas x {len(ms)} models, {checks} checks, "
                       f"{len(bad)} violations")


# -- 9. De Morgan and renaming -----------------------------------------------

def test_criterion_9_de_morgan_and_renaming(report):
    rng = random.Random(9)
    structs = structures(SIG)
    pairs = [(random_formula(rng, SIG, 3), random_formula(rng, SIG, 3)) for _ in range(300)]
    bad, checks = [], 0
    for phi, psi in pairs:
        laws = [
            (Not(And(phi, psi)), Or(Not(phi), Not(psi))),
            (Not(Or(phi, psi)), And(Not(phi), Not(psi))),
        ]
        for x in (1, 2):
            laws.append((Not(Forall(x, phi)), Exists(x, Not(phi))))
            laws.append((Not(Exists(x, phi)), Forall(x, Not(phi))))
            j = max(all_vars(phi), default=0) + 1
            renamed = substitute(phi, x, Var(j))
            laws.append((Forall(j, renamed), Forall(x, phi)))
            laws.append((Exists(j, renamed), Exists(x, phi)))
        for s in structs:
            for nu in assignments(s.size, 2):
                for left, right in laws:
                    checks += 1
                    if eval_formula(s, nu, left) != eval_formula(s, nu, right):
                        bad.append((print_formula(left), print_formula(right)))
    report(9, not bad, f"{len(pairs)} formula pairs x {len(structs)} structures, "
                       f"{checks} equalities, {len(bad)} mismatches")


# -- 10. the inconclusive contract -------------------------------------------

def test_criterion_10_bounded_search_contract(report):
    sig = Signature(set(), {}, {"p": 1})
    v = [Var(i) for i in range(1, 5)]
    distinct = [Not(Eq(a, b)) for a, b in itertools.combinations(v, 2)]
    body = distinct[0]
    for d in distinct[1:]:
        body = And(body, d)
    four = Exists(1, Exists(2, Exists(3, Exists(4, body))))
    goal = Not(four)             # "at most three elements", not valid
    th = Theory(sig)
    small = find_countermodel(th, goal, 3)
    large = find_countermodel(th, goal, 4)
    contract = (isinstance(small, NoneUpToBound) and not small and small.max_n == 3
                and isinstance(large, CounterModel) and large.structure.size == 4)
    from ternlog.cli import INCONCLUSIVE, run_cli
    import io
    out = io.StringIO()
    code = run_cli(["consequence", str(DATA / "pc.3th"), "p(c)", "--max-n", "2"], out,
                   io.StringIO())
    cli_ok = code == INCONCLUSIVE and out.getvalue().startswith("NONE-UP-TO")
    report(10, contract and cli_ok,
           "completeness is not executable; substitute: criterion 7 plus the contract. "
           f"'at most three elements' gives {type(small).__name__}({small.max_n}) at bound 3 "
           f"and a {large.structure.size}-element countermodel at bound 4; "
           f"CLI reports NONE-UP-TO with exit {code}")
