from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import SIG, formulas, terms
from ternlog import FALSE, TRUE, And, App, Const, Eq, Exists, Forall, Not, Or, Rel, Signature, Var
from ternlog.core import (
    all_vars, arity_formula, bound_vars, check_formula, check_term, conj, disj, free_vars,
    functions_in, is_free_for, literally_equal, rename_bound_fresh, renumber_binders,
    subformulas, substitute, substitute_many, term_vars,
)
from ternlog.errors import CaptureError, WellFormednessError

x1, x2, x3 = Var(1), Var(2), Var(3)
c = Const("c")


def f(t):
    return App("f", (t,))


def p(t):
    return Rel("p", (t,))


class TestSignature:
    def test_disjoint_names(self):
        with pytest.raises(WellFormednessError):
            Signature({"a"}, {"a": 1}, {})

    @pytest.mark.parametrize("name", ["T", "F", "not", "v3", "forall"])
    def test_reserved(self, name):
        with pytest.raises(WellFormednessError):
            Signature({name})

    def test_positive_arity(self):
        with pytest.raises(WellFormednessError):
            Signature(set(), {"g": 0})

    def test_extend_and_hash(self):
        bigger = SIG.extend(constants={"d"}, relations={"q": 2})
        assert "d" in bigger.constants and bigger.relations["q"] == 2
        assert hash(SIG) == hash(Signature({"c"}, {"f": 1}, {"p": 1}))


class TestWellFormed:
    def test_good(self):
        check_formula(SIG, Forall(1, Or(p(f(x1)), Eq(x1, c))))

    @pytest.mark.parametrize("bad", [
        Rel("q", (c,)), Rel("p", (c, c)), Eq(App("g", (c,)), c), Eq(App("f", (c, c)), c),
        Eq(Const("d"), c),
    ])
    def test_bad(self, bad):
        with pytest.raises(WellFormednessError):
            check_formula(SIG, bad)

    def test_term(self):
        check_term(SIG, f(f(x2)))
        with pytest.raises(WellFormednessError):
            check_term(SIG, App("f", ()))

    def test_var_index(self):
        with pytest.raises(WellFormednessError):
            Var(0)


class TestVariables:
    def test_free_and_bound(self):
        phi = And(Forall(1, p(x1)), Eq(x1, x2))
        assert free_vars(phi) == {1, 2}
        assert bound_vars(phi) == {1}
        assert all_vars(phi) == {1, 2}
        assert arity_formula(phi) == 2

    def test_vacuous_binder_counts_in_all_vars(self):
        assert all_vars(Exists(3, TRUE)) == {3}
        assert free_vars(Exists(3, TRUE)) == set()

    def test_functions_in(self):
        assert functions_in(Not(p(f(f(c))))) == {"f"}

    def test_subformulas_preorder(self):
        phi = Or(Not(p(c)), TRUE)
        assert list(subformulas(phi)) == [phi, Not(p(c)), p(c), TRUE]

    def test_conj_disj_left_assoc(self):
        a, b, d = p(c), TRUE, FALSE
        assert conj(a, b, d) == And(And(a, b), d)
        assert disj(a, b, d) == Or(Or(a, b), d)
        assert conj(a) == a


class TestSubstitution:
    def test_simple(self):
        assert substitute(Eq(x1, x2), 1, f(c)) == Eq(f(c), x2)

    def test_bound_occurrence_untouched(self):
        phi = And(p(x1), Forall(1, p(x1)))
        assert substitute(phi, 1, c) == And(p(c), Forall(1, p(x1)))

    def test_capture_refused(self):
        phi = Forall(2, Eq(x1, x2))
        assert not is_free_for(x2, 1, phi)
        with pytest.raises(CaptureError):
            substitute(phi, 1, f(x2))

    def test_capture_only_where_variable_occurs(self):
        # v1 does not occur under the binder, so nothing can be captured
        phi = And(p(x1), Forall(2, p(x2)))
        assert is_free_for(x2, 1, phi)
        assert substitute(phi, 1, x2) == And(p(x2), Forall(2, p(x2)))

    def test_simultaneous(self):
        phi = Eq(x1, x2)
        assert substitute_many(phi, {1: x2, 2: x1}) == Eq(x2, x1)

    @given(formulas(SIG, 3), terms(SIG, 3))
    def test_identity_substitution(self, phi, t):
        assert substitute(phi, 1, Var(1)) == phi

    @given(formulas(SIG, 2), st.sampled_from([c, f(c)]))
    def test_closed_term_always_free_for(self, phi, t):
        out = substitute(phi, 1, t)
        assert 1 not in free_vars(out)
        assert free_vars(out) == free_vars(phi) - {1}


class TestRenaming:
    def test_rename_bound_fresh(self):
        phi = And(p(x1), Forall(2, Eq(x2, x1)))
        out = rename_bound_fresh(phi, {2})
        assert out == And(p(x1), Forall(3, Eq(Var(3), x1)))

    def test_renumber_binders(self):
        phi = Or(Forall(1, p(x1)), Exists(1, Eq(x1, x2)))
        assert renumber_binders(phi, 2) == Or(Forall(3, p(x3)), Exists(4, Eq(Var(4), x2)))

    @settings(max_examples=50)
    @given(formulas(SIG, 2))
    def test_renaming_keeps_free_variables(self, phi):
        assert free_vars(rename_bound_fresh(phi, {1, 2})) == free_vars(phi)
        start = max(all_vars(phi), default=0)
        assert free_vars(renumber_binders(phi, start)) == free_vars(phi)

    def test_literally_equal(self):
        assert literally_equal(Forall(1, p(x1)), Forall(1, p(x1)))
        assert not literally_equal(Forall(1, p(x1)), Forall(2, p(x2)))


def test_term_vars():
    assert term_vars(App("f", (x3,))) == {3}
    assert term_vars(c) == set()
