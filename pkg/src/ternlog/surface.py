"""Concrete text syntax for formulas and terms.

Grammar, loosest binding first::

    formula := quant | iff
    quant   := ("forall" | "exists" | "sforall" | "sexists" | "lexists") var formula
    iff     := imp { "<->" imp }                      left-assoc
    imp     := or [ ("->" | "~>" | "=>" | "|>" | "||>") imp ]   right-assoc
    or      := and { ("\\/" | "|" | "||") and }       left-assoc
    and     := unary { ("/\\" | "&" | "&&") unary }   left-assoc
    unary   := ("not" | "*") (unary | quant) | atom
    atom    := "F" | "T" | "E!" term | rel "(" terms ")" | term "=" term | "(" formula ")"
    term    := var | const | func "(" terms ")" | "ite" "(" formula "," term "," term ")"

A quantifier extends as far right as possible, also when it follows a
binary operator.  ``# ...`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    And, App, Const, Eq, Exists, FalseLit, Forall, Formula, Not, Or, Rel, Signature,
    Term, TrueLit, Var,
)
from .errors import ArityMismatch, ParseError, UnknownSymbol


# -- sugared constructors ----------------------------------------------------

class Sugar(Formula):
    """Marker base for metalanguage operators that ``translate`` lowers."""
    __slots__ = ()


@dataclass(frozen=True)
class KleeneImp(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class KleeneIff(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class LukImp(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class StrictImp(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class GuardedImp(Sugar):
    """``not (a /\\ *a) \\/ b``: Modus Ponens and the Deduction Theorem both hold."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class GuardedImp2(Sugar):
    """``not (a /\\ *a) \\/ (b /\\ *b)``."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class StrictAnd(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class StrictOr(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class McCarthyAnd(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class McCarthyOr(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class StrictForall(Sugar):
    var: int
    body: Formula


@dataclass(frozen=True)
class StrictExists(Sugar):
    var: int
    body: Formula


@dataclass(frozen=True)
class LehmannExists(Sugar):
    var: int
    body: Formula


@dataclass(frozen=True)
class Star(Sugar):
    body: Formula


@dataclass(frozen=True)
class EBang(Sugar):
    term: Term


@dataclass(frozen=True)
class IteTerm(Term):
    cond: Formula
    then: Term
    other: Term


SugaredFormula = Formula

# (token, class, precedence tier, associativity)
BINARY_OPS: list[tuple[str, type, int, str]] = [
    ("<->", KleeneIff, 1, "left"),
    ("->", KleeneImp, 2, "right"),
    ("~>", LukImp, 2, "right"),
    ("=>", StrictImp, 2, "right"),
    ("|>", GuardedImp, 2, "right"),
    ("||>", GuardedImp2, 2, "right"),
    ("\\/", Or, 3, "left"),
    ("|", StrictOr, 3, "left"),
    ("||", McCarthyOr, 3, "left"),
    ("/\\", And, 4, "left"),
    ("&", StrictAnd, 4, "left"),
    ("&&", McCarthyAnd, 4, "left"),
]
_OP_BY_TOKEN = {tok: (cls, prec, assoc) for tok, cls, prec, assoc in BINARY_OPS}
_OP_BY_CLASS = {cls: (tok, prec, assoc) for tok, cls, prec, assoc in BINARY_OPS}
_PREC_UNARY = 5

QUANTIFIERS = {
    "forall": Forall, "exists": Exists, "sforall": StrictForall,
    "sexists": StrictExists, "lexists": LehmannExists,
}
_QUANT_BY_CLASS = {cls: kw for kw, cls in QUANTIFIERS.items()}


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<var>v[0-9]+(?![A-Za-z0-9_]))
  | (?P<ebang>E!)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|\|\|>|\|>|->|~>|=>|\\/|/\\|\|\||\||&&|&|\*|=|\(|\)|,)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text=text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, expected=(), cls=ParseError, pos=None):
        return cls(msg, self.tok.pos if pos is None else pos, expected, self.text)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "ident", "ebang") and self.tok.text in texts

    def finish(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", ("end of input",))

    # formulas

    def formula(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in QUANTIFIERS:
            return self.quant()
        return self.binary(1)

    def quant(self) -> Formula:
        cls = QUANTIFIERS[self.tok.text]
        self.i += 1
        if self.tok.kind != "var":
            raise self.error("quantifier needs a variable", ("v<digits>",))
        var = self.var()
        return cls(var, self.formula())

    def var(self) -> int:
        index = int(self.tok.text[1:])
        if index < 1:
            raise self.error("variable indices start at v1")
        self.i += 1
        return index

    def binary(self, tier: int) -> Formula:
        if tier > 4:
            return self.unary()
        left = self.binary(tier + 1)
        while self.tok.kind == "op" and self.tok.text in _OP_BY_TOKEN:
            cls, prec, assoc = _OP_BY_TOKEN[self.tok.text]
            if prec != tier:
                break
            self.i += 1
            if self.tok.kind == "ident" and self.tok.text in QUANTIFIERS:
                right = self.quant()
            elif assoc == "right":
                right = self.binary(tier)
            else:
                right = self.binary(tier + 1)
            left = cls(left, right)
            if assoc == "right":
                break
        return left

    def unary(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text == "not":
            self.i += 1
            return Not(self.unary_operand())
        if self.tok.text == "*" and self.tok.kind == "op":
            if "*" in self.sig.functions and self.peek().text == "(":
                saved = self.i
                try:
                    return self.atom()
                except ParseError:
                    self.i = saved
            self.i += 1
            return Star(self.unary_operand())
        return self.atom()

    def unary_operand(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in QUANTIFIERS:
            return self.quant()
        return self.unary()

    def atom(self) -> Formula:
        tok = self.tok
        if tok.kind == "ident" and tok.text == "F":
            self.i += 1
            return FalseLit()
        if tok.kind == "ident" and tok.text == "T":
            self.i += 1
            return TrueLit()
        if tok.kind == "ebang":
            self.i += 1
            return EBang(self.term())
        if tok.text == "(" and tok.kind == "op":
            self.i += 1
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text in self.sig.relations:
            self.i += 1
            args = self.args(tok)
            arity = self.sig.relations[tok.text]
            if len(args) != arity:
                raise ArityMismatch(
                    f"relation {tok.text} has arity {arity}, got {len(args)} arguments",
                    tok.pos, text=self.text)
            return Rel(tok.text, args)
        if tok.kind == "eof":
            raise self.error("unexpected end of input", ("formula",))
        left = self.term()
        self.expect("=")
        return Eq(left, self.term())

    def args(self, head: Token) -> tuple[Term, ...]:
        self.expect("(")
        out = [self.term()]
        while self.at(","):
            self.i += 1
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    # terms

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "var":
            return Var(self.var())
        if tok.kind == "ident" and tok.text == "ite":
            self.i += 1
            self.expect("(")
            cond = self.formula()
            self.expect(",")
            then = self.term()
            self.expect(",")
            other = self.term()
            self.expect(")")
            return IteTerm(cond, then, other)
        name = tok.text
        if (tok.kind == "ident" and name not in ("F", "T", "not")) or (tok.kind == "op" and name == "*"):
            if name in self.sig.constants:
                self.i += 1
                return Const(name)
            if name in self.sig.functions:
                self.i += 1
                args = self.args(tok)
                arity = self.sig.functions[name]
                if len(args) != arity:
                    raise ArityMismatch(
                        f"function {name} has arity {arity}, got {len(args)} arguments",
                        tok.pos, text=self.text)
                return App(name, args)
            if tok.kind == "ident":
                if name in self.sig.relations:
                    raise self.error(f"relation {name} used as a term", ("term",))
                raise UnknownSymbol(f"unknown symbol {name!r}", tok.pos, text=self.text)
        raise self.error(f"unexpected {name or 'end of input'!r}", ("term",))


def parse_formula(text: str, sig: Signature) -> Formula:
    p = _Parser(text, sig)
    out = p.formula()
    p.finish()
    return out


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    out = p.term()
    p.finish()
    return out


# -- printer -----------------------------------------------------------------

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"v{t.index}"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, App):
        return f"{t.func}({', '.join(print_term(a) for a in t.args)})"
    if isinstance(t, IteTerm):
        return f"ite({print_formula(t.cond)}, {print_term(t.then)}, {print_term(t.other)})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(phi: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``phi``."""
    return _pr(phi, 0, True)


def _pr(phi: Formula, ctx: int, tail: bool) -> str:
    if isinstance(phi, FalseLit):
        return "F"
    if isinstance(phi, TrueLit):
        return "T"
    if isinstance(phi, Eq):
        return f"{print_term(phi.left)} = {print_term(phi.right)}"
    if isinstance(phi, Rel):
        return f"{phi.name}({', '.join(print_term(a) for a in phi.args)})"
    if isinstance(phi, EBang):
        return f"E! {print_term(phi.term)}"
    if isinstance(phi, (Not, Star)):
        op = "not " if isinstance(phi, Not) else "* "
        return op + _pr(phi.body, _PREC_UNARY, tail)
    cls = type(phi)
    if cls in _QUANT_BY_CLASS:
        body = _pr(phi.body, 0, True)
        s = f"{_QUANT_BY_CLASS[cls]} v{phi.var} {body}"
        return s if tail else f"({s})"
    if cls in _OP_BY_CLASS:
        tok, prec, assoc = _OP_BY_CLASS[cls]
        wrap = prec < ctx
        inner_tail = True if wrap else tail
        if assoc == "left":
            left = _pr(phi.left, prec, False)
            right = _pr(phi.right, prec + 1, inner_tail)
        else:
            left = _pr(phi.left, prec + 1, False)
            right = _pr(phi.right, prec, inner_tail)
        s = f"{left} {tok} {right}"
        return f"({s})" if wrap else s
    raise TypeError(f"not a formula: {phi!r}")
