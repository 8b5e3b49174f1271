"""Proof scripts (``.3pf``).

::

    theory partial.3th                  # declares isdef f := v1 = c
    context: p(f(e)); not (T /\\ e = c)
    1. D1[phi := p(f(e))] |- T /\\ e = c
    2. C3[phi := T /\\ e = c] |- F

Each numbered step is::

    n. [aside] [lemma] NAME[arg := value, ...] [from i, j] [|- claim]
    n. hyp {formula; ...} |- formula

Arguments may also be written in parentheses.  ``from`` cites earlier step
numbers; context formulas are available to every chained step without being
cited.  The word ``axioms`` in the context line stands for the theory's
axioms.  Values are surface formulas (desugared against the theory), terms,
variables ``v3``, integers, permutations ``(1, 2, 0)`` or formula sets
``{a; b}``, according to the parameter.

A one-line compressed form is also accepted by :func:`parse_compressed`:
``{p(c); not T} |-D1 T |-C3 F``.  Its rule arguments are found by trying
the context and the claims.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from ..core import Formula, subformulas
from ..errors import KernelError, ParseError, TernlogError, WellFormednessError
from ..isdef import Theory
from ..surface import IteTerm, parse_formula, parse_term, print_formula, print_term
from ..translate import desugar
from .derivation import Derivation, Step, replay
from .lemmas import LEMMAS
from .rules import OPTIONAL, RULES, Judgment, RuleInstance, apply_rule, canonical_name

_STEP_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.*)$")
_NAME_RE = re.compile(r"[A-Za-z0-9∧∨∀∃=_'′-]+")
_VAR_RE = re.compile(r"^v?([0-9]+)$")


@dataclass(frozen=True)
class ProofScript:
    theory_path: Optional[str]
    theory: Theory
    derivation: Derivation


def param_kinds(kind: str, name: str) -> dict[str, str]:
    """Parameter name -> value kind for a rule or lemma."""
    name = canonical_name(name)
    if kind == "lemma":
        if name not in LEMMAS:
            raise KeyError(name)
        return dict(LEMMAS[name][1])
    if name not in RULES:
        raise KeyError(name)
    return dict((*RULES[name][0], *OPTIONAL.get(name, ())))


# -- low-level splitting -----------------------------------------------------

_OPEN, _CLOSE = "([{", ")]}"


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` where no bracket is open."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return out


def _find_top(text: str, needle: str, start: int = 0) -> int:
    depth = 0
    for i in range(start, len(text)):
        ch = text[i]
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
        elif depth == 0 and text.startswith(needle, i):
            return i
    return -1


def _matching(text: str, i: int) -> int:
    depth = 0
    for j in range(i, len(text)):
        if text[j] in _OPEN:
            depth += 1
        elif text[j] in _CLOSE:
            depth -= 1
            if depth == 0:
                return j
    return -1


# -- values ------------------------------------------------------------------

class _Reader:
    """Parses values against one theory, reporting positions in the whole text."""

    def __init__(self, th: Theory, text: str):
        self.th = th
        self.text = text

    def error(self, message: str, pos: int, expected=()) -> ParseError:
        return ParseError(message, pos, tuple(expected), self.text)

    def formula(self, src: str, pos: int) -> Formula:
        lead = len(src) - len(src.lstrip())
        try:
            phi = parse_formula(src.strip(), self.th.sig)
            return desugar(self.th, phi)
        except ParseError as exc:
            raise type(exc)(exc.message, pos + lead + exc.pos, exc.expected, self.text) from None
        except WellFormednessError as exc:
            raise self.error(str(exc), pos + lead) from None

    def formulas(self, src: str, pos: int) -> frozenset:
        body = src.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise self.error("expected a formula set", pos, ("{...}",))
        inner_pos = pos + src.index("{") + 1
        inner = body[1:-1]
        out, offset = [], 0
        for part in _split_top(inner, ";"):
            if part.strip():
                out.append(self.formula(part, inner_pos + offset))
            offset += len(part) + 1
        return frozenset(out)

    def term(self, src: str, pos: int):
        lead = len(src) - len(src.lstrip())
        try:
            t = parse_term(src.strip(), self.th.sig)
        except ParseError as exc:
            raise type(exc)(exc.message, pos + lead + exc.pos, exc.expected, self.text) from None
        if _contains_ite(t):
            raise self.error("ite is only allowed inside atomic formulas", pos + lead)
        return t

    def value(self, kind: str, src: str, pos: int):
        s = src.strip()
        if kind == "formula":
            return self.formula(src, pos)
        if kind == "formulas":
            return self.formulas(src, pos)
        if kind == "term":
            return self.term(src, pos)
        if kind == "var":
            m = _VAR_RE.match(s)
            if not m or int(m[1]) < 1:
                raise self.error(f"expected a variable, got {s!r}", pos, ("v1", "v2"))
            return int(m[1])
        if kind == "int":
            if not s.isdigit():
                raise self.error(f"expected an integer, got {s!r}", pos)
            return int(s)
        if kind == "perm":
            if not (s.startswith("(") and s.endswith(")")):
                raise self.error("expected a permutation", pos, ("(i, j, k)",))
            try:
                return tuple(int(x) for x in s[1:-1].split(","))
            except ValueError:
                raise self.error(f"bad permutation {s!r}", pos) from None
        raise self.error(f"unknown parameter kind {kind!r}", pos)  # pragma: no cover


def _contains_ite(t) -> bool:
    if isinstance(t, IteTerm):
        return True
    return any(_contains_ite(a) for a in getattr(t, "args", ()))


# -- scripts -----------------------------------------------------------------

def _lines(text: str):
    pos = 0
    for raw in text.splitlines(keepends=True):
        body = raw.split("#", 1)[0].rstrip()
        yield pos, body
        pos += len(raw)


def parse_script(text: str, theory: Theory | None = None,
                 loader: Callable[[str], Theory] | None = None) -> ProofScript:
    """Parse a proof script.

    ``theory`` is used directly if given; otherwise the ``theory`` header is
    resolved with ``loader`` (a function from the header's path to a
    :class:`Theory`).
    """
    theory_path: Optional[str] = None
    context_src: Optional[tuple[str, int]] = None
    steps_src: list[tuple[int, str, int]] = []
    for pos, line in _lines(text):
        stripped = line.strip()
        if not stripped:
            continue
        lead = len(line) - len(line.lstrip())
        if stripped.startswith("theory ") and not steps_src:
            theory_path = stripped[len("theory "):].strip()
        elif stripped.startswith("context:") and not steps_src:
            at = line.index("context:") + len("context:")
            context_src = (line[at:], pos + at)
        else:
            m = _STEP_RE.match(line)
            if not m:
                raise ParseError("expected a numbered step", pos + lead, ("n. RULE",), text)
            steps_src.append((int(m[1]), m[2], pos + m.start(2)))
    if theory is None:
        if theory_path is None or loader is None:
            raise ParseError("no theory given", 0, ("theory <file>",), text)
        theory = loader(theory_path)
    reader = _Reader(theory, text)
    context: set = set()
    if context_src is not None:
        src, at = context_src
        offset = 0
        for part in _split_top(src, ";"):
            if part.strip() == "axioms":
                context |= set(theory.axioms)
            elif part.strip():
                context.add(reader.formula(part, at + offset))
            offset += len(part) + 1
    steps = []
    for expected, (number, body, at) in enumerate(steps_src, start=1):
        if number != expected:
            raise ParseError(f"step {number} should be numbered {expected}", at, text=text)
        steps.append(_parse_step(reader, body, at, number))
    return ProofScript(theory_path, theory, Derivation(context, steps))


def _parse_step(reader: _Reader, body: str, at: int, number: int) -> Step:
    text = body
    i = 0

    def skip_ws():
        nonlocal i
        while i < len(text) and text[i].isspace():
            i += 1

    def keyword(word: str) -> bool:
        nonlocal i
        skip_ws()
        if re.match(rf"{re.escape(word)}\b", text[i:]):
            i += len(word)
            return True
        return False

    aside = keyword("aside")
    if keyword("hyp"):
        turn = _find_top(text, "|-", i)
        if turn < 0:
            raise reader.error("a hyp step needs '|- formula'", at + i, ("|-",))
        ctx = reader.formulas(text[i:turn], at + i)
        concl = reader.formula(text[turn + 2:], at + turn + 2)
        return Step("hyp", hyp=Judgment(ctx, concl))
    kind = "lemma" if keyword("lemma") else "rule"
    skip_ws()
    m = _NAME_RE.match(text, i)
    if not m:
        raise reader.error("expected a rule name", at + i, ("rule name",))
    name = canonical_name(m[0])
    i = m.end()
    try:
        kinds = param_kinds(kind, name)
    except KeyError:
        what = "lemma" if kind == "lemma" else "rule"
        raise reader.error(f"unknown {what} {name!r}", at + m.start()) from None
    args = {}
    skip_ws()
    if i < len(text) and text[i] in "[(":
        close = _matching(text, i)
        if close < 0:
            raise reader.error("unclosed argument list", at + i, ("]",))
        inner, base = text[i + 1:close], i + 1
        offset = 0
        for part in _split_top(inner, ","):
            if part.strip():
                key, sep, value = part.partition(":=")
                if not sep:
                    raise reader.error("expected 'name := value'", at + base + offset, (":=",))
                key = key.strip()
                if key not in kinds:
                    raise reader.error(f"{name} has no parameter {key!r}", at + base + offset,
                                       tuple(sorted(kinds)))
                vpos = at + base + offset + part.index(":=") + 2
                args[key] = reader.value(kinds[key], value, vpos)
            offset += len(part) + 1
        i = close + 1
    premises: tuple[int, ...] = ()
    if keyword("from"):
        turn = _find_top(text, "|-", i)
        refs = text[i:turn if turn >= 0 else len(text)]
        try:
            premises = tuple(int(r) - 1 for r in refs.split(",") if r.strip())
        except ValueError:
            raise reader.error(f"bad step references {refs.strip()!r}", at + i) from None
        if any(not 0 <= p < number - 1 for p in premises):
            raise reader.error("a step may only cite earlier steps", at + i)
        i = turn if turn >= 0 else len(text)
    claim = None
    skip_ws()
    if text.startswith("|-", i):
        claim = reader.formula(text[i + 2:], at + i + 2)
        i = len(text)
    skip_ws()
    if i < len(text):
        raise reader.error(f"unexpected {text[i:]!r}", at + i, ("from", "|-"))
    return Step(kind, name, args, premises, aside, claim)


# -- printing ----------------------------------------------------------------

def _show(kind: str, value) -> str:
    if kind == "formula":
        return print_formula(value)
    if kind == "formulas":
        return "{" + "; ".join(sorted(print_formula(f) for f in value)) + "}"
    if kind == "term":
        return print_term(value)
    if kind == "var":
        return f"v{value}"
    if kind == "perm":
        return "(" + ", ".join(str(k) for k in value) + ")"
    return str(value)


def format_script(th: Theory, d: Derivation, theory_path: str | None = None,
                  claims: bool = True) -> str:
    """Render ``d`` as a script that :func:`parse_script` reads back to ``d``.

    With ``claims`` every rule and lemma step states the conclusion it
    yields, which requires ``d`` to check.
    """
    made = replay(th, d).steps if claims else None
    lines = []
    if theory_path:
        lines.append(f"theory {theory_path}")
    lines.append("context: " + "; ".join(sorted(print_formula(f) for f in d.context)))
    for n, step in enumerate(d.steps, start=1):
        head = f"{n}. " + ("aside " if step.aside and step.kind != "hyp" else "")
        if step.kind == "hyp":
            ctx = _show("formulas", step.hyp.context)
            lines.append(f"{head}hyp {ctx} |- {print_formula(step.hyp.conclusion)}")
            continue
        kinds = param_kinds(step.kind, step.name)
        parts = [f"{k} := {_show(kinds[k], v)}" for k, v in step.args.items()]
        s = head + ("lemma " if step.kind == "lemma" else "") + step.name
        if parts:
            s += "[" + ", ".join(parts) + "]"
        if step.premises:
            s += " from " + ", ".join(str(p + 1) for p in step.premises)
        claim = made[n - 1].conclusion if made is not None else step.claim
        if claim is not None:
            s += f" |- {print_formula(claim)}"
        lines.append(s)
    return "\n".join(lines) + "\n"


def load_script(path: str | Path, theory: Theory | None = None) -> ProofScript:
    """Read a script file, resolving its ``theory`` header relative to the script."""
    from ..formats import parse_theory

    path = Path(path)

    def loader(rel: str) -> Theory:
        return parse_theory((path.parent / rel).read_text())

    return parse_script(path.read_text(), theory, loader)


# -- compressed one-line form ------------------------------------------------

_COMPRESSED_STEP = re.compile(r"\|-\s*([A-Za-z0-9∧∨∀∃=_'′-]+)")


def parse_compressed(th: Theory, text: str) -> Derivation:
    """Read ``{ctx} |-R1 phi1 |-R2 phi2 ...`` and reconstruct each step's arguments.

    Only premise-free rules whose parameters are all formulas are supported;
    candidate instances come from the context, the earlier conclusions and
    the subformulas of the claim.
    """
    reader = _Reader(th, text)
    start = text.index("{") if "{" in text else -1
    if start < 0:
        raise reader.error("expected a context", 0, ("{",))
    close = _matching(text, start)
    if close < 0:
        raise reader.error("unclosed context", start, ("}",))
    context, offset = set(), start + 1
    inner = text[start + 1:close]
    sep = ";" if _find_top(inner, ";") >= 0 else ","
    for part in _split_top(inner, sep):
        if part.strip():
            context.add(reader.formula(part, offset))
        offset += len(part) + 1
    pool = set(context)
    steps = []
    marks = [m for m in _COMPRESSED_STEP.finditer(text, close + 1)]
    if not marks:
        raise reader.error("expected at least one step", close + 1, ("|-RULE",))
    for k, m in enumerate(marks):
        end = marks[k + 1].start() if k + 1 < len(marks) else len(text)
        claim = reader.formula(text[m.end():end], m.end())
        name = canonical_name(m[1])
        step = _reconstruct(th, name, claim, pool)
        if step is None:
            raise KernelError(f"step {k + 1}: no instance of {name} yields "
                              f"{print_formula(claim)} from the available formulas")
        steps.append(step)
        pool.add(claim)
    return Derivation(context, steps)


def _reconstruct(th: Theory, name: str, claim: Formula, pool: set) -> Step | None:
    if name not in RULES:
        return None
    params, n_premises = RULES[name]
    if n_premises or any(kind != "formula" for _, kind in params):
        return None
    candidates = set(pool)
    for f in [*pool, claim]:
        candidates.update(subformulas(f))
    ordered = sorted(candidates, key=print_formula)
    names = [p for p, _ in params]
    for combo in itertools.product(ordered, repeat=len(names)):
        args = dict(zip(names, combo))
        try:
            j = apply_rule(th, RuleInstance(name, args), [])
        except TernlogError:
            continue
        if j.conclusion == claim and j.context <= pool:
            return Step("rule", name, args, claim=claim)
    return None
