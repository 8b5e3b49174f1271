"""Derivations in compressed form and their checker.

A derivation starts from a context ``gamma``.  Each step yields a judgment,
either by a primitive rule, by a derived lemma, or as a hypothesis (a
premise of a derived rule).  A *chained* step must only use formulas of
``gamma`` and earlier chained conclusions, and its conclusion joins the
pool; an *aside* step is a side judgment that later steps may cite as a
premise.  The derivation proves ``gamma |- phi_n`` for the last chained
conclusion ``phi_n``; the checker builds that judgment explicitly with P1,
P2 and P3, so nothing escapes :func:`apply_rule`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from ..core import Formula
from ..errors import IsdefMismatch, KernelError, SchemaMismatch, SideConditionViolated, StepFailed
from ..isdef import Theory
from ..surface import print_formula
from .rules import GUARDED, Judgment, RuleInstance, apply_rule, canonical_name


@dataclass(frozen=True)
class Step:
    """One line of a derivation.

    ``kind`` is ``"rule"``, ``"lemma"`` or ``"hyp"``.  ``premises`` are
    0-based indices of earlier steps.  ``claim`` is the conclusion the author
    expects, checked literally when present.  A hyp step carries its
    judgment in ``hyp``.
    """

    kind: str
    name: str = ""
    args: Mapping[str, Any] = field(default_factory=dict)
    premises: tuple[int, ...] = ()
    aside: bool = False
    claim: Optional[Formula] = None
    hyp: Optional[Judgment] = None

    def __post_init__(self):
        if self.kind not in ("rule", "lemma", "hyp"):
            raise ValueError(f"unknown step kind {self.kind!r}")
        object.__setattr__(self, "name", canonical_name(self.name))
        object.__setattr__(self, "args", dict(self.args))
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.kind == "hyp":
            if self.hyp is None:
                raise ValueError("a hyp step needs its judgment")
            object.__setattr__(self, "aside", True)

    def __hash__(self):
        return hash((self.kind, self.name, self.premises, self.aside, self.claim, self.hyp))

    @property
    def label(self) -> str:
        return "hyp" if self.kind == "hyp" else self.name


def rule(name: str, premises: Sequence[int] = (), aside: bool = False,
         claim: Formula | None = None, **args) -> Step:
    return Step("rule", name, args, tuple(premises), aside, claim)


def lemma(name: str, premises: Sequence[int] = (), aside: bool = False,
          claim: Formula | None = None, **args) -> Step:
    return Step("lemma", name, args, tuple(premises), aside, claim)


def hyp(context, conclusion: Formula) -> Step:
    return Step("hyp", hyp=Judgment(frozenset(context), conclusion))


@dataclass(frozen=True)
class Derivation:
    context: frozenset
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "context", frozenset(self.context))
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def hypotheses(self) -> list[Judgment]:
        return [s.hyp for s in self.steps if s.kind == "hyp"]


@dataclass(frozen=True)
class Replay:
    """Judgments produced by each step, and the final judgment of the derivation."""

    steps: tuple[Judgment, ...]
    final: Judgment
    hypotheses: tuple[Judgment, ...] = ()


def _fold(th: Theory, gamma: frozenset, chain: Sequence[tuple[Judgment, Formula]]) -> Judgment:
    """Turn ``gamma |-> phi_1 |-> ... |-> phi_n`` into ``gamma |- phi_n`` with P1, P2, P3."""
    contexts = [gamma]
    for _, phi in chain:
        contexts.append(contexts[-1] | {phi})
    last = chain[-1][1]
    result = apply_rule(th, RuleInstance("P1", {"phi": last}), [])
    result = apply_rule(th, RuleInstance("P2", {"delta": contexts[-1]}), [result])
    for k in range(len(chain) - 1, -1, -1):
        raw, _ = chain[k]
        widened = apply_rule(th, RuleInstance("P2", {"delta": contexts[k]}), [raw])
        result = apply_rule(th, RuleInstance("P3"), [widened, result])
    return result


def replay(th: Theory, d: Derivation, bindings: Sequence[Judgment] | None = None) -> Replay:
    """Check ``d`` step by step.

    With ``bindings``, the i-th hyp step must literally equal ``bindings[i]``;
    without, hyp steps are accepted as assumptions and reported back.
    """
    from .lemmas import derive_lemma

    made: list[Judgment] = []
    chain: list[tuple[Judgment, Formula]] = []
    pool = set(d.context)
    hyps: list[Judgment] = []
    for index, step in enumerate(d.steps):
        try:
            for p in step.premises:
                if not 0 <= p < index:
                    raise SchemaMismatch(step.label, f"premise {p + 1} is not an earlier step")
            cited = [made[p] for p in step.premises]
            if step.kind == "hyp":
                if bindings is not None:
                    k = len(hyps)
                    if k >= len(bindings) or bindings[k] != step.hyp:
                        raise SchemaMismatch("hyp", f"premise judgment {step.hyp} was not supplied")
                hyps.append(step.hyp)
                judgment = step.hyp
            elif step.kind == "rule":
                judgment = apply_rule(th, RuleInstance(step.name, step.args), cited)
            else:
                sub = derive_lemma(th, step.name, **step.args)
                if len(cited) != len(sub.hypotheses):
                    raise SchemaMismatch(step.name, f"expects {len(sub.hypotheses)} premise "
                                                    f"judgments, got {len(cited)}")
                judgment = replay(th, sub, cited).final
            if step.claim is not None and step.claim != judgment.conclusion:
                shown = print_formula(step.claim), print_formula(judgment.conclusion)
                if step.kind == "rule" and step.name in GUARDED:
                    raise IsdefMismatch(step.name, *shown)
                raise SchemaMismatch(step.label, f"claimed {shown[0]} but the step yields {shown[1]}")
            if not step.aside:
                missing = [f for f in judgment.context if f not in pool]
                if missing:
                    raise SideConditionViolated(
                        step.label, "premise not available in the context",
                        print_formula(sorted(missing, key=print_formula)[0]))
                chain.append((judgment, judgment.conclusion))
                pool.add(judgment.conclusion)
            made.append(judgment)
        except StepFailed as exc:
            raise StepFailed(index + 1, exc) from exc
        except KernelError as exc:
            raise StepFailed(index + 1, exc) from exc
    if not chain:
        raise SchemaMismatch("derivation", "no chained step: nothing is concluded")
    if d.steps[-1].aside:
        raise SchemaMismatch("derivation", "the last step must be chained")
    final = _fold(th, d.context, chain)
    return Replay(tuple(made), final, tuple(hyps))


def check_derivation(th: Theory, d: Derivation,
                     bindings: Sequence[Judgment] | None = None) -> Judgment:
    """The judgment ``d`` proves; raises :class:`StepFailed` naming the first bad step."""
    return replay(th, d, bindings).final


# -- expansion ---------------------------------------------------------------

class _Builder:
    """Primitive steps under construction, with the judgment each one yields."""

    def __init__(self, th: Theory):
        self.th = th
        self.steps: list[Step] = []
        self.made: list[Judgment] = []

    def add(self, step: Step, judgment: Judgment | None = None) -> int:
        if judgment is None:
            cited = [self.made[p] for p in step.premises]
            judgment = apply_rule(self.th, RuleInstance(step.name, step.args), cited)
        self.steps.append(step)
        self.made.append(judgment)
        return len(self.steps) - 1

    def fold(self, gamma: frozenset, chain: Sequence[int], aside: bool) -> int:
        """Emit the P1/P2/P3 steps proving ``gamma |- phi_n`` from the chained steps."""
        conclusions = [self.made[i].conclusion for i in chain]
        contexts = [gamma]
        for phi in conclusions:
            contexts.append(contexts[-1] | {phi})
        result = self.add(rule("P1", aside=True, phi=conclusions[-1]))
        result = self.add(rule("P2", [result], aside=True, delta=contexts[-1]))
        for k in range(len(chain) - 1, -1, -1):
            widened = self.add(rule("P2", [chain[k]], aside=True, delta=contexts[k]))
            last = k == 0
            result = self.add(rule("P3", [widened, result], aside=aside if last else True))
        return result

    def inline(self, d: Derivation, bind: Sequence[int], aside: bool) -> int:
        """Copy ``d`` as primitive aside steps plus its fold; return the fold's index.

        ``bind[i]`` is the index of the step matching d's i-th hyp step.
        """
        from .lemmas import derive_lemma

        where: list[int] = []
        chain: list[int] = []
        hyps_seen = 0
        for step in d.steps:
            premises = tuple(where[p] for p in step.premises)
            if step.kind == "hyp":
                where.append(bind[hyps_seen])
                hyps_seen += 1
                continue
            if step.kind == "rule":
                at = self.add(Step("rule", step.name, step.args, premises, True))
            else:
                at = self.inline(derive_lemma(self.th, step.name, **step.args), premises, True)
            where.append(at)
            if not step.aside:
                chain.append(at)
        return self.fold(d.context, chain, aside)


def _expand(th: Theory, d: Derivation) -> tuple[Derivation, list[int]]:
    from .lemmas import derive_lemma

    b = _Builder(th)
    where: list[int] = []
    for step in d.steps:
        premises = tuple(where[p] for p in step.premises)
        if step.kind == "lemma":
            at = b.inline(derive_lemma(th, step.name, **step.args), premises, step.aside)
        elif step.kind == "hyp":
            at = b.add(step, step.hyp)
        else:
            at = b.add(Step("rule", step.name, step.args, premises, step.aside, step.claim))
        where.append(at)
    return Derivation(d.context, tuple(b.steps)), where


def expand(th: Theory, d: Derivation) -> Derivation:
    """Replace every lemma step by the primitive steps it stands for.

    A lemma step becomes aside copies of the lemma's derivation followed by
    the P1/P2/P3 fold rebuilding the lemma's judgment; the fold's last step
    takes over the original step's aside flag.  Checking the result yields
    the same judgments as checking ``d``.
    """
    return _expand(th, d)[0]


def step_map(th: Theory, d: Derivation) -> list[int]:
    """For each step of ``d``, the index of the step of ``expand(th, d)`` yielding its judgment."""
    return _expand(th, d)[1]
