"""World-views of epistemic programs under the modal-reduct semantics ES18
and ES16.

Candidates are generated by guessing which epistemic negations (``not K l``
and ``M l``) hold, building the reduct for that guess, and keeping the guess
when the answer sets of the reduct reproduce it exactly.  Surviving views are
then filtered by subset-maximality of their satisfied epistemic negations and
finally by world-view constraints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .asp import (
    DEFAULT_MAX_ATOMS,
    BeliefView,
    answer_sets,
    classical_s5_check,
    format_view,
    satisfies_subjective,
)
from .errors import BoundExceeded, UnsupportedFeature
from .syntax import (
    ExtendedObjectiveLiteral,
    ExtendedSubjectiveLiteral,
    Modality,
    ObjectiveLiteral,
    Program,
    Rule,
)

DEFAULT_MAX_EP = 12


class Semantics(str, enum.Enum):
    ES15 = "es15"
    ES16 = "es16"
    ES18 = "es18"
    ES20 = "es20"
    ES21 = "es21"

    def __str__(self) -> str:
        return self.value.upper()


class EpForm(str, enum.Enum):
    NOT_K = "not K"
    M = "M"


@dataclass(frozen=True, order=True)
class EpistemicNegation:
    form: EpForm
    lit: ObjectiveLiteral

    def __str__(self) -> str:
        return f"{self.form.value} {self.lit}"

    def holds(self, view: BeliefView) -> bool:
        if self.form is EpForm.NOT_K:
            return not all(self.lit in v for v in view)
        return any(self.lit in v for v in view)


@dataclass(frozen=True)
class EpAssignment:
    universe: frozenset
    satisfied: frozenset

    def __post_init__(self):
        if not self.satisfied <= self.universe:
            raise ValueError("satisfied epistemic negations must come from the universe")


@dataclass
class CandidateTrace:
    """Bookkeeping for one guessed set of epistemic negations."""

    guess: frozenset
    reduct: Program
    answer_sets: frozenset
    fixed_point: bool
    maximal: bool | None = None
    wv_filtered: bool | None = None

    def describe(self) -> str:
        guess = "{" + ", ".join(sorted(map(str, self.guess))) + "}"
        views = format_view(self.answer_sets) if self.answer_sets else "no answer sets"
        if not self.fixed_point:
            verdict = "fixed point fails"
        elif self.maximal is False:
            verdict = "not maximal"
        elif self.wv_filtered:
            verdict = "removed by world-view constraint"
        else:
            verdict = "world-view"
        return f"guess {guess}: {views}: {verdict}"


@dataclass
class WorldViewResult:
    semantics: Semantics
    views: frozenset
    diagnostics: list = field(default_factory=list)


def epistemic_negation(e: ExtendedSubjectiveLiteral) -> EpistemicNegation:
    m = e.subj.modality
    if m is Modality.KHAT:
        raise UnsupportedFeature("KHAT is not part of the reduct semantics' language")
    return EpistemicNegation(EpForm.NOT_K if m is Modality.K else EpForm.M, e.subj.lit)


def ep_set(prog: Program) -> frozenset:
    """Epistemic negations of the non-world-view rules of ``prog``."""
    return frozenset(
        epistemic_negation(e)
        for r in prog.rules if not r.wv
        for e in r.body if isinstance(e, ExtendedSubjectiveLiteral)
    )


def satisfied_ep(prog: Program, view: BeliefView) -> EpAssignment:
    universe = ep_set(prog)
    return EpAssignment(universe, frozenset(g for g in universe if g.holds(view)))


_TOP, _BOT = object(), object()


def _reduce_element(e: ExtendedSubjectiveLiteral, guess: frozenset, variant: Semantics):
    """Replacement for one subjective body element, with satisfaction read off
    the guessed epistemic negations."""
    lit = e.subj.lit
    g = epistemic_negation(e)
    if g.form is EpForm.NOT_K:
        k_holds = g not in guess
        if not e.negated:  # K l
            if not k_holds:
                return _BOT
            naf = 0 if variant is Semantics.ES18 else 2
            return ExtendedObjectiveLiteral(lit, naf)
        # not K l
        return _TOP if not k_holds else ExtendedObjectiveLiteral(lit, 1)
    m_holds = g in guess
    if not e.negated:  # M l
        return _TOP if m_holds else ExtendedObjectiveLiteral(lit, 2)
    # not M l
    return _BOT if m_holds else ExtendedObjectiveLiteral(lit, 1)


def _check_variant(variant: Semantics):
    variant = Semantics(variant)
    if variant not in (Semantics.ES16, Semantics.ES18):
        raise ValueError(f"reduct semantics must be ES16 or ES18, got {variant}")
    return variant


def reduct_for(prog: Program, guess: Iterable[EpistemicNegation], variant: Semantics) -> Program:
    """The modal reduct of ``prog`` as if exactly ``guess`` were satisfied.

    World-view constraints are left out; they never take part in the reduct.
    """
    variant = _check_variant(variant)
    guess = frozenset(guess)
    rules = []
    for r in prog.rules:
        if r.wv:
            continue
        body = []
        for e in r.body:
            if isinstance(e, ExtendedObjectiveLiteral):
                body.append(e)
                continue
            new = _reduce_element(e, guess, variant)
            if new is _BOT:
                break
            if new is not _TOP:
                body.append(new)
        else:
            rules.append(Rule(r.head, tuple(body)))
    return Program(tuple(rules))


def modal_reduct(prog: Program, view: BeliefView, variant: Semantics) -> Program:
    """Replace every subjective literal according to whether ``view``
    satisfies it; the result is an objective program."""
    return reduct_for(prog, satisfied_ep(prog, view).satisfied, variant)


def apply_wv_constraints(views: Iterable[BeliefView], prog: Program) -> frozenset:
    """Drop every view that satisfies the body of some ``:-wv`` rule."""
    wv_rules = [r for r in prog.rules if r.wv]
    return frozenset(
        view for view in views
        if not any(all(satisfies_subjective(view, e) for e in r.body) for r in wv_rules)
    )


def world_views_reduct(
    prog: Program,
    variant: Semantics,
    max_ep: int = DEFAULT_MAX_EP,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> WorldViewResult:
    """World-views of ``prog`` under ES18 or ES16.

    Raises:
        BoundExceeded: if there are more than ``max_ep`` epistemic negations or
            more than ``max_atoms`` atoms.
        UnsupportedFeature: on KHAT, or on ``:-wv`` rules under ES16.
    """
    variant = _check_variant(variant)
    if variant is Semantics.ES16 and any(r.wv for r in prog.rules):
        raise UnsupportedFeature("world-view constraints are only defined for ES18")
    universe = sorted(ep_set(prog))
    if len(universe) > max_ep:
        raise BoundExceeded("max_ep", max_ep, len(universe))
    if len(prog.atoms) > max_atoms:
        raise BoundExceeded("max_atoms", max_atoms, len(prog.atoms))
    objective = Program(tuple(r for r in prog.rules if not r.wv))

    traces: list[CandidateTrace] = []
    kept: list[CandidateTrace] = []
    for size in range(len(universe) + 1):
        for guess in combinations(universe, size):
            guess = frozenset(guess)
            red = reduct_for(prog, guess, variant)
            views = answer_sets(red, max_atoms)
            fixed = (bool(views)
                     and frozenset(g for g in universe if g.holds(views)) == guess
                     and classical_s5_check(views, objective))
            trace = CandidateTrace(guess, red, views, fixed)
            traces.append(trace)
            if fixed:
                kept.append(trace)

    for t in kept:
        t.maximal = not any(t.guess < other.guess for other in kept)
    maximal = [t for t in kept if t.maximal]
    survivors = apply_wv_constraints((t.answer_sets for t in maximal), prog)
    for t in maximal:
        t.wv_filtered = t.answer_sets not in survivors
    return WorldViewResult(variant, survivors, traces)

