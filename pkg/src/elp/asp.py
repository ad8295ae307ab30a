"""Classical answer set programming over ground programs.

Valuations are frozensets of :class:`ObjectiveLiteral`; belief views are
nonempty frozensets of valuations.  ``~p`` behaves like a fresh atom that may
not hold together with ``p``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Union

from .errors import BoundExceeded, UnsupportedFeature
from .syntax import (
    BodyElement,
    ExtendedObjectiveLiteral,
    ExtendedSubjectiveLiteral,
    Modality,
    ObjectiveLiteral,
    Program,
    Rule,
)

Valuation = frozenset  # frozenset[ObjectiveLiteral]
BeliefView = frozenset  # frozenset[Valuation]

DEFAULT_MAX_ATOMS = 12

LiteralLike = Union[str, ObjectiveLiteral]


def literal(x: LiteralLike) -> ObjectiveLiteral:
    """Coerce ``"p"``/``"~p"`` to an :class:`ObjectiveLiteral`."""
    if isinstance(x, ObjectiveLiteral):
        return x
    x = x.strip()
    if x.startswith("~"):
        return ObjectiveLiteral(x[1:], True)
    return ObjectiveLiteral(x)


def is_consistent(lits: Iterable[ObjectiveLiteral]) -> bool:
    lits = set(lits)
    return not any(l.negated and l.complement in lits for l in lits)


def valuation(*lits: LiteralLike) -> Valuation:
    """Build a consistent valuation, e.g. ``valuation("a", "~b")``."""
    v = frozenset(literal(x) for x in lits)
    if not is_consistent(v):
        raise ValueError(f"inconsistent valuation {sorted(map(str, v))}")
    return v


def belief_view(*vals: Iterable[LiteralLike]) -> BeliefView:
    """Build a belief view, e.g. ``belief_view(["a"], ["b"])``."""
    view = frozenset(valuation(*v) for v in vals)
    if not view:
        raise ValueError("a belief view must be nonempty")
    return view


def format_valuation(v: Valuation) -> str:
    return "{" + ",".join(sorted(map(str, v))) + "}"


def format_view(view: BeliefView) -> str:
    return "{" + ", ".join(sorted(format_valuation(v) for v in view)) + "}"


# ---------------------------------------------------------------------------
# Satisfaction
# ---------------------------------------------------------------------------


def satisfies_objective(v: Valuation, e: ExtendedObjectiveLiteral) -> bool:
    return (e.lit in v) == (e.naf != 1)


def satisfies_subjective(view: BeliefView, e: ExtendedSubjectiveLiteral) -> bool:
    lit = e.subj.lit
    if e.subj.modality is Modality.K:
        holds = all(lit in v for v in view)
    else:
        # M and KHAT coincide on total (classical) models
        holds = any(lit in v for v in view)
    return holds != e.negated


def satisfies_element(view: BeliefView, v: Valuation, e: BodyElement) -> bool:
    if isinstance(e, ExtendedObjectiveLiteral):
        return satisfies_objective(v, e)
    return satisfies_subjective(view, e)


def satisfies_rule(view: BeliefView, v: Valuation, rule: Rule) -> bool:
    if all(satisfies_element(view, v, e) for e in rule.body):
        return any(l in v for l in rule.head)
    return True


def classical_s5_check(view: BeliefView, prog: Program) -> bool:
    """True iff every rule holds at every valuation of ``view``."""
    if not view:
        raise ValueError("a belief view must be nonempty")
    return all(satisfies_rule(view, v, r) for v in view for r in prog.rules)


# ---------------------------------------------------------------------------
# Gelfond-Lifschitz reduct and answer sets
# ---------------------------------------------------------------------------


def _require_objective(prog: Program):
    for r in prog.rules:
        if r.is_epistemic or r.wv:
            raise UnsupportedFeature(f"rule '{r}' is epistemic; expected an objective program")


def gl_reduct(prog: Program, candidate: Valuation) -> Program:
    """Remove default negation relative to ``candidate``.

    ``not l`` is dropped when ``l`` is not in the candidate and otherwise kills
    the rule; ``not not l`` is dropped when ``l`` is in it and otherwise kills
    the rule.
    """
    _require_objective(prog)
    out = []
    for r in prog.rules:
        body = []
        for e in r.body:
            if e.naf == 0:
                body.append(e)
            elif (e.lit in candidate) != (e.naf == 2):
                break
        else:
            out.append(Rule(r.head, tuple(body)))
    return Program(tuple(out))


def answer_sets(prog: Program, max_atoms: int = DEFAULT_MAX_ATOMS) -> frozenset:
    """All answer sets of an objective (non-epistemic) program.

    Candidates are the consistent subsets of head literals; a candidate is
    kept iff it is a subset-minimal model of its own reduct.

    Raises:
        UnsupportedFeature: if ``prog`` has subjective literals.
        BoundExceeded: if ``prog`` has more than ``max_atoms`` atoms.
    """
    _require_objective(prog)
    n = len(prog.atoms)
    if n > max_atoms:
        raise BoundExceeded("max_atoms", max_atoms, n)
    return _answer_sets(prog)


@lru_cache(maxsize=1 << 16)
def _answer_sets(prog: Program) -> frozenset:
    lits = sorted(prog.literals)
    index = {l: i for i, l in enumerate(lits)}

    def mask(xs: Iterable[ObjectiveLiteral]) -> int:
        m = 0
        for x in xs:
            m |= 1 << index[x]
        return m

    rules = []
    for r in prog.rules:
        rules.append((
            mask(r.head),
            mask(e.lit for e in r.body if e.naf == 0),
            mask(e.lit for e in r.body if e.naf == 1),
            mask(e.lit for e in r.body if e.naf == 2),
        ))
    head_mask = 0
    for h, *_ in rules:
        head_mask |= h
    clashes = [mask([l, l.complement]) for l in lits if l.negated and l.complement in index]

    def is_model(x: int, reduct) -> bool:
        return all(not (pos & ~x == 0) or (h & x) for h, pos in reduct)

    found = []
    cand = head_mask
    while True:
        if not any(cand & c == c for c in clashes):
            reduct = [(h, pos) for h, pos, naf1, naf2 in rules
                      if not naf1 & cand and naf2 & ~cand == 0]
            if is_model(cand, reduct):
                minimal = True
                sub = (cand - 1) & cand
                while cand:
                    if is_model(sub, reduct):
                        minimal = False
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & cand
                if minimal:
                    found.append(frozenset(lits[i] for i in range(len(lits)) if cand >> i & 1))
        if cand == 0:
            break
        cand = (cand - 1) & head_mask
    return frozenset(found)
