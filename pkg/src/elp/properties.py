"""One entry point for all five semantics, plus property checkers.

``solve`` dispatches ES16/ES18 to the reduct solver and ES15/ES20/ES21 to the
equilibrium solver on the program's EHT translation, returning views over
objective literals in every case.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import equilibrium
from .asp import DEFAULT_MAX_ATOMS, answer_sets, classical_s5_check, format_view
from .eht import Mode, classical_model_check, translation
from .errors import UnsupportedFeature
from .reduct import DEFAULT_MAX_EP, Semantics, WorldViewResult, world_views_reduct
from .syntax import Program, Rule

ALL_SEMANTICS = (Semantics.ES15, Semantics.ES16, Semantics.ES18, Semantics.ES20, Semantics.ES21)
REDUCT_SEMANTICS = (Semantics.ES16, Semantics.ES18)


@dataclass(frozen=True)
class Bounds:
    """Search limits shared by every solver.

    ``max_periphery=None`` lifts the cap on periphery worlds.
    """

    max_atoms: int = DEFAULT_MAX_ATOMS
    max_models: int = equilibrium.DEFAULT_MAX_MODELS
    max_periphery: int | None = equilibrium.DEFAULT_MAX_PERIPHERY
    max_ep: int = DEFAULT_MAX_EP

    def __post_init__(self):
        for name in ("max_atoms", "max_models", "max_ep"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_periphery is not None and self.max_periphery < 0:
            raise ValueError("max_periphery must be nonnegative")


def format_views(views: Iterable[frozenset]) -> str:
    return "{" + ", ".join(sorted(format_view(v) for v in views)) + "}"


def solve(
    prog: Program,
    semantics: Semantics | str,
    bounds: Bounds = Bounds(),
    functional_minimality: bool = False,
) -> WorldViewResult:
    """World-views (or AEEMs) of ``prog`` under one semantics.

    Diagnostics are human-readable strings: the per-guess trace for the
    reduct semantics, eliminated candidates and ordering conflicts otherwise.
    ``functional_minimality`` only affects ES21.
    """
    semantics = Semantics(semantics)
    if semantics in REDUCT_SEMANTICS:
        res = world_views_reduct(prog, semantics, bounds.max_ep, bounds.max_atoms)
        return WorldViewResult(semantics, res.views, [t.describe() for t in res.diagnostics])
    tr = translation(prog)
    if semantics is Semantics.ES15:
        sel = equilibrium.select_aeem15(tr.formula, bounds.max_models, bounds.max_atoms)
    else:
        mode = Mode.KD45 if semantics is Semantics.ES20 else Mode.SW5
        sel = equilibrium.select_aeem_relational(
            tr.formula, mode, bounds.max_models, bounds.max_periphery, bounds.max_atoms,
            functional_minimality=functional_minimality and semantics is Semantics.ES21,
        )
    views = frozenset(tr.view(v) for v in sel.views)
    return WorldViewResult(semantics, views, list(sel.diagnostics))


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    program: Program
    per_semantics: Mapping
    notes: list = field(default_factory=list)

    def groups(self) -> list:
        """Semantics grouped by identical output, in first-seen order."""
        out: dict = {}
        for s, views in self.per_semantics.items():
            out.setdefault(views, []).append(s)
        return list(out.values())

    def agree(self, a: Semantics | str, b: Semantics | str) -> bool:
        return self.per_semantics[Semantics(a)] == self.per_semantics[Semantics(b)]

    @property
    def divergences(self) -> list:
        keys = list(self.per_semantics)
        return [(a, b) for i, a in enumerate(keys) for b in keys[i + 1:] if not self.agree(a, b)]

    def table(self) -> str:
        width = max(len(str(s)) for s in self.per_semantics)
        rows = []
        for s, views in self.per_semantics.items():
            text = format_views(views) if views else "no world-views"
            rows.append(f"{str(s):<{width}}  {text}")
        return "\n".join(rows + self.notes)


def compare(
    prog: Program,
    semantics: Iterable[Semantics | str] = ALL_SEMANTICS,
    bounds: Bounds = Bounds(),
) -> ComparisonReport:
    chosen = sorted({Semantics(s) for s in semantics}, key=ALL_SEMANTICS.index)
    if not chosen:
        raise ValueError("select at least one semantics")
    per = {s: solve(prog, s, bounds).views for s in chosen}
    notes = []
    if Semantics.ES16 in per and Semantics.ES18 in per and per[Semantics.ES16] != per[Semantics.ES18]:
        notes.append(f"ES16 and ES18 diverge: {format_views(per[Semantics.ES16])} vs "
                     f"{format_views(per[Semantics.ES18])}")
    return ComparisonReport(prog, per, notes)


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------


class Property(str, enum.Enum):
    SUPRA_ASP = "supra-asp"
    SUPRA_S5 = "supra-s5"
    SCM = "scm"


@dataclass(frozen=True)
class Witness:
    fragment: Program
    views: frozenset

    def __str__(self) -> str:
        return f"{format_views(self.views)} for {' '.join(map(str, self.fragment.rules))}"


@dataclass(frozen=True)
class PropertyVerdict:
    property: Property
    semantics: Semantics
    holds: bool
    witness: Witness | None = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failed verdict needs a witness")

    def __str__(self) -> str:
        status = "holds" if self.holds else f"fails, witness {self.witness}"
        return f"{self.property.value} under {self.semantics}: {status}"


def check_scm(prog: Program, constraint: Rule, semantics: Semantics | str,
              bounds: Bounds = Bounds()) -> PropertyVerdict:
    """Adding a subjective constraint may only remove world-views."""
    if not constraint.is_subjective_constraint:
        raise ValueError(f"'{constraint}' is not a subjective constraint")
    semantics = Semantics(semantics)
    before = solve(prog, semantics, bounds).views
    extended = prog + constraint
    new = solve(extended, semantics, bounds).views - before
    if new:
        return PropertyVerdict(Property.SCM, semantics, False, Witness(extended, new))
    return PropertyVerdict(Property.SCM, semantics, True)


def check_supra_asp(prog: Program, semantics: Semantics | str,
                    bounds: Bounds = Bounds()) -> PropertyVerdict:
    """A non-epistemic program's only world-view is its set of answer sets."""
    if prog.is_epistemic:
        raise UnsupportedFeature("supra-ASP applies to non-epistemic programs only")
    semantics = Semantics(semantics)
    views = solve(prog, semantics, bounds).views
    found = answer_sets(prog, bounds.max_atoms)
    expected = frozenset([found]) if found else frozenset()
    if views == expected:
        return PropertyVerdict(Property.SUPRA_ASP, semantics, True)
    return PropertyVerdict(Property.SUPRA_ASP, semantics, False, Witness(prog, views))


def check_supra_s5(prog: Program, semantics: Semantics | str,
                   bounds: Bounds = Bounds()) -> PropertyVerdict:
    """Every world-view is a classical S5 model of the program."""
    semantics = Semantics(semantics)
    views = solve(prog, semantics, bounds).views
    if semantics in REDUCT_SEMANTICS:
        bad = frozenset(v for v in views if not classical_s5_check(v, prog))
    else:
        tr = translation(prog)
        bad = frozenset(v for v in views
                        if not classical_model_check([tr.world(x) for x in v], tr.formula))
    if bad:
        return PropertyVerdict(Property.SUPRA_S5, semantics, False, Witness(prog, bad))
    return PropertyVerdict(Property.SUPRA_S5, semantics, True)
