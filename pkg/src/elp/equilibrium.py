"""Autoepistemic equilibrium models over EHT.

ES15 uses functional truth-minimality followed by knowledge-minimality
(subset maximality, then the ``<=_phi`` preorder).  ES20 and ES21 use
relational truth-minimality and discard a cluster when some proper extension
(cluster plus periphery worlds, in KD45 or SW5 mode) is itself an equilibrium
model.

Truth-minimality asks whether a non-identity here-assignment still satisfies
the formula.  Instead of enumerating assignments we guess the value of every
modal subformula at the cluster (these values are shared by all cluster
worlds), keep the here-sets consistent with the guess, and check that the
guess is realised.  Periphery worlds never influence the cluster, so each is
handled on its own given the cluster's guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .eht import (
    K_OP,
    CompiledFormula,
    Mode,
    RelationalEhtModel,
    World,
    all_worlds,
    format_world,
    frame_visibility,
    subsets,
    world_key,
)
from .errors import BoundExceeded
from .syntax import Formula

DEFAULT_MAX_MODELS = 16
DEFAULT_MAX_PERIPHERY = 2
DEFAULT_MAX_ATOMS = 12
DEFAULT_MAX_MODAL = 16


def format_worlds(view: Iterable[World]) -> str:
    return "{" + ", ".join(format_world(w) for w in sorted(view, key=world_key)) + "}"


def _compile(f: Formula | CompiledFormula, max_atoms: int) -> CompiledFormula:
    cf = f if isinstance(f, CompiledFormula) else CompiledFormula(f)
    if len(cf.atoms) > max_atoms:
        raise BoundExceeded("max_atoms", max_atoms, len(cf.atoms))
    if len(cf.modal) > DEFAULT_MAX_MODAL:
        raise BoundExceeded("max_modal", DEFAULT_MAX_MODAL, len(cf.modal))
    return cf


def _contexts(cf: CompiledFormula, tot: list | None = None, w: int = 0):
    """Guesses for the modal nodes.  With ``tot`` given, nodes false at world
    ``w`` of the total model stay false: by persistence a weaker model cannot
    make them true."""
    choices = [(False, True) if tot is None or tot[i][w] else (False,) for i in cf.modal]
    for bits in product(*choices):
        yield dict(zip(cf.modal, bits))


def _requirements(cf: CompiledFormula, ctx: dict):
    """Universal and existential demands a cluster context places on pieces.

    Each demand is ``(subformula node, wanted value)``.
    """
    universal, existential = [], []
    for i in cf.modal:
        kind, sub = cf.ops[i][0], cf.ops[i][1]
        if kind == K_OP:
            (universal if ctx[i] else existential).append((sub, ctx[i]))
        else:
            (existential if ctx[i] else universal).append((sub, ctx[i]))
    return universal, existential


# ---------------------------------------------------------------------------
# Classical models
# ---------------------------------------------------------------------------


def classical_s5_models(
    f: Formula | CompiledFormula,
    max_models: int = DEFAULT_MAX_MODELS,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> list:
    """All total S5 models (nonempty sets of worlds over ``atoms(f)``) of ``f``.

    Raises:
        BoundExceeded: if, for some guess of the modal subformulas, more than
            ``max_models`` worlds are candidates.
    """
    cf = _compile(f, max_atoms)
    key = ("classical", max_models)
    if key in cf.memo:
        return list(cf.memo[key])
    universe = all_worlds(cf.atoms)
    found = []
    for ctx in _contexts(cf):
        universal, existential = _requirements(cf, ctx)
        cands, masks = [], []
        for t in universe:
            v = cf.classical(t, ctx)
            if not v[cf.root] or any(v[s] != want for s, want in universal):
                continue
            cands.append(t)
            masks.append(sum(1 << k for k, (s, want) in enumerate(existential) if v[s] == want))
        if len(cands) > max_models:
            raise BoundExceeded("max_models", max_models, len(cands))
        full = (1 << len(existential)) - 1
        union = [0] * (1 << len(cands))
        for sel in range(1, 1 << len(cands)):
            low = (sel & -sel).bit_length() - 1
            union[sel] = union[sel & (sel - 1)] | masks[low]
            if union[sel] == full:
                found.append(frozenset(cands[k] for k in range(len(cands)) if sel >> k & 1))
    cf.memo[key] = sorted(found, key=_view_key)
    return list(cf.memo[key])


def _view_key(view: Iterable[World]) -> tuple:
    return tuple(sorted(world_key(w) for w in view))


# ---------------------------------------------------------------------------
# Truth-minimality
# ---------------------------------------------------------------------------


def _group_status(cf, tot, worlds, members, ctx, universal, existential,
                  designated, fixed, multivalued):
    """Whether some here-assignment on ``members`` meets the demands, and
    whether some such assignment differs from the identity.

    Returns ``(feasible, non_identity_feasible)``.
    """
    allowed = []
    for w in members:
        t = worlds[w]
        opts = []
        for h in ([t] if w in fixed else subsets(t)):
            v = cf.piece(h, w, ctx, tot)
            if w in designated and not v[cf.root]:
                continue
            if any(v[s] != want for s, want in universal):
                continue
            mask = sum(1 << k for k, (s, want) in enumerate(existential) if v[s] == want)
            opts.append((h == t, mask))
        if not opts:
            return False, False
        allowed.append(opts)
    full = (1 << len(existential)) - 1
    if multivalued:
        # taking every allowed here-set is optimal
        union = 0
        for opts in allowed:
            for _, mask in opts:
                union |= mask
        if union != full:
            return False, False
        return True, any(not ident for opts in allowed for ident, _ in opts)
    states = {(0, False)}
    for opts in allowed:
        states = {(m | pm, moved or not ident) for m, moved in states for ident, pm in opts}
    return (any(m == full for m, _ in states),
            any(m == full and moved for m, moved in states))


def _periphery_status(cf, tot, worlds, j, ctx_c, mode, multivalued):
    if mode is not Mode.SW5:
        return _group_status(cf, tot, worlds, [j], ctx_c, [], [], {j}, set(), multivalued)
    feasible = non_identity = False
    for ctx_b in _contexts(cf, tot, j):
        universal, existential = [], []
        consistent = True
        for i in cf.modal:
            kind, sub = cf.ops[i][0], cf.ops[i][1]
            b, c = ctx_b[i], ctx_c[i]
            if kind == K_OP:
                if b and not c:
                    consistent = False
                    break
                if b:
                    universal.append((sub, True))
                elif c:
                    existential.append((sub, False))
            else:
                if c and not b:
                    consistent = False
                    break
                if not b:
                    universal.append((sub, False))
                elif not c:
                    existential.append((sub, True))
        if not consistent:
            continue
        ok, moved = _group_status(cf, tot, worlds, [j], ctx_b, universal, existential,
                                  {j}, set(), multivalued)
        feasible |= ok
        non_identity |= moved
        if non_identity:
            break
    return feasible, non_identity


def weaker_model_exists(
    f: Formula | CompiledFormula,
    cluster: Sequence[World],
    periphery: Sequence[World] = (),
    mode: Mode = Mode.KD45,
    multivalued: bool = True,
    designated: Iterable[World] | None = None,
    fixed: Iterable[World] = (),
) -> bool:
    """True iff some non-identity here-assignment satisfies ``f`` at every
    designated world of the frame (cluster plus periphery).

    Args:
        multivalued: allow several here-sets per world; otherwise exactly one.
        designated: worlds where ``f`` must hold; defaults to all worlds.
        fixed: worlds whose here-set is pinned to the world itself.
    """
    cf = f if isinstance(f, CompiledFormula) else CompiledFormula(f)
    mode = Mode(mode)
    worlds = [frozenset(t) for t in cluster] + [frozenset(t) for t in periphery]
    nc = len(cluster)
    vis = frame_visibility(nc, len(worlds) - nc, mode)
    tot = cf.total(worlds, vis)
    designated = (set(range(len(worlds))) if designated is None
                  else {i for i, t in enumerate(worlds) if t in set(designated)})
    fixed = {i for i, t in enumerate(worlds) if t in set(fixed)}
    cluster_idx = list(range(nc))
    for ctx in _contexts(cf, tot):
        universal, existential = _requirements(cf, ctx)
        ok, moved = _group_status(cf, tot, worlds, cluster_idx, ctx, universal, existential,
                                  designated, fixed, multivalued)
        if not ok:
            continue
        for j in range(nc, len(worlds)):
            p_ok, p_moved = _periphery_status(cf, tot, worlds, j, ctx, mode, multivalued)
            if not p_ok:
                break
            moved |= p_moved
        else:
            if moved:
                return True
    return False


class _ClusterAnalysis:
    """Truth-minimality data for one S5 cluster, shared by all its extensions.

    Cluster pieces only see the cluster, and a periphery world only sees the
    cluster (and itself in SW5), so feasibility per modal guess is computed
    once for the cluster and once per periphery world.
    """

    def __init__(self, cf: CompiledFormula, cluster: Sequence[World], mode: Mode,
                 multivalued: bool):
        self.cf, self.mode, self.multivalued = cf, mode, multivalued
        self.cluster = [frozenset(t) for t in cluster]
        key = tuple(self.cluster)
        # the cluster part does not depend on the mode
        contexts_key = ("cluster", key, multivalued)
        if contexts_key not in cf.memo:
            cf.memo[contexts_key] = self._cluster_contexts()
        self.contexts = cf.memo[contexts_key]
        self._periphery = cf.memo.setdefault(("periphery", key, mode, multivalued), {})

    def _cluster_contexts(self) -> list:
        """(guess, non-identity feasible) for every feasible guess."""
        cf, n = self.cf, len(self.cluster)
        tot = cf.total(self.cluster, frame_visibility(n, 0, self.mode))
        everyone = set(range(n))
        out = []
        for ctx in _contexts(cf, tot):
            universal, existential = _requirements(cf, ctx)
            ok, moved = _group_status(cf, tot, self.cluster, range(n), ctx, universal,
                                      existential, everyone, set(), self.multivalued)
            if ok:
                out.append((ctx, moved))
        return out

    @property
    def minimal(self) -> bool:
        return not any(moved for _, moved in self.contexts)

    def _world(self, b: World):
        if b not in self._periphery:
            worlds = self.cluster + [b]
            n = len(self.cluster)
            tot = self.cf.total(worlds, frame_visibility(n, 1, self.mode))
            statuses = [_periphery_status(self.cf, tot, worlds, n, ctx, self.mode,
                                          self.multivalued)
                        for ctx, _ in self.contexts]
            self._periphery[b] = (tot[self.cf.root][n], statuses)
        return self._periphery[b]

    def admits(self, b: World) -> bool:
        """Whether ``b`` satisfies the formula classically as a periphery world."""
        return self._world(b)[0]

    def extension_minimal(self, periphery: Iterable[World]) -> bool:
        statuses = [self._world(b)[1] for b in periphery]
        for k, (_, moved) in enumerate(self.contexts):
            feasible = True
            for per_world in statuses:
                ok, p_moved = per_world[k]
                if not ok:
                    feasible = False
                    break
                moved = moved or p_moved
            if feasible and moved:
                return False
        return True


def _classical_on_frame(cf, cluster, periphery, mode) -> list:
    worlds = list(cluster) + list(periphery)
    tot = cf.total(worlds, frame_visibility(len(cluster), len(periphery), mode))
    return tot[cf.root]


# ---------------------------------------------------------------------------
# ES15
# ---------------------------------------------------------------------------


def eem15(
    f: Formula | CompiledFormula,
    max_models: int = DEFAULT_MAX_MODELS,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> list:
    """Classical S5 models of ``f`` that are functionally truth-minimal."""
    cf = _compile(f, max_atoms)
    return [view for view in classical_s5_models(cf, max_models, max_atoms)
            if not weaker_model_exists(cf, sorted(view, key=world_key), multivalued=False)]


def models_star(view: Iterable[World], a0: World, f: Formula | CompiledFormula) -> bool:
    """``view`` extended by ``a0``, with ``view`` designated, satisfies ``f``
    classically and no non-identity assignment fixing ``a0`` keeps it."""
    cf = f if isinstance(f, CompiledFormula) else CompiledFormula(f)
    view = frozenset(view)
    a0 = frozenset(a0)
    worlds = sorted(view | {a0}, key=world_key)
    values = _classical_on_frame(cf, worlds, [], Mode.KD45)
    if not all(ok for t, ok in zip(worlds, values) if t in view):
        return False
    return not weaker_model_exists(cf, worlds, multivalued=False, designated=view, fixed=[a0])


@dataclass(frozen=True)
class PreorderWitness:
    """Outcome of one augmenting world in a ``<=_phi`` comparison."""

    left: frozenset
    right: frozenset
    augmenting_world: World
    verdicts: tuple  # (left augmented |=*, right augmented |=*)

    @property
    def violates(self) -> bool:
        return self.verdicts[0] and not self.verdicts[1]


def preorder_witnesses(f, a, b, eems) -> list:
    cf = f if isinstance(f, CompiledFormula) else CompiledFormula(f)
    union = sorted(frozenset().union(*eems), key=world_key)
    return [PreorderWitness(frozenset(a), frozenset(b), a0,
                            (models_star(a, a0, cf), models_star(b, a0, cf)))
            for a0 in union]


def preorder_leq(f, a, b, eems) -> bool:
    """``a <=_phi b``: every augmenting world from the union of ``eems``
    that works for ``a`` also works for ``b``."""
    return not any(w.violates for w in preorder_witnesses(f, a, b, eems))


@dataclass
class Selection:
    """Result of a knowledge-minimality selection."""

    views: frozenset
    candidates: list
    diagnostics: list = field(default_factory=list)


def select_aeem15(
    f: Formula | CompiledFormula,
    max_models: int = DEFAULT_MAX_MODELS,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> Selection:
    cf = _compile(f, max_atoms)
    eems = eem15(cf, max_models, max_atoms)
    union = sorted(frozenset().union(*eems), key=world_key)
    star = {a: frozenset(a0 for a0 in union if models_star(a, a0, cf)) for a in eems}

    def less(a, b):
        return star[a] <= star[b] and not star[b] <= star[a]

    diagnostics = []
    kept = []
    for a in eems:
        bigger = [b for b in eems if a < b]
        better = [b for b in eems if less(a, b)]
        for b in bigger:
            if less(b, a):
                diagnostics.append(
                    f"ordering conflict: {format_worlds(a)} is a proper subset of "
                    f"{format_worlds(b)} but strictly above it in the preorder")
        if not bigger and not better:
            kept.append(a)
    return Selection(frozenset(kept), eems, diagnostics)


def aeem15(f: Formula | CompiledFormula, max_models: int = DEFAULT_MAX_MODELS,
           max_atoms: int = DEFAULT_MAX_ATOMS) -> frozenset:
    """Knowledge-maximal functional equilibrium models of ``f``."""
    return select_aeem15(f, max_models, max_atoms).views


# ---------------------------------------------------------------------------
# ES20 / ES21
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EemSet:
    formula: Formula
    members: tuple  # total RelationalEhtModel instances
    variant: Mode

    @property
    def s5_members(self) -> frozenset:
        return frozenset(frozenset(m.cluster_worlds) for m in self.members if not m.periphery)


def _periphery_pool(analysis: _ClusterAnalysis) -> list:
    return [b for b in all_worlds(analysis.cf.atoms)
            if b not in analysis.cluster and analysis.admits(b)]


def _extensions(pool, cap):
    limit = len(pool) if cap is None else min(cap, len(pool))
    for size in range(1, limit + 1):
        yield from combinations(pool, size)


def _relational_setup(f, mode, max_atoms):
    mode = Mode(mode)
    if mode is Mode.FUNCTIONAL:
        raise ValueError("relational equilibrium models need KD45 or SW5 mode")
    return _compile(f, max_atoms), mode


def eem_relational(
    f: Formula | CompiledFormula,
    mode: Mode | str,
    max_models: int = DEFAULT_MAX_MODELS,
    max_periphery: int | None = DEFAULT_MAX_PERIPHERY,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    functional_minimality: bool = False,
) -> EemSet:
    """Relationally truth-minimal classical models of ``f``: S5 clusters and
    their extensions by up to ``max_periphery`` periphery worlds
    (``None`` means no cap)."""
    cf, mode = _relational_setup(f, mode, max_atoms)
    multivalued = not functional_minimality
    members = []
    for view in classical_s5_models(cf, max_models, max_atoms):
        cluster = sorted(view, key=world_key)
        analysis = _ClusterAnalysis(cf, cluster, mode, multivalued)
        if analysis.minimal:
            members.append(RelationalEhtModel.total(cluster, (), mode))
        for ext in _extensions(_periphery_pool(analysis), max_periphery):
            if analysis.extension_minimal(ext):
                members.append(RelationalEhtModel.total(cluster, ext, mode))
    return EemSet(cf.formula, tuple(members), mode)


def select_aeem_relational(
    f: Formula | CompiledFormula,
    mode: Mode | str,
    max_models: int = DEFAULT_MAX_MODELS,
    max_periphery: int | None = DEFAULT_MAX_PERIPHERY,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    functional_minimality: bool = False,
) -> Selection:
    cf, mode = _relational_setup(f, mode, max_atoms)
    multivalued = not functional_minimality
    found, candidates, diagnostics = [], [], []
    for view in classical_s5_models(cf, max_models, max_atoms):
        cluster = sorted(view, key=world_key)
        analysis = _ClusterAnalysis(cf, cluster, mode, multivalued)
        if not analysis.minimal:
            continue
        candidates.append(view)
        for ext in _extensions(_periphery_pool(analysis), max_periphery):
            if analysis.extension_minimal(ext):
                model = RelationalEhtModel.total(cluster, ext, mode)
                diagnostics.append(f"{format_worlds(view)} eliminated by extension {model}")
                break
        else:
            found.append(view)
    return Selection(frozenset(found), candidates, diagnostics)


def aeem_relational(
    f: Formula | CompiledFormula,
    mode: Mode | str,
    max_models: int = DEFAULT_MAX_MODELS,
    max_periphery: int | None = DEFAULT_MAX_PERIPHERY,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    functional_minimality: bool = False,
) -> frozenset:
    """S5 equilibrium models of ``f`` with no proper extension among the
    equilibrium models.

    ``functional_minimality`` swaps the relational truth-minimality test for
    the functional one (experimental).
    """
    return select_aeem_relational(f, mode, max_models, max_periphery, max_atoms,
                                  functional_minimality).views
