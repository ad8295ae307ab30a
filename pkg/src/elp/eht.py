"""Epistemic here-and-there logic.

Worlds are frozensets of atom names.  A *functional* model assigns one
here-set ``H <= T`` to every world ``T`` of an S5 cluster.  A *relational*
model assigns a nonempty set of here-sets to every world and may carry
periphery worlds outside the cluster:

* ``KD45`` periphery worlds see the cluster only;
* ``SW5`` periphery worlds see the cluster and themselves.

Cluster worlds always see exactly the cluster.  Implication is checked both
at the current here-set and in the totalized model, as usual for HT.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .errors import BoundExceeded, UnsupportedFeature
from .syntax import (
    BOTTOM,
    TOP,
    And,
    AtomRef,
    Bottom,
    ExtendedObjectiveLiteral,
    Formula,
    Implies,
    K,
    KHat,
    Modality,
    ObjectiveLiteral,
    Or,
    Program,
    atoms_of,
    conj,
    disj,
    neg,
    subformulas,
)

World = frozenset


class Mode(str, enum.Enum):
    FUNCTIONAL = "functional"
    KD45 = "kd45"
    SW5 = "sw5"


def world(*atoms: str) -> World:
    return frozenset(atoms)


def world_key(w: World) -> tuple:
    return (len(w), sorted(w))


def subsets(w: Iterable) -> Iterator[frozenset]:
    items = sorted(w)
    return (frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r))


def format_world(w: World) -> str:
    return "{" + ",".join(sorted(w)) + "}"


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


def _check_here(here: World, t: World):
    if not here <= t:
        raise ValueError(f"here-set {format_world(here)} is not a subset of {format_world(t)}")


@dataclass(frozen=True)
class FunctionalEhtModel:
    """S5 cluster with one here-set per world, stored as sorted (T, H) pairs."""

    assignment: tuple

    def __post_init__(self):
        if not self.assignment:
            raise ValueError("a model needs at least one world")
        pairs = tuple(sorted(((frozenset(t), frozenset(h)) for t, h in self.assignment),
                             key=lambda p: world_key(p[0])))
        for t, h in pairs:
            _check_here(h, t)
        object.__setattr__(self, "assignment", pairs)

    @classmethod
    def of(cls, mapping: Mapping) -> FunctionalEhtModel:
        return cls(tuple(mapping.items()))

    @classmethod
    def total(cls, worlds: Iterable[World]) -> FunctionalEhtModel:
        return cls(tuple((frozenset(t), frozenset(t)) for t in worlds))

    @property
    def worlds(self) -> tuple:
        return tuple(t for t, _ in self.assignment)

    def here(self, t: World) -> World:
        return dict(self.assignment)[frozenset(t)]

    @property
    def is_total(self) -> bool:
        return all(h == t for t, h in self.assignment)

    def to_relational(self) -> RelationalEhtModel:
        return RelationalEhtModel(tuple((t, frozenset([h])) for t, h in self.assignment))

    def __str__(self) -> str:
        return format_model(self.to_relational())


@dataclass(frozen=True)
class RelationalEhtModel:
    """Cluster plus optional periphery; each world maps to a set of here-sets."""

    cluster: tuple
    periphery: tuple = ()
    mode: Mode = Mode.KD45

    def __post_init__(self):
        cluster = self._normalize(self.cluster)
        periphery = self._normalize(self.periphery)
        if not cluster:
            raise ValueError("the cluster must be nonempty")
        if {t for t, _ in cluster} & {t for t, _ in periphery}:
            raise ValueError("periphery worlds must lie outside the cluster")
        mode = Mode(self.mode)
        if mode is Mode.FUNCTIONAL:
            raise ValueError("relational models use KD45 or SW5 mode")
        object.__setattr__(self, "cluster", cluster)
        object.__setattr__(self, "periphery", periphery)
        object.__setattr__(self, "mode", mode)

    @staticmethod
    def _normalize(pairs) -> tuple:
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        out = []
        for t, heres in pairs:
            t = frozenset(t)
            heres = frozenset(frozenset(h) for h in heres)
            if not heres:
                raise ValueError(f"world {format_world(t)} needs at least one here-set")
            for h in heres:
                _check_here(h, t)
            out.append((t, heres))
        return tuple(sorted(out, key=lambda p: world_key(p[0])))

    @classmethod
    def total(cls, cluster: Iterable[World], periphery: Iterable[World] = (),
              mode: Mode = Mode.KD45) -> RelationalEhtModel:
        return cls(tuple((t, [t]) for t in cluster), tuple((t, [t]) for t in periphery), mode)

    @property
    def cluster_worlds(self) -> tuple:
        return tuple(t for t, _ in self.cluster)

    @property
    def periphery_worlds(self) -> tuple:
        return tuple(t for t, _ in self.periphery)

    @property
    def worlds(self) -> tuple:
        return self.cluster_worlds + self.periphery_worlds

    def heres(self, t: World) -> frozenset:
        return dict(self.cluster + self.periphery)[frozenset(t)]

    @property
    def is_total(self) -> bool:
        return all(hs == {t} for t, hs in self.cluster + self.periphery)

    def totalize(self) -> RelationalEhtModel:
        return RelationalEhtModel.total(self.cluster_worlds, self.periphery_worlds, self.mode)

    def visible(self, t: World) -> tuple:
        """Worlds accessible from ``t``."""
        t = frozenset(t)
        if t in self.cluster_worlds or self.mode is Mode.KD45:
            return self.cluster_worlds
        return self.cluster_worlds + (t,)

    def __str__(self) -> str:
        return format_model(self)


def format_model(m: RelationalEhtModel) -> str:
    """Stable text: total worlds print as valuations, other worlds as (H,T)
    pairs, periphery worlds with a ``*`` prefix."""
    parts = []
    for prefix, group in (("", m.cluster), ("*", m.periphery)):
        for t, heres in group:
            for h in sorted(heres, key=world_key):
                text = format_world(t) if h == t else f"({format_world(h)},{format_world(t)})"
                parts.append(prefix + text)
    return "{" + ", ".join(parts) + "}"


# ---------------------------------------------------------------------------
# Direct satisfaction
# ---------------------------------------------------------------------------


def sat_functional(m: FunctionalEhtModel, at: World, f: Formula) -> bool:
    """Truth of ``f`` at world ``at`` of a functional model."""
    here = dict(m.assignment)
    worlds = m.worlds

    def ev(g: Formula, t: World, total: bool) -> bool:
        if isinstance(g, Bottom):
            return False
        if isinstance(g, AtomRef):
            return g.name in (t if total else here[t])
        if isinstance(g, And):
            return ev(g.left, t, total) and ev(g.right, t, total)
        if isinstance(g, Or):
            return ev(g.left, t, total) or ev(g.right, t, total)
        if isinstance(g, Implies):
            return ((not ev(g.left, t, total) or ev(g.right, t, total))
                    and (not ev(g.left, t, True) or ev(g.right, t, True)))
        if isinstance(g, K):
            return all(ev(g.sub, u, total) for u in worlds)
        if isinstance(g, KHat):
            return any(ev(g.sub, u, total) for u in worlds)
        raise TypeError(f"not a formula: {g!r}")

    at = frozenset(at)
    if at not in here:
        raise ValueError(f"{format_world(at)} is not a world of the model")
    return ev(f, at, False)


def sat_relational(m: RelationalEhtModel, at: World, f: Formula) -> bool:
    """Truth of ``f`` at world ``at``: it must hold at every (H, at) pair."""
    heres = dict(m.cluster + m.periphery)

    def ev(g: Formula, h: World, t: World, total: bool) -> bool:
        if isinstance(g, Bottom):
            return False
        if isinstance(g, AtomRef):
            return g.name in h
        if isinstance(g, And):
            return ev(g.left, h, t, total) and ev(g.right, h, t, total)
        if isinstance(g, Or):
            return ev(g.left, h, t, total) or ev(g.right, h, t, total)
        if isinstance(g, Implies):
            return ((not ev(g.left, h, t, total) or ev(g.right, h, t, total))
                    and (not ev(g.left, t, t, True) or ev(g.right, t, t, True)))
        if isinstance(g, (K, KHat)):
            points = (
                (u if total else h2, u)
                for u in m.visible(t)
                for h2 in ((u,) if total else heres[u])
            )
            quant = all if isinstance(g, K) else any
            return quant(ev(g.sub, h2, u, total) for h2, u in points)
        raise TypeError(f"not a formula: {g!r}")

    at = frozenset(at)
    if at not in heres:
        raise ValueError(f"{format_world(at)} is not a world of the model")
    return all(ev(f, h, at, False) for h in heres[at])


def classical_model_check(m: RelationalEhtModel | Iterable[World], f: Formula) -> bool:
    """True iff ``f`` holds at every world of a total model.

    A plain collection of worlds is read as a total S5 cluster.
    """
    if not isinstance(m, RelationalEhtModel):
        m = RelationalEhtModel.total(m)
    if not m.is_total:
        raise ValueError("classical_model_check needs a total model")
    return all(sat_relational(m, t, f) for t in m.worlds)


# ---------------------------------------------------------------------------
# Compiled evaluation
# ---------------------------------------------------------------------------

BOT_OP, ATOM_OP, AND_OP, OR_OP, IMP_OP, K_OP, KHAT_OP = range(7)


class CompiledFormula:
    """A formula flattened into a children-first list of nodes.

    ``ops[i]`` is ``(kind, left, right, name)`` with child indices into
    ``ops``; ``modal`` lists the indices of K and KHAT nodes.
    """

    def __init__(self, f: Formula):
        self.formula = f
        nodes = subformulas(f)
        index = {g: i for i, g in enumerate(nodes)}
        ops = []
        for g in nodes:
            if isinstance(g, Bottom):
                ops.append((BOT_OP, -1, -1, None))
            elif isinstance(g, AtomRef):
                ops.append((ATOM_OP, -1, -1, g.name))
            elif isinstance(g, And):
                ops.append((AND_OP, index[g.left], index[g.right], None))
            elif isinstance(g, Or):
                ops.append((OR_OP, index[g.left], index[g.right], None))
            elif isinstance(g, Implies):
                ops.append((IMP_OP, index[g.left], index[g.right], None))
            elif isinstance(g, K):
                ops.append((K_OP, index[g.sub], -1, None))
            else:
                ops.append((KHAT_OP, index[g.sub], -1, None))
        self.ops = ops
        self.root = index[f]
        self.modal = [i for i, op in enumerate(ops) if op[0] in (K_OP, KHAT_OP)]
        self.atoms = sorted(atoms_of(f))
        # solvers may memoize per-formula results here
        self.memo: dict = {}

    def total(self, worlds: list, visible: list) -> list:
        """``vals[node][w]`` on the total model over ``worlds``; ``visible[w]``
        lists the indices of the worlds that ``w`` sees."""
        n = len(worlds)
        vals: list = []
        for kind, a, b, name in self.ops:
            if kind == BOT_OP:
                row = [False] * n
            elif kind == ATOM_OP:
                row = [name in t for t in worlds]
            elif kind == AND_OP:
                row = [x and y for x, y in zip(vals[a], vals[b])]
            elif kind == OR_OP:
                row = [x or y for x, y in zip(vals[a], vals[b])]
            elif kind == IMP_OP:
                row = [not x or y for x, y in zip(vals[a], vals[b])]
            elif kind == K_OP:
                sub = vals[a]
                row = [all(sub[j] for j in visible[w]) for w in range(n)]
            else:
                sub = vals[a]
                row = [any(sub[j] for j in visible[w]) for w in range(n)]
            vals.append(row)
        return vals

    def piece(self, here: World, w: int, ctx: Mapping, tot: list) -> list:
        """Node values at the point (here, worlds[w]) when modal nodes take the
        values in ``ctx``; ``tot`` comes from :meth:`total`."""
        vals: list = []
        for i, (kind, a, b, name) in enumerate(self.ops):
            if kind == BOT_OP:
                v = False
            elif kind == ATOM_OP:
                v = name in here
            elif kind == AND_OP:
                v = vals[a] and vals[b]
            elif kind == OR_OP:
                v = vals[a] or vals[b]
            elif kind == IMP_OP:
                v = (not vals[a] or vals[b]) and (not tot[a][w] or tot[b][w])
            else:
                v = ctx[i]
            vals.append(v)
        return vals

    def classical(self, t: World, ctx: Mapping) -> list:
        """Node values at the total point (t, t) with modal nodes from ``ctx``."""
        vals: list = []
        for i, (kind, a, b, name) in enumerate(self.ops):
            if kind == BOT_OP:
                v = False
            elif kind == ATOM_OP:
                v = name in t
            elif kind == AND_OP:
                v = vals[a] and vals[b]
            elif kind == OR_OP:
                v = vals[a] or vals[b]
            elif kind == IMP_OP:
                v = not vals[a] or vals[b]
            else:
                v = ctx[i]
            vals.append(v)
        return vals

    @staticmethod
    def world_bits(tot: list) -> list:
        """Rows of :meth:`total` as bitmasks over worlds."""
        return [sum(1 << w for w, v in enumerate(row) if v) for row in tot]

    def evaluate(self, worlds: list, visible: list, pieces: list, tot: list) -> list:
        """Node values at every point of a (possibly non-total) model.

        ``pieces`` is a list of (world index, here-set); ``tot`` is the output
        of :meth:`total`, optionally converted by :meth:`world_bits`.  Row
        ``vals[node]`` is a bitmask whose bit ``p`` is the value at ``pieces[p]``.
        """
        n = len(worlds)
        wmask = [0] * n
        for p, (w, _) in enumerate(pieces):
            wmask[w] |= 1 << p
        seen = [0] * n
        for w in range(n):
            for j in visible[w]:
                seen[w] |= wmask[j]
        full = (1 << len(pieces)) - 1
        # spread[x]: pieces of the worlds in world-bitmask x
        spread = [0] * (1 << n)
        for x in range(1, 1 << n):
            low = (x & -x).bit_length() - 1
            spread[x] = spread[x & (x - 1)] | wmask[low]
        if isinstance(tot[0], list):
            tot = self.world_bits(tot)

        vals: list = []
        for kind, a, b, name in self.ops:
            if kind == BOT_OP:
                row = 0
            elif kind == ATOM_OP:
                row = sum(1 << p for p, (_, h) in enumerate(pieces) if name in h)
            elif kind == AND_OP:
                row = vals[a] & vals[b]
            elif kind == OR_OP:
                row = vals[a] | vals[b]
            elif kind == IMP_OP:
                here = ~vals[a] | vals[b]
                there = ~spread[tot[a]] | spread[tot[b]]
                row = here & there & full
            elif kind == K_OP:
                sub = vals[a]
                row = spread[sum(1 << w for w in range(n) if sub & seen[w] == seen[w])]
            else:
                sub = vals[a]
                row = spread[sum(1 << w for w in range(n) if sub & seen[w])]
            vals.append(row)
        return vals


def frame_visibility(n_cluster: int, n_periphery: int, mode: Mode) -> list:
    """Visibility lists for a frame whose first ``n_cluster`` worlds form the
    cluster and whose remaining worlds are periphery."""
    cluster = list(range(n_cluster))
    vis = [cluster] * n_cluster
    for j in range(n_cluster, n_cluster + n_periphery):
        vis.append(cluster + [j] if mode is Mode.SW5 else cluster)
    return vis


# ---------------------------------------------------------------------------
# Translation of programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Translation:
    """A program's EHT formula plus the fresh atoms standing for ``~p``."""

    formula: Formula
    strong: Mapping  # fresh atom name -> ObjectiveLiteral

    def valuation(self, w: World) -> frozenset:
        """Map an EHT world back to a valuation over objective literals."""
        return frozenset(self.strong.get(a, ObjectiveLiteral(a)) for a in w)

    def view(self, worlds: Iterable[World]) -> frozenset:
        return frozenset(self.valuation(w) for w in worlds)

    def world(self, v: Iterable[ObjectiveLiteral]) -> World:
        """Inverse of :meth:`valuation`."""
        names = {l: a for a, l in self.strong.items()}
        return frozenset(names[l] if l.negated else l.atom for l in v)


def _fresh_name(atom: str, taken: set) -> str:
    name = f"neg_{atom}"
    while name in taken:
        name = "neg_" + name
    taken.add(name)
    return name


def translation(prog: Program) -> Translation:
    """Translate ``prog`` into a single EHT formula.

    ``not`` becomes EHT negation, ``M l`` becomes ``-K-l``, ``~p`` a fresh
    atom ``neg_p`` together with the conjunct ``-(p & neg_p)``.
    """
    taken = set(prog.atoms)
    fresh: dict[str, str] = {}
    for l in sorted(prog.literals):
        if l.negated and l.atom not in fresh:
            fresh[l.atom] = _fresh_name(l.atom, taken)

    def lit(l: ObjectiveLiteral) -> Formula:
        return AtomRef(fresh[l.atom] if l.negated else l.atom)

    def element(e) -> Formula:
        if isinstance(e, ExtendedObjectiveLiteral):
            f = lit(e.lit)
            for _ in range(e.naf):
                f = neg(f)
            return f
        m = e.subj.modality
        inner = lit(e.subj.lit)
        if m is Modality.K:
            f = K(inner)
        elif m is Modality.M:
            f = neg(K(neg(inner)))
        else:
            f = KHat(inner)
        return neg(f) if e.negated else f

    parts = []
    for r in prog.rules:
        if r.wv:
            raise UnsupportedFeature(f"world-view constraint '{r}' has no EHT translation")
        head = disj(*(lit(l) for l in r.head)) if r.head else BOTTOM
        if r.body:
            parts.append(Implies(conj(*(element(e) for e in r.body)), head))
        else:
            parts.append(head)
    for atom in sorted(fresh):
        parts.append(neg(And(AtomRef(atom), AtomRef(fresh[atom]))))
    strong = {name: ObjectiveLiteral(atom, True) for atom, name in fresh.items()}
    return Translation(conj(*parts) if parts else TOP, strong)


def translate(prog: Program) -> Formula:
    return translation(prog).formula


# ---------------------------------------------------------------------------
# Bounded validity
# ---------------------------------------------------------------------------


@dataclass
class ValidityResult:
    valid: bool
    models_checked: int
    countermodel: RelationalEhtModel | FunctionalEhtModel | None = None
    failing_world: World | None = None

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return f"valid within bounds ({self.models_checked} models)"
        return (f"countermodel {self.countermodel} fails at "
                f"{format_world(self.failing_world)}")


def _here_options(t: World, multivalued: bool) -> list:
    # the world itself first, so total countermodels are found first
    heres = list(subsets(t))[::-1]
    if not multivalued:
        return [(h,) for h in heres]
    return [tuple(c) for r in range(1, len(heres) + 1) for c in combinations(heres, r)]


def eht_valid(
    f: Formula,
    mode: Mode | str = Mode.FUNCTIONAL,
    max_atoms: int = 3,
    max_cluster: int = 3,
    max_periphery: int = 0,
) -> ValidityResult:
    """Check ``f`` at every world of every model within the bounds.

    Worlds range over all valuations of ``atoms(f)``.  ``FUNCTIONAL`` mode
    enumerates functional S5 models (no periphery); ``KD45`` and ``SW5``
    enumerate relational models with up to ``max_periphery`` periphery worlds.
    Returns the first countermodel found, if any.
    """
    mode = Mode(mode)
    atoms = sorted(atoms_of(f))
    if len(atoms) > max_atoms:
        raise BoundExceeded("max_atoms", max_atoms, len(atoms))
    cf = CompiledFormula(f)
    multivalued = mode is not Mode.FUNCTIONAL
    max_periphery = max_periphery if multivalued else 0
    universe = sorted(subsets(atoms), key=world_key)
    options = {t: _here_options(t, multivalued) for t in universe}
    checked = 0
    for size in range(1, max_cluster + 1):
        for cluster in combinations(universe, size):
            rest = [t for t in universe if t not in cluster]
            for psize in range(0, min(max_periphery, len(rest)) + 1):
                for periphery in combinations(rest, psize):
                    worlds = list(cluster) + list(periphery)
                    vis = frame_visibility(len(cluster), len(periphery), mode)
                    tot = cf.world_bits(cf.total(worlds, vis))
                    for choice in product(*(options[t] for t in worlds)):
                        pieces = [(w, h) for w, hs in enumerate(choice) for h in hs]
                        row = cf.evaluate(worlds, vis, pieces, tot)[cf.root]
                        checked += 1
                        missing = ~row & ((1 << len(pieces)) - 1)
                        if missing:
                            w = pieces[(missing & -missing).bit_length() - 1][0]
                            return ValidityResult(
                                False, checked,
                                _build_model(mode, cluster, periphery, choice), worlds[w],
                            )
    return ValidityResult(True, checked)


def _build_model(mode: Mode, cluster, periphery, choice):
    n = len(cluster)
    if mode is Mode.FUNCTIONAL:
        return FunctionalEhtModel(tuple((t, hs[0]) for t, hs in zip(cluster, choice)))
    return RelationalEhtModel(
        tuple(zip(cluster, choice[:n])), tuple(zip(periphery, choice[n:])), mode
    )


def all_worlds(atoms: Iterable[str]) -> list:
    return sorted(subsets(atoms), key=world_key)

