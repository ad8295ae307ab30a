from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from laws import LAWS
from oracles import brute_relational_minimal, powerset

from elp.eht import (
    CompiledFormula,
    FunctionalEhtModel,
    Mode,
    RelationalEhtModel,
    classical_model_check,
    eht_valid,
    format_model,
    frame_visibility,
    sat_functional,
    sat_relational,
    translate,
    translation,
    world,
)
from elp.equilibrium import weaker_model_exists
from elp.errors import BoundExceeded, UnsupportedFeature
from elp.syntax import (
    BOTTOM,
    TOP,
    And,
    AtomRef,
    Implies,
    K,
    KHat,
    ObjectiveLiteral,
    Or,
    neg,
    parse_formula,
    parse_program,
    render_formula,
)

p, q = AtomRef("p"), AtomRef("q")
E, P, Q, PQ = world(), world("p"), world("q"), world("p", "q")


class TestModels:
    def test_functional_normalizes(self):
        m = FunctionalEhtModel.of({PQ: P, E: E})
        assert m.worlds == (E, PQ)
        assert m.here(PQ) == P and not m.is_total
        assert str(m) == "{{}, ({p},{p,q})}"

    def test_here_must_be_subset(self):
        with pytest.raises(ValueError):
            FunctionalEhtModel.of({P: Q})
        with pytest.raises(ValueError):
            RelationalEhtModel(((P, frozenset()),))

    def test_relational(self):
        m = RelationalEhtModel(((P, {E, P}),), ((Q, {Q}),), Mode.SW5)
        assert m.heres(P) == {E, P}
        assert m.cluster_worlds == (P,) and m.periphery_worlds == (Q,)
        assert not m.is_total and m.totalize().is_total
        assert set(m.visible(Q)) == {P, Q}
        assert set(RelationalEhtModel.total([P], [Q], Mode.KD45).visible(Q)) == {P}
        assert format_model(RelationalEhtModel.total([PQ], [Q])) == "{{p,q}, *{q}}"

    def test_periphery_disjoint_from_cluster(self):
        with pytest.raises(ValueError):
            RelationalEhtModel.total([P], [P])

    def test_frame_visibility(self):
        assert frame_visibility(2, 1, Mode.KD45) == [[0, 1], [0, 1], [0, 1]]
        assert frame_visibility(2, 1, Mode.SW5) == [[0, 1], [0, 1], [0, 1, 2]]


class TestSatisfaction:
    def test_atoms_read_here(self):
        m = FunctionalEhtModel.of({P: E})
        assert not sat_functional(m, P, p)
        assert sat_functional(m, P, neg(neg(p)))

    def test_implication_checks_totalization(self):
        m = FunctionalEhtModel.of({P: E})
        assert not sat_functional(m, P, Or(p, neg(p)))
        assert sat_functional(FunctionalEhtModel.total([P]), P, Or(p, neg(p)))

    def test_k_ranges_over_cluster(self):
        m = FunctionalEhtModel.total([P, PQ])
        assert sat_functional(m, P, K(p)) and not sat_functional(m, P, K(q))
        assert sat_functional(m, P, KHat(q))

    def test_relational_needs_every_here(self):
        m = RelationalEhtModel(((P, {E, P}),))
        assert not sat_relational(m, P, p)
        assert sat_relational(RelationalEhtModel(((P, {P}),)), P, p)

    def test_kd45_periphery_not_reflexive(self):
        kd, sw = (RelationalEhtModel.total([P], [E], mode) for mode in (Mode.KD45, Mode.SW5))
        assert sat_relational(kd, E, K(p))
        assert not sat_relational(sw, E, K(p))

    def test_classical_model_check(self):
        f = parse_formula("K p | K q")
        assert classical_model_check([P, PQ], f)
        assert not classical_model_check([P, Q], f)
        with pytest.raises(ValueError):
            classical_model_check(FunctionalEhtModel.of({P: E}).to_relational(), f)


class TestTranslation:
    def test_example_program(self):
        prog = parse_program("p or ~q :- M r, not s. q :- not K p.")
        assert render_formula(translate(prog)) == (
            "(-K -r & -s -> p | neg_q) & (-K p -> q) & -(q & neg_q)")

    def test_simple(self):
        assert translate(parse_program("p.")) == p
        assert translate(parse_program(":- not K a.")) == Implies(neg(K(AtomRef("a"))), BOTTOM)
        assert translate(parse_program("")) == TOP
        assert translate(parse_program("a :- KHAT b.")) == Implies(KHat(AtomRef("b")), AtomRef("a"))

    def test_fresh_names_avoid_clashes(self):
        tr = translation(parse_program("~p. neg_p."))
        assert tr.strong == {"neg_neg_p": ObjectiveLiteral("p", True)}
        v = frozenset([ObjectiveLiteral("p", True), ObjectiveLiteral("neg_p")])
        assert tr.valuation(tr.world(v)) == v

    def test_wv_rejected(self):
        with pytest.raises(UnsupportedFeature):
            translate(parse_program("a. :-wv K a."))


# ---------------------------------------------------------------------------
# Random formulas
# ---------------------------------------------------------------------------

formulas = st.recursive(
    st.sampled_from([BOTTOM, p, q]),
    lambda sub: st.one_of(
        st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub),
        st.builds(K, sub), st.builds(KHat, sub),
    ),
    max_leaves=6,
)
worlds = st.sampled_from([E, P, Q, PQ])


@st.composite
def relational_models(draw, mode=None):
    cluster = draw(st.lists(worlds, min_size=1, max_size=3, unique=True))
    rest = [w for w in (E, P, Q, PQ) if w not in cluster]
    periphery = draw(st.lists(st.sampled_from(rest), max_size=1, unique=True)) if rest else []
    mode = mode or draw(st.sampled_from([Mode.KD45, Mode.SW5]))

    def heres(t):
        return draw(st.sets(st.sampled_from(powerset(t)), min_size=1))

    return RelationalEhtModel(tuple((t, heres(t)) for t in cluster),
                              tuple((t, heres(t)) for t in periphery), mode)


@settings(max_examples=300, deadline=None)
@given(formulas, relational_models())
def test_persistence(f, m):
    """Truth at a here-set implies truth in the totalized model."""
    total = m.totalize()
    for t in m.worlds:
        if sat_relational(m, t, f):
            assert sat_relational(total, t, f)


@settings(max_examples=200, deadline=None)
@given(formulas, relational_models())
def test_negation_is_implication_to_bottom(f, m):
    """``-f`` holds iff ``f`` fails everywhere the totalization can see."""
    total = m.totalize()
    for t in m.worlds:
        assert sat_relational(m, t, neg(f)) == (not sat_relational(total, t, f))


@settings(max_examples=200, deadline=None)
@given(formulas, relational_models())
def test_compiled_matches_direct(f, m):
    cf = CompiledFormula(f)
    ws = list(m.worlds)
    nc = len(m.cluster_worlds)
    vis = frame_visibility(nc, len(ws) - nc, m.mode)
    tot = cf.total(ws, vis)
    pieces = [(i, h) for i, t in enumerate(ws) for h in sorted(m.heres(t), key=sorted)]
    row = cf.evaluate(ws, vis, pieces, tot)[cf.root]
    for i, t in enumerate(ws):
        bits = [row >> k & 1 for k, (w, _) in enumerate(pieces) if w == i]
        assert all(bits) == sat_relational(m, t, f)


@settings(max_examples=200, deadline=None)
@given(formulas, st.lists(worlds, min_size=1, max_size=3, unique=True))
def test_functional_is_singleton_relational(f, cluster):
    for choice in product(*(powerset(t) for t in cluster)):
        m = FunctionalEhtModel(tuple(zip(cluster, choice)))
        for t in cluster:
            assert sat_functional(m, t, f) == sat_relational(m.to_relational(), t, f)


def test_weaker_model_exists_matches_brute_force():
    rng = random.Random(11)
    for _ in range(150):
        f = _random_formula(rng, 4)
        cluster = rng.sample([E, P, Q, PQ], rng.randint(1, 3))
        cluster.sort(key=lambda w: (len(w), sorted(w)))
        rest = [w for w in (E, P, Q, PQ) if w not in cluster]
        periphery = rng.sample(rest, rng.randint(0, min(1, len(rest))))
        mode = rng.choice([Mode.KD45, Mode.SW5])
        total = RelationalEhtModel.total(cluster, periphery, mode)
        if not all(sat_relational(total, t, f) for t in total.worlds):
            continue
        for multivalued in (True, False):
            expected = not brute_relational_minimal(cluster, periphery, f, mode, multivalued)
            got = weaker_model_exists(f, cluster, periphery, mode, multivalued)
            assert got == expected, (render_formula(f), cluster, periphery, mode, multivalued)


def _random_formula(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([BOTTOM, p, q])
    op = rng.choice([And, Or, Implies, Implies, K, KHat, "neg"])
    if op == "neg":
        return neg(_random_formula(rng, depth - 1))
    if op in (K, KHat):
        return op(_random_formula(rng, depth - 1))
    return op(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))


# ---------------------------------------------------------------------------
# Bounded validity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(LAWS))
def test_laws_hold_functionally(name):
    for f in LAWS[name]:
        assert eht_valid(f, Mode.FUNCTIONAL, 2, 3), render_formula(f)


@pytest.mark.parametrize("mode", [Mode.KD45, Mode.SW5])
def test_sample_of_laws_hold_relationally(mode):
    for name, fs in LAWS.items():
        for f in fs[::7]:
            assert eht_valid(f, mode, 2, 2, 1), (name, render_formula(f))


def test_reflexivity_axiom():
    f = Implies(K(p), p)
    assert eht_valid(f, Mode.SW5, 1, 2, 1).valid
    assert eht_valid(f, Mode.FUNCTIONAL, 1, 2).valid
    res = eht_valid(f, Mode.KD45, 1, 2, 1)
    assert not res.valid
    assert res.describe() == "countermodel {{p}, *{}} fails at {}"


def test_excluded_middle_fails():
    res = eht_valid(Or(p, neg(p)), Mode.FUNCTIONAL)
    assert str(res.countermodel) == "{({},{p})}"


def test_validity_bounds():
    with pytest.raises(BoundExceeded):
        eht_valid(parse_formula("a | b | c | d"), Mode.FUNCTIONAL, max_atoms=3)


@pytest.mark.parametrize("mode", list(Mode))
def test_double_negation_commutes_with_k(mode):
    assert eht_valid(parse_formula("--K a <-> K --a"), mode, 2, 3, 1).valid
