from __future__ import annotations

import random

import pytest
from generators import exhaustive_programs
from oracles import (
    brute_aeem15,
    brute_aeem_relational,
    brute_eem15,
    brute_models_star,
    classical_views,
)
from test_eht import _random_formula

from elp.eht import Mode, RelationalEhtModel, translate, world
from elp.equilibrium import (
    aeem15,
    aeem_relational,
    classical_s5_models,
    eem15,
    eem_relational,
    models_star,
    preorder_leq,
    select_aeem15,
    select_aeem_relational,
)
from elp.errors import BoundExceeded
from elp.syntax import parse_formula, parse_program

A, B = world("a"), world("b")
AC, BC = world("a", "c"), world("b", "c")


def tr(text):
    return translate(parse_program(text))


def views(*groups):
    return frozenset(frozenset(frozenset(w) for w in g) for g in groups)


PROGRAMS = {
    "psi": "a or b. a :- K b. b :- K a.",
    "psi_prime": "a or b. a :- K b. b :- K a. :- not K a.",
    "sigma1": "a or b. c :- K a.",
    "sigma": "a or b. c :- K a. :- not c.",
    "delta": "a or b. b :- M a.",
    "upsilon": "a or b. c or d :- not K a. :- c. :- d.",
}


class TestClassical:
    def test_disjunction(self):
        got = set(classical_s5_models(parse_formula("a | b")))
        assert got == set(classical_views(parse_formula("a | b")))

    def test_candidate_bound(self):
        with pytest.raises(BoundExceeded, match="max_models"):
            classical_s5_models(parse_formula("a | b | c | d | e"), max_models=8)


class TestEem15:
    def test_disjunction(self):
        eems = set(eem15(parse_formula("a | b")))
        assert eems == {frozenset([A]), frozenset([B]), frozenset([A, B])}

    def test_sigma1_candidates(self):
        eems = set(eem15(tr(PROGRAMS["sigma1"])))
        assert {frozenset([A, B]), frozenset([AC])} <= eems

    @pytest.mark.parametrize("name", sorted(PROGRAMS))
    def test_matches_brute_force(self, name):
        if name == "upsilon":
            pytest.skip("four atoms: too slow for the oracle")
        f = tr(PROGRAMS[name])
        assert set(eem15(f)) == brute_eem15(f)

    def test_members_are_classical_models(self):
        f = tr(PROGRAMS["sigma1"])
        assert set(eem15(f)) <= set(classical_s5_models(f))


class TestAeem15:
    @pytest.mark.parametrize("name", ["psi", "psi_prime", "sigma1", "sigma", "delta"])
    def test_matches_brute_force(self, name):
        f = tr(PROGRAMS[name])
        assert aeem15(f) == brute_aeem15(f)

    def test_modal_operators(self):
        assert aeem15(parse_formula("K p")) == views([["p"]])
        assert aeem15(parse_formula("-K -p")) == frozenset()
        assert aeem15(parse_formula("KHAT p")) == views([[], ["p"]])

    def test_models_star_matches_brute_force(self):
        f = tr(PROGRAMS["sigma1"])
        eems = eem15(f)
        union = frozenset().union(*eems)
        for a in eems:
            for a0 in union:
                assert models_star(a, a0, f) == brute_models_star(a, a0, f)

    def test_preorder_reflexive(self):
        f = tr(PROGRAMS["sigma1"])
        eems = eem15(f)
        for a in eems:
            assert preorder_leq(f, a, a, eems)

    def test_selection_keeps_candidates(self):
        sel = select_aeem15(tr(PROGRAMS["sigma1"]))
        assert sel.views == views([["a"], ["b"]])
        assert frozenset([AC]) in sel.candidates

    def test_random_formulas(self):
        rng = random.Random(5)
        for _ in range(60):
            f = _random_formula(rng, 4)
            assert aeem15(f) == brute_aeem15(f), str(f)


class TestRelational:
    def test_sigma_extension(self):
        eems = eem_relational(tr(PROGRAMS["sigma"]), Mode.KD45)
        assert RelationalEhtModel.total([AC], [BC], Mode.KD45) in eems.members
        assert frozenset([AC]) in eems.s5_members

    def test_sigma_sw5_extension_not_minimal(self):
        eems = eem_relational(tr(PROGRAMS["sigma"]), Mode.SW5)
        assert RelationalEhtModel.total([AC], [BC], Mode.SW5) not in eems.members

    def test_diagnostics_name_the_extension(self):
        sel = select_aeem_relational(tr(PROGRAMS["sigma"]), Mode.KD45)
        assert sel.views == frozenset()
        assert sel.diagnostics == ["{{a,c}} eliminated by extension {{a,c}, *{b,c}}"]

    def test_delta_extension(self):
        eems = eem_relational(tr(PROGRAMS["delta"]), "kd45")
        assert RelationalEhtModel.total([B], [A], Mode.KD45) in eems.members

    def test_functional_mode_rejected(self):
        with pytest.raises(ValueError):
            aeem_relational(parse_formula("p"), Mode.FUNCTIONAL)

    def test_modal_operators(self):
        k = parse_formula("K p")
        assert aeem_relational(k, Mode.KD45) == frozenset()
        assert aeem_relational(k, Mode.SW5) == views([["p"]])
        for mode in (Mode.KD45, Mode.SW5):
            assert aeem_relational(parse_formula("-K -p"), mode) == frozenset()
            assert aeem_relational(parse_formula("KHAT p"), mode) == frozenset()

    @pytest.mark.parametrize("mode", [Mode.KD45, Mode.SW5])
    @pytest.mark.parametrize("name", ["psi", "psi_prime", "sigma", "delta"])
    def test_matches_capped_oracle(self, name, mode):
        f = tr(PROGRAMS[name])
        assert aeem_relational(f, mode, max_periphery=1) == brute_aeem_relational(
            f, mode, max_periphery=1)

    @pytest.mark.parametrize("mode", [Mode.KD45, Mode.SW5])
    def test_random_formulas_match_uncapped_oracle(self, mode):
        rng = random.Random(3)
        for _ in range(40):
            f = _random_formula(rng, 4)
            assert aeem_relational(f, mode, max_periphery=None) == brute_aeem_relational(f, mode)

    def test_translated_pool_sample_matches_uncapped_oracle(self):
        rng = random.Random(1)
        for prog in rng.sample(list(exhaustive_programs()), 200):
            if any(r.wv for r in prog.rules):
                continue
            f = translate(prog)
            for mode in (Mode.KD45, Mode.SW5):
                assert aeem_relational(f, mode, max_periphery=None) == brute_aeem_relational(
                    f, mode), str(prog)

    def test_functional_variant_of_oracle(self):
        rng = random.Random(9)
        for _ in range(40):
            f = _random_formula(rng, 4)
            got = aeem_relational(f, Mode.SW5, max_periphery=None, functional_minimality=True)
            assert got == brute_aeem_relational(f, Mode.SW5, multivalued=False)

    def test_functional_minimality_flag(self):
        # with one here-set per world, {{a,b}} is truth-minimal for both programs
        for name in ("psi", "psi_prime"):
            f = tr(PROGRAMS[name])
            got = aeem_relational(f, Mode.SW5, functional_minimality=True)
            assert views([["a", "b"]]) <= got
