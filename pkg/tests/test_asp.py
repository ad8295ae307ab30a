from __future__ import annotations

import random

import pytest
from generators import random_objective_program
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ht_answer_sets

from elp.asp import (
    answer_sets,
    belief_view,
    classical_s5_check,
    format_view,
    gl_reduct,
    literal,
    satisfies_rule,
    valuation,
)
from elp.errors import BoundExceeded, UnsupportedFeature
from elp.syntax import parse_program, parse_rule


def views(*vals):
    return frozenset(valuation(*v) for v in vals)


@pytest.mark.parametrize("text, expected", [
    ("p.", [["p"]]),
    ("p :- not q. q :- not p.", [["p"], ["q"]]),
    ("p :- not p.", []),
    ("p or q.", [["p"], ["q"]]),
    ("p or not_p_atom :- not q.", [["p"], ["not_p_atom"]]),
    ("p :- q. q :- p.", [[]]),
    ("a. ~a.", []),
    ("a or ~a.", [["a"], ["~a"]]),
    ("p :- not not p.", [[], ["p"]]),
    ("a or b. a :- b. b :- a.", [["a", "b"]]),
    (":- .", []),
    ("", [[]]),
])
def test_answer_sets(text, expected):
    assert answer_sets(parse_program(text)) == views(*expected)


def test_gl_reduct():
    prog = parse_program("a :- not b, c. d :- not not a. e :- not a.")
    red = gl_reduct(prog, valuation("a"))
    assert [str(r) for r in red.rules] == ["a :- c.", "d."]


def test_epistemic_input_rejected():
    with pytest.raises(UnsupportedFeature):
        answer_sets(parse_program("a :- K b."))


def test_atom_bound():
    prog = parse_program(" ".join(f"a{i}." for i in range(5)))
    with pytest.raises(BoundExceeded, match="max_atoms=4"):
        answer_sets(prog, max_atoms=4)


def test_valuation_helpers():
    assert literal("~p").negated and not literal("p").negated
    with pytest.raises(ValueError):
        valuation("p", "~p")
    with pytest.raises(ValueError):
        belief_view()
    assert format_view(belief_view(["b"], ["a", "~c"])) == "{{a,~c}, {b}}"


def test_classical_s5_check():
    prog = parse_program("a or b. a :- K b. b :- K a.")
    assert classical_s5_check(belief_view(["a"], ["b"]), prog)
    assert not classical_s5_check(belief_view(["a"], ["b"]), prog + parse_rule(":- not K a."))
    assert classical_s5_check(belief_view(["a", "b"]), prog + parse_rule(":- not K a."))
    with pytest.raises(ValueError):
        classical_s5_check(frozenset(), prog)


def test_satisfies_rule_with_subjective_body():
    view = belief_view(["a"], ["b"])
    assert not satisfies_rule(view, valuation("b"), parse_rule("c :- not K a."))
    assert satisfies_rule(view, valuation("b"), parse_rule("c :- K a."))


def test_random_programs_agree_with_ht_oracle():
    rng = random.Random(7)
    for _ in range(300):
        prog = random_objective_program(rng)
        assert answer_sets(prog) == ht_answer_sets(prog), str(prog)


literals = st.sampled_from(["a", "b", "~a", "c"])


@st.composite
def objective_programs(draw):
    rules = []
    for _ in range(draw(st.integers(1, 4))):
        head = draw(st.lists(literals, max_size=2, unique=True))
        body = [("not " * draw(st.integers(0, 2))) + l
                for l in draw(st.lists(literals, max_size=2, unique=True))]
        if not head and not body:
            continue
        text = " or ".join(head)
        if body:
            text += " :- " + ", ".join(body)
        rules.append(text + ".")
    return parse_program(" ".join(rules))


@settings(max_examples=200, deadline=None)
@given(objective_programs())
def test_answer_sets_match_ht_equilibrium(prog):
    assert answer_sets(prog) == ht_answer_sets(prog)


@settings(max_examples=100, deadline=None)
@given(objective_programs())
def test_answer_sets_are_minimal_models_of_their_reduct(prog):
    def model(x, rules):
        return all(satisfies_rule(frozenset([x]), x, r) for r in rules)

    for s in answer_sets(prog):
        red = gl_reduct(prog, s).rules
        assert model(s, red)
        assert not any(model(frozenset(sub), red) for sub in _proper_subsets(s))


def _proper_subsets(s):
    items = sorted(s)
    for mask in range((1 << len(items)) - 1):
        yield {items[i] for i in range(len(items)) if mask >> i & 1}
