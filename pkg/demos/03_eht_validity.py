"""
Bounded validity in epistemic here-and-there
============================================

``eht_valid`` enumerates every model up to a size bound and evaluates the
formula at every world.  It cannot prove validity, but it finds small
countermodels quickly and is a convenient way to sanity-check equivalences
before using them to simplify a translated program.
"""

from elp import Mode, eht_valid, parse_formula, parse_program, render_formula, translate

# %%
# Excluded middle fails in HT, and so in EHT: a world whose here-set is
# smaller than its there-set satisfies neither p nor -p.
print(eht_valid(parse_formula("p | -p")).describe())

# %%
# Its weak form holds, as do both de Morgan laws, even with modal operands.
for text in ("-p | --p", "-(K p & KHAT q) <-> -K p | -KHAT q", "---K p <-> -K p"):
    for mode in Mode:
        res = eht_valid(parse_formula(text), mode, max_atoms=2, max_cluster=3, max_periphery=1)
        print(f"{mode.value:10} {text:38} {res.describe()}")

# %%
# K p -> p needs every world to see itself.  SW5 extra worlds do, KD45 extra
# worlds do not, and the checker returns the witness.
reflexive = parse_formula("K p -> p")
for mode in (Mode.SW5, Mode.KD45):
    print(mode.value, eht_valid(reflexive, mode, max_periphery=1).describe())

# %%
# A double negation in a rule body can be moved to the head as a plain
# negation.  The check below confirms the rewrite for one translated rule.
rule = translate(parse_program("c :- not not a, b."))
moved = parse_formula("b -> -a | c")
print(render_formula(rule), "<->", render_formula(moved))
both = parse_formula(f"({render_formula(rule)}) <-> ({render_formula(moved)})")
print(eht_valid(both, Mode.FUNCTIONAL).describe())
