"""
Equilibrium models and knowledge minimisation
=============================================

ES15, ES20 and ES21 never look at a reduct.  They translate the program into
a single epistemic here-and-there formula, collect its truth-minimal S5
models, and then prefer the models that claim the least knowledge.

ES15 compares candidates pairwise through an augmented-world preorder.  ES20
and ES21 instead drop a candidate that has a truth-minimal extension by extra
worlds, which see only the cluster in KD45 and also themselves in SW5.
"""

from elp import (
    Mode,
    aeem15,
    aeem_relational,
    parse_formula,
    parse_program,
    parse_rule,
    render_formula,
    translation,
)
from elp.equilibrium import (
    eem15,
    eem_relational,
    format_worlds,
    select_aeem15,
    select_aeem_relational,
)

sigma1 = parse_program("a or b. c :- K a.")
tr = translation(sigma1)
print("formula:", render_formula(tr.formula))

# %%
# Truth-minimal S5 models before any knowledge minimisation.  Both the
# expected {{a},{b}} and the unsupported {{a,c}} are there.
print("EEM15:", ", ".join(format_worlds(v) for v in eem15(tr.formula)))
eem20 = eem_relational(tr.formula, Mode.KD45)
for model in eem20.members:
    print("EEM20 member:", model)

# %%
# ES15's preorder removes {{a,c}}.  So does ES20, because {{a,c}} has an
# extension among the KD45 equilibrium models.
sel15 = select_aeem15(tr.formula)
print("AEEM15:", [format_worlds(v) for v in sel15.views])
sel20 = select_aeem_relational(tr.formula, Mode.KD45)
print("AEEM20:", [format_worlds(v) for v in sel20.views])
for line in sel20.diagnostics:
    print("  ", line)

# %%
# Now require c.  The only classical model left is {{a,c}}.  ES20 still sees
# the extension by {b,c} and refuses it.  Under SW5 that extension is not
# truth-minimal, so ES21 accepts {{a,c}}.
sigma = sigma1 + parse_rule(":- not c.")
f = translation(sigma).formula
for mode in (Mode.KD45, Mode.SW5):
    sel = select_aeem_relational(f, mode)
    print(mode.value, [format_worlds(v) for v in sel.views] or "none", sel.diagnostics)

# %%
# Single modal operators behave differently under the three semantics.
for text in ("K p", "-K -p", "KHAT p"):
    g = parse_formula(text)
    row = [aeem15(g), aeem_relational(g, Mode.KD45), aeem_relational(g, Mode.SW5)]
    shown = [", ".join(format_worlds(v) for v in r) or "none" for r in row]
    print(f"{text:8} ES15: {shown[0]:12} ES20: {shown[1]:12} ES21: {shown[2]}")
