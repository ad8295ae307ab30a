"""
World-views by guessing epistemic negations
===========================================

The reduct semantics ES16 and ES18 guess which epistemic negations
(``not K l`` and ``M l``) are true, reduce the program, and keep a guess when
the reduct's answer sets confirm it.  This walk-through follows that loop on
a small disjunctive program and then shows how adding a constraint can
create a world-view out of nothing.
"""

from elp import parse_program, parse_rule, render_program
from elp.asp import answer_sets, format_view
from elp.properties import check_scm
from elp.reduct import ep_set, modal_reduct, world_views_reduct

# %%
# Two atoms that each need the other to be known.
psi = parse_program("""
    a or b.
    a :- K b.
    b :- K a.
""")
print(render_program(psi))
print("epistemic negations:", sorted(map(str, ep_set(psi))))

# %%
# Every guess, its reduct and the verdict.  The empty guess assumes ``K a``
# and ``K b`` are true, so the rules become ordinary ones.
res = world_views_reduct(psi, "es18")
for trace in res.diagnostics:
    print(trace.describe())

print("world-views:", ", ".join(format_view(v) for v in res.views))

# %%
# The reduct for a given view is available directly.  Under {{a},{b}}
# neither ``K a`` nor ``K b`` holds, so both modal rules disappear.
view = next(iter(res.views))
reduct = modal_reduct(psi, view, "es18")
print(render_program(reduct))
print("its answer sets:", format_view(answer_sets(reduct)))

# %%
# Adding the subjective constraint ``:- not K a.`` should only ever remove
# world-views.  Under ES18 it produces a new one instead.
r4 = parse_rule(":- not K a.")
after = world_views_reduct(psi + r4, "es18").views
print("with the constraint:", ", ".join(format_view(v) for v in after))
print(check_scm(psi, r4, "es18"))

# %%
# ES16 reads ``K a`` as ``not not a`` instead of ``a``.  The two reducts part
# ways on self-supporting knowledge.
loop = parse_program("a :- K a. :- not K a.")
for variant in ("es16", "es18"):
    found = world_views_reduct(loop, variant).views
    print(variant, [format_view(v) for v in found] or "no world-views")
