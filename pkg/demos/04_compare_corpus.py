"""
Five semantics side by side
===========================

The corpus directory holds the small programs used throughout the test
suite.  ``compare`` solves each one under all five semantics and groups the
semantics that agree.  Run from the repository root.
"""

from pathlib import Path

from elp import check_supra_asp, compare, parse_program
from elp.properties import ALL_SEMANTICS

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

# %%
# One table per program.  The first comment line of each file names it.
for path in sorted(CORPUS.glob("*.elp")):
    text = path.read_text()
    title = text.splitlines()[0].lstrip("% ")
    report = compare(parse_program(text))
    print(f"== {title}")
    print(report.table())
    groups = [" ".join(map(str, g)) for g in report.groups()]
    print("agreeing groups:", " | ".join(groups))
    print()

# %%
# On programs without modal operators every semantics collapses to answer
# set programming: the single world-view is the set of answer sets.
plain = parse_program("p :- not q. q :- not p. r :- p.")
for s in ALL_SEMANTICS:
    print(check_supra_asp(plain, s))
