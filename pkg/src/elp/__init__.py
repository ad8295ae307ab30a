"""Ground epistemic logic programs under five world-view semantics.

ES16 and ES18 are computed by guessing epistemic negations and checking a
modal reduct; ES15, ES20 and ES21 by equilibrium models of the program's
epistemic here-and-there translation.
"""

from .asp import answer_sets, belief_view, classical_s5_check, format_view, valuation
from .eht import (
    FunctionalEhtModel,
    Mode,
    RelationalEhtModel,
    classical_model_check,
    eht_valid,
    sat_functional,
    sat_relational,
    translate,
    translation,
)
from .equilibrium import aeem15, aeem_relational, eem15, eem_relational, models_star, preorder_leq
from .errors import BoundExceeded, ElpError, ParseError, UnsupportedFeature
from .properties import (
    Bounds,
    check_scm,
    check_supra_asp,
    check_supra_s5,
    compare,
    solve,
)
from .reduct import Semantics, modal_reduct, world_views_reduct
from .syntax import (
    Program,
    Rule,
    parse_formula,
    parse_program,
    parse_rule,
    render_formula,
    render_program,
)

__version__ = "0.1.0"

__all__ = [
    "BoundExceeded",
    "Bounds",
    "ElpError",
    "FunctionalEhtModel",
    "Mode",
    "ParseError",
    "Program",
    "RelationalEhtModel",
    "Rule",
    "Semantics",
    "UnsupportedFeature",
    "aeem15",
    "aeem_relational",
    "answer_sets",
    "belief_view",
    "check_scm",
    "check_supra_asp",
    "check_supra_s5",
    "classical_model_check",
    "classical_s5_check",
    "compare",
    "eem15",
    "eem_relational",
    "eht_valid",
    "format_view",
    "modal_reduct",
    "models_star",
    "parse_formula",
    "parse_program",
    "parse_rule",
    "preorder_leq",
    "render_formula",
    "render_program",
    "sat_functional",
    "sat_relational",
    "solve",
    "translate",
    "translation",
    "valuation",
    "world_views_reduct",
]
