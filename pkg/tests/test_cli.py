from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from elp.cli import main, parse_view, views_json

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def run(*argv, stdin=None):
    """Run the CLI in-process; returns (exit code, stdout)."""
    out = io.StringIO()
    old = sys.stdin
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(list(argv), out)
    except SystemExit as exc:
        code = exc.code
    finally:
        sys.stdin = old
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(p.stem for p in CORPUS.glob("*.elp")))
def test_golden_corpus(name):
    proc = subprocess.run(
        [sys.executable, "-m", "elp", "solve", "--semantics", "all", "--format", "json",
         str(CORPUS / f"{name}.elp")],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout == (CORPUS / "expected" / f"{name}.json").read_text()


def test_solve_text():
    code, out = run("solve", "--semantics", "es18,es20", str(CORPUS / "sigma.elp"))
    assert code == 0
    assert out == "ES18: {{a,c}}\nES20: no world-views\n"


def test_solve_stdin_and_diagnostics():
    code, out = run("solve", "--semantics", "es20", "--diagnostics", "--format", "json",
                    stdin="a or b. c :- K a. :- not c.")
    data = json.loads(out)
    assert code == 0
    assert data["results"][0]["diagnostics"] == [
        "{{a,c}} eliminated by extension {{a,c}, *{b,c}}"]


def test_semantics_order_and_dedup():
    code, out = run("solve", "--semantics", "es21", "--semantics", "es15,es21",
                    str(CORPUS / "delta.elp"))
    assert out.splitlines() == ["ES15: {{b}}", "ES21: {{b}}"]


def test_functional_minimality_flag():
    _, out = run("solve", "--semantics", "es21", "--functional-minimality",
                 str(CORPUS / "psi_prime.elp"))
    assert out == "ES21: {{a,b}}\n"


def test_compare():
    code, out = run("compare", str(CORPUS / "sigma.elp"))
    assert code == 0
    assert out.splitlines() == [
        "ES15  {{{a,c}}}", "ES16  {{{a,c}}}", "ES18  {{{a,c}}}",
        "ES20  no world-views", "ES21  {{{a,c}}}",
    ]


def test_reduct_for_view():
    code, out = run("reduct", "--view", "{a,c}", stdin="c :- K a.")
    assert (code, out) == (0, "c :- a.\n")
    _, out = run("reduct", "--variant", "es16", "--view", "{{a,c}}", stdin="c :- K a.")
    assert out == "c :- not not a.\n"


def test_reduct_all_guesses():
    _, out = run("reduct", str(CORPUS / "sigma.elp"))
    assert out.startswith("% guess {}: {{a,c}}: world-view\na or b.\nc :- a.\n:- not c.")
    assert "% guess {not K a}: no answer sets: fixed point fails" in out


def test_translate():
    _, out = run("translate", stdin="a or b. b :- M a.")
    assert out == "(a | b) & (-K -a -> b)\n"


def test_check():
    _, out = run("check", "--property", "scm", "--constraint", ":- not K a.",
                 "--semantics", "es18,es21", str(CORPUS / "psi.elp"))
    lines = out.splitlines()
    assert lines[0].startswith("scm under ES18: fails, witness {{{a,b}}}")
    assert lines[1] == "scm under ES21: holds"
    code, _ = run("check", "--property", "scm", str(CORPUS / "psi.elp"))
    assert code == 1


def test_validate():
    code, out = run("validate", "K p -> p", "--variant", "kd45")
    assert code == 0
    assert out == "countermodel {{p}, *{}} fails at {}\n"
    _, out = run("validate", "K p -> p", "--variant", "sw5", "--format", "json")
    data = json.loads(out)
    assert data["valid"] and data["countermodel"] is None


@pytest.mark.parametrize("argv, stdin, code", [
    (["solve", "--semantics", "es99"], "a.", 1),
    (["solve"], "a :- b c.", 1),
    (["solve", "--semantics", "es16"], "a. :-wv K a.", 1),
    (["solve", "/nonexistent/file.elp"], None, 1),
    (["solve", "--max-atoms", "2"], "a. b. c.", 2),
    (["validate", "p |"], None, 1),
])
def test_exit_codes(argv, stdin, code):
    assert run(*argv, stdin=stdin)[0] == code


def test_parse_view():
    assert views_json([parse_view("{{a},{b,~c}}")]) == [[["a"], ["b", "~c"]]]
    assert views_json([parse_view("{}")]) == [[[]]]
    with pytest.raises(ValueError):
        parse_view("a,b")


def test_json_round_trip():
    _, out = run("solve", "--format", "json", str(CORPUS / "sigma1.elp"))
    data = json.loads(out)
    for entry in data["results"]:
        rebuilt = [parse_view("{" + ",".join("{" + ",".join(v) + "}" for v in view) + "}")
                   for view in entry["views"]]
        assert views_json(rebuilt) == entry["views"]
