"""Abstract syntax, parsers and printers for ground epistemic logic programs
and for epistemic here-and-there (EHT) formulas.

Program text::

    % comment
    a or b.
    c :- K a, not M ~d, not not e.
    :- not K a.
    :-wv not K b.

Formula text uses ``&``, ``|``, ``->``, ``<->``, ``-`` (negation), ``K``,
``KHAT``, ``bot`` and ``top``.  Unary operators bind tightest, then ``&``,
``|``, ``->`` and finally ``<->``; both arrows associate to the right.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, fields
from functools import cached_property
from typing import Iterable, Iterator, Union

from .errors import ParseError

KEYWORDS = frozenset({"not", "or", "bot", "top"})
_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _check_atom(name: str) -> str:
    if not _ATOM_RE.match(name) or name in KEYWORDS:
        raise ValueError(f"invalid atom name {name!r}")
    return name


# ---------------------------------------------------------------------------
# Program syntax
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ObjectiveLiteral:
    """An atom ``p`` or its strong negation ``~p``."""

    atom: str
    negated: bool = False

    def __post_init__(self):
        _check_atom(self.atom)

    def __str__(self) -> str:
        return f"~{self.atom}" if self.negated else self.atom

    @property
    def complement(self) -> ObjectiveLiteral:
        return ObjectiveLiteral(self.atom, not self.negated)


@dataclass(frozen=True)
class ExtendedObjectiveLiteral:
    """``l``, ``not l`` or ``not not l`` (``naf`` counts the ``not``s)."""

    lit: ObjectiveLiteral
    naf: int = 0

    def __post_init__(self):
        if self.naf not in (0, 1, 2):
            raise ValueError(f"naf depth must be 0, 1 or 2, got {self.naf}")

    def __str__(self) -> str:
        return "not " * self.naf + str(self.lit)


class Modality(str, enum.Enum):
    K = "K"
    M = "M"
    KHAT = "KHAT"


@dataclass(frozen=True)
class SubjectiveLiteral:
    modality: Modality
    lit: ObjectiveLiteral

    def __str__(self) -> str:
        return f"{self.modality.value} {self.lit}"


@dataclass(frozen=True)
class ExtendedSubjectiveLiteral:
    subj: SubjectiveLiteral
    negated: bool = False

    def __str__(self) -> str:
        return ("not " if self.negated else "") + str(self.subj)


BodyElement = Union[ExtendedObjectiveLiteral, ExtendedSubjectiveLiteral]


@dataclass(frozen=True)
class Rule:
    """``l1 or ... or lm :- e1, ..., en.``

    An empty head is a constraint, an empty body a fact.  ``wv`` marks a
    world-view constraint (``:-wv``), which may only filter world-views.
    """

    head: tuple[ObjectiveLiteral, ...] = ()
    body: tuple[BodyElement, ...] = ()
    wv: bool = False

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        for lit in self.head:
            if not isinstance(lit, ObjectiveLiteral):
                raise TypeError(f"rule heads hold objective literals only, got {lit!r}")
        if self.wv and (self.head or not self.is_subjective_constraint):
            raise ValueError("a world-view constraint needs an empty head and a subjective body")

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def is_subjective_constraint(self) -> bool:
        return (not self.head and bool(self.body)
                and all(isinstance(e, ExtendedSubjectiveLiteral) for e in self.body))

    @property
    def is_epistemic(self) -> bool:
        return any(isinstance(e, ExtendedSubjectiveLiteral) for e in self.body)

    def literals(self) -> Iterator[ObjectiveLiteral]:
        yield from self.head
        for e in self.body:
            yield e.lit if isinstance(e, ExtendedObjectiveLiteral) else e.subj.lit

    def __str__(self) -> str:
        return render_rule(self)


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    @cached_property
    def atoms(self) -> frozenset[str]:
        return frozenset(l.atom for l in self.literals)

    @cached_property
    def literals(self) -> frozenset[ObjectiveLiteral]:
        return frozenset(l for r in self.rules for l in r.literals())

    @cached_property
    def is_epistemic(self) -> bool:
        return any(r.is_epistemic for r in self.rules)

    def __add__(self, other: Program | Rule | Iterable[Rule]) -> Program:
        if isinstance(other, Program):
            return Program(self.rules + other.rules)
        if isinstance(other, Rule):
            return Program(self.rules + (other,))
        return Program(self.rules + tuple(other))

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return render_program(self)


# ---------------------------------------------------------------------------
# EHT formulas
# ---------------------------------------------------------------------------


class Formula:
    """Base class of EHT formula nodes."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __invert__(self) -> Formula:
        return neg(self)

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class AtomRef(Formula):
    name: str

    def __post_init__(self):
        _check_atom(self.name)

    def __repr__(self) -> str:
        return f"AtomRef({self.name!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class K(Formula):
    sub: Formula

    def __repr__(self) -> str:
        return f"K({self.sub!r})"


@dataclass(frozen=True, repr=False)
class KHat(Formula):
    sub: Formula

    def __repr__(self) -> str:
        return f"KHat({self.sub!r})"


def _cached_hash(self) -> int:
    # formulas are immutable trees that get hashed often; memoize per node
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__, *(getattr(self, f.name) for f in fields(self))))
        object.__setattr__(self, "_hash", h)
        return h


for _cls in (Bottom, AtomRef, And, Or, Implies, K, KHat):
    _cls.__hash__ = _cached_hash

BOTTOM = Bottom()
TOP = Implies(BOTTOM, BOTTOM)


def neg(f: Formula) -> Formula:
    return Implies(f, BOTTOM)


def iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``top``."""
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``bot``."""
    if not fs:
        return BOTTOM
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def atoms_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, AtomRef):
            out.add(g.name)
        elif isinstance(g, (And, Or, Implies)):
            stack += [g.left, g.right]
        elif isinstance(g, (K, KHat)):
            stack.append(g.sub)
    return frozenset(out)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas of ``f``, children before parents."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula):
        if g in seen:
            return
        if isinstance(g, (And, Or, Implies)):
            visit(g.left)
            visit(g.right)
        elif isinstance(g, (K, KHat)):
            visit(g.sub)
        seen[g] = None

    visit(f)
    return list(seen)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_PROGRAM_TOKENS = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"%[^\n]*"),
    ("WVARROW", r":-wv(?![A-Za-z0-9_])"),
    ("ARROW", r":-"),
    ("COMMA", r","),
    ("DOT", r"\."),
    ("TILDE", r"~"),
    ("IDENT", r"[A-Za-z][A-Za-z0-9_]*"),
]

_FORMULA_TOKENS = [
    ("WS", r"[ \t\r\n]+"),
    ("IFF", r"<->"),
    ("IMP", r"->"),
    ("NEG", r"-"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("LPAR", r"\("),
    ("RPAR", r"\)"),
    ("IDENT", r"[A-Za-z][A-Za-z0-9_]*"),
]


def _tokenize(text: str, spec: list[tuple[str, str]]) -> list[_Token]:
    regex = re.compile("|".join(f"(?P<{k}>{p})" for k, p in spec))
    out: list[_Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = regex.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, value = m.lastgroup, m.group()
        if kind not in ("WS", "COMMENT"):
            out.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    out.append(_Token("EOF", "", line, pos - line_start + 1))
    return out


class _Cursor:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, kind: str, what: str) -> _Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}")
        return self.advance()

    def is_word(self, word: str) -> bool:
        return self.tok.kind == "IDENT" and self.tok.text == word


# ---------------------------------------------------------------------------
# Program parser / printer
# ---------------------------------------------------------------------------

_MODALITIES = {m.value: m for m in Modality}


def parse_program(text: str) -> Program:
    """Parse ELP text into a :class:`Program`.

    Raises:
        ParseError: on syntax errors, subjective literals or ``not`` in rule
            heads, and ``~~p``.
    """
    cur = _Cursor(_tokenize(text, _PROGRAM_TOKENS))
    rules = []
    while cur.tok.kind != "EOF":
        rules.append(_parse_rule(cur))
    return Program(tuple(rules))


def parse_rule(text: str) -> Rule:
    prog = parse_program(text)
    if len(prog) != 1:
        raise ParseError(f"expected exactly one rule, got {len(prog)}", 1, 1)
    return prog.rules[0]


def _parse_rule(cur: _Cursor) -> Rule:
    start = cur.tok
    if cur.tok.kind == "WVARROW":
        cur.advance()
        body = _parse_body(cur)
        cur.expect("DOT", "'.'")
        if not body or not all(isinstance(e, ExtendedSubjectiveLiteral) for e in body):
            raise ParseError("world-view constraints take subjective literals only",
                             start.line, start.col)
        return Rule((), body, wv=True)
    head: list[ObjectiveLiteral] = []
    if cur.tok.kind != "ARROW":
        head.append(_parse_head_literal(cur))
        while cur.is_word("or"):
            cur.advance()
            head.append(_parse_head_literal(cur))
    body: tuple[BodyElement, ...] = ()
    if cur.tok.kind == "ARROW":
        cur.advance()
        body = _parse_body(cur)
    elif cur.tok.kind == "WVARROW":
        raise cur.error("world-view constraints cannot have a head")
    cur.expect("DOT", "'.'")
    return Rule(tuple(head), body)


def _parse_head_literal(cur: _Cursor) -> ObjectiveLiteral:
    tok = cur.tok
    if tok.kind == "IDENT" and tok.text in _MODALITIES:
        raise ParseError(f"subjective literal in head ({tok.text})", tok.line, tok.col)
    if cur.is_word("not"):
        raise ParseError("default negation in head", tok.line, tok.col)
    return _parse_literal(cur)


def _parse_literal(cur: _Cursor) -> ObjectiveLiteral:
    negated = False
    if cur.tok.kind == "TILDE":
        tilde = cur.advance()
        if cur.tok.kind == "TILDE":
            raise ParseError("double strong negation", tilde.line, tilde.col)
        negated = True
    tok = cur.tok
    if tok.kind != "IDENT" or not _ATOM_RE.match(tok.text) or tok.text in KEYWORDS:
        raise cur.error("expected an atom")
    cur.advance()
    return ObjectiveLiteral(tok.text, negated)


def _parse_body(cur: _Cursor) -> tuple[BodyElement, ...]:
    if cur.tok.kind == "DOT":
        return ()
    out = [_parse_body_element(cur)]
    while cur.tok.kind == "COMMA":
        cur.advance()
        out.append(_parse_body_element(cur))
    return tuple(out)


def _parse_body_element(cur: _Cursor) -> BodyElement:
    naf = 0
    while cur.is_word("not"):
        naf += 1
        cur.advance()
    if naf > 2:
        raise cur.error("at most two default negations may be stacked")
    if cur.tok.kind == "IDENT" and cur.tok.text in _MODALITIES:
        if naf > 1:
            raise cur.error("'not not' cannot precede a subjective literal")
        modality = _MODALITIES[cur.advance().text]
        return ExtendedSubjectiveLiteral(SubjectiveLiteral(modality, _parse_literal(cur)), naf == 1)
    return ExtendedObjectiveLiteral(_parse_literal(cur), naf)


def render_rule(rule: Rule) -> str:
    head = " or ".join(map(str, rule.head))
    body = ", ".join(map(str, rule.body))
    if rule.wv:
        return f":-wv {body}."
    if head and body:
        return f"{head} :- {body}."
    if head:
        return f"{head}."
    return f":- {body}." if body else ":- ."


def render_program(prog: Program) -> str:
    return "\n".join(render_rule(r) for r in prog.rules)


# ---------------------------------------------------------------------------
# Formula parser / printer
# ---------------------------------------------------------------------------


def parse_formula(text: str) -> Formula:
    """Parse EHT formula text; ``-``, ``top`` and ``<->`` expand to their
    definitions in terms of ``->`` and ``bot``."""
    cur = _Cursor(_tokenize(text, _FORMULA_TOKENS))
    f = _parse_iff(cur)
    if cur.tok.kind != "EOF":
        raise cur.error("unexpected token")
    return f


parse_eht_formula = parse_formula


def _parse_iff(cur: _Cursor) -> Formula:
    left = _parse_imp(cur)
    if cur.tok.kind == "IFF":
        cur.advance()
        return iff(left, _parse_iff(cur))
    return left


def _parse_imp(cur: _Cursor) -> Formula:
    left = _parse_or(cur)
    if cur.tok.kind == "IMP":
        cur.advance()
        return Implies(left, _parse_imp(cur))
    return left


def _parse_or(cur: _Cursor) -> Formula:
    f = _parse_and(cur)
    while cur.tok.kind == "OR":
        cur.advance()
        f = Or(f, _parse_and(cur))
    return f


def _parse_and(cur: _Cursor) -> Formula:
    f = _parse_unary(cur)
    while cur.tok.kind == "AND":
        cur.advance()
        f = And(f, _parse_unary(cur))
    return f


def _parse_unary(cur: _Cursor) -> Formula:
    tok = cur.tok
    if tok.kind == "NEG":
        cur.advance()
        return neg(_parse_unary(cur))
    if tok.kind == "IDENT" and tok.text == "K":
        cur.advance()
        return K(_parse_unary(cur))
    if tok.kind == "IDENT" and tok.text == "KHAT":
        cur.advance()
        return KHat(_parse_unary(cur))
    if tok.kind == "LPAR":
        cur.advance()
        f = _parse_iff(cur)
        cur.expect("RPAR", "')'")
        return f
    if tok.kind == "IDENT" and tok.text == "bot":
        cur.advance()
        return BOTTOM
    if tok.kind == "IDENT" and tok.text == "top":
        cur.advance()
        return TOP
    if tok.kind == "IDENT" and _ATOM_RE.match(tok.text) and tok.text not in KEYWORDS:
        cur.advance()
        return AtomRef(tok.text)
    raise cur.error("expected a formula")


def _iff_parts(f: Formula) -> tuple[Formula, Formula] | None:
    if (isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def _render(f: Formula) -> tuple[str, int]:
    # precedence levels: <-> 0, -> 1, | 2, & 3, unary 4, atomic 5
    def wrap(g: Formula, level: int) -> str:
        text, own = _render(g)
        return f"({text})" if own < level else text

    if isinstance(f, Bottom):
        return "bot", 5
    if isinstance(f, AtomRef):
        return f.name, 5
    if f == TOP:
        return "top", 5
    parts = _iff_parts(f)
    if parts is not None:
        return f"{wrap(parts[0], 1)} <-> {wrap(parts[1], 0)}", 0
    if isinstance(f, Implies) and isinstance(f.right, Bottom):
        return "-" + wrap(f.left, 4), 4
    if isinstance(f, Implies):
        return f"{wrap(f.left, 2)} -> {wrap(f.right, 1)}", 1
    if isinstance(f, Or):
        return f"{wrap(f.left, 2)} | {wrap(f.right, 3)}", 2
    if isinstance(f, And):
        return f"{wrap(f.left, 3)} & {wrap(f.right, 4)}", 3
    if isinstance(f, K):
        return "K " + wrap(f.sub, 4), 4
    if isinstance(f, KHat):
        return "KHAT " + wrap(f.sub, 4), 4
    raise TypeError(f"not a formula: {f!r}")


def render_formula(f: Formula) -> str:
    return _render(f)[0]


def render(x: Program | Rule | Formula) -> str:
    """Canonical text for a program, rule or formula; re-parses to an equal value."""
    if isinstance(x, Program):
        return render_program(x)
    if isinstance(x, Rule):
        return render_rule(x)
    if isinstance(x, Formula):
        return render_formula(x)
    raise TypeError(f"cannot render {type(x).__name__}")
