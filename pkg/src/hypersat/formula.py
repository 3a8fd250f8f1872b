"""HyperLTL formulas: AST, parser, printer, and normal-form rewrites.

A formula is a quantifier prefix over trace variables followed by a
quantifier-free LTL body whose atoms are indexed propositions ``"ap"_var``.
The concrete syntax is::

    forall p1. exists p2. G ("a"_p1 <-> "a"_p2)

Atomic propositions are always double-quoted, so they may contain arbitrary
characters (everything except the quote itself).  ``//`` starts a comment.
Unary operators (``!``, ``X``, ``G``, ``F``) bind tightest, then the binary
temporal operators ``U``/``W``/``R`` (right-associative), then ``&``, ``|``,
then ``->`` and ``<->`` (right-associative).  ``1`` and ``0`` denote the
boolean constants.  ``forall``, ``exists``, ``X``, ``G``, ``F``, ``U``,
``W`` and ``R`` are reserved words and cannot be used as trace variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class Quantifier(Enum):
    FORALL = "forall"
    EXISTS = "exists"


class FormulaError(Exception):
    """Base class for everything raised by this module."""


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnboundVariableError(FormulaError):
    def __init__(self, name: str):
        super().__init__(f"trace variable '{name}' is not bound by the prefix")
        self.name = name


class DuplicateVariableError(FormulaError):
    def __init__(self, name: str):
        super().__init__(f"trace variable '{name}' bound twice in the prefix")
        self.name = name


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LtlBody:
    """Base class for body nodes; all nodes are immutable and hashable."""


@dataclass(frozen=True)
class Atom(LtlBody):
    ap: str
    var: str


@dataclass(frozen=True)
class TrueConst(LtlBody):
    pass


@dataclass(frozen=True)
class FalseConst(LtlBody):
    pass


@dataclass(frozen=True)
class Not(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class And(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Or(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Implies(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Iff(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Next(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class Until(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class WeakUntil(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Release(LtlBody):
    left: LtlBody
    right: LtlBody


@dataclass(frozen=True)
class Eventually(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class Globally(LtlBody):
    arg: LtlBody


@dataclass(frozen=True)
class HyperFormula:
    """Quantifier prefix plus quantifier-free LTL body.

    The prefix is an ordered tuple of (quantifier, trace variable) pairs;
    variables are pairwise distinct and every atom in the body is bound.
    Use :func:`make_hyper` (or the parser) to get these invariants checked.
    """

    prefix: tuple[tuple[Quantifier, str], ...]
    body: LtlBody

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)


IDENT_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")

RESERVED_WORDS = frozenset({"forall", "exists", "X", "G", "F", "U", "W", "R"})


def make_hyper(prefix, body: LtlBody) -> HyperFormula:
    """Build a HyperFormula, validating variable names and closedness."""
    norm = []
    seen = set()
    for quant, var in prefix:
        if not IDENT_RE.match(var) or var in RESERVED_WORDS:
            raise FormulaError(f"invalid trace variable name: {var!r}")
        if var in seen:
            raise DuplicateVariableError(var)
        seen.add(var)
        norm.append((Quantifier(quant), var))
    for _, var in sorted(atoms_of(body)):
        if var not in seen:
            raise UnboundVariableError(var)
    return HyperFormula(tuple(norm), body)


def atoms_of(body: LtlBody) -> frozenset[tuple[str, str]]:
    """All (ap, var) pairs mentioned in the body."""
    acc: set[tuple[str, str]] = set()
    stack = [body]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            acc.add((node.ap, node.var))
        elif isinstance(node, (Not, Next, Eventually, Globally)):
            stack.append(node.arg)
        elif isinstance(node, (And, Or, Implies, Iff, Until, WeakUntil, Release)):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(acc)


def aps_of(phi: HyperFormula) -> tuple[str, ...]:
    """Sorted atomic proposition names used anywhere in the formula."""
    return tuple(sorted({ap for ap, _ in atoms_of(phi.body)}))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_SPEC = [
    ("COMMENT", r"//[^\n]*"),
    ("WS", r"[ \t\r\n]+"),
    ("APATOM", r'"[^"]*"_[a-zA-Z_][a-zA-Z0-9_]*'),
    ("WORD", r"[a-zA-Z_][a-zA-Z0-9_]*"),
    ("IFF", r"<->"),
    ("IMPLIES", r"->"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("NOT", r"!"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("DOT", r"\."),
    ("TRUE", r"1"),
    ("FALSE", r"0"),
]

_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    def expect(self, kind: str, what: str) -> _Token:
        if self.peek().kind != kind:
            self.error(f"expected {what}, got {self.peek().text!r}")
        return self.advance()

    # formula := quant+ body
    def parse_formula(self) -> HyperFormula:
        prefix = []
        while self.peek().kind == "WORD" and self.peek().text in ("forall", "exists"):
            quant = Quantifier(self.advance().text)
            name_tok = self.peek()
            if name_tok.kind != "WORD" or name_tok.text in RESERVED_WORDS:
                self.error("expected trace variable name")
            self.advance()
            self.expect("DOT", "'.' after trace variable")
            prefix.append((quant, name_tok.text))
        if not prefix:
            self.error("expected quantifier prefix ('forall'/'exists')")
        body = self.parse_iff()
        if self.peek().kind != "EOF":
            self.error(f"unexpected trailing input {self.peek().text!r}")
        try:
            return make_hyper(prefix, body)
        except DuplicateVariableError:
            raise
        except UnboundVariableError:
            raise

    def parse_iff(self) -> LtlBody:
        left = self.parse_implies()
        if self.peek().kind == "IFF":
            self.advance()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> LtlBody:
        left = self.parse_or()
        if self.peek().kind == "IMPLIES":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> LtlBody:
        left = self.parse_and()
        while self.peek().kind == "OR":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> LtlBody:
        left = self.parse_temporal()
        while self.peek().kind == "AND":
            self.advance()
            left = And(left, self.parse_temporal())
        return left

    def parse_temporal(self) -> LtlBody:
        left = self.parse_unary()
        tok = self.peek()
        if tok.kind == "WORD" and tok.text in ("U", "W", "R"):
            op = self.advance().text
            right = self.parse_temporal()
            return {"U": Until, "W": WeakUntil, "R": Release}[op](left, right)
        return left

    def parse_unary(self) -> LtlBody:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.parse_unary())
        if tok.kind == "WORD" and tok.text in ("X", "G", "F"):
            self.advance()
            node = {"X": Next, "G": Globally, "F": Eventually}[tok.text]
            return node(self.parse_unary())
        if tok.kind == "APATOM":
            self.advance()
            closing = tok.text.rindex('"')
            ap = tok.text[1:closing]
            var = tok.text[closing + 2:]
            if not ap:
                raise ParseError("empty atomic proposition name", tok.line, tok.column)
            return Atom(ap, var)
        if tok.kind == "TRUE":
            self.advance()
            return TrueConst()
        if tok.kind == "FALSE":
            self.advance()
            return FalseConst()
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.parse_iff()
            self.expect("RPAREN", "')'")
            return inner
        self.error(f"expected formula, got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input")


def parse(text: str) -> HyperFormula:
    """Parse the concrete syntax into a HyperFormula.

    Raises ParseError (with position), UnboundVariableError, or
    DuplicateVariableError.
    """
    return _Parser(_tokenize(text)).parse_formula()


def parse_body(text: str, variables: tuple[str, ...]) -> LtlBody:
    """Parse a bare LTL body whose atoms use the given bound variables."""
    parser = _Parser(_tokenize(text))
    body = parser.parse_iff()
    if parser.peek().kind != "EOF":
        parser.error(f"unexpected trailing input {parser.peek().text!r}")
    for _, var in sorted(atoms_of(body)):
        if var not in variables:
            raise UnboundVariableError(var)
    return body


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def pretty_body(body: LtlBody) -> str:
    if isinstance(body, Atom):
        return f'"{body.ap}"_{body.var}'
    if isinstance(body, TrueConst):
        return "1"
    if isinstance(body, FalseConst):
        return "0"
    if isinstance(body, Not):
        return f"! {_pretty_arg(body.arg)}"
    if isinstance(body, Next):
        return f"X {_pretty_arg(body.arg)}"
    if isinstance(body, Globally):
        return f"G {_pretty_arg(body.arg)}"
    if isinstance(body, Eventually):
        return f"F {_pretty_arg(body.arg)}"
    ops = {And: "&", Or: "|", Implies: "->", Iff: "<->",
           Until: "U", WeakUntil: "W", Release: "R"}
    op = ops[type(body)]
    return f"({pretty_body(body.left)} {op} {pretty_body(body.right)})"


def _pretty_arg(arg: LtlBody) -> str:
    if isinstance(arg, (Atom, TrueConst, FalseConst, Not, Next, Globally, Eventually)):
        return pretty_body(arg)
    return pretty_body(arg)  # binary nodes already print their own parens


def pretty(phi: HyperFormula) -> str:
    parts = [f"{q.value} {v}." for q, v in phi.prefix]
    parts.append(pretty_body(phi.body))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Rewrites
# ---------------------------------------------------------------------------

def to_nnf(body: LtlBody) -> LtlBody:
    """Push negations onto atoms, over {&,|,X,U,R,W,G,F} plus literals."""
    return _nnf(body, False)


def _nnf(node: LtlBody, neg: bool) -> LtlBody:
    if isinstance(node, TrueConst):
        return FalseConst() if neg else node
    if isinstance(node, FalseConst):
        return TrueConst() if neg else node
    if isinstance(node, Atom):
        return Not(node) if neg else node
    if isinstance(node, Not):
        return _nnf(node.arg, not neg)
    if isinstance(node, And):
        cls = Or if neg else And
        return cls(_nnf(node.left, neg), _nnf(node.right, neg))
    if isinstance(node, Or):
        cls = And if neg else Or
        return cls(_nnf(node.left, neg), _nnf(node.right, neg))
    if isinstance(node, Implies):
        if neg:
            return And(_nnf(node.left, False), _nnf(node.right, True))
        return Or(_nnf(node.left, True), _nnf(node.right, False))
    if isinstance(node, Iff):
        ll, nl = _nnf(node.left, False), _nnf(node.left, True)
        rr, nr = _nnf(node.right, False), _nnf(node.right, True)
        if neg:
            return Or(And(ll, nr), And(nl, rr))
        return Or(And(ll, rr), And(nl, nr))
    if isinstance(node, Next):
        return Next(_nnf(node.arg, neg))
    if isinstance(node, Until):
        if neg:
            return Release(_nnf(node.left, True), _nnf(node.right, True))
        return Until(_nnf(node.left, False), _nnf(node.right, False))
    if isinstance(node, Release):
        if neg:
            return Until(_nnf(node.left, True), _nnf(node.right, True))
        return Release(_nnf(node.left, False), _nnf(node.right, False))
    if isinstance(node, WeakUntil):
        # !(a W b) == !b U (!a & !b), via a W b == b R (a | b)
        if neg:
            return Until(_nnf(node.right, True),
                         And(_nnf(node.left, True), _nnf(node.right, True)))
        return WeakUntil(_nnf(node.left, False), _nnf(node.right, False))
    if isinstance(node, Eventually):
        if neg:
            return Globally(_nnf(node.arg, True))
        return Eventually(_nnf(node.arg, False))
    if isinstance(node, Globally):
        if neg:
            return Eventually(_nnf(node.arg, True))
        return Globally(_nnf(node.arg, False))
    raise TypeError(f"not an LTL body node: {node!r}")


def expand_sugar(body: LtlBody) -> LtlBody:
    """Rewrite to the core operator set {!, &, X, U} plus the constant 1."""
    if isinstance(body, (Atom, TrueConst)):
        return body
    if isinstance(body, FalseConst):
        return Not(TrueConst())
    if isinstance(body, Not):
        return Not(expand_sugar(body.arg))
    if isinstance(body, And):
        return And(expand_sugar(body.left), expand_sugar(body.right))
    if isinstance(body, Or):
        return Not(And(Not(expand_sugar(body.left)), Not(expand_sugar(body.right))))
    if isinstance(body, Implies):
        return Not(And(expand_sugar(body.left), Not(expand_sugar(body.right))))
    if isinstance(body, Iff):
        return expand_sugar(And(Implies(body.left, body.right),
                                Implies(body.right, body.left)))
    if isinstance(body, Next):
        return Next(expand_sugar(body.arg))
    if isinstance(body, Until):
        return Until(expand_sugar(body.left), expand_sugar(body.right))
    if isinstance(body, Eventually):
        return Until(TrueConst(), expand_sugar(body.arg))
    if isinstance(body, Globally):
        return Not(Until(TrueConst(), Not(expand_sugar(body.arg))))
    if isinstance(body, WeakUntil):
        return expand_sugar(Or(Until(body.left, body.right), Globally(body.left)))
    if isinstance(body, Release):
        return Not(Until(Not(expand_sugar(body.left)), Not(expand_sugar(body.right))))
    raise TypeError(f"not an LTL body node: {body!r}")


def bounded_eventually(b: int, inner: LtlBody) -> LtlBody:
    """Disjunction of inner at the first b positions: inner | X inner | ...

    Positions 0..b-1, so b = 1 is inner itself.
    """
    if b < 1:
        raise ValueError("bounded eventually needs b >= 1")
    result = inner
    term = inner
    for _ in range(b - 1):
        term = Next(term)
        result = Or(result, term)
    return result


def bounded_globally(b: int, inner: LtlBody) -> LtlBody:
    """Conjunction of inner at the first b positions."""
    if b < 1:
        raise ValueError("bounded globally needs b >= 1")
    result = inner
    term = inner
    for _ in range(b - 1):
        term = Next(term)
        result = And(result, term)
    return result


def nnext(n: int, inner: LtlBody) -> LtlBody:
    """n-fold application of the next-step operator."""
    for _ in range(n):
        inner = Next(inner)
    return inner
