"""A small expression language for user-defined immersions.

Grammar::

    spec   := expr ("," expr)*
    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | "pi" | "e" | VAR | FUNC "(" expr ")" | "(" expr ")"

VAR is ``u1`` .. ``u16`` and FUNC one of sin, cos, exp, sqrt, log. ``^`` is
right associative and binds tighter than unary minus, so ``-u1^2`` is
``-(u1^2)`` while ``2^-1`` is 0.5.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArgumentError,
    ArityError,
    NumericalDomainError,
    ParseError,
    UnknownIdentifierError,
    VariableIndexError,
)
from .geometry import Immersion

MAX_DEPTH = 64
MAX_VARS = 16
FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "log": math.log,
}
CONSTANTS = {"pi": math.pi, "e": math.e}


# --- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float
    text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: object
    right: object


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(node) -> str:
    """Render an AST back to source that reparses to the same tree."""
    return _render(node, 0)


def _render(node, parent: int) -> str:
    if isinstance(node, Num):
        return node.text or repr(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return f"u{node.index}"
    if isinstance(node, Unary):
        if node.op != "neg":
            return f"{node.op}({_render(node.arg, 0)})"
        out = "-" + _render(node.arg, _PREC["neg"])
        return f"({out})" if parent > _PREC["neg"] else out
    prec = _PREC[node.op]
    if node.op == "^":
        # right associative: wrap the left operand if it is itself a power or negation
        left = _render(node.left, prec + 1)
        right = _render(node.right, _PREC["neg"])
    else:
        left = _render(node.left, prec)
        right = _render(node.right, prec + 1)
    out = f"{left} {node.op} {right}" if node.op != "^" else f"{left}^{right}"
    return f"({out})" if parent > prec else out


def variables(node) -> set:
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Unary):
        return variables(node.arg)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    return set()


# --- tokenizer -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    pos: int  # 1-based


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start + 1))
        i = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


# --- parser --------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.tokens = tokenize(text)
        self.i = 0
        self.n = n
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str, hint: str | None = None) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, hint or repr(text))
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else f"token {tok.text!r}"

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(f"expression nested deeper than {MAX_DEPTH}", self.tok.pos)

    def spec(self) -> list:
        components = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            components.append(self.expr())
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, "an operator, ',' or end of input")
        return components

    def expr(self):
        self.enter()
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        self.depth -= 1
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            self.enter()
            node = Unary("neg", self.factor())
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            self.enter()
            node = Binary("^", base, self.factor())
            self.depth -= 1
            return node
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name in CONSTANTS:
                return Const(name)
            m = re.fullmatch(r"u(\d+)", name)
            if m:
                index = int(m.group(1))
                if index < 1:
                    raise VariableIndexError("variables are numbered from u1", tok.pos)
                limit = self.n if self.n is not None else MAX_VARS
                if index > limit:
                    raise VariableIndexError(f"variable {name} exceeds the declared dimension {limit}", tok.pos)
                return Var(index)
            if name in FUNCTIONS:
                self.expect("(", f"'(' after {name}")
                arg = self.expr()
                if self.tok.kind == "op" and self.tok.text == ",":
                    raise ArityError(f"{name} takes exactly one argument", tok.pos, "')'")
                self.expect(")")
                return Unary(name, arg)
            raise UnknownIdentifierError(f"unknown identifier {name!r}", tok.pos)
        raise ParseError(
            f"unexpected {self._describe(tok)}", tok.pos, "a number, variable, function call or '('"
        )


def parse_expr(text: str, n: int | None = None):
    """Parse a single expression."""
    components = _Parser(text, n).spec()
    if len(components) != 1:
        raise ParseError("expected a single expression", None)
    return components[0]


# --- evaluation ------------------------------------------------------------------


def _int_power(base: float, exponent: int) -> float:
    result = 1.0
    for _ in range(abs(exponent)):
        result *= base
    if exponent < 0:
        if result == 0.0:
            raise NumericalDomainError("division by zero in negative integer power")
        result = 1.0 / result
    return result


def eval_node(node, u) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        return float(u[node.index - 1])
    if isinstance(node, Unary):
        x = eval_node(node.arg, u)
        if node.op == "neg":
            return -x
        if node.op == "sqrt" and x < 0:
            raise NumericalDomainError(f"sqrt of negative value {x!r}")
        if node.op == "log" and x <= 0:
            raise NumericalDomainError(f"log of non-positive value {x!r}")
        try:
            return FUNCTIONS[node.op](x)
        except (OverflowError, ValueError) as exc:
            raise NumericalDomainError(f"{node.op}({x!r}) failed: {exc}") from exc
    a = eval_node(node.left, u)
    b = eval_node(node.right, u)
    op = node.op
    try:
        if op == "+":
            out = a + b
        elif op == "-":
            out = a - b
        elif op == "*":
            out = a * b
        elif op == "/":
            if b == 0:
                raise NumericalDomainError("division by zero")
            out = a / b
        elif float(b).is_integer() and abs(b) <= 64:
            out = _int_power(a, int(b))
        else:
            if a < 0:
                raise NumericalDomainError(f"negative base {a!r} with non-integer exponent {b!r}")
            if a == 0 and b < 0:
                raise NumericalDomainError("zero raised to a negative power")
            out = a**b
    except OverflowError as exc:
        raise NumericalDomainError(f"overflow in {op}") from exc
    if not math.isfinite(out):
        raise NumericalDomainError(f"non-finite result in {op}")
    return out


# --- immersion specs ---------------------------------------------------------------


@dataclass(frozen=True)
class ImmersionSpec:
    n: int
    components: tuple
    domain_box: tuple  # ((lo, hi), ...) one per variable

    @property
    def m(self) -> int:
        return len(self.components)

    def text(self) -> str:
        return ", ".join(to_text(c) for c in self.components)

    def to_immersion(self, name: str = "expression") -> Immersion:
        if self.m <= self.n:
            raise ArgumentError(f"an immersion needs more components ({self.m}) than variables ({self.n})")
        lo = tuple(b[0] for b in self.domain_box)
        hi = tuple(b[1] for b in self.domain_box)
        return Immersion(self.n, self.m, lambda u: eval_ast(self, u), lo, hi, name=name)


def parse(text: str, n: int | None = None, domain_box=None) -> ImmersionSpec:
    """Parse a comma-separated component list into an ImmersionSpec.

    ``n`` defaults to the largest variable index used. ``domain_box``
    defaults to [-1, 1] for every variable.
    """
    if n is not None and not (1 <= n <= MAX_VARS):
        raise ArgumentError(f"dimension must be in 1..{MAX_VARS}, got {n}")
    components = _Parser(text, n).spec()
    if n is None:
        used = set().union(*(variables(c) for c in components))
        n = max(used) if used else 1
    if domain_box is None:
        domain_box = tuple((-1.0, 1.0) for _ in range(n))
    domain_box = tuple((float(lo), float(hi)) for lo, hi in domain_box)
    if len(domain_box) != n:
        raise ArgumentError(f"domain box has {len(domain_box)} intervals for {n} variables")
    return ImmersionSpec(n=n, components=tuple(components), domain_box=domain_box)


def eval_ast(spec: ImmersionSpec, point) -> np.ndarray:
    u = np.asarray(point, dtype=float)
    if u.shape != (spec.n,):
        raise ArgumentError(f"expected {spec.n} parameters, got shape {u.shape}")
    out = np.array([eval_node(c, u) for c in spec.components])
    if not np.all(np.isfinite(out)):
        raise NumericalDomainError(f"non-finite component at {u.tolist()}", u)
    return out


def parse_file(text: str) -> ImmersionSpec:
    """Read the expression-file format.

    First line ``n=<int>``, then optional ``box=<lo>:<hi>`` lines (one per
    variable, in order), then the component list, possibly over several
    lines. Lines starting with ``#`` are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty expression file", 1)
    m = re.fullmatch(r"n\s*=\s*(\d+)", lines[0])
    if not m:
        raise ParseError("first line must be n=<int>", 1, "n=<int>")
    n = int(m.group(1))
    boxes = []
    rest = lines[1:]
    while rest and rest[0].startswith("box"):
        bm = re.fullmatch(r"box\s*=\s*([^:]+):(.+)", rest[0])
        if not bm:
            raise ParseError(f"malformed box line {rest[0]!r}", None, "box=<lo>:<hi>")
        try:
            boxes.append((float(bm.group(1)), float(bm.group(2))))
        except ValueError as exc:
            raise ParseError(f"malformed box bounds in {rest[0]!r}") from exc
        rest = rest[1:]
    if boxes and len(boxes) != n:
        raise ArgumentError(f"expected {n} box lines, got {len(boxes)}")
    return parse(" ".join(rest), n, boxes or None)
