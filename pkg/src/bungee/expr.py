"""Complex function expressions: parsing, evaluation, and composition.

Expressions denote entire (or oracle meromorphic) maps of one complex
variable ``z``. The surface syntax is a small arithmetic language:

    expr   :  term (("+" | "-") term)*
    term   :  factor (("*" | "/") factor)*
    factor :  "-" factor | atom
    atom   :  number | "z" | "i" | "pi" | "e"
           |  ("exp" | "sin" | "cos") "(" expr ")"
           |  "pow" "(" expr "," integer ")"
           |  "(" expr ")"
    number :  digits ["." digits] [("e" | "E") ["+" | "-"] digits]

There is no implicit multiplication, ``i``/``pi``/``e`` are reserved, and
the ``pow`` exponent must be a positive integer literal. Complex literals
are spelled ``a+b*i``.

Evaluation is guarded rather than exception-driven: results that leave the
representable range come back as event values (`InfinityEvent`,
`PoleEvent`) instead of raising. ``exp`` is treated as overflowed as soon
as the real part of its argument exceeds 700, and ``sin``/``cos`` as soon
as the imaginary part of theirs does, since beyond that the double range
is effectively exhausted. Division by exact zero yields `PoleEvent`; it
can only arise for the meromorphic oracle family ``1/pow(z,d)``.

All expression trees are immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Var",
    "Const",
    "Named",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "Apply",
    "FunctionExpr",
    "InfinityEvent",
    "PoleEvent",
    "ExprSyntaxError",
    "parse",
    "format_expr",
    "evaluate",
    "eval_array",
    "compose",
    "conjugate",
    "affine_post",
    "EVENT_NONE",
    "EVENT_INFINITY",
    "EVENT_POLE",
    "EXP_REAL_LIMIT",
    "TRIG_IMAG_LIMIT",
]

EXP_REAL_LIMIT = 700.0
TRIG_IMAG_LIMIT = 700.0

EVENT_NONE = 0
EVENT_INFINITY = 1
EVENT_POLE = 2


@dataclass(frozen=True)
class Var:
    """The free variable ``z``."""


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Named:
    """A reserved constant: ``pi``, ``e`` or ``i``."""

    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int  # >= 1


@dataclass(frozen=True)
class Call:
    name: str  # one of exp sin cos
    arg: "Expr"


@dataclass(frozen=True)
class Apply:
    """Composition node: evaluate ``inner`` first, then ``outer`` there."""

    outer: "Expr"
    inner: "Expr"


Expr = Union[Var, Const, Named, Neg, BinOp, Pow, Call, Apply]


@dataclass(frozen=True)
class FunctionExpr:
    """An immutable function of ``z``, wrapping an expression tree."""

    root: Expr

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True)
class InfinityEvent:
    """Evaluation left the representable range at ``node``."""

    node: Expr


@dataclass(frozen=True)
class PoleEvent:
    """Division by exact zero at ``node``."""

    node: Expr


EvalResult = Union[complex, InfinityEvent, PoleEvent]

_NAMED_VALUES = {"pi": complex(np.pi), "e": complex(np.e), "i": 1j}
_FUNC_NAMES = ("exp", "sin", "cos")


class ExprSyntaxError(ValueError):
    """Parse failure, carrying a 1-based byte offset into the source."""

    def __init__(self, offset: int, expected: str):
        self.offset = offset
        self.expected = expected
        super().__init__(f"syntax error at offset {offset}: expected {expected}")


# --- tokenizer ---------------------------------------------------------

_SYMBOLS = "+-*/(),"


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | symbol | end
    text: str
    offset: int  # 1-based byte offset of the first byte


def _tokenize(text: str) -> list[_Token]:
    # byte offset of each character position, for error reporting
    starts = [1]
    for ch in text:
        starts.append(starts[-1] + len(ch.encode("utf-8")))
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token("symbol", ch, starts[i]))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("number", text[i:j], starts[i]))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], starts[i]))
            i = j
            continue
        raise ExprSyntaxError(starts[i], "a number, name, operator or parenthesis")
    tokens.append(_Token("end", "", starts[n]))
    return tokens


# --- parser ------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_symbol(self, sym: str) -> None:
        tok = self.peek()
        if tok.kind != "symbol" or tok.text != sym:
            raise ExprSyntaxError(tok.offset, f"'{sym}'")
        self.advance()

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.text in "+-":
                self.advance()
                node = BinOp(tok.text, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.text in "*/":
                self.advance()
                node = BinOp(tok.text, node, self.parse_factor())
            else:
                return node

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "symbol" and tok.text == "-":
            self.advance()
            return Neg(self.parse_factor())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "name":
            if tok.text == "z":
                self.advance()
                return Var()
            if tok.text in _NAMED_VALUES:
                self.advance()
                return Named(tok.text)
            if tok.text in _FUNC_NAMES:
                self.advance()
                self.expect_symbol("(")
                arg = self.parse_expr()
                self.expect_symbol(")")
                return Call(tok.text, arg)
            if tok.text == "pow":
                self.advance()
                self.expect_symbol("(")
                base = self.parse_expr()
                self.expect_symbol(",")
                exp_tok = self.peek()
                if exp_tok.kind != "number" or not exp_tok.text.isdigit() or int(exp_tok.text) < 1:
                    raise ExprSyntaxError(exp_tok.offset, "a positive integer exponent")
                self.advance()
                self.expect_symbol(")")
                return Pow(base, int(exp_tok.text))
            raise ExprSyntaxError(tok.offset, "a value (unknown name)")
        if tok.kind == "symbol" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_symbol(")")
            return node
        raise ExprSyntaxError(tok.offset, "a value")


def parse(text: str) -> FunctionExpr:
    """Parse an expression string into a `FunctionExpr`.

    Raises `ExprSyntaxError` with a 1-based byte offset and a description
    of the expected token on malformed input.
    """
    parser = _Parser(_tokenize(text))
    root = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ExprSyntaxError(tok.offset, "end of input")
    return FunctionExpr(root)


# --- formatting --------------------------------------------------------

# binding strength of a rendered fragment; parents require a minimum level
_ATOM = 4
_UNARY = 3
_TERM = 2
_SUM = 1


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _emit(node: Expr) -> tuple[str, int]:
    if isinstance(node, Var):
        return "z", _ATOM
    if isinstance(node, Named):
        return node.name, _ATOM
    if isinstance(node, Const):
        re, im = node.value.real, node.value.imag
        if im == 0:
            if re >= 0:
                return _fmt_real(re), _ATOM
            return "-" + _fmt_real(-re), _UNARY
        if re == 0:
            if im >= 0:
                return _fmt_real(im) + "*i", _TERM
            return "-" + _fmt_real(-im) + "*i", _TERM
        sign = "+" if im >= 0 else "-"
        return f"{_fmt_real(re) if re >= 0 else '-' + _fmt_real(-re)}{sign}{_fmt_real(abs(im))}*i", _SUM
    if isinstance(node, Neg):
        return "-" + _child(node.arg, _UNARY), _UNARY
    if isinstance(node, BinOp):
        if node.op in "+-":
            left = _child(node.left, _SUM)
            right = _child(node.right, _TERM)
            return left + node.op + right, _SUM
        left = _child(node.left, _TERM)
        right = _child(node.right, _UNARY)
        return left + node.op + right, _TERM
    if isinstance(node, Pow):
        return f"pow({_emit(node.base)[0]},{node.exponent})", _ATOM
    if isinstance(node, Call):
        return f"{node.name}({_emit(node.arg)[0]})", _ATOM
    if isinstance(node, Apply):
        return _emit(_substitute(node.outer, node.inner))
    raise TypeError(f"not an expression node: {node!r}")


def _child(node: Expr, minimum: int) -> str:
    text, level = _emit(node)
    if level < minimum:
        return "(" + text + ")"
    return text


def _substitute(node: Expr, replacement: Expr) -> Expr:
    if isinstance(node, Var):
        return replacement
    if isinstance(node, (Const, Named)):
        return node
    if isinstance(node, Neg):
        return Neg(_substitute(node.arg, replacement))
    if isinstance(node, BinOp):
        return BinOp(node.op, _substitute(node.left, replacement), _substitute(node.right, replacement))
    if isinstance(node, Pow):
        return Pow(_substitute(node.base, replacement), node.exponent)
    if isinstance(node, Call):
        return Call(node.name, _substitute(node.arg, replacement))
    if isinstance(node, Apply):
        return Apply(node.outer, _substitute(node.inner, replacement))
    raise TypeError(f"not an expression node: {node!r}")


def format_expr(f: FunctionExpr | Expr) -> str:
    """Render an expression to a string that reparses to the same tree.

    The guarantee is structural for any tree produced by `parse`.
    Programmatic trees containing complex constants or composition nodes
    render to semantically equal expressions in the plain grammar.
    """
    root = f.root if isinstance(f, FunctionExpr) else f
    return _emit(root)[0]


# --- evaluation --------------------------------------------------------


def _mark(events: np.ndarray, nodes, mask, code: int, node: Expr) -> None:
    fresh = mask & (events == EVENT_NONE)
    if fresh.any():
        events[fresh] = code
        if nodes is not None:
            nodes[fresh] = node


def _eval_node(node: Expr, z: np.ndarray, events: np.ndarray, nodes) -> np.ndarray:
    if isinstance(node, Var):
        return z
    if isinstance(node, Const):
        return np.complex128(node.value)
    if isinstance(node, Named):
        return np.complex128(_NAMED_VALUES[node.name])
    if isinstance(node, Neg):
        return -_eval_node(node.arg, z, events, nodes)
    if isinstance(node, BinOp):
        a = _eval_node(node.left, z, events, nodes)
        b = _eval_node(node.right, z, events, nodes)
        if node.op == "+":
            v = a + b
        elif node.op == "-":
            v = a - b
        elif node.op == "*":
            v = a * b
        else:
            _mark(events, nodes, b == 0, EVENT_POLE, node)
            v = a / b
        _mark(events, nodes, ~np.isfinite(v), EVENT_INFINITY, node)
        return v
    if isinstance(node, Pow):
        a = _eval_node(node.base, z, events, nodes)
        v = a**node.exponent
        _mark(events, nodes, ~np.isfinite(v), EVENT_INFINITY, node)
        return v
    if isinstance(node, Call):
        a = _eval_node(node.arg, z, events, nodes)
        re, im = np.real(a), np.imag(a)
        if node.name == "exp":
            _mark(events, nodes, re > EXP_REAL_LIMIT, EVENT_INFINITY, node)
            v = np.exp(a)
        elif node.name == "sin":
            _mark(events, nodes, np.abs(im) > TRIG_IMAG_LIMIT, EVENT_INFINITY, node)
            v = np.sin(a)
        else:
            _mark(events, nodes, np.abs(im) > TRIG_IMAG_LIMIT, EVENT_INFINITY, node)
            v = np.cos(a)
        _mark(events, nodes, ~np.isfinite(v), EVENT_INFINITY, node)
        return v
    if isinstance(node, Apply):
        w = _eval_node(node.inner, z, events, nodes)
        w = np.broadcast_to(np.asarray(w, dtype=np.complex128), z.shape)
        return _eval_node(node.outer, w, events, nodes)
    raise TypeError(f"not an expression node: {node!r}")


def eval_array(f: FunctionExpr | Expr, z: np.ndarray, want_nodes: bool = False):
    """Evaluate ``f`` elementwise over a complex array.

    Returns ``(values, events)`` or, with ``want_nodes``, a third object
    array holding the node at which each element's event fired. Event
    codes are EVENT_NONE, EVENT_INFINITY, EVENT_POLE; the first event
    along the evaluation order wins and later garbage in that lane is
    ignored. Values at event positions are unspecified.
    """
    root = f.root if isinstance(f, FunctionExpr) else f
    z = np.asarray(z, dtype=np.complex128)
    events = np.zeros(z.shape, dtype=np.int8)
    nodes = np.empty(z.shape, dtype=object) if want_nodes else None
    with np.errstate(all="ignore"):
        values = _eval_node(root, z, events, nodes)
        values = np.broadcast_to(np.asarray(values, dtype=np.complex128), z.shape)
    if want_nodes:
        return values, events, nodes
    return values, events


def evaluate(f: FunctionExpr, z: complex) -> EvalResult:
    """Evaluate at a single point, returning a value or an event."""
    values, events, nodes = eval_array(f, np.array([z], dtype=np.complex128), want_nodes=True)
    if events[0] == EVENT_INFINITY:
        return InfinityEvent(nodes[0])
    if events[0] == EVENT_POLE:
        return PoleEvent(nodes[0])
    return complex(values[0])


# --- composition and affine algebra -------------------------------------


def compose(f: FunctionExpr, g: FunctionExpr) -> FunctionExpr:
    """The composite map ``z -> f(g(z))``."""
    return FunctionExpr(Apply(f.root, g.root))


def affine_post(f: FunctionExpr, a: complex, b: complex) -> FunctionExpr:
    """The map ``z -> a*f(z) + b`` with ``a != 0``."""
    if a == 0:
        raise ValueError("affine coefficient a must be nonzero")
    return FunctionExpr(BinOp("+", BinOp("*", Const(complex(a)), f.root), Const(complex(b))))


def conjugate(f: FunctionExpr, a: complex, b: complex) -> FunctionExpr:
    """The conjugate map ``phi o f o phi^-1`` for ``phi(z) = a*z + b``."""
    if a == 0:
        raise ValueError("affine coefficient a must be nonzero")
    inverse = BinOp("/", BinOp("-", Var(), Const(complex(b))), Const(complex(a)))
    transported = Apply(f.root, inverse)
    return FunctionExpr(BinOp("+", BinOp("*", Const(complex(a)), transported), Const(complex(b))))
