"""Small arithmetic expression language for kernels, sources and oracles.

Grammar (ASCII, no implicit multiplication):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ['^' factor]          # right-associative, so 2^3^2 = 512
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Unary minus binds looser than '^' (-2^2 == -4) and tighter than '*' and '/'.
NAME is an ASCII identifier; ``pi`` and ``e`` fold to constants at parse
time, and sin cos tan exp log sqrt abs are the callable functions (log is
the natural log).  Anything else is a free variable.

Evaluation is strict about domains: log of a non-positive value, sqrt of a
negative value, 0 raised to a negative power, a negative base raised to a
non-integer power, and division by zero all raise DomainError rather than
producing NaN or inf.  ``evaluate`` walks the tree with scalars;
``compile_fn`` builds a numpy-vectorized callable with the same semantics.
"""

import math
import re

import numpy as np

from .errors import DomainError, ExprSyntaxError, UnboundVariableError

__all__ = [
    "Num", "Var", "Neg", "BinOp", "Call",
    "parse", "evaluate", "free_vars", "render", "compile_fn",
    "FUNCTIONS", "CONSTANTS",
]

CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")

_NUMBER = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


# ---------------------------------------------------------------------------
# AST nodes.  Plain tuples of fields with structural equality.

class Num:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)

    def __eq__(self, other):
        return type(other) is Num and (
            self.value == other.value
            or (math.isnan(self.value) and math.isnan(other.value)))

    def __hash__(self):
        return hash(("Num", self.value))

    def __repr__(self):
        return f"Num({self.value!r})"


class Var:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return type(other) is Var and self.name == other.name

    def __hash__(self):
        return hash(("Var", self.name))

    def __repr__(self):
        return f"Var({self.name!r})"


class Neg:
    __slots__ = ("child",)

    def __init__(self, child):
        self.child = child

    def __eq__(self, other):
        return type(other) is Neg and self.child == other.child

    def __hash__(self):
        return hash(("Neg", self.child))

    def __repr__(self):
        return f"Neg({self.child!r})"


class BinOp:
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def __eq__(self, other):
        return (type(other) is BinOp and self.op == other.op
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash(("BinOp", self.op, self.left, self.right))

    def __repr__(self):
        return f"BinOp({self.op!r}, {self.left!r}, {self.right!r})"


class Call:
    __slots__ = ("func", "arg")

    def __init__(self, func, arg):
        self.func = func
        self.arg = arg

    def __eq__(self, other):
        return (type(other) is Call and self.func == other.func
                and self.arg == other.arg)

    def __hash__(self):
        return hash(("Call", self.func, self.arg))

    def __repr__(self):
        return f"Call({self.func!r}, {self.arg!r})"


# ---------------------------------------------------------------------------
# Tokenizer.

class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind = kind      # 'num' | 'name' | 'op' | 'end'
        self.text = text
        self.offset = offset


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(0), i))
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(_Token("name", m.group(0), i))
            i = m.end()
            continue
        if c in "+-*/^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser.

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text):
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        raise ExprSyntaxError(f"expected {text!r}", tok.offset)

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            # recurse through factor so the exponent may be negative and
            # chained powers associate to the right
            return BinOp("^", base, self.factor())
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if self.peek().kind == "op" and self.peek().text == "(":
                if tok.text not in FUNCTIONS:
                    raise ExprSyntaxError(
                        f"unknown function {tok.text!r}", tok.offset)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in CONSTANTS:
                return Num(CONSTANTS[tok.text])
            if tok.text in FUNCTIONS:
                raise ExprSyntaxError(
                    f"function {tok.text!r} used without arguments", tok.offset)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            "expected a number, name, '(' or unary '-'", tok.offset)


def parse(text):
    """Parse expression text into an AST.  Raises ExprSyntaxError with the
    byte offset of the first problem."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input {tail.text!r}",
                              tail.offset)
    return node


# ---------------------------------------------------------------------------
# Evaluation.

def free_vars(expr):
    """Set of free variable names.  Constants fold at parse time, so
    free_vars(parse('pi')) is empty."""
    out = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Neg):
            stack.append(node.child)
        elif isinstance(node, BinOp):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, Call):
            stack.append(node.arg)
    return out


def _scalar_pow(a, b):
    if a == 0.0 and b < 0.0:
        raise DomainError("zero raised to a negative power")
    if a < 0.0 and b != math.floor(b):
        raise DomainError("negative base raised to a non-integer power")
    return math.pow(a, b)


def evaluate(expr, env=None):
    """Evaluate an AST with scalar bindings.  Pure and deterministic:
    the same tree and bindings always produce the same float."""
    env = env or {}
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Var):
        try:
            return float(env[expr.name])
        except KeyError:
            raise UnboundVariableError(
                f"no binding for variable {expr.name!r}") from None
    if isinstance(expr, Neg):
        return -evaluate(expr.child, env)
    if isinstance(expr, BinOp):
        a = evaluate(expr.left, env)
        b = evaluate(expr.right, env)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "/":
            if b == 0.0:
                raise DomainError("division by zero")
            return a / b
        return _scalar_pow(a, b)
    # Call
    v = evaluate(expr.arg, env)
    if expr.func == "log":
        if v <= 0.0:
            raise DomainError(f"log of non-positive value {v!r}")
        return math.log(v)
    if expr.func == "sqrt":
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v!r}")
        return math.sqrt(v)
    return getattr(math, expr.func)(v) if expr.func != "abs" else abs(v)


def _first_bad(mask):
    return int(np.argmax(mask))


def _vec_log(a):
    a = np.asarray(a)
    if np.any(a <= 0.0):
        raise DomainError(
            f"log of non-positive value (first flat index {_first_bad(a <= 0.0)})")
    return np.log(a)


def _vec_sqrt(a):
    a = np.asarray(a)
    if np.any(a < 0.0):
        raise DomainError(
            f"sqrt of negative value (first flat index {_first_bad(a < 0.0)})")
    return np.sqrt(a)


def _vec_div(a, b):
    b = np.asarray(b)
    if np.any(b == 0.0):
        raise DomainError(
            f"division by zero (first flat index {_first_bad(b == 0.0)})")
    return a / b


def _vec_pow(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    bad = (a == 0.0) & (b < 0.0)
    if np.any(bad):
        raise DomainError(
            f"zero raised to a negative power (first flat index {_first_bad(bad)})")
    bad = (a < 0.0) & (b != np.floor(b))
    if np.any(bad):
        raise DomainError("negative base raised to a non-integer power "
                          f"(first flat index {_first_bad(bad)})")
    return np.power(a, b)


_VEC_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
    "log": _vec_log, "sqrt": _vec_sqrt, "abs": np.abs,
}


def compile_fn(expr, params):
    """Compile an AST into a numpy-broadcasting callable f(*arrays).

    ``params`` fixes the positional argument order.  Free variables must be
    a subset of params.  Domain violations raise DomainError exactly as the
    scalar evaluator does; results are never silently NaN or inf.
    """
    params = tuple(params)
    missing = free_vars(expr) - set(params)
    if missing:
        raise UnboundVariableError(
            f"expression uses {sorted(missing)} not in parameters {params}")

    def build(node):
        if isinstance(node, Num):
            v = node.value
            return lambda args: v
        if isinstance(node, Var):
            i = params.index(node.name)
            return lambda args: args[i]
        if isinstance(node, Neg):
            f = build(node.child)
            return lambda args: -f(args)
        if isinstance(node, BinOp):
            fl = build(node.left)
            fr = build(node.right)
            if node.op == "+":
                return lambda args: fl(args) + fr(args)
            if node.op == "-":
                return lambda args: fl(args) - fr(args)
            if node.op == "*":
                return lambda args: fl(args) * fr(args)
            if node.op == "/":
                return lambda args: _vec_div(fl(args), fr(args))
            return lambda args: _vec_pow(fl(args), fr(args))
        fa = build(node.arg)
        fn = _VEC_FUNCS[node.func]
        return lambda args: fn(fa(args))

    body = build(expr)

    def call(*args):
        return body(args)

    call.params = params
    return call


def render(expr):
    """Render an AST back to text with full parentheses.  The output
    reparses to a structurally identical tree."""
    if isinstance(expr, Num):
        return repr(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        return f"(-{render(expr.child)})"
    if isinstance(expr, BinOp):
        return f"({render(expr.left)} {expr.op} {render(expr.right)})"
    return f"{expr.func}({render(expr.arg)})"
