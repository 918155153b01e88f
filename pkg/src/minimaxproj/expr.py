"""A small arithmetic expression language for functions of t (and m).

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?            right associative, -t^2 = -(t^2)
    atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'

Names are the variables allowed by the caller, the constant ``pi`` and the
one-argument functions sin, cos, exp, abs, sqrt.  Expressions compile to
numpy closures, so evaluation is vectorized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, ValidationError
from .funcspace import ContinuousFn

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs, "sqrt": np.sqrt}
CONSTANTS = {"pi": np.pi}

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")


class ExprSyntaxError(ValidationError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.peek()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", pos)
        self.take()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("bin", op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            inner = self.unary()
            return ("neg", inner) if text == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return ("bin", "^", base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return ("num", float(text))
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", pos)
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise ExprSyntaxError(f"{text} takes 1 argument, got {len(args)}", pos)
                return ("call", text, args[0])
            if text in FUNCTIONS:
                raise ExprSyntaxError(f"function {text!r} needs an argument", pos)
            if text in CONSTANTS:
                return ("num", CONSTANTS[text])
            if text in self.variables:
                return ("var", text)
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected a number, name or '(', found {found}", pos)


def _compile(node):
    tag = node[0]
    if tag == "num":
        value = node[1]
        return lambda env: value
    if tag == "var":
        name = node[1]
        return lambda env: env[name]
    if tag == "neg":
        inner = _compile(node[1])
        return lambda env: -inner(env)
    if tag == "call":
        fn = FUNCTIONS[node[1]]
        inner = _compile(node[2])
        return lambda env: fn(inner(env))
    _, op, a, b = node
    left, right = _compile(a), _compile(b)
    if op == "+":
        return lambda env: left(env) + right(env)
    if op == "-":
        return lambda env: left(env) - right(env)
    if op == "*":
        return lambda env: left(env) * right(env)
    if op == "/":
        return lambda env: np.divide(left(env), right(env))
    return lambda env: np.power(left(env), right(env))


def _free(node, acc):
    if node[0] == "var":
        acc.add(node[1])
    elif node[0] in ("neg",):
        _free(node[1], acc)
    elif node[0] == "call":
        _free(node[2], acc)
    elif node[0] == "bin":
        _free(node[2], acc)
        _free(node[3], acc)
    return acc


@dataclass(frozen=True, eq=False)
class FunctionExpr:
    source: str
    ast: tuple
    variables: frozenset

    def __post_init__(self):
        object.__setattr__(self, "_code", _compile(self.ast))

    def evaluate(self, t, **params):
        arr = np.asarray(t, dtype=float)
        env = {"t": arr, **{k: float(v) for k, v in params.items()}}
        missing = self.variables - env.keys()
        if missing:
            raise ValidationError(f"no value for {sorted(missing)} in {self.source!r}")
        with np.errstate(all="ignore"):
            out = self._code(env)
        return np.broadcast_to(np.asarray(out, dtype=float), arr.shape).copy()

    def as_function(self, validate: bool = True, **params) -> ContinuousFn:
        """Bind the parameters; the result is a function of t alone.

        With ``validate`` the function is checked for finite values at a
        few points of [0,1] (both ends included).
        """
        code = self._code
        fixed = {k: float(v) for k, v in params.items()}
        missing = self.variables - {"t"} - fixed.keys()
        if missing:
            raise ValidationError(f"no value for {sorted(missing)} in {self.source!r}")

        def evaluator(t):
            arr = np.asarray(t, dtype=float)
            return np.broadcast_to(np.asarray(code({"t": arr, **fixed}), dtype=float), arr.shape)

        label = self.source if not fixed else f"{self.source} [{', '.join(f'{k}={v!r}' for k, v in fixed.items())}]"
        fn = ContinuousFn(evaluator, label)
        if validate:
            fn(np.linspace(0.0, 1.0, 33))
        return fn


def parse_expr(text: str, variables=("t",)) -> FunctionExpr:
    """Parse ``text`` into a FunctionExpr over the given variable names.

    Raises ExprSyntaxError (with a 0-based ``position``) on malformed input,
    unknown identifiers and wrong argument counts.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    ast = _Parser(text, set(variables)).parse()
    return FunctionExpr(text, ast, frozenset(_free(ast, set())))


def function_from_text(text: str) -> ContinuousFn:
    """Parse an expression in t and return the validated function."""
    return parse_expr(text).as_function()


__all__ = ["ExprSyntaxError", "FunctionExpr", "EvaluationError", "function_from_text", "parse_expr"]
