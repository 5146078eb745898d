"""
Group-ring style exponent notation.

    u^{g+h}    = u^g u^h
    u^{gh}     = (u^g)^h
    u^{-g}     = (u^g)^-1
    u^{2a}     = (u^2)^a
    u^{a^-1}   = conjugation by a^-1

Sums keep their written order and nothing distributes: u^{(g+h)k} is
(u^g u^h)^k, which need not equal u^{gk+hk}.

Grammar (whitespace is ignored):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor {factor}
    factor := label ['^' power] | integer | '(' expr ')'
    power  := ['-'] integer | '{' ['-'] integer '}'

An integer may only open a monomial: "2a" is allowed, "a2" reads as the
label a2, and "a(2)" is rejected.
"""

import re
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple, Union

import numpy as np

from app.services.groups import FiniteGroup, GroupError, UnboundLabelError


class ExponentSyntaxError(GroupError):
    pass


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Gen:
    label: str
    power: int = 1


@dataclass(frozen=True)
class Product:
    left: "ExponentExpr"
    right: "ExponentExpr"


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[int, "ExponentExpr"], ...]


ExponentExpr = Union[Int, Gen, Product, Sum]

_TOKEN_RE = re.compile(r"[A-Za-z][0-9]*|\d+|[-+^{}()]")


def _tokenize(text: str) -> List[str]:
    compact = "".join(text.split()).replace("−", "-")
    tokens = []
    pos = 0
    while pos < len(compact):
        match = _TOKEN_RE.match(compact, pos)
        if match is None:
            raise ExponentSyntaxError(f"unexpected character {compact[pos]!r} in exponent {text!r}")
        tokens.append(match.group(0))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None:
            if expected == ")":
                raise ExponentSyntaxError(f"unbalanced parentheses in exponent {self.text!r}")
            raise ExponentSyntaxError(f"unexpected end of exponent {self.text!r}")
        if expected is not None and token != expected:
            raise ExponentSyntaxError(f"expected {expected!r} but found {token!r} in exponent {self.text!r}")
        self.pos += 1
        return token

    def parse(self) -> ExponentExpr:
        if not self.tokens:
            raise ExponentSyntaxError("empty exponent")
        node = self.expr()
        if self.peek() is not None:
            token = self.peek()
            if token == ")":
                raise ExponentSyntaxError(f"unbalanced parentheses in exponent {self.text!r}")
            raise ExponentSyntaxError(f"unexpected {token!r} in exponent {self.text!r}")
        return node

    def expr(self) -> ExponentExpr:
        terms = []
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        terms.append((sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> ExponentExpr:
        node = self.factor(leading=True)
        while self.peek() is not None and self.peek() not in ("+", "-", ")"):
            node = Product(node, self.factor(leading=False))
        return node

    def factor(self, leading: bool) -> ExponentExpr:
        token = self.take()
        if token.isdigit():
            if not leading:
                raise ExponentSyntaxError(f"integer {token} must lead its monomial in exponent {self.text!r}")
            return Int(int(token))
        if token == "(":
            node = self.expr()
            self.take(")")
            if isinstance(node, Int) and not leading:
                raise ExponentSyntaxError(f"integer {node.value} must lead its monomial in exponent {self.text!r}")
            return node
        if token[0].isalpha():
            power = 1
            if self.peek() == "^":
                self.take()
                power = self.power()
            return Gen(token, power)
        raise ExponentSyntaxError(f"unexpected {token!r} in exponent {self.text!r}")

    def power(self) -> int:
        braced = self.peek() == "{"
        if braced:
            self.take()
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        token = self.take()
        if not token.isdigit():
            raise ExponentSyntaxError(f"expected an integer power, found {token!r} in exponent {self.text!r}")
        if braced:
            self.take("}")
        return sign * int(token)


def parse_exponent(text: str) -> ExponentExpr:
    return _Parser(text).parse()


def format_exponent(node: ExponentExpr) -> str:
    """Print so that parse_exponent(format_exponent(e)) == e."""
    if isinstance(node, Int):
        return str(node.value)
    if isinstance(node, Gen):
        if node.power == 1:
            return node.label
        if node.power < 0:
            return f"{node.label}^{{{node.power}}}"
        return f"{node.label}^{node.power}"
    if isinstance(node, Product):
        left = format_exponent(node.left)
        if isinstance(node.left, Sum):
            left = f"({left})"
        right = format_exponent(node.right)
        if isinstance(node.right, (Sum, Product)):
            right = f"({right})"
        return left + right
    if isinstance(node, Sum):
        parts = []
        for i, (sign, term) in enumerate(node.terms):
            text = format_exponent(term)
            if isinstance(term, Sum):
                text = f"({text})"
            if i == 0:
                parts.append(text if sign > 0 else f"-{text}")
            else:
                parts.append(f"{'+' if sign > 0 else '-'} {text}")
        if len(node.terms) == 1 and node.terms[0][0] > 0:
            return f"({parts[0]})"
        return " ".join(parts)
    raise TypeError(f"not an exponent expression: {node!r}")


def eval_exponent(G: FiniteGroup, u: int, node: ExponentExpr, env: Mapping[str, int]) -> int:
    """u raised to the exponent expression, with labels bound in env."""
    if isinstance(node, Int):
        return G.power(u, node.value)
    if isinstance(node, Gen):
        if node.label not in env:
            raise UnboundLabelError(f"exponent label {node.label!r} is not bound")
        return G.conj(u, G.power(env[node.label], node.power))
    if isinstance(node, Product):
        return eval_exponent(G, eval_exponent(G, u, node.left, env), node.right, env)
    if isinstance(node, Sum):
        result = G.identity
        for sign, term in node.terms:
            value = eval_exponent(G, u, term, env)
            result = G.mul(result, value if sign > 0 else G.inv(value))
        return result
    raise TypeError(f"not an exponent expression: {node!r}")


def evaluate(G: FiniteGroup, u: int, text: str, env: Mapping[str, int]) -> int:
    return eval_exponent(G, u, parse_exponent(text), env)


def _power_array(G: FiniteGroup, g: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        g, k = G.inv_table[g], -k
    result = np.full_like(g, G.identity)
    base = g
    while k:
        if k & 1:
            result = G.mul_table[result, base]
        base = G.mul_table[base, base]
        k >>= 1
    return result


def eval_exponent_array(G: FiniteGroup, u: np.ndarray, node: ExponentExpr, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """
    Table-driven eval_exponent over whole index arrays.

    Args:
        G: group whose tables are indexed
        u: element indices, broadcast against the env arrays
        node: parsed exponent expression
        env: label -> element index array

    Returns:
        Array of results with the broadcast shape of u and env.
    """
    u = np.asarray(u)
    if isinstance(node, Int):
        return _power_array(G, u, node.value)
    if isinstance(node, Gen):
        if node.label not in env:
            raise UnboundLabelError(f"exponent label {node.label!r} is not bound")
        return G.conj_table[u, _power_array(G, np.asarray(env[node.label]), node.power)]
    if isinstance(node, Product):
        return eval_exponent_array(G, eval_exponent_array(G, u, node.left, env), node.right, env)
    if isinstance(node, Sum):
        result = np.full_like(u, G.identity)
        for sign, term in node.terms:
            value = eval_exponent_array(G, u, term, env)
            result = G.mul_table[result, value if sign > 0 else G.inv_table[value]]
        return result
    raise TypeError(f"not an exponent expression: {node!r}")
