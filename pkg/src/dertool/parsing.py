"""Element expressions: recursive-descent parser and canonical printer.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-' factor) | rational | basis_name | 't' ('^' uint)? | '(' expr ')' ('^' uint)?

Products keep their left-to-right order, so noncommutative tables are respected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import AlgElem, FinDimAlgebra
from .arith import UniPoly, q_str
from .errors import NotUnital, ParseError, UnknownBasisName
from .polyext import PolyExtAlgebra, PolyExtElem

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    name: str
    pos: int


@dataclass(frozen=True)
class TPow:
    power: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    power: int


Node = Union[Num, Name, TPow, Neg, BinOp, Pow]


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def uint(self) -> int:
        kind, val, pos = self.take()
        if kind != "num" or "/" in val:
            raise ParseError("expected a non-negative integer exponent", pos)
        return int(val)

    def factor(self) -> Node:
        kind, val, pos = self.take()
        if kind == "op" and val == "-":
            return Neg(self.factor())
        if kind == "num":
            try:
                return Num(Fraction(val))
            except ZeroDivisionError:
                raise ParseError("zero denominator", pos) from None
        if kind == "name":
            if val == "t":
                if self.peek()[:2] == ("op", "^"):
                    self.take()
                    return TPow(self.uint())
                return TPow(1)
            return Name(val, pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            if self.peek()[:2] == ("op", "^"):
                self.take()
                return Pow(node, self.uint())
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


# Evaluation: intermediate values are either a scalar polynomial in t (no unit
# needed yet) or a genuine algebra element.


def _scalar_to_elem(p: UniPoly, algebra):
    if isinstance(algebra, FinDimAlgebra):
        if p.degree > 0:
            raise ParseError("t is not available in a finite-dimensional algebra")
        if not algebra.is_unital:
            raise NotUnital("bare scalar needs a unital algebra")
        return algebra.one() * (p.coeffs[0] if p.coeffs else Fraction(0))
    if not algebra.is_unital:
        raise NotUnital("bare scalar or t needs a unital coefficient algebra")
    one = algebra.coeff_algebra.one()
    return PolyExtElem(algebra, [one * c for c in p.coeffs])


def _scale_elem(p: UniPoly, x, algebra):
    if isinstance(algebra, FinDimAlgebra):
        if p.degree > 0:
            raise ParseError("t is not available in a finite-dimensional algebra")
        return x * (p.coeffs[0] if p.coeffs else Fraction(0))
    acc = algebra.zero()
    for k, c in enumerate(p.coeffs):
        if c:
            acc = acc + (x * c).shift_degree(k)
    return acc


def _mul(a, b, algebra):
    if isinstance(a, UniPoly) and isinstance(b, UniPoly):
        return a * b
    if isinstance(a, UniPoly):
        return _scale_elem(a, b, algebra)
    if isinstance(b, UniPoly):
        return _scale_elem(b, a, algebra)
    return a * b


def _add(a, b, algebra, sign=1):
    if isinstance(a, UniPoly) and isinstance(b, UniPoly):
        return a + b * sign
    if isinstance(a, UniPoly):
        a = _scalar_to_elem(a, algebra)
    if isinstance(b, UniPoly):
        b = _scalar_to_elem(b, algebra)
    return a + b if sign == 1 else a - b


def _eval(node: Node, algebra):
    if isinstance(node, Num):
        return UniPoly([node.value])
    if isinstance(node, TPow):
        if isinstance(algebra, FinDimAlgebra):
            raise ParseError("t is not available in a finite-dimensional algebra")
        return UniPoly.monomial(node.power)
    if isinstance(node, Name):
        B = algebra if isinstance(algebra, FinDimAlgebra) else algebra.coeff_algebra
        if node.name not in B.basis:
            raise UnknownBasisName(f"unknown basis name {node.name!r} at position {node.pos}")
        b = B.basis_element(B.index(node.name))
        return b if isinstance(algebra, FinDimAlgebra) else algebra.constant(b)
    if isinstance(node, Neg):
        v = _eval(node.arg, algebra)
        return -v
    if isinstance(node, Pow):
        base = _eval(node.base, algebra)
        if node.power == 0:
            return UniPoly([1])
        acc = base
        for _ in range(node.power - 1):
            acc = _mul(acc, base, algebra)
        return acc
    left = _eval(node.left, algebra)
    right = _eval(node.right, algebra)
    if node.op == "*":
        return _mul(left, right, algebra)
    return _add(left, right, algebra, 1 if node.op == "+" else -1)


def parse_element(text: str, algebra: FinDimAlgebra | PolyExtAlgebra):
    """Parse ``text`` into an element of ``algebra`` (finite-dim or B[t])."""
    value = _eval(parse_ast(text), algebra)
    if isinstance(value, UniPoly):
        if value.is_zero():
            return algebra.zero()
        return _scalar_to_elem(value, algebra)
    return value


def _term(coeff: Fraction, name: str, k: int) -> tuple[str, str]:
    factors = []
    mag = abs(coeff)
    if name != "1":
        factors.append(name)
    if k == 1:
        factors.append("t")
    elif k > 1:
        factors.append(f"t^{k}")
    if mag != 1 or not factors:
        factors.insert(0, q_str(mag))
    return ("-" if coeff < 0 else "+"), "*".join(factors)


def format_element(x) -> str:
    """Canonical text form: ascending t-degree, then basis index."""
    terms = []
    if isinstance(x, AlgElem):
        for i, c in enumerate(x.coeffs):
            if c:
                terms.append(_term(c, x.algebra.basis[i], 0))
    else:
        names = x.algebra.coeff_algebra.basis
        for k, ck in enumerate(x.coeffs):
            for i, c in enumerate(ck.coeffs):
                if c:
                    terms.append(_term(c, names[i], k))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
