"""Recursive-descent parser for polynomial text.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | factor
    factor := atom ('^' natural)?
    atom   := natural | name | '(' expr ')'

Names are the declared variables, the parameter, and any extra symbols the
caller binds (operator files bind ``T`` or ``D``). Division is only allowed by
factors free of the variables, so coefficients range over QQ(t).
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass

from sympy.polys.rings import PolyElement

from pf_audit.algebra.multipoly import MultiPoly, PolynomialSpace, polynomial_space
from pf_audit.exceptions import ParseError

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"Unexpected character {text[bad]!r}", position=bad)
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: PolynomialSpace, extra: Mapping[str, PolyElement]) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.space = space
        ring = space.ring
        self.symbols: dict[str, PolyElement] = dict(zip(space.variables, ring.gens))
        self.symbols[space.parameter] = ring.ground_new(space.scalars.gen)
        self.symbols.update(extra)

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def parse(self) -> PolyElement:
        value = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"Unexpected token {self.current.text!r}", self.current.position)
        return value

    def expr(self) -> PolyElement:
        value = self.term()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> PolyElement:
        value = self.unary()
        while self.current.text in ("*", "/") and self.current.kind == "op":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                value = value * self._inverse(rhs, op.position)
        return value

    def unary(self) -> PolyElement:
        if self.current.kind == "op" and self.current.text in ("+", "-"):
            op = self.advance().text
            operand = self.unary()
            return -operand if op == "-" else operand
        return self.factor()

    def factor(self) -> PolyElement:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            token = self.advance()
            if token.kind != "number":
                raise ParseError("Exponent must be a natural number", token.position)
            base = base ** int(token.text)
        return base

    def atom(self) -> PolyElement:
        token = self.advance()
        ring = self.space.ring
        if token.kind == "number":
            return ring.ground_new(self.space.scalars.convert(int(token.text)))
        if token.kind == "name":
            if token.text not in self.symbols:
                raise ParseError(f"Unknown symbol {token.text!r}", token.position)
            return self.symbols[token.text]
        if token.kind == "op" and token.text == "(":
            value = self.expr()
            closing = self.advance()
            if closing.text != ")":
                raise ParseError("Expected ')'", closing.position)
            return value
        if token.kind == "end":
            raise ParseError("Unexpected end of input", token.position)
        raise ParseError(f"Unexpected token {token.text!r}", token.position)

    def _inverse(self, divisor: PolyElement, position: int) -> PolyElement:
        ring = self.space.ring
        if not divisor:
            raise ParseError("Division by zero", position)
        if any(any(monom) for monom in divisor.keys()):
            raise ParseError("Division by a polynomial in the variables", position)
        coeff = divisor.coeff(ring.one)
        return ring.ground_new(self.space.scalars.one / coeff)


def parse_expression(
    text: str,
    space: PolynomialSpace,
    extra: Mapping[str, PolyElement] | None = None,
) -> PolyElement:
    """Parse into the space's ring without any homogeneity requirement."""
    return _Parser(text, space, extra or {}).parse()


def parse_polynomial(text: str, variables: tuple[str, ...], parameter: str) -> MultiPoly:
    """Parse a homogeneous polynomial in ``variables`` with coefficients in QQ(parameter)."""
    space = polynomial_space(tuple(variables), parameter)
    poly = parse_expression(text, space)
    degrees = sorted({sum(monom) for monom in poly.keys()})
    if len(degrees) > 1:
        raise ParseError(
            f"Polynomial is not homogeneous: found degrees {degrees[0]} and {degrees[1]}"
        )
    return MultiPoly(space, poly, degrees[0] if degrees else 0)
