"""
中置記法の式を式木に変換する再帰下降パーサ

文法:
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '-' INT | '(' ['-'] INT ['/' INT] ')'
    atom     := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
"""
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from src.domain.entities.expression import (
    MAX_DEPTH, UNARY_OPS, Expression, Literal, Power, Product, Ref, Sum, Unary,
)
from src.domain.errors import ComptonLedgerError, ExpressionError

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ExpressionError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nesting = 0

    def _enter(self) -> None:
        # 括弧・関数呼び出しの入れ子は式木の深さ上限と同じ値で打ち切る
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ExpressionError(f"expression nesting exceeds {MAX_DEPTH}")

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, value: Optional[str] = None, kind: Optional[str] = None) -> Tuple[str, str]:
        token = self.peek()
        if token is None:
            raise ExpressionError(f"unexpected end of expression {self.text!r}")
        if (value is not None and token[1] != value) or (kind is not None and token[0] != kind):
            raise ExpressionError(f"unexpected token {token[1]!r} in {self.text!r}")
        self.pos += 1
        return token

    def accept(self, value: str) -> bool:
        token = self.peek()
        if token is not None and token[0] == "op" and token[1] == value:
            self.pos += 1
            return True
        return False

    def parse(self) -> Expression:
        expr = self.expr()
        if self.peek() is not None:
            raise ExpressionError(f"unexpected token {self.peek()[1]!r} in {self.text!r}")
        return expr

    def expr(self) -> Expression:
        terms = [self.term()]
        while True:
            if self.accept("+"):
                terms.append(self.term())
            elif self.accept("-"):
                terms.append(Product((Literal(-1.0), self.term())))
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expression:
        factors = [self.unary()]
        while True:
            if self.accept("*"):
                factors.append(self.unary())
            elif self.accept("/"):
                factors.append(Power(self.unary(), -1))
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def unary(self) -> Expression:
        negations = 0
        while self.accept("-"):
            negations += 1
        result = self.power()
        for _ in range(negations):
            result = Product((Literal(-1.0), result))
        return result

    def power(self) -> Expression:
        base = self.atom()
        if self.accept("^"):
            return Power(base, self.exponent())
        return base

    def exponent(self) -> Fraction:
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            num = self._integer()
            den = self._integer() if self.accept("/") else 1
            self.take(")")
            if den == 0:
                raise ExpressionError(f"zero denominator in exponent of {self.text!r}")
            return Fraction(sign * num, den)
        sign = -1 if self.accept("-") else 1
        return Fraction(sign * self._integer())

    def _integer(self) -> int:
        _, value = self.take(kind="number")
        if not value.isdigit():
            raise ExpressionError(f"exponent must be an integer or (a/b), got {value!r}")
        return int(value)

    def atom(self) -> Expression:
        kind, value = self.take()
        if kind == "number":
            return Literal(float(value))
        if kind == "name":
            if value in UNARY_OPS and self.accept("("):
                self._enter()
                inner = self.expr()
                self.take(")")
                self.nesting -= 1
                return Unary(value, inner)
            return Ref(value)
        if value == "(":
            self._enter()
            inner = self.expr()
            self.take(")")
            self.nesting -= 1
            return inner
        raise ExpressionError(f"unexpected token {value!r} in {self.text!r}")


def parse_expression(text: str) -> Expression:
    """
    中置記法の文字列を式木に変換する

    Args:
        text: 例 "e^2/(G*m_pi^2)"

    Returns:
        Expression: 式木
    """
    if not text or not text.strip():
        raise ExpressionError("empty expression")
    try:
        return _Parser(text).parse()
    except ExpressionError:
        raise
    except ComptonLedgerError as e:
        raise ExpressionError(f"{e} in {text!r}") from e
