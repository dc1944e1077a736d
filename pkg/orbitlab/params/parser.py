from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from orbitlab.extensions import InputError


class ParamError(InputError):
    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at byte {offset})")
        self.offset = offset


CONSTANTS = ("pi", "e", "phi")

# нормализирам unicode операторите до ascii
_OPERATOR_ALIASES = {"−": "-", "×": "*", "÷": "/"}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?|\.\d+)|(?P<ident>[A-Za-z_]+)|(?P<op>[-+*/()−×÷]))"
)


# ====================== AST ====================== #
@dataclass(frozen=True)
class Number:
    text: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Sqrt:
    arg: "ParamExpr"


@dataclass(frozen=True)
class Neg:
    arg: "ParamExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ParamExpr"
    right: "ParamExpr"


ParamExpr = Number | Const | Sqrt | Neg | BinOp

_OP_NAMES = {"+": "plus", "-": "minus", "*": "times", "/": "divide"}


def to_text(node: ParamExpr) -> str:
    """Print an AST back to parseable text (binary nodes fully parenthesised)."""
    if isinstance(node, Number):
        return node.text
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Sqrt):
        return f"sqrt({to_text(node.arg)})"
    if isinstance(node, Neg):
        return f"-{to_text(node.arg)}"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"


def constants_used(node: ParamExpr) -> set[str]:
    if isinstance(node, Const):
        return {node.name}
    if isinstance(node, (Sqrt, Neg)):
        return constants_used(node.arg)
    if isinstance(node, BinOp):
        return constants_used(node.left) | constants_used(node.right)
    return set()


def to_call(node: ParamExpr) -> str:
    # "divide(pi, 3)" форма, ползва се в логовете и тестовете
    if isinstance(node, (Number, Const)):
        return to_text(node)
    if isinstance(node, Sqrt):
        return f"sqrt({to_call(node.arg)})"
    if isinstance(node, Neg):
        return f"neg({to_call(node.arg)})"
    return f"{_OP_NAMES[node.op]}({to_call(node.left)}, {to_call(node.right)})"


# ====================== TOKENS ====================== #
@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParamError(f"Unexpected character {text[start]!r}", _byte_offset(text, start))

        kind = match.lastgroup
        value = match.group(kind)
        start = match.start(kind)
        if kind == "op":
            value = _OPERATOR_ALIASES.get(value, value)
        tokens.append(_Token(kind, value, _byte_offset(text, start)))
        pos = match.end()

    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


# ====================== PARSER ====================== #
class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParamError(f"Expected {text!r}, found {found}", tok.offset)
        return tok

    def parse(self) -> ParamExpr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParamError(f"Unexpected {tok.text!r}", tok.offset)
        return node

    def expr(self) -> ParamExpr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ParamExpr:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> ParamExpr:
        tok = self.take()

        if tok.kind == "number":
            return Number(tok.text)

        if tok.kind == "ident":
            name = tok.text.lower()
            if name in CONSTANTS:
                return Const(name)
            if name == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Sqrt(inner)
            raise ParamError(f"Unknown identifier {tok.text!r}", tok.offset)

        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner

        if tok.kind == "op" and tok.text == "-":
            return Neg(self.factor())

        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParamError(f"Unexpected {found}", tok.offset)


def parse_param(text: str) -> ParamExpr:
    """
    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := number | pi | e | phi | sqrt '(' expr ')' | '(' expr ')' | '-' factor
    """
    return _Parser(text).parse()


def split_params(text: str) -> list[str]:
    # граматиката няма запетаи, така че простото разделяне е безопасно
    return [part.strip() for part in text.split(",")]
