import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from ._constants import PARSER_MAX_DEPTH, PARSER_MAX_EXPONENT, PARSER_MAX_TERMS, PARSER_MAX_VAR_INDEX
from ._errors import NonFiniteError, ParseError
from .polynomial_service import (
    MultiPoly,
    constant,
    poly_add,
    poly_mul,
    poly_neg,
    variable,
)


_NUMBER = re.compile(r"[0-9]+(\.[0-9]*)?([eE][+-]?[0-9]+)?")
_INTEGER = re.compile(r"[0-9]+")
_SINGLE = {"+": "plus", "-": "minus", "*": "star", "^": "caret", "(": "lparen", ")": "rparen"}
_ATOM_START = ("number", "imag", "variable", "lparen", "minus")


@dataclass(frozen=True)
class Token:
    kind: str  # number | imag | variable | plus | minus | star | caret | lparen | rparen | end
    payload: Optional[float | int]
    position: int
    end: int
    integral: bool = False


# --- Tokenizer ---

def tokenize(text: str) -> list[Token]:
    """Splits an expression into tokens; offsets are byte offsets into the UTF-8 text."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        if ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], None, pos, pos + 1))
            pos += 1
            continue
        if ch == "i":
            tokens.append(Token("imag", None, pos, pos + 1))
            pos += 1
            continue
        if ch == "z":
            digits = _INTEGER.match(text, pos + 1)
            if digits is None:
                raise ParseError("variable name needs an index, as in z1", pos, ("digits",))
            index = int(digits.group())
            if index == 0:
                raise ParseError("variable indices start at 1", pos)
            if index > PARSER_MAX_VAR_INDEX:
                raise ParseError(f"variable index above {PARSER_MAX_VAR_INDEX}", pos)
            tokens.append(Token("variable", index, pos, digits.end()))
            pos = digits.end()
            continue
        number = _NUMBER.match(text, pos)
        if number is not None:
            literal = number.group()
            if not math.isfinite(float(literal)):
                raise ParseError("numeric literal out of range", pos)
            tokens.append(Token("number", float(literal), pos, number.end(), integral=literal.isdigit()))
            pos = number.end()
            continue
        raise ParseError(f"unknown character {ch!r}", _byte_offset(text, pos))
    tokens.append(Token("end", None, len(text), len(text)))
    return tokens


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8", errors="surrogatepass"))


# --- Recursive descent ---

class _Parser:
    def __init__(self, tokens: list[Token], num_vars: int):
        self.tokens = tokens
        self.index = 0
        self.num_vars = num_vars
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        token = self.current
        if token.kind == "end":
            message = f"{message}: unexpected end of input"
        return ParseError(message, token.position, expected)

    def guard_size(self, p: MultiPoly) -> MultiPoly:
        if len(p.terms) > PARSER_MAX_TERMS:
            raise self.fail(f"expansion exceeds {PARSER_MAX_TERMS} terms")
        return p

    def parse(self) -> MultiPoly:
        result = self.expr()
        if self.current.kind != "end":
            raise self.fail("unexpected token", ("plus", "minus", "star", "caret", "end"))
        return result

    def expr(self) -> MultiPoly:
        result = self.term()
        while self.current.kind in ("plus", "minus"):
            op = self.advance()
            rhs = self.term()
            result = poly_add(result, rhs if op.kind == "plus" else poly_neg(rhs))
        return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while self.current.kind == "star":
            self.advance()
            result = self.guard_size(poly_mul(result, self.factor()))
        return result

    def factor(self) -> MultiPoly:
        # unary minus negates the whole factor: -z1^2 is -(z1^2)
        if self.current.kind == "minus":
            self.advance()
            with self.nested():
                return poly_neg(self.factor())
        base = self.atom()
        if self.current.kind != "caret":
            return base
        self.advance()
        token = self.current
        if token.kind != "number" or not token.integral:
            raise self.fail("exponent must be a nonnegative integer literal", ("integer",))
        self.advance()
        exponent = int(token.payload)
        if exponent > PARSER_MAX_EXPONENT:
            raise ParseError(f"exponent above {PARSER_MAX_EXPONENT}", token.position)
        result = constant(1.0, self.num_vars)
        for _ in range(exponent):
            result = self.guard_size(poly_mul(result, base))
        return result

    def atom(self) -> MultiPoly:
        token = self.current
        if token.kind == "number":
            self.advance()
            suffix = self.current
            if suffix.kind == "imag" and suffix.position == token.end:
                self.advance()
                return constant(complex(0.0, token.payload), self.num_vars)
            return constant(token.payload, self.num_vars)
        if token.kind == "imag":
            self.advance()
            return constant(1j, self.num_vars)
        if token.kind == "variable":
            self.advance()
            return variable(token.payload, self.num_vars)
        if token.kind == "lparen":
            self.advance()
            with self.nested():
                inner = self.expr()
            if self.current.kind != "rparen":
                raise self.fail("unbalanced parenthesis", ("rparen",))
            self.advance()
            return inner
        raise self.fail("expected a number, i, a variable or '('", _ATOM_START)

    @contextmanager
    def nested(self):
        if self.depth >= PARSER_MAX_DEPTH:
            raise self.fail(f"nesting deeper than {PARSER_MAX_DEPTH}")
        self.depth += 1
        try:
            yield
        finally:
            self.depth -= 1


# --- Public API ---

def parse_poly(text: str | bytes, expected_vars: Optional[int] = None) -> MultiPoly:
    """
    Parses a polynomial expression into its expanded canonical form.

    Grammar (low to high precedence):
        expr   := term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := '-' factor | atom ('^' integer)?
        atom   := real | real 'i' | 'i' | 'z'<index> | '(' expr ')'

    Args:
        text: the expression; bytes are decoded as UTF-8.
        expected_vars: ambient variable count; must cover every index used.

    Raises:
        ParseError: on any lexical or grammatical problem.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("input is not valid UTF-8", e.start) from None

    tokens = tokenize(text)
    indices = [t.payload for t in tokens if t.kind == "variable"]
    highest = max(indices, default=0)
    if expected_vars is not None:
        if expected_vars < highest:
            position = next(t.position for t in tokens if t.kind == "variable" and t.payload > expected_vars)
            raise ParseError(f"variable index {highest} exceeds the expected {expected_vars} variables", position)
        if expected_vars < 1:
            raise ParseError("expected_vars must be positive", 0)
        num_vars = expected_vars
    else:
        num_vars = max(highest, 1)
    parser = _Parser(tokens, num_vars)
    try:
        return parser.parse()
    except NonFiniteError:
        raise ParseError("coefficient overflow while expanding", parser.current.position) from None


def _format_real(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _format_monomial(monomial: tuple[int, ...]) -> str:
    parts = []
    for index, e in enumerate(monomial, start=1):
        if e == 1:
            parts.append(f"z{index}")
        elif e > 1:
            parts.append(f"z{index}^{e}")
    return "*".join(parts)


def _format_term(coeff: complex, monomial: tuple[int, ...]) -> tuple[bool, str]:
    mono = _format_monomial(monomial)
    tail = f"*{mono}" if mono else ""
    if coeff.imag == 0:
        magnitude = abs(coeff.real)
        if magnitude == 1 and mono:
            return coeff.real < 0, mono
        return coeff.real < 0, _format_real(magnitude) + tail
    if coeff.real == 0:
        return coeff.imag < 0, _format_real(abs(coeff.imag)) + "i" + tail
    sign = "+" if coeff.imag > 0 else "-"
    body = f"({_format_real(coeff.real)} {sign} {_format_real(abs(coeff.imag))}i)"
    return False, body + tail


def format_poly(p: MultiPoly) -> str:
    """Renders p in graded-lex order in a form parse_poly reads back to the same term map."""
    if p.is_null:
        return "0"
    pieces = []
    for position, (monomial, coeff) in enumerate(p.terms.items()):
        negative, body = _format_term(coeff, monomial)
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)
