"""Group words in the generators 1, 2, 3 (and J), plus exponent formulas.

Concrete syntax::

    word    := factor*
    factor  := atom postfix*
    atom    := '1' | '2' | '3' | 'J' | 'P' | 'Q' | '(' word ')'
    postfix := "'" | '^' ['-'] digits

``'`` inverts, so ``1 3' 2 3`` is R1 R3^-1 R2 R3.  ``P`` expands to ``1 J``
and ``Q`` to ``1 2 3`` before any postfix is applied.  Whitespace between
tokens is ignored; adjacent digits are separate generators (``123`` is
R1 R2 R3) except right after ``^``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MacroUnavailable, NonIntegerExponent, WordSyntaxError

GENERATORS = ("1", "2", "3", "J")
MACROS = {"P": "1J", "Q": "123"}
SPORADIC = "sporadic"
THOMPSON = "thompson"


@dataclass(frozen=True)
class Letter:
    generator: str
    inverted: bool = False

    def inverse(self) -> "Letter":
        return Letter(self.generator, not self.inverted)

    def __str__(self):
        return self.generator + ("'" if self.inverted else "")


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return " ".join(str(l) for l in self.letters)

    def uses(self, generator: str) -> bool:
        return any(l.generator == generator for l in self.letters)

    def reduced(self) -> "Word":
        """Free reduction: cancel adjacent x x' pairs."""
        out: list[Letter] = []
        for l in self.letters:
            if out and out[-1] == l.inverse():
                out.pop()
            else:
                out.append(l)
        return Word(tuple(out))


IDENTITY = Word()


class _Parser:
    def __init__(self, text: str, kind: str):
        self.text = text
        self.kind = kind
        self.pos = 0

    def error(self, msg):
        raise WordSyntaxError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self) -> Word:
        w = IDENTITY
        while True:
            c = self.peek()
            if c == "" or c == ")":
                return w
            w = w * self.factor()

    def factor(self) -> Word:
        w = self.atom()
        while True:
            c = self.peek()
            if c == "'":
                self.pos += 1
                w = w.inverse()
            elif c == "^":
                self.pos += 1
                w = w ** self.integer()
            else:
                return w

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "-"):
            self.pos = start
            self.error("expected an integer exponent")
        return int(digits)

    def atom(self) -> Word:
        c = self.peek()
        at = self.pos
        if c == "(":
            self.pos += 1
            w = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return w
        if c in GENERATORS:
            if c == "J" and self.kind == THOMPSON:
                raise MacroUnavailable("J is not a generator of a Thompson group")
            self.pos += 1
            return Word((Letter(c),))
        if c in MACROS:
            if c == "P" and self.kind == THOMPSON:
                raise MacroUnavailable("P = 1J needs the generator J")
            self.pos += 1
            return _Parser(MACROS[c], SPORADIC).word()
        self.pos = at
        self.error(f"unexpected {c!r}" if c else "unexpected end of word")


def parse_word(text: str, kind: str = SPORADIC) -> Word:
    parser = _Parser(text, kind)
    w = parser.word()
    if parser.peek() != "":
        parser.error("unbalanced ')'")
    return w


# -- exponents ------------------------------------------------------------------

INFINITE = math.inf


@dataclass(frozen=True)
class ExponentFormula:
    """|a p / (b p + c)|; a constant n is stored as (n, 0, 1) with ``constant`` set."""

    a: int
    b: int = 0
    c: int = 1
    constant: bool = False

    @classmethod
    def const(cls, n: int) -> "ExponentFormula":
        return cls(n, 0, 1, True)

    def evaluate(self, p: int) -> int | float:
        """Positive integer value at ``p``; ``INFINITE`` when the denominator vanishes."""
        if self.constant:
            return self.a
        den = self.b * p + self.c
        if den == 0:
            return INFINITE
        value = abs(Fraction(self.a * p, den))
        if value.denominator != 1 or value == 0:
            raise NonIntegerExponent(p, str(self))
        return int(value)

    def __str__(self):
        if self.constant:
            return str(self.a)
        num = "p" if self.a == 1 else f"{self.a}p"
        if self.b == 0:
            return num if self.c == 1 else f"|{num}/{self.c}|"
        bp = "p" if self.b == 1 else f"{self.b}p"
        sign = "+" if self.c > 0 else "-"
        return f"|{num}/({bp}{sign}{abs(self.c)})|"


def absratio(a: int, b: int, c: int) -> ExponentFormula:
    return ExponentFormula(a, b, c)


def const(n: int) -> ExponentFormula:
    return ExponentFormula.const(n)
