"""Type codes, their interpretation, and bounded value enumeration.

A small closed universe of type codes: three base sigils (naturals, unit,
booleans) plus binary product and function codes.  Codes are interpreted
into runtime values; function codes are interpreted as finite lookup
tables over the enumerated domain so that equality of values, and hence
extensional equality of operations over them, is decidable.

Naturals are bounded per run by a ``nat_bound`` parameter.  The bound is
a harness knob, not a semantic claim: ``VNat(7)`` inhabits the naturals
code regardless of the bound, but enumeration and table keys only range
over ``0 .. nat_bound - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Union

DEFAULT_ENUM_CEILING = 100_000


class ExponentialBlowup(Exception):
    """An enumeration or tuple space exceeds the configured ceiling."""

    def __init__(self, size: int, ceiling: int, what: str = "enumeration"):
        super().__init__(f"{what} has {size} elements, exceeding ceiling {ceiling}")
        self.size = size
        self.ceiling = ceiling


class TableDomainError(KeyError):
    """A table was applied to a value outside its finite key set."""


class Sigil(Enum):
    """The three base type sigils."""

    NAT = "N"
    UNIT = "U"
    BOOL = "B"


@dataclass(frozen=True)
class Base:
    """Code for a base type, selected by sigil."""

    sigil: Sigil


@dataclass(frozen=True)
class Prod:
    """Code for a binary product."""

    left: "Code"
    right: "Code"


@dataclass(frozen=True)
class Arrow:
    """Code for a function type, interpreted as a finite table space."""

    dom: "Code"
    cod: "Code"


Code = Union[Base, Prod, Arrow]

NAT = Base(Sigil.NAT)
UNIT = Base(Sigil.UNIT)
BOOL = Base(Sigil.BOOL)


@dataclass(frozen=True)
class VNat:
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("naturals are non-negative")


@dataclass(frozen=True)
class VUnit:
    pass


@dataclass(frozen=True)
class VBool:
    b: bool


@dataclass(frozen=True)
class VPair:
    fst: "Value"
    snd: "Value"


@dataclass(frozen=True)
class VTable:
    """A function value: a finite map stored as ordered (key, output) pairs.

    Keys are kept in canonical enumeration order of ``dom``; construction
    through :func:`make_table` or :func:`enumerate_values` guarantees this
    and guarantees the key set is the full enumerated domain.
    """

    dom: Code
    cod: Code
    entries: tuple[tuple["Value", "Value"], ...]

    def lookup(self, key: "Value") -> "Value":
        for k, v in self.entries:
            if k == key:
                return v
        raise TableDomainError(f"value {format_value(key)} not in table domain")


Value = Union[VNat, VUnit, VBool, VPair, VTable]

UNIT_VALUE = VUnit()
TRUE = VBool(True)
FALSE = VBool(False)


def interp_doc(code: Code) -> str:
    """Render the type a code denotes, in conventional notation."""
    if isinstance(code, Base):
        return {Sigil.NAT: "ℕ", Sigil.UNIT: "\U0001d7d9", Sigil.BOOL: "\U0001d539"}[code.sigil]
    if isinstance(code, Prod):
        return f"({interp_doc(code.left)} × {interp_doc(code.right)})"
    return f"({interp_doc(code.dom)} → {interp_doc(code.cod)})"


def inhabits(value: Value, code: Code) -> bool:
    """Whether ``value`` is a well-formed inhabitant of ``code``.

    Componentwise and unbounded: any ``VNat`` inhabits the naturals code.
    For tables this checks the dom/cod codes match and every entry
    inhabits; it does not check key-set completeness, which is a
    construction-time invariant tied to the ambient nat bound.
    """
    if isinstance(value, VNat):
        return code == NAT
    if isinstance(value, VUnit):
        return code == UNIT
    if isinstance(value, VBool):
        return code == BOOL
    if isinstance(value, VPair):
        return (
            isinstance(code, Prod)
            and inhabits(value.fst, code.left)
            and inhabits(value.snd, code.right)
        )
    if isinstance(value, VTable):
        return (
            isinstance(code, Arrow)
            and value.dom == code.dom
            and value.cod == code.cod
            and all(
                inhabits(k, code.dom) and inhabits(v, code.cod)
                for k, v in value.entries
            )
        )
    raise TypeError(f"not a value: {value!r}")


@lru_cache(maxsize=None)
def count_values(code: Code, nat_bound: int) -> int:
    """Cardinality of the enumeration of ``code``, computed arithmetically."""
    if nat_bound < 1:
        raise ValueError("nat_bound must be at least 1")
    if isinstance(code, Base):
        return {Sigil.NAT: nat_bound, Sigil.UNIT: 1, Sigil.BOOL: 2}[code.sigil]
    if isinstance(code, Prod):
        return count_values(code.left, nat_bound) * count_values(code.right, nat_bound)
    return count_values(code.cod, nat_bound) ** count_values(code.dom, nat_bound)


@lru_cache(maxsize=None)
def enumerate_values(
    code: Code, nat_bound: int, ceiling: int = DEFAULT_ENUM_CEILING
) -> tuple[Value, ...]:
    """Every inhabitant of ``code`` with naturals below ``nat_bound``.

    Deterministic and duplicate-free.  Products enumerate in left-major
    lexicographic order; function codes enumerate every table from the
    enumerated domain to the enumerated codomain, varying later keys
    fastest.  Raises :class:`ExponentialBlowup` when the count exceeds
    ``ceiling``.
    """
    size = count_values(code, nat_bound)
    if size > ceiling:
        raise ExponentialBlowup(size, ceiling)
    if isinstance(code, Base):
        if code.sigil is Sigil.NAT:
            return tuple(VNat(i) for i in range(nat_bound))
        if code.sigil is Sigil.UNIT:
            return (UNIT_VALUE,)
        return (FALSE, TRUE)
    if isinstance(code, Prod):
        lefts = enumerate_values(code.left, nat_bound, ceiling)
        rights = enumerate_values(code.right, nat_bound, ceiling)
        return tuple(VPair(a, b) for a in lefts for b in rights)
    keys = enumerate_values(code.dom, nat_bound, ceiling)
    outs = enumerate_values(code.cod, nat_bound, ceiling)
    return tuple(
        VTable(code.dom, code.cod, tuple(zip(keys, picks)))
        for picks in itertools.product(outs, repeat=len(keys))
    )


def value_sort_key(value: Value):
    """Canonical order on values of a common code; matches enumeration order."""
    if isinstance(value, VNat):
        return value.n
    if isinstance(value, VUnit):
        return 0
    if isinstance(value, VBool):
        return int(value.b)
    if isinstance(value, VPair):
        return (value_sort_key(value.fst), value_sort_key(value.snd))
    return tuple(value_sort_key(v) for _, v in value.entries)


def make_table(dom: Code, cod: Code, pairs: dict[Value, Value]) -> VTable:
    """Build a table with entries in canonical key order.

    Checks inhabitation of every key and output; key-set completeness
    against a nat bound is the caller's concern.
    """
    for k, v in pairs.items():
        if not inhabits(k, dom):
            raise ValueError(f"table key {format_value(k)} does not inhabit {format_code(dom)}")
        if not inhabits(v, cod):
            raise ValueError(f"table output {format_value(v)} does not inhabit {format_code(cod)}")
    ordered = tuple(sorted(pairs.items(), key=lambda kv: value_sort_key(kv[0])))
    return VTable(dom, cod, ordered)


# --- textual grammar -------------------------------------------------------
#
# code  := "N" | "U" | "B" | "(" "p" code code ")" | "(" "fn" code code ")"
# value := digits | "unit" | "true" | "false"
#        | "(" "pair" value value ")"
#        | "(" "table" "(" ("(" value value ")")* ")" ")"
#
# Parsing is whitespace-insensitive.

_PUNCT = "()[]{},;:="


def tokenize(text: str) -> list[str]:
    """Split a grammar string into punctuation, ``->`` arrows, and words."""
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("->", i):
            tokens.append("->")
            i += 2
        elif ch in _PUNCT:
            tokens.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in _PUNCT and not text.startswith("->", j):
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


class ParseError(ValueError):
    """Malformed text for one of the textual grammars."""


class TokenStream:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def done(self) -> bool:
        return self.pos >= len(self.tokens)


def parse_code_tokens(ts: TokenStream) -> Code:
    tok = ts.next()
    if tok == "N":
        return NAT
    if tok == "U":
        return UNIT
    if tok == "B":
        return BOOL
    if tok == "(":
        head = ts.next()
        if head == "p":
            left = parse_code_tokens(ts)
            right = parse_code_tokens(ts)
            ts.expect(")")
            return Prod(left, right)
        if head == "fn":
            dom = parse_code_tokens(ts)
            cod = parse_code_tokens(ts)
            ts.expect(")")
            return Arrow(dom, cod)
        raise ParseError(f"expected 'p' or 'fn' after '(', got {head!r}")
    raise ParseError(f"expected a code, got {tok!r}")


def parse_code(text: str) -> Code:
    ts = TokenStream(tokenize(text))
    code = parse_code_tokens(ts)
    if not ts.done():
        raise ParseError(f"trailing input after code: {ts.peek()!r}")
    return code


def format_code(code: Code) -> str:
    if isinstance(code, Base):
        return code.sigil.value
    if isinstance(code, Prod):
        return f"(p {format_code(code.left)} {format_code(code.right)})"
    return f"(fn {format_code(code.dom)} {format_code(code.cod)})"


def parse_value_tokens(ts: TokenStream) -> Value:
    tok = ts.next()
    if tok == "unit":
        return UNIT_VALUE
    if tok == "true":
        return TRUE
    if tok == "false":
        return FALSE
    if tok.isdigit():
        return VNat(int(tok))
    if tok == "(":
        head = ts.next()
        if head == "pair":
            fst = parse_value_tokens(ts)
            snd = parse_value_tokens(ts)
            ts.expect(")")
            return VPair(fst, snd)
        if head == "table":
            ts.expect("(")
            pairs: dict[Value, Value] = {}
            while ts.peek() != ")":
                ts.expect("(")
                k = parse_value_tokens(ts)
                v = parse_value_tokens(ts)
                ts.expect(")")
                if k in pairs:
                    raise ParseError(f"duplicate table key {format_value(k)}")
                pairs[k] = v
            ts.expect(")")
            ts.expect(")")
            if not pairs:
                raise ParseError("empty table")
            dom = infer_code(next(iter(pairs)))
            cod = infer_code(next(iter(pairs.values())))
            return make_table(dom, cod, pairs)
        raise ParseError(f"expected 'pair' or 'table' after '(', got {head!r}")
    raise ParseError(f"expected a value, got {tok!r}")


def parse_value(text: str) -> Value:
    ts = TokenStream(tokenize(text))
    value = parse_value_tokens(ts)
    if not ts.done():
        raise ParseError(f"trailing input after value: {ts.peek()!r}")
    return value


def infer_code(value: Value) -> Code:
    """The code a value claims to inhabit, read off its shape."""
    if isinstance(value, VNat):
        return NAT
    if isinstance(value, VUnit):
        return UNIT
    if isinstance(value, VBool):
        return BOOL
    if isinstance(value, VPair):
        return Prod(infer_code(value.fst), infer_code(value.snd))
    return Arrow(value.dom, value.cod)


def format_value(value: Value) -> str:
    if isinstance(value, VNat):
        return str(value.n)
    if isinstance(value, VUnit):
        return "unit"
    if isinstance(value, VBool):
        return "true" if value.b else "false"
    if isinstance(value, VPair):
        return f"(pair {format_value(value.fst)} {format_value(value.snd)})"
    inner = " ".join(f"({format_value(k)} {format_value(v)})" for k, v in value.entries)
    return f"(table ({inner}))"


def iter_codes(max_depth: int) -> Iterator[Code]:
    """All codes of the given structural depth or less, smallest first."""
    by_depth: list[list[Code]] = [[NAT, UNIT, BOOL]]
    yield from by_depth[0]
    for depth in range(1, max_depth + 1):
        shallower = [c for level in by_depth for c in level]
        level: list[Code] = []
        for left in shallower:
            for right in shallower:
                if max(code_depth(left), code_depth(right)) == depth - 1:
                    level.append(Prod(left, right))
                    level.append(Arrow(left, right))
        by_depth.append(level)
        yield from level


def code_depth(code: Code) -> int:
    if isinstance(code, Base):
        return 0
    if isinstance(code, Prod):
        return 1 + max(code_depth(code.left), code_depth(code.right))
    return 1 + max(code_depth(code.dom), code_depth(code.cod))
