"""Colored sequences, splicing, and permutation actions.

A color sequence is a plain tuple of type codes.  ``splice(c, i, b)``
replaces the i-th entry of ``c`` with the whole of ``b``; it is the
sequence-level shadow of grafting one operation into a slot of another.
The two check functions verify, pointwise, the splice identities that
make the associativity laws typecheck; the harness treats a ``False``
return as a build-breaking defect.

Indices are 0-based throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .universe import Code, UNIT, format_code, tokenize, TokenStream, ParseError

ColorSeq = tuple[Code, ...]

# Out-of-range sequence access yields the unit code.
DEFAULT_COLOR = UNIT


class IndexOutOfRange(IndexError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., n-1}``, stored as its index mapping."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"not a bijection on 0..{len(self.mapping) - 1}: {self.mapping}")

    def __len__(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def shuffled(cls, n: int, rng: random.Random) -> "Permutation":
        return cls(tuple(rng.sample(range(n), n)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for k, target in enumerate(self.mapping):
            inv[target] = k
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """The composite mapping ``k -> self(other(k))``."""
        if len(other) != len(self):
            raise LengthMismatch(f"cannot compose lengths {len(self)} and {len(other)}")
        return Permutation(tuple(self.mapping[k] for k in other.mapping))

    def is_identity(self) -> bool:
        return all(k == target for k, target in enumerate(self.mapping))


def splice(c: ColorSeq, i: int, b: ColorSeq) -> ColorSeq:
    """First ``i`` entries of ``c``, all of ``b``, then ``c`` after slot ``i``."""
    if not 0 <= i < len(c):
        raise IndexOutOfRange(f"splice index {i} out of range for length {len(c)}")
    if len(b) < 1:
        raise ValueError("cannot splice in an empty sequence")
    return c[:i] + tuple(b) + c[i + 1 :]


def apply_perm(c: ColorSeq, sigma: Permutation) -> ColorSeq:
    """The reindexed sequence: position ``k`` holds ``c[sigma(k)]``."""
    if len(sigma) != len(c):
        raise LengthMismatch(f"permutation on {len(sigma)} letters, sequence of length {len(c)}")
    return tuple(c[k] for k in sigma.mapping)


def nth_color(c: ColorSeq, i: int) -> Code:
    """Entry at ``i``, or the unit code when out of range.  Total by design."""
    if 0 <= i < len(c):
        return c[i]
    return DEFAULT_COLOR


def check_horizontal_splice_eq(c: ColorSeq, a: ColorSeq, b: ColorSeq, i: int, j: int) -> bool:
    """Splicing ``a`` at ``i`` then ``b`` at ``len(a)-1+j`` commutes with
    splicing ``b`` at ``j`` then ``a`` at ``i``, for ``i < j``."""
    if len(c) < 2:
        raise ValueError(f"need a base sequence of length >= 2, got {len(c)}")
    if not 0 <= i < j < len(c):
        raise ValueError(f"need 0 <= i < j < {len(c)}, got i={i}, j={j}")
    lhs = splice(splice(c, i, a), len(a) - 1 + j, b)
    rhs = splice(splice(c, j, b), i, a)
    return lhs == rhs


def check_vertical_splice_eq(c: ColorSeq, b: ColorSeq, a: ColorSeq, i: int, j: int) -> bool:
    """Splicing a pre-spliced sequence equals splicing twice at shifted index:
    ``c . i (b . j a)  ==  (c . i b) . (i+j) a``."""
    if not 0 <= i < len(c):
        raise ValueError(f"need 0 <= i < {len(c)}, got i={i}")
    if not 0 <= j < len(b):
        raise ValueError(f"need 0 <= j < {len(b)}, got j={j}")
    lhs = splice(c, i, splice(b, j, a))
    rhs = splice(splice(c, i, b), i + j, a)
    return lhs == rhs


def format_color_seq(c: ColorSeq) -> str:
    return "[" + ", ".join(format_code(code) for code in c) + "]"


def parse_color_seq(text: str) -> ColorSeq:
    ts = TokenStream(tokenize(text))
    seq = parse_color_seq_tokens(ts)
    if not ts.done():
        raise ParseError(f"trailing input after sequence: {ts.peek()!r}")
    return seq


def parse_color_seq_tokens(ts: TokenStream) -> ColorSeq:
    from .universe import parse_code_tokens

    ts.expect("[")
    items: list[Code] = []
    while ts.peek() != "]":
        if items:
            ts.expect(",")
        items.append(parse_code_tokens(ts))
    ts.expect("]")
    return tuple(items)


def format_permutation(sigma: Permutation) -> str:
    return "[" + ",".join(str(k) for k in sigma.mapping) + "]"


def parse_permutation(text: str) -> Permutation:
    ts = TokenStream(tokenize(text))
    ts.expect("[")
    indices: list[int] = []
    while ts.peek() != "]":
        if indices:
            ts.expect(",")
        tok = ts.next()
        if not tok.isdigit():
            raise ParseError(f"expected an index, got {tok!r}")
        indices.append(int(tok))
    ts.expect("]")
    if not ts.done():
        raise ParseError(f"trailing input after permutation: {ts.peek()!r}")
    return Permutation(tuple(indices))
