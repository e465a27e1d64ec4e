"""The function operad: typed n-ary operations on universe values.

An entry is a total map from input tuples to an output value, tagged
with its signature.  Entries compose by evaluating the grafted entry on
a slice of the argument tuple and substituting the result into the host
slot.  Equality of entries is extensional only: two entries are equal
when they agree on every tuple of the enumerated input space at the
ambient nat bound.

Sampled entries are backed by full lookup tables whose outputs are drawn
from the enumerated codomain, which keeps composition closed over table
lookups.  Closed-form entries (sums, products, projections) are genuinely
total and are provided as readable fixtures.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Sequence

from .colorseq import (
    IndexOutOfRange,
    LengthMismatch,
    Permutation,
    apply_perm,
    splice,
)
from .core import Budget, OperadInstance, Signature
from .universe import (
    BOOL,
    NAT,
    Code,
    ExponentialBlowup,
    Value,
    VBool,
    VNat,
    count_values,
    enumerate_values,
    format_value,
)


class ColorMismatch(Exception):
    """A grafted entry's output color differs from the slot color."""


@dataclass(frozen=True, eq=False)
class FnEntry:
    """A typed operation: a signature plus a map over input tuples.

    The map may be a closed-form rule or a table lookup; either way
    equality is always tested pointwise, so entries carry no notion of
    structural equality.
    """

    sig: Signature
    fn: Callable[[tuple[Value, ...]], Value]
    label: str = "fn"

    @property
    def arity(self) -> int:
        return self.sig.arity

    def apply(self, args: tuple[Value, ...]) -> Value:
        if len(args) != self.sig.arity:
            raise LengthMismatch(
                f"{self.label} takes {self.sig.arity} arguments, got {len(args)}"
            )
        return self.fn(args)

    def with_signature(self, sig: Signature) -> "FnEntry":
        if sig != self.sig:
            raise ValueError(f"retag would change the signature: {self.sig} vs {sig}")
        return replace(self, sig=sig)


def fn_unit(color: Code) -> FnEntry:
    """The identity operation at ``color``."""
    return FnEntry(Signature(color, (color,)), lambda args: args[0], label="id")


def fn_comp(f: FnEntry, i: int, g: FnEntry) -> FnEntry:
    """Graft ``g`` into slot ``i`` of ``f``.

    The composite consumes the spliced argument tuple, evaluates ``g``
    on the slice that replaced slot ``i``, and hands ``f`` the original
    tuple with the slice collapsed to ``g``'s result.
    """
    if not 0 <= i < f.arity:
        raise IndexOutOfRange(f"slot {i} out of range for arity {f.arity}")
    if g.sig.output != f.sig.inputs[i]:
        raise ColorMismatch(
            f"slot {i} has color {f.sig.inputs[i]!r}, grafted output is {g.sig.output!r}"
        )
    m = g.arity
    f_fn, g_fn = f.fn, g.fn

    def composite(args: tuple[Value, ...]) -> Value:
        inner = g_fn(args[i : i + m])
        return f_fn(args[:i] + (inner,) + args[i + m :])

    sig = Signature(f.sig.output, splice(f.sig.inputs, i, g.sig.inputs))
    return FnEntry(sig, composite, label=f"({f.label} o{i} {g.label})")


def fn_perm(f: FnEntry, sigma: Permutation) -> FnEntry:
    """The same operation over reindexed inputs.

    The result consumes ``y`` and feeds ``f`` the tuple ``z`` with
    ``z[sigma(k)] = y[k]``.
    """
    if len(sigma) != f.arity:
        raise LengthMismatch(f"permutation on {len(sigma)} letters, entry of arity {f.arity}")
    mapping = sigma.mapping
    f_fn = f.fn
    n = f.arity

    def permuted(args: tuple[Value, ...]) -> Value:
        z: list[Value] = [None] * n  # type: ignore[list-item]
        for k in range(n):
            z[mapping[k]] = args[k]
        return f_fn(tuple(z))

    return FnEntry(
        Signature(f.sig.output, apply_perm(f.sig.inputs, sigma)),
        permuted,
        label=f"perm{list(mapping)}({f.label})",
    )


def tuple_space_size(inputs: Sequence[Code], nat_bound: int) -> int:
    size = 1
    for code in inputs:
        size *= count_values(code, nat_bound)
    return size


def tuple_space(
    inputs: Sequence[Code], budget: Budget
) -> Iterator[tuple[Value, ...]]:
    """All argument tuples for the given input colors, in enumeration order."""
    size = tuple_space_size(inputs, budget.nat_bound)
    if size > budget.enum_ceiling:
        raise ExponentialBlowup(size, budget.enum_ceiling, what="tuple space")
    domains = [enumerate_values(c, budget.nat_bound, budget.enum_ceiling) for c in inputs]
    return itertools.product(*domains)


def fn_entry_eq(f: FnEntry, g: FnEntry, budget: Budget) -> bool:
    """Extensional equality over the enumerated input space."""
    if f.sig != g.sig:
        return False
    return all(f.fn(args) == g.fn(args) for args in tuple_space(f.sig.inputs, budget))


def random_table_entry(sig: Signature, budget: Budget, rng: random.Random) -> FnEntry:
    """A uniformly random full table of the given signature."""
    outputs = enumerate_values(sig.output, budget.nat_bound, budget.enum_ceiling)
    table = {args: rng.choice(outputs) for args in tuple_space(sig.inputs, budget)}

    def lookup(args: tuple[Value, ...]) -> Value:
        return table[args]

    return FnEntry(sig, lookup, label=f"table#{len(table)}")


def describe_table(entry: FnEntry, budget: Budget, max_rows: int = 8) -> str:
    """Fixture-style rendering of an entry's table, truncated for reports."""
    rows = []
    for args in itertools.islice(tuple_space(entry.sig.inputs, budget), max_rows + 1):
        key = ", ".join(format_value(v) for v in args)
        rows.append(f"({key}) -> {format_value(entry.fn(args))}")
    if len(rows) > max_rows:
        rows = rows[:max_rows] + ["..."]
    return f"{entry.sig} = table {{{'; '.join(rows)}}}"


# --- closed-form fixtures ---------------------------------------------------

BUILTIN_NAMES = ("sum", "prod", "proj", "neg", "id")


def make_builtin(kind: str, sig: Signature, k: int | None = None) -> FnEntry:
    """A named closed-form entry, validated against its declared signature."""
    if kind == "sum":
        _require_all_nat(sig, "sum")
        return FnEntry(sig, lambda args: VNat(sum(v.n for v in args)), label="sum")
    if kind == "prod":
        _require_all_nat(sig, "prod")

        def product(args: tuple[Value, ...]) -> Value:
            total = 1
            for v in args:
                total *= v.n
            return VNat(total)

        return FnEntry(sig, product, label="prod")
    if kind == "proj":
        if k is None or not 0 <= k < sig.arity:
            raise ValueError(f"proj needs a slot in 0..{sig.arity - 1}, got {k}")
        if sig.output != sig.inputs[k]:
            raise ColorMismatch(f"proj {k} output must match input color {k}")
        return FnEntry(sig, lambda args: args[k], label=f"proj {k}")
    if kind == "neg":
        if sig != Signature(BOOL, (BOOL,)):
            raise ColorMismatch("neg is the unary boolean operation (B, [B])")
        return FnEntry(sig, lambda args: VBool(not args[0].b), label="neg")
    if kind == "id":
        if sig.arity != 1 or sig.output != sig.inputs[0]:
            raise ColorMismatch("id needs signature (c, [c])")
        return fn_unit(sig.output)
    raise ValueError(f"unknown builtin {kind!r}")


def _require_all_nat(sig: Signature, name: str) -> None:
    if sig.output != NAT or any(c != NAT for c in sig.inputs):
        raise ColorMismatch(f"{name} needs naturals everywhere in its signature")


class FnOperad(OperadInstance[FnEntry]):
    """Instance adapter handing the function operad to the law harness.

    With ``break_cast=True`` composition keeps the host entry's signature
    instead of retagging with the spliced one; a deliberate defect used
    by mutation tests of the harness.
    """

    name = "fn"

    def __init__(self, break_cast: bool = False):
        self.break_cast = break_cast

    def unit(self, color: Code) -> FnEntry:
        return fn_unit(color)

    def comp(self, parent: FnEntry, i: int, child: FnEntry) -> FnEntry:
        composed = fn_comp(parent, i, child)
        if self.break_cast:
            return FnEntry(parent.sig, composed.fn, label=composed.label)
        return composed

    def perm_fwd(self, entry: FnEntry, sigma: Permutation) -> FnEntry:
        return fn_perm(entry, sigma)

    def perm_bwd(self, entry: FnEntry, sigma: Permutation) -> FnEntry:
        return fn_perm(entry, sigma.inverse())

    def entry_eq(self, e1: FnEntry, e2: FnEntry, budget: Budget) -> bool:
        return fn_entry_eq(e1, e2, budget)

    def sample_entries(
        self, sig: Signature, budget: Budget, rng: random.Random, count: int = 1
    ) -> list[FnEntry]:
        return [random_table_entry(sig, budget, rng) for _ in range(count)]

    def describe_entry(self, entry: FnEntry) -> str:
        return f"{entry.label} : {entry.sig}"


def as_operad_instance(break_cast: bool = False) -> FnOperad:
    """The bundle handed to ``run_law_suite``; budgets arrive per call."""
    return FnOperad(break_cast=break_cast)
