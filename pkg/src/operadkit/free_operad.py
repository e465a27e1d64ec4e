"""Planar colored trees over a generator set, with grafting.

Trees form the free operad on their generators: a bare leaf is the unit
at its color, grafting replaces a leaf with a whole tree, and the
governing laws hold structurally, which makes this instance the cheap
oracle against which the function operad is cross-checked.  The bridge
is ``eval_hom``, which maps a tree to the composite of bound operations
and must commute with grafting.

Permutations act on views: a tree paired with a reindexing of its leaf
sequence.  Planar trees have no intrinsic leaf reordering, so the view
is the whole content of the bijection, and views with the identity
reindexing collapse back to bare trees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Union

from .colorseq import (
    ColorSeq,
    IndexOutOfRange,
    Permutation,
    apply_perm,
    nth_color,
)
from .core import Budget, OperadInstance, PreconditionViolated, Signature, SignatureMismatch
from .fn_operad import ColorMismatch, FnEntry, fn_comp, fn_unit
from .universe import Code, ParseError, TokenStream, format_code, parse_code_tokens, tokenize


class UnboundGenerator(Exception):
    """A tree mentions a generator the environment does not bind."""


@dataclass(frozen=True)
class Generator:
    """A named formal operation; trees are built from these."""

    name: str
    sig: Signature


@dataclass(frozen=True)
class Leaf:
    color: Code

    @property
    def sig(self) -> Signature:
        return Signature(self.color, (self.color,))

    def with_signature(self, sig: Signature) -> "Leaf":
        if sig != self.sig:
            raise ValueError(f"retag would change the signature: {self.sig} vs {sig}")
        return self


@dataclass(frozen=True)
class Node:
    gen: Generator
    children: tuple["Tree", ...]

    def __post_init__(self) -> None:
        if len(self.children) != self.gen.sig.arity:
            raise ValueError(
                f"{self.gen.name} takes {self.gen.sig.arity} children, got {len(self.children)}"
            )
        for k, child in enumerate(self.children):
            want = self.gen.sig.inputs[k]
            got = tree_signature(child).output
            if got != want:
                raise ColorMismatch(
                    f"child {k} of {self.gen.name} has output {format_code(got)}, "
                    f"slot needs {format_code(want)}"
                )

    @property
    def sig(self) -> Signature:
        return tree_signature(self)

    def with_signature(self, sig: Signature) -> "Node":
        if sig != self.sig:
            raise ValueError(f"retag would change the signature: {self.sig} vs {sig}")
        return self


Tree = Union[Leaf, Node]


def leaves(tree: Tree) -> ColorSeq:
    """Leaf colors in left-to-right order; the tree's input sequence."""
    if isinstance(tree, Leaf):
        return (tree.color,)
    return tuple(color for child in tree.children for color in leaves(child))


def leaf_count(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return sum(leaf_count(child) for child in tree.children)


def tree_signature(tree: Tree) -> Signature:
    if isinstance(tree, Leaf):
        return tree.sig
    return Signature(tree.gen.sig.output, leaves(tree))


def graft(tree: Tree, i: int, subtree: Tree) -> Tree:
    """Replace the i-th leaf (left-to-right) of ``tree`` with ``subtree``."""
    count = leaf_count(tree)
    if not 0 <= i < count:
        raise IndexOutOfRange(f"leaf {i} out of range for {count} leaves")
    slot_color = leaves(tree)[i]
    graft_output = tree_signature(subtree).output
    if graft_output != slot_color:
        raise ColorMismatch(
            f"leaf {i} has color {format_code(slot_color)}, "
            f"grafted output is {format_code(graft_output)}"
        )
    return _graft_unchecked(tree, i, subtree)


def _graft_unchecked(tree: Tree, i: int, subtree: Tree) -> Tree:
    if isinstance(tree, Leaf):
        return subtree
    offset = 0
    for k, child in enumerate(tree.children):
        width = leaf_count(child)
        if i < offset + width:
            new_child = _graft_unchecked(child, i - offset, subtree)
            children = tree.children[:k] + (new_child,) + tree.children[k + 1 :]
            return Node(tree.gen, children)
        offset += width
    raise IndexOutOfRange(f"leaf {i} out of range")


@dataclass(frozen=True)
class PermutedTree:
    """A tree viewed through a reindexing of its leaf sequence."""

    tree: Tree
    perm: Permutation

    @property
    def sig(self) -> Signature:
        base = tree_signature(self.tree)
        return Signature(base.output, apply_perm(base.inputs, self.perm))

    def with_signature(self, sig: Signature) -> "PermutedTree":
        if sig != self.sig:
            raise ValueError(f"retag would change the signature: {self.sig} vs {sig}")
        return self


FreeEntry = Union[Leaf, Node, PermutedTree]


def tree_perm(entry: FreeEntry, sigma: Permutation) -> FreeEntry:
    """View ``entry`` through ``sigma``; stacked views compose their maps."""
    if isinstance(entry, PermutedTree):
        tree, base = entry.tree, entry.perm
    else:
        tree, base = entry, Permutation.identity(leaf_count(entry))
    if len(sigma) != len(base):
        raise ValueError(
            f"permutation on {len(sigma)} letters, tree with {len(base)} leaves"
        )
    combined = base.then(sigma)
    if combined.is_identity():
        return tree
    return PermutedTree(tree, combined)


def eval_hom(tree: Tree, env: Mapping[str, FnEntry]) -> FnEntry:
    """Interpret a tree as the composite of its bound operations.

    Leaves become identities; a node starts from its generator's binding
    and grafts the interpreted children in right-to-left slot order, so
    earlier slot indices stay valid as the fold widens the signature.
    The result is slot-order independent by the associativity laws.
    """
    if isinstance(tree, Leaf):
        return fn_unit(tree.color)
    binding = env.get(tree.gen.name)
    if binding is None:
        raise UnboundGenerator(f"no operation bound for generator {tree.gen.name!r}")
    if binding.sig != tree.gen.sig:
        raise SignatureMismatch(
            f"binding for {tree.gen.name!r} has signature {binding.sig}, "
            f"generator declares {tree.gen.sig}"
        )
    result = binding
    for k in range(tree.gen.sig.arity - 1, -1, -1):
        result = fn_comp(result, k, eval_hom(tree.children[k], env))
    return result


class FreeOperad(OperadInstance[FreeEntry]):
    """Instance adapter for the law harness; entry equality is structural.

    Freshly minted generators realize any requested signature, so the
    sampler never fails.  With ``break_cast=True`` composition discards
    the slot bookkeeping and grafts one leaf over from where it was
    asked to; the mutation-test counterpart of the function instance's
    dropped retag.
    """

    name = "free"

    def __init__(self, break_cast: bool = False, max_gen_arity: int = 3):
        self.break_cast = break_cast
        self.max_gen_arity = max_gen_arity

    def unit(self, color: Code) -> FreeEntry:
        return Leaf(color)

    def comp(self, parent: FreeEntry, i: int, child: FreeEntry) -> FreeEntry:
        if isinstance(parent, PermutedTree) or isinstance(child, PermutedTree):
            raise PreconditionViolated(
                "composition under a nontrivial leaf reindexing is not defined here"
            )
        if self.break_cast:
            i = (i + 1) % leaf_count(parent)
        return graft(parent, i, child)

    def perm_fwd(self, entry: FreeEntry, sigma: Permutation) -> FreeEntry:
        return tree_perm(entry, sigma)

    def perm_bwd(self, entry: FreeEntry, sigma: Permutation) -> FreeEntry:
        return tree_perm(entry, sigma.inverse())

    def entry_eq(self, e1: FreeEntry, e2: FreeEntry, budget: Budget) -> bool:
        return e1 == e2

    def sample_entries(
        self, sig: Signature, budget: Budget, rng: random.Random, count: int = 1
    ) -> list[FreeEntry]:
        return [
            sample_tree(sig, rng, max_gen_arity=self.max_gen_arity) for _ in range(count)
        ]

    def describe_entry(self, entry: FreeEntry) -> str:
        if isinstance(entry, PermutedTree):
            return f"perm{list(entry.perm.mapping)} of {format_term(entry.tree)}"
        return format_term(entry)


class GeneratorMinter:
    """Hands out uniquely named generators within one namespace."""

    def __init__(self, prefix: str = "g") -> None:
        self.prefix = prefix
        self.counter = 0

    def mint(self, sig: Signature) -> Generator:
        gen = Generator(f"{self.prefix}{self.counter}", sig)
        self.counter += 1
        return gen


def sample_tree(
    sig: Signature,
    rng: random.Random,
    minter: GeneratorMinter | None = None,
    max_gen_arity: int = 3,
) -> Tree:
    """A random tree of exactly the requested signature.

    Generators are minted on demand, so any signature is realizable;
    pass a shared minter to sample several trees over one namespace.
    """
    if minter is None:
        minter = GeneratorMinter()
    return _build_tree(sig.output, sig.inputs, rng, minter, max_gen_arity, depth=0)


def _build_tree(
    output: Code,
    leaf_colors: ColorSeq,
    rng: random.Random,
    minter: GeneratorMinter,
    max_gen_arity: int,
    depth: int,
) -> Tree:
    # A lone leaf of the right color may stand for the whole tree.
    if len(leaf_colors) == 1 and leaf_colors[0] == output and (depth > 0 and rng.random() < 0.5):
        return Leaf(output)
    if depth >= 4:
        # Force maximal splitting so block widths strictly shrink.
        arity = min(len(leaf_colors), max_gen_arity)
    else:
        arity = min(len(leaf_colors), rng.randint(1, max_gen_arity))
    blocks = _split_blocks(len(leaf_colors), arity, rng)
    children: list[Tree] = []
    child_colors: list[Code] = []
    start = 0
    for width in blocks:
        block = leaf_colors[start : start + width]
        start += width
        if width == 1 and (depth >= 3 or rng.random() < 0.6):
            children.append(Leaf(block[0]))
            child_colors.append(block[0])
        else:
            child_output = block[0] if rng.random() < 0.5 else block[-1]
            children.append(
                _build_tree(child_output, block, rng, minter, max_gen_arity, depth + 1)
            )
            child_colors.append(child_output)
    gen = minter.mint(Signature(output, tuple(child_colors)))
    return Node(gen, tuple(children))


def _split_blocks(total: int, parts: int, rng: random.Random) -> list[int]:
    """Split ``total`` leaves into ``parts`` consecutive non-empty blocks."""
    cuts = sorted(rng.sample(range(1, total), parts - 1)) if parts > 1 else []
    edges = [0] + cuts + [total]
    return [edges[k + 1] - edges[k] for k in range(parts)]


def as_operad_instance(break_cast: bool = False) -> FreeOperad:
    return FreeOperad(break_cast=break_cast)


# --- textual grammar --------------------------------------------------------
#
# term := "(" generator-name term* ")" | "leaf" code
# decl := "gen" name ":" "(" "[" codes "]" ")" "->" code


def format_term(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return f"leaf {format_code(tree.color)}"
    inner = " ".join(
        f"({format_term(c)})" if isinstance(c, Leaf) else format_term(c)
        for c in tree.children
    )
    return f"({tree.gen.name} {inner})" if inner else f"({tree.gen.name})"


def parse_term(text: str, generators: Mapping[str, Generator]) -> Tree:
    ts = TokenStream(tokenize(text))
    tree = parse_term_tokens(ts, generators)
    if not ts.done():
        raise ParseError(f"trailing input after term: {ts.peek()!r}")
    return tree


def parse_term_tokens(ts: TokenStream, generators: Mapping[str, Generator]) -> Tree:
    tok = ts.next()
    if tok == "leaf":
        return Leaf(parse_code_tokens(ts))
    if tok != "(":
        raise ParseError(f"expected '(' or 'leaf', got {tok!r}")
    head = ts.next()
    if head == "leaf":
        tree: Tree = Leaf(parse_code_tokens(ts))
        ts.expect(")")
        return tree
    gen = generators.get(head)
    if gen is None:
        raise UnboundGenerator(f"unknown generator {head!r}")
    children: list[Tree] = []
    while ts.peek() != ")":
        children.append(parse_term_tokens(ts, generators))
    ts.expect(")")
    return Node(gen, tuple(children))


def format_generator(gen: Generator) -> str:
    from .colorseq import format_color_seq

    return f"gen {gen.name} : ({format_color_seq(gen.sig.inputs)}) -> {format_code(gen.sig.output)}"


def parse_generator_decl(text: str) -> Generator:
    from .colorseq import parse_color_seq_tokens

    ts = TokenStream(tokenize(text))
    ts.expect("gen")
    name = ts.next()
    ts.expect(":")
    ts.expect("(")
    inputs = parse_color_seq_tokens(ts)
    ts.expect(")")
    ts.expect("->")
    output = parse_code_tokens(ts)
    if not ts.done():
        raise ParseError(f"trailing input after generator declaration: {ts.peek()!r}")
    return Generator(name, Signature(output, inputs))
