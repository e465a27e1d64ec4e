import random

import hypothesis.strategies as st

from operadkit.universe import Arrow, BOOL, Code, NAT, Prod, UNIT

BASE_CODES = (NAT, UNIT, BOOL)


def random_code(rng: random.Random, max_depth: int = 2) -> Code:
    """A random code of depth at most ``max_depth``, biased toward bases."""
    if max_depth == 0 or rng.random() < 0.6:
        return rng.choice(BASE_CODES)
    left = random_code(rng, max_depth - 1)
    right = random_code(rng, max_depth - 1)
    return Prod(left, right) if rng.random() < 0.5 else Arrow(left, right)


def codes(max_depth: int = 2) -> st.SearchStrategy[Code]:
    base = st.sampled_from(BASE_CODES)
    if max_depth == 0:
        return base
    return st.recursive(
        base,
        lambda inner: st.builds(Prod, inner, inner) | st.builds(Arrow, inner, inner),
        max_leaves=2**max_depth,
    )


def code_seqs(min_len: int = 1, max_len: int = 5, max_depth: int = 1):
    return st.lists(codes(max_depth), min_size=min_len, max_size=max_len).map(tuple)
