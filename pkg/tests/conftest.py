import random

from hypothesis import strategies as st

from tpc_invariants.kirby import LinkingPresentation


@st.composite
def symmetric_matrices(draw, max_n=6, bound=6, min_n=0, even=False):
    n = draw(st.integers(min_n, max_n))
    entries = st.integers(-bound, bound)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        d = draw(entries)
        m[i][i] = 2 * (d // 2) if even else d
        for j in range(i):
            m[i][j] = m[j][i] = draw(entries)
    return tuple(tuple(r) for r in m)


@st.composite
def unimodular_matrices(draw, max_n=5):
    """Random products of elementary matrices, i.e. elements of GL(n, Z)."""
    n = draw(st.integers(1, max_n))
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 12))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        c = draw(st.integers(-3, 3))
        if i != j:
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        elif draw(st.booleans()):
            m[i] = [-x for x in m[i]]
    return tuple(tuple(r) for r in m)


def random_even_presentation(rng: random.Random, max_n=8, bound=6) -> LinkingPresentation:
    n = rng.randint(0, max_n)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 2 * rng.randint(-(bound // 2), bound // 2)
        for j in range(i):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return LinkingPresentation(m)
