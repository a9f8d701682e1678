import itertools

from hypothesis import strategies as st

from permstat import Permutation


def sn(n):
    """All of S_n, lexicographically."""
    for values in itertools.permutations(range(1, n + 1)):
        yield Permutation(values)


def perm_strategy(min_n=1, max_n=10):
    return (
        st.integers(min_n, max_n)
        .flatmap(lambda n: st.permutations(tuple(range(1, n + 1))))
        .map(lambda v: Permutation(tuple(v)))
    )
