"""Reduced words: construction, evaluation, and the support oracle.

A word is a sequence of generator indices i (1 <= i <= n-1); evaluating it
multiplies the corresponding adjacent transpositions left to right, each one
swapping the values in positions i and i+1 of the running permutation.

``canonical_word`` builds one specific reduced word by recursion on the
largest letter: the word for w is the word for its reduction followed by the
descending run (n-1, n-2, ..., position of n in w).  ``all_reduced_words`` is
the brute-force oracle that peels one descent at a time; it exists so the
prefix-maximum support computation in :mod:`permstat.perm_core` can be checked
against the letters that actually occur in every word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perm_core import Permutation

DEFAULT_ORACLE_BOUND = 6


class MalformedWordError(ValueError):
    """Letters outside 1..n-1, or a word that is not reduced."""


class OracleBoundExceededError(ValueError):
    """The all-words oracle is capped; word counts grow super-exponentially."""


def _apply(letters, n):
    """Right-multiply the identity by the given letters; returns a tuple."""
    values = list(range(1, n + 1))
    for i in letters:
        values[i - 1], values[i] = values[i], values[i - 1]
    return tuple(values)


@dataclass(frozen=True)
class ReducedWord:
    """A reduced word together with the n of its ambient symmetric group.

    Construction checks both letter ranges and reducedness (the evaluated
    permutation must have inversion count equal to the word length).
    """

    letters: tuple[int, ...]
    ambient_n: int

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        n = self.ambient_n
        if n < 1:
            raise MalformedWordError("ambient n must be at least 1")
        for i in letters:
            if not 1 <= i <= n - 1:
                raise MalformedWordError(f"letter {i} outside 1..{n - 1}")
        if Permutation(_apply(letters, n)).length() != len(letters):
            raise MalformedWordError(f"word {letters!r} is not reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)


def format_word(word: ReducedWord) -> str:
    """Comma-separated letters; the empty word renders as "-"."""
    if not word.letters:
        return "-"
    return ",".join(str(i) for i in word.letters)


def parse_word(text: str, n: int) -> ReducedWord:
    text = text.strip()
    if text == "-" or not text:
        return ReducedWord((), n)
    try:
        letters = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise MalformedWordError(f"cannot parse word {text!r}") from exc
    return ReducedWord(letters, n)


def evaluate(word: ReducedWord) -> Permutation:
    """The permutation a word multiplies out to.

    >>> str(evaluate(ReducedWord((2, 1, 2, 4), 5)))
    '3 2 1 5 4'
    """
    return Permutation(_apply(word.letters, word.ambient_n))


def canonical_word(w: Permutation) -> ReducedWord:
    """The reduced word built by repeatedly placing the largest letter.

    Working down from the largest letter m, each step contributes the
    descending run (m-1, m-2, ..., position of m); runs are emitted for the
    smallest letters first.

    >>> format_word(canonical_word(Permutation.parse("35412")))
    '2,1,3,2,4,3,2'
    """
    n = len(w)
    runs = []
    values = list(w.values)
    for m in range(n, 1, -1):
        q = values.index(m) + 1
        runs.append(range(m - 1, q - 1, -1))
        values.remove(m)
    letters = []
    for run in reversed(runs):
        letters.extend(run)
    return ReducedWord(tuple(letters), n)


def _iter_letter_tuples(w: Permutation):
    """Yield the letters of every reduced word of w, as plain tuples.

    Peels one descent per step: i is a descent of u exactly when dropping a
    final letter i shortens u, so suffix-extension of shorter words reaches
    every reduced word exactly once.  Iterative DFS; word letters accumulate
    right to left.
    """
    n = len(w)
    identity = tuple(range(1, n + 1))
    # stack holds (current permutation, letters peeled so far, reversed)
    stack = [(w.values, ())]
    while stack:
        u, tail = stack.pop()
        if u == identity:
            yield tuple(reversed(tail))
            continue
        for i in range(n - 1):
            if u[i] > u[i + 1]:
                v = u[:i] + (u[i + 1], u[i]) + u[i + 2:]
                stack.append((v, tail + (i + 1,)))


def all_reduced_words(
    w: Permutation, bound: int = DEFAULT_ORACLE_BOUND
) -> list[ReducedWord]:
    """Every reduced word of w, sorted lexicographically.

    >>> [rw.letters for rw in all_reduced_words(Permutation.parse("321"))]
    [(1, 2, 1), (2, 1, 2)]
    """
    n = len(w)
    if n > bound:
        raise OracleBoundExceededError(
            f"all-words oracle capped at n <= {bound}, got n = {n}"
        )
    letter_tuples = sorted(_iter_letter_tuples(w))
    return [ReducedWord(letters, n) for letters in letter_tuples]


def check_support_well_defined(
    w: Permutation, bound: int = DEFAULT_ORACLE_BOUND
) -> bool:
    """True when every reduced word of w uses exactly the support letters.

    Streams raw letter tuples so large word sets never materialize at once.
    """
    n = len(w)
    if n > bound:
        raise OracleBoundExceededError(
            f"all-words oracle capped at n <= {bound}, got n = {n}"
        )
    expected = set(w.support())
    return all(set(letters) == expected for letters in _iter_letter_tuples(w))
