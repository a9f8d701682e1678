"""Permutations in one-line notation, with the statistics driving this package.

A permutation w of {1, ..., n} is stored as the tuple (w(1), ..., w(n)).
Positions and values are 1-indexed everywhere in the public API; the only
0-indexing is inside method bodies.

The statistics provided here:

- ``length``: the inversion count, which equals the length of any reduced
  word for w in the adjacent-transposition generators.
- ``support``: the set of generator indices appearing in every reduced word,
  computed by the prefix-maximum criterion (index k is in the support exactly
  when max(w(1..k)) > k).
- ``rep``: length minus support size, the number of repeated letters in a
  reduced word.
- ``prefix_profile``: the running prefix maxima and suffix minima that the
  pattern-assignment machinery in :mod:`permstat.bijection` consumes.
- ``reduce``: deletion of the largest letter, the recursion step used by the
  canonical word construction and the level-by-level verification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class MalformedPermutationError(ValueError):
    """Input text or values do not describe a permutation of 1..n."""


class ProfileUndefinedError(ValueError):
    """Prefix profiles need at least two letters."""


class CannotReduceError(ValueError):
    """A one-letter permutation has no reduction."""


_COMPACT = re.compile(r"\d{2,}")
_SEPARATED = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class PrefixProfile:
    """Running maxima of prefixes and minima of suffixes.

    ``prefix_max[k-1]`` is max(w(1..k)) and ``suffix_min[k-1]`` is
    min(w(k+1..n)), for k in 1..n-1.  Both sequences are weakly increasing,
    and ``prefix_max[k-1] > k`` exactly when k lies in the support.
    """

    prefix_max: tuple[int, ...]
    suffix_min: tuple[int, ...]

    def max_at(self, k: int) -> int:
        """max of the first k values (k is 1-indexed)."""
        return self.prefix_max[k - 1]

    def min_at(self, k: int) -> int:
        """min of the values after position k (k is 1-indexed)."""
        return self.suffix_min[k - 1]


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1, ..., n} in one-line notation.

    >>> w = Permutation((3, 5, 4, 1, 2))
    >>> w(2), w.position(5), len(w)
    (5, 2, 5)
    """

    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        n = len(values)
        if n < 1:
            raise MalformedPermutationError("a permutation needs at least one value")
        if sorted(values) != list(range(1, n + 1)):
            raise MalformedPermutationError(
                f"values {values!r} are not a rearrangement of 1..{n}"
            )

    # -- construction ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse one-line notation.

        Accepts whitespace- or comma-separated integers, or a compact digit
        string ("35412") when every value is a single digit.

        >>> Permutation.parse("3 5 4 1 2") == Permutation.parse("35412")
        True
        """
        text = text.strip()
        if not text:
            raise MalformedPermutationError("empty permutation text")
        if _COMPACT.fullmatch(text):
            return cls(tuple(int(ch) for ch in text))
        try:
            values = tuple(int(tok) for tok in _SEPARATED.split(text))
        except ValueError as exc:
            raise MalformedPermutationError(f"cannot parse {text!r}") from exc
        return cls(values)

    # -- basics ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        """The value at 1-indexed position i."""
        if not 1 <= i <= len(self.values):
            raise IndexError(f"position {i} outside 1..{len(self.values)}")
        return self.values[i - 1]

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.values)

    def position(self, value: int) -> int:
        """The 1-indexed position of a value (the inverse image)."""
        try:
            return self.values.index(value) + 1
        except ValueError:
            raise ValueError(f"{value} does not occur in {self}") from None

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.values)
        for i, v in enumerate(self.values):
            inv[v - 1] = i + 1
        return Permutation(tuple(inv))

    # -- statistics --------------------------------------------------------

    def length(self) -> int:
        """Inversion count; equals the length of any reduced word.

        >>> Permutation.parse("35412").length()
        7
        """
        values = self.values
        n = len(values)
        return sum(
            1
            for i in range(n - 1)
            for j in range(i + 1, n)
            if values[i] > values[j]
        )

    def support(self) -> frozenset[int]:
        """Generator indices appearing in every reduced word.

        Index k is in the support exactly when max(w(1..k)) > k, so one
        forward sweep suffices; no word is ever materialized.

        >>> sorted(Permutation.parse("32154").support())
        [1, 2, 4]
        """
        out = []
        big = 0
        for k, v in enumerate(self.values[:-1], start=1):
            if v > big:
                big = v
            if big > k:
                out.append(k)
        return frozenset(out)

    def rep(self) -> int:
        """Number of repeated letters in a reduced word: length - |support|."""
        return self.length() - len(self.support())

    def prefix_profile(self) -> PrefixProfile:
        """Prefix maxima and suffix minima, defined for n >= 2."""
        values = self.values
        n = len(values)
        if n < 2:
            raise ProfileUndefinedError("profiles need at least two letters")
        prefix = []
        big = 0
        for v in values[:-1]:
            if v > big:
                big = v
            prefix.append(big)
        suffix = [0] * (n - 1)
        small = n + 1
        for k in range(n - 1, 0, -1):
            if values[k] < small:
                small = values[k]
            suffix[k - 1] = small
        return PrefixProfile(tuple(prefix), tuple(suffix))

    # -- reduction ---------------------------------------------------------

    def reduce(self) -> "Permutation":
        """Delete the largest letter and close the gap.

        >>> str(Permutation.parse("35412").reduce())
        '3 4 1 2'
        """
        n = len(self.values)
        if n < 2:
            raise CannotReduceError("cannot reduce a one-letter permutation")
        return Permutation(tuple(v for v in self.values if v != n))

    def iterated_reduce(self) -> tuple["Permutation", ...]:
        """The full reduction chain, from this permutation down to one letter."""
        chain = [self]
        while len(chain[-1]) > 1:
            chain.append(chain[-1].reduce())
        return tuple(chain)


def parse(text: str) -> Permutation:
    """Module-level alias for :meth:`Permutation.parse`."""
    return Permutation.parse(text)


def identity(n: int) -> Permutation:
    return Permutation.identity(n)
