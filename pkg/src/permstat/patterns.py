"""Classical pattern containment: occurrence enumeration and counting.

An occurrence of a pattern p in w is a subsequence of w in the same relative
order as p; its *top* is its largest value, and occurrences partition by top.
The package cares about two pattern statistics: the combined count of 321-
and 3412-occurrences, and avoidance of the ten blocking patterns in ``PHI``
(one of length four, nine of length five) whose absence characterizes when
the combined count equals the repeated-letter statistic.

The scanner is a deliberately naive ordered-subsequence search with partial
relative-order pruning: worst case O(n^k) for a length-k pattern, which is
fine at the sizes this package targets and easy to audit.  The fast sweep in
:mod:`permstat.enumerate` is checked against this module, not the other way
around.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perm_core import Permutation

#: Patterns are ordinary permutations; the alias marks intent at call sites.
Pattern = Permutation

P_321 = Pattern((3, 2, 1))
P_3412 = Pattern((3, 4, 1, 2))

#: The ten blocking patterns, shortest first; 4321 is also the cheapest and
#: most frequent rejection, so containment checks try it first.
PHI = (
    Pattern((4, 3, 2, 1)),
    Pattern((3, 4, 5, 1, 2)),
    Pattern((4, 5, 1, 2, 3)),
    Pattern((3, 5, 4, 1, 2)),
    Pattern((4, 3, 5, 1, 2)),
    Pattern((4, 5, 1, 3, 2)),
    Pattern((4, 5, 2, 1, 3)),
    Pattern((5, 3, 4, 1, 2)),
    Pattern((4, 5, 3, 1, 2)),
    Pattern((4, 5, 2, 3, 1)),
)


def pattern_of(values) -> tuple[int, ...]:
    """The relative order of a sequence of distinct values.

    >>> pattern_of((3, 5, 1, 2))
    (3, 4, 1, 2)
    """
    return tuple(sum(1 for y in values if y <= x) for x in values)


@dataclass(frozen=True)
class Occurrence:
    """One pattern occurrence: where it sits and what it looks like.

    ``positions`` are 1-indexed host positions in increasing order, ``values``
    the host values there, ``pattern`` their relative order, and ``top`` the
    largest value.  Consistency is enforced at construction, so an Occurrence
    can never claim a pattern its values do not form.
    """

    pattern: tuple[int, ...]
    positions: tuple[int, ...]
    values: tuple[int, ...]
    top: int

    def __post_init__(self):
        if list(self.positions) != sorted(set(self.positions)):
            raise ValueError(f"positions {self.positions!r} not increasing")
        if len(self.positions) != len(self.values):
            raise ValueError("positions and values disagree in length")
        if pattern_of(self.values) != tuple(self.pattern):
            raise ValueError(
                f"values {self.values!r} do not form pattern {self.pattern!r}"
            )
        if self.top != max(self.values):
            raise ValueError(f"top {self.top} is not max of {self.values!r}")

    @classmethod
    def at_positions(cls, w: Permutation, positions: tuple[int, ...]) -> "Occurrence":
        values = tuple(w(i) for i in positions)
        return cls(pattern_of(values), tuple(positions), values, max(values))

    @classmethod
    def of_values(cls, w: Permutation, values) -> "Occurrence":
        """The occurrence formed by the given host values, in position order."""
        positions = tuple(sorted(w.position(v) for v in values))
        return cls.at_positions(w, positions)

    def to_json(self) -> dict:
        return {
            "pattern": "".join(str(v) for v in self.pattern),
            "positions": list(self.positions),
            "values": list(self.values),
            "top": self.top,
        }


def occurrences(w: Permutation, p: Permutation) -> list[Occurrence]:
    """All occurrences of p in w, ordered lexicographically by positions."""
    host = w.values
    pat = p.values
    n, k = len(host), len(pat)
    out: list[Occurrence] = []
    if k > n:
        return out

    chosen: list[int] = []  # 0-indexed host positions

    def extend(start: int):
        t = len(chosen)
        if t == k:
            out.append(Occurrence.at_positions(w, tuple(i + 1 for i in chosen)))
            return
        for i in range(start, n - (k - t) + 1):
            vi = host[i]
            if all((host[j] < vi) == (pat[s] < pat[t]) for s, j in enumerate(chosen)):
                chosen.append(i)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return out


def contains(w: Permutation, p: Permutation) -> bool:
    """Whether w contains p; stops at the first witness."""
    host = w.values
    pat = p.values
    n, k = len(host), len(pat)
    if k > n:
        return False

    chosen: list[int] = []

    def extend(start: int) -> bool:
        t = len(chosen)
        if t == k:
            return True
        for i in range(start, n - (k - t) + 1):
            vi = host[i]
            if all((host[j] < vi) == (pat[s] < pat[t]) for s, j in enumerate(chosen)):
                chosen.append(i)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0)


def count_by_top(w: Permutation, p: Permutation) -> dict[int, int]:
    """Occurrence counts keyed by top value; tops with zero count are absent."""
    counts: dict[int, int] = {}
    for occ in occurrences(w, p):
        counts[occ.top] = counts.get(occ.top, 0) + 1
    return counts


def patt_321_3412(w: Permutation) -> tuple[int, dict[int, int]]:
    """Total and per-top combined counts of 321- and 3412-occurrences.

    >>> patt_321_3412(Permutation.parse("35412"))
    (4, {4: 1, 5: 3})
    """
    per_top: dict[int, int] = {}
    for p in (P_321, P_3412):
        for top, c in count_by_top(w, p).items():
            per_top[top] = per_top.get(top, 0) + c
    return sum(per_top.values()), dict(sorted(per_top.items()))


def avoids_phi(w: Permutation) -> bool:
    """Whether w avoids all ten blocking patterns."""
    return not any(contains(w, p) for p in PHI)


def phi_top_values(w: Permutation) -> frozenset[int]:
    """Every r such that some blocking pattern occurs in w with top r."""
    tops = set()
    for p in PHI:
        for occ in occurrences(w, p):
            tops.add(occ.top)
    return frozenset(tops)


def first_phi_occurrence(w: Permutation, top: int) -> Occurrence | None:
    """The first blocking-pattern occurrence with the given top, if any.

    Patterns are tried in ``PHI`` order and occurrences in position order,
    so the choice is deterministic.
    """
    for p in PHI:
        for occ in occurrences(w, p):
            if occ.top == top:
                return occ
    return None
