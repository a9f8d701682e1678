"""The per-level pattern assignment and the verification checkers.

For w with largest letter N, deleting N leaves the reduction wb, and the
*repeat set* collects the support indices k of wb at or beyond N's position:
these are exactly the letters that the descending run placing N repeats, so

    rep(w) = rep(wb) + |repeat set|.

Each repeat index k is assigned a top-N occurrence ``p_k`` of 321 or 3412,
chosen by a three-way case split on where N sits relative to the prefix
maximum M_k of wb and on the size of wb(k) against the suffix minimum m_k.
Profiles are always those of wb, never of w; using w here is the classic
mistake, so the rule is centralized in :func:`_case_values`.

Repeat indices sharing the pair (M_k, m_k) form one *part*.  Within a part
whose assignments collide (all its p_k coincide), each non-minimal k gets the
replacement ``p_k_plus`` = {N, M_k, wb(k)} instead, and ``p_k_minus`` =
{N, wb(k), m_k} certifies the count stays strictly ahead.  The map ``xi``
sends the minimal k of each part to p_k and every other k to p_k_plus,
unconditionally.  Its image is injective; it is exactly the set of top-N
occurrences of 321 and 3412 precisely when no blocking pattern occurs with
top N.  When a blocking pattern does occur at the top, a witness occurrence
outside the xi image is read off a fixed sub-selection table.

Note a deliberate subtlety: for a multi-element part whose assignments do
*not* collide (possible only when a blocking pattern occurs at the top), the
p_k_plus values need not form a 321 occurrence at all.  ``xi`` still uses
them, keeping the map injective and the witness outside its image; every
checked claim survives because bijectivity is only ever asserted in the
collision-free situation.  See ``plus_minus`` for the constructive guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

from .patterns import (
    P_321,
    P_3412,
    Occurrence,
    avoids_phi,
    first_phi_occurrence,
    occurrences,
    patt_321_3412,
    phi_top_values,
)
from .perm_core import CannotReduceError, Permutation


class UndefinedAssignmentError(ValueError):
    """Pattern assignment requested outside the repeat set."""


class NotApplicableError(ValueError):
    """Operation preconditions not met (minimal part element, or non-avoider)."""


class InvalidWitnessRequestError(ValueError):
    """Witness selection needs a blocking-pattern occurrence topped by n."""


#: For each blocking pattern, the 0-indexed letters of an occurrence that form
#: the witness sub-occurrence.  Rows are chosen so the witness always lands
#: outside the xi image; for 4321 the sub-pattern 432 would risk colliding
#: with a replacement entry, hence 421.
_WITNESS_PICK = {
    (4, 3, 2, 1): (0, 2, 3),          # 421
    (3, 4, 5, 1, 2): (0, 2, 3, 4),    # 3512
    (4, 5, 1, 2, 3): (0, 1, 2, 4),    # 4513
    (3, 5, 4, 1, 2): (0, 1, 3, 4),    # 3512
    (4, 3, 5, 1, 2): (1, 2, 3, 4),    # 3512
    (4, 5, 1, 3, 2): (0, 1, 2, 3),    # 4513
    (4, 5, 2, 1, 3): (0, 1, 2, 4),    # 4523
    (5, 3, 4, 1, 2): (0, 1, 4),       # 532
    (4, 5, 3, 1, 2): (1, 2, 4),       # 532
    (4, 5, 2, 3, 1): (0, 1, 2, 3),    # 4523
}


@dataclass(frozen=True)
class RepeatSet:
    """The repeat indices of a permutation: support of the reduction, at or
    beyond the position of the largest letter."""

    host: Permutation
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, k: int) -> bool:
        return k in self.indices

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class AssignedPattern:
    """The occurrence assigned to one repeat index, with its case tag."""

    k: int
    case: str  # "I", "II", or "III"
    occurrence: Occurrence


@dataclass(frozen=True)
class XiEntry:
    """One row of the xi map: branch "+" marks a replacement entry."""

    k: int
    branch: str  # "I", "II", "III", or "+"
    occurrence: Occurrence

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "case": self.branch,
            "values": list(self.occurrence.values),
        }


@dataclass(frozen=True)
class Assignment:
    """The full per-level assignment data for one permutation."""

    host: Permutation
    repeat: RepeatSet
    parts: tuple[tuple[int, ...], ...]
    entries: tuple[XiEntry, ...]
    plus_minus_pairs: tuple[tuple[int, Occurrence, Occurrence], ...]

    @property
    def xi_map(self) -> dict[int, Occurrence]:
        return {e.k: e.occurrence for e in self.entries}

    def image(self) -> frozenset[tuple[int, ...]]:
        return frozenset(e.occurrence.values for e in self.entries)

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.entries)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]


def repeat_set(w: Permutation) -> RepeatSet:
    """Repeat indices of w; empty when the largest letter is new everywhere.

    >>> repeat_set(Permutation.parse("35412")).indices
    (2, 3)
    """
    n = len(w)
    if n < 2:
        raise CannotReduceError("repeat set needs at least two letters")
    wb = w.reduce()
    q = w.position(n)
    return RepeatSet(w, tuple(k for k in sorted(wb.support()) if k >= q))


def _case_values(w: Permutation, wb: Permutation, k: int) -> tuple[str, tuple[int, ...]]:
    """Case tag and value set for p_k.  Profiles are wb's, positions are w's."""
    n = len(w)
    profile = wb.prefix_profile()
    big_k = profile.max_at(k)
    small_k = profile.min_at(k)
    wb_k = wb(k)
    if w.position(n) < w.position(big_k):
        return "I", (n, big_k, small_k)
    if wb_k > small_k:
        return "II", (n, wb_k, small_k)
    # wb(k) == small_k is impossible: wb(k) is not in the suffix past k
    assert wb_k < small_k
    return "III", (big_k, n, wb_k, small_k)


def assign_pattern(w: Permutation, k: int) -> AssignedPattern:
    """The occurrence p_k for a repeat index k.

    Cases I and II yield a 321 occurrence topped by the largest letter,
    case III a 3412 occurrence; that the values genuinely form the claimed
    pattern is rechecked at construction rather than assumed.
    """
    rs = repeat_set(w)
    if k not in rs:
        raise UndefinedAssignmentError(
            f"k={k} is not in the repeat set {rs.indices} of {w}"
        )
    case, vals = _case_values(w, w.reduce(), k)
    occ = Occurrence.of_values(w, vals)
    expected = P_321.values if case in ("I", "II") else P_3412.values
    if occ.pattern != expected:
        raise AssertionError(
            f"case {case} values {vals} form {occ.pattern}, not {expected}"
        )
    return AssignedPattern(k, case, occ)


def _parts(w: Permutation, rs: RepeatSet) -> tuple[tuple[int, ...], ...]:
    if not rs.indices:
        return ()
    profile = w.reduce().prefix_profile()
    groups: dict[tuple[int, int], list[int]] = {}
    for k in rs.indices:
        groups.setdefault((profile.max_at(k), profile.min_at(k)), []).append(k)
    return tuple(sorted(tuple(g) for g in groups.values()))


def plus_minus(w: Permutation, k: int) -> tuple[Occurrence, Occurrence]:
    """The replacement pair (p_k_plus, p_k_minus) for a non-minimal part element.

    p_k_plus has values {N, M_k, wb(k)} and p_k_minus {N, wb(k), m_k}.  When
    the part's assignments collide (they all equal {N, M_k, m_k}), both are
    genuine top-N 321 occurrences distinct from every p_j; the returned
    occurrences carry whatever pattern the values actually form, so a
    non-colliding part is observable rather than mislabeled.
    """
    rs = repeat_set(w)
    if k not in rs:
        raise UndefinedAssignmentError(
            f"k={k} is not in the repeat set {rs.indices} of {w}"
        )
    part = next(p for p in _parts(w, rs) if k in p)
    if k == part[0]:
        raise NotApplicableError(
            f"k={k} is minimal in its part {part}; no replacement pair exists"
        )
    n = len(w)
    wb = w.reduce()
    profile = wb.prefix_profile()
    plus = Occurrence.of_values(w, (n, profile.max_at(k), wb(k)))
    minus = Occurrence.of_values(w, (n, wb(k), profile.min_at(k)))
    return plus, minus


def xi(w: Permutation) -> Assignment:
    """The injection from repeat indices to top-level occurrences.

    Minimal part elements map to their p_k; every other element maps to its
    replacement p_k_plus.
    """
    rs = repeat_set(w)
    parts = _parts(w, rs)
    entries = []
    pairs = []
    if rs.indices:
        wb = w.reduce()
        for part in parts:
            for k in part:
                if k == part[0]:
                    case, vals = _case_values(w, wb, k)
                    entries.append(XiEntry(k, case, Occurrence.of_values(w, vals)))
                else:
                    plus, minus = plus_minus(w, k)
                    entries.append(XiEntry(k, "+", plus))
                    pairs.append((k, plus, minus))
    entries.sort(key=lambda e: e.k)
    return Assignment(w, rs, parts, tuple(entries), tuple(pairs))


def phi_witness(w: Permutation, occ: Occurrence) -> Occurrence:
    """The witness sub-occurrence of a blocking-pattern occurrence topped by n.

    The result is a 321 or 3412 occurrence with the same top, guaranteed to
    lie outside the xi image (though it may coincide with a p_k that xi
    replaced).
    """
    n = len(w)
    pick = _WITNESS_PICK.get(tuple(occ.pattern))
    if pick is None:
        raise InvalidWitnessRequestError(
            f"occurrence pattern {occ.pattern} is not a blocking pattern"
        )
    if occ.top != n:
        raise InvalidWitnessRequestError(
            f"witness needs top {n}, got an occurrence topped by {occ.top}"
        )
    return Occurrence.of_values(w, tuple(occ.values[i] for i in pick))


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class LevelReport:
    """Top-level audit: repeat count against top-N occurrence count."""

    w: str
    n: int
    repeat: tuple[int, ...]
    count_321_top: int
    count_3412_top: int
    has_phi_top: bool
    xi_rows: tuple[dict, ...]
    injective: bool
    bijective: bool
    verdict: str  # "equal" or "strict"
    witness: dict | None
    ok: bool

    @property
    def count_top(self) -> int:
        return self.count_321_top + self.count_3412_top

    def to_json(self) -> dict:
        return {
            "w": self.w,
            "n": self.n,
            "repeat": list(self.repeat),
            "patt_top": self.count_top,
            "has_phi_top": self.has_phi_top,
            "xi": list(self.xi_rows),
            "injective": self.injective,
            "bijective": self.bijective,
            "verdict": self.verdict,
            "witness": self.witness,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class TheoremReport:
    """Global statement: rep never exceeds the combined pattern count, with
    equality exactly for avoiders, and the 0/1 coincidences."""

    w: str
    n: int
    rep: int
    patt: int
    count_321: int
    count_3412: int
    avoids_phi: bool
    verdict: str
    ok: bool

    def to_json(self) -> dict:
        return {
            "w": self.w,
            "n": self.n,
            "rep": self.rep,
            "patt": self.patt,
            "count_321": self.count_321,
            "count_3412": self.count_3412,
            "avoids_phi": self.avoids_phi,
            "verdict": self.verdict,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class GlobalBijectionReport:
    """Stage-collected xi images against all 321/3412 occurrences."""

    w: str
    n: int
    stage_images: tuple[tuple[int, tuple[int, ...]], ...]  # (stage top, values)
    total_occurrences: int
    distinct: bool
    covers: bool
    ok: bool

    def to_json(self) -> dict:
        return {
            "w": self.w,
            "n": self.n,
            "stages": [
                {"top": top, "values": list(vals)} for top, vals in self.stage_images
            ],
            "total_occurrences": self.total_occurrences,
            "distinct": self.distinct,
            "covers": self.covers,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class BoundReport:
    """Slack bound: patt - rep is at least the number of blocking tops."""

    w: str
    n: int
    rep: int
    patt: int
    phi_tops: tuple[int, ...]
    ok: bool

    @property
    def slack(self) -> int:
        return self.patt - self.rep

    def to_json(self) -> dict:
        return {
            "w": self.w,
            "n": self.n,
            "rep": self.rep,
            "patt": self.patt,
            "phi_tops": list(self.phi_tops),
            "slack": self.slack,
            "ok": self.ok,
        }


def verify_level(w: Permutation) -> LevelReport:
    """Audit the top level of w: counts, injectivity, bijectivity or strictness.

    With no blocking occurrence topped by n, the xi image must be exactly the
    top-n occurrences of 321 and 3412.  Otherwise the repeat count must fall
    strictly short and the table witness must sit outside the xi image.
    """
    n = len(w)
    if n < 2:
        raise CannotReduceError("level verification needs at least two letters")
    top321 = [o for o in occurrences(w, P_321) if o.top == n]
    top3412 = [o for o in occurrences(w, P_3412) if o.top == n]
    occ_tuples = {o.values for o in top321} | {o.values for o in top3412}

    asg = xi(w)
    image = asg.image()
    injective = asg.is_injective()

    phi_occ = first_phi_occurrence(w, n)
    witness_json = None
    if phi_occ is None:
        bijective = image == occ_tuples
        verdict = "equal"
        ok = injective and bijective
    else:
        witness = phi_witness(w, phi_occ)
        outside = witness.values not in image
        witness_json = {
            "phi": "".join(str(v) for v in phi_occ.pattern),
            "occurrence": list(phi_occ.values),
            "witness": list(witness.values),
            "outside_image": outside,
        }
        bijective = False
        verdict = "strict"
        ok = injective and len(asg.repeat) < len(occ_tuples) and outside

    return LevelReport(
        w=str(w),
        n=n,
        repeat=asg.repeat.indices,
        count_321_top=len(top321),
        count_3412_top=len(top3412),
        has_phi_top=phi_occ is not None,
        xi_rows=tuple(asg.to_json()),
        injective=injective,
        bijective=bijective,
        verdict=verdict,
        witness=witness_json,
        ok=ok,
    )


def verify_main(w: Permutation) -> TheoremReport:
    """Check rep(w) <= patt(w), equality exactly under avoidance, and that
    rep and patt vanish together and hit 1 together."""
    rep = w.rep()
    total, _ = patt_321_3412(w)
    c321 = len(occurrences(w, P_321))
    c3412 = total - c321
    av = avoids_phi(w)
    ok = (
        rep <= total
        and (rep == total) == av
        and (rep == 0) == (total == 0)
        and (rep == 1) == (total == 1)
    )
    return TheoremReport(
        w=str(w),
        n=len(w),
        rep=rep,
        patt=total,
        count_321=c321,
        count_3412=c3412,
        avoids_phi=av,
        verdict="equal" if rep == total else "strict",
        ok=ok,
    )


def verify_global_bijection(w: Permutation) -> GlobalBijectionReport:
    """For an avoider, stage-collected xi images must biject with all
    321- and 3412-occurrences of w.

    Occurrences are identified across stages by their value sets, which
    deletion of larger letters leaves untouched; each stage image is
    re-embedded into w by value lookup.
    """
    if not avoids_phi(w):
        raise NotApplicableError(f"{w} contains a blocking pattern")
    stage_images: list[tuple[int, tuple[int, ...]]] = []
    for stage in w.iterated_reduce():
        if len(stage) < 2:
            break
        for entry in xi(stage).entries:
            occ_in_w = Occurrence.of_values(w, entry.occurrence.values)
            stage_images.append((len(stage), occ_in_w.values))
    all_occ = {o.values for o in occurrences(w, P_321)}
    all_occ |= {o.values for o in occurrences(w, P_3412)}
    values = [vals for _, vals in stage_images]
    distinct = len(values) == len(set(values))
    covers = set(values) == all_occ
    return GlobalBijectionReport(
        w=str(w),
        n=len(w),
        stage_images=tuple(stage_images),
        total_occurrences=len(all_occ),
        distinct=distinct,
        covers=covers,
        ok=distinct and covers,
    )


def verify_bound(w: Permutation) -> BoundReport:
    """Check patt(w) - rep(w) >= number of tops of blocking occurrences."""
    rep = w.rep()
    total, _ = patt_321_3412(w)
    tops = tuple(sorted(phi_top_values(w)))
    return BoundReport(
        w=str(w),
        n=len(w),
        rep=rep,
        patt=total,
        phi_tops=tops,
        ok=total - rep >= len(tops),
    )
