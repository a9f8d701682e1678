"""Exhaustive iteration over symmetric groups and verification campaigns.

This is the performance lane of the package.  The per-permutation ``audit``
fuses every checked claim into three subsequence sweeps plus one pass over
the reduction stages, working on plain value tuples:

- all length-3 subsequences classify 321 occurrences by top value;
- all length-4 subsequences classify 3412 occurrences by top and detect
  descending quadruples (the length-4 blocking pattern);
- all length-5 subsequences are matched against a precomputed table of the
  value arrangements that form one of the nine length-5 blocking patterns.

Because deleting letters larger than v never disturbs the relative order of
the rest, an occurrence topped by v in the host is the same value set as a
top-level occurrence in the reduction stage whose largest letter is v, so one
global enumeration feeds every per-stage check.

Nothing here is an oracle for itself: the test suite pins this module against
the naive scanners in :mod:`permstat.patterns` and the assignment machinery
in :mod:`permstat.bijection` on exhaustive small ranges.

Campaigns over a rank range of the lexicographic order are embarrassingly
parallel: each worker owns a contiguous range, partial counts merge by
addition, and failure lists concatenate in range order, so the report is
byte-identical whatever the job count.
"""

from __future__ import annotations

import itertools
import json
import os
import time
from dataclasses import dataclass
from itertools import combinations
from multiprocessing import get_context
from typing import Iterator

from .patterns import PHI, avoids_phi
from .perm_core import Permutation

DEFAULT_CAMPAIGN_CEILING = 10
CEILING_ENV_VAR = "PERMSTAT_MAX_N"

_PHI5 = tuple(p.values for p in PHI if len(p.values) == 5)
_DESC4 = (4, 3, 2, 1)

# Witness sub-selection, keyed by blocking pattern; mirrors the table in
# permstat.bijection (tested for agreement there).
_WITNESS_PICK = {
    (4, 3, 2, 1): (0, 2, 3),
    (3, 4, 5, 1, 2): (0, 2, 3, 4),
    (4, 5, 1, 2, 3): (0, 1, 2, 4),
    (3, 5, 4, 1, 2): (0, 1, 3, 4),
    (4, 3, 5, 1, 2): (1, 2, 3, 4),
    (4, 5, 1, 3, 2): (0, 1, 2, 3),
    (4, 5, 2, 1, 3): (0, 1, 2, 4),
    (5, 3, 4, 1, 2): (0, 1, 4),
    (4, 5, 3, 1, 2): (1, 2, 4),
    (4, 5, 2, 3, 1): (0, 1, 2, 3),
}


class RankRangeError(ValueError):
    """Rank range outside [0, n!]."""


# -- lexicographic ranking ---------------------------------------------------


def _factorials(n: int) -> list[int]:
    out = [1]
    for i in range(1, n + 1):
        out.append(out[-1] * i)
    return out


def rank(w: Permutation) -> int:
    """Lexicographic rank of w within its symmetric group, from 0."""
    values = w.values
    n = len(values)
    fact = _factorials(n)
    remaining = sorted(values)
    r = 0
    for i, v in enumerate(values):
        j = remaining.index(v)
        r += j * fact[n - 1 - i]
        remaining.pop(j)
    return r


def unrank(n: int, r: int) -> Permutation:
    """The permutation of lexicographic rank r in S_n (factorial base digits)."""
    if n < 1:
        raise RankRangeError(f"n must be at least 1, got {n}")
    fact = _factorials(n)
    if not 0 <= r < fact[n]:
        raise RankRangeError(f"rank {r} outside [0, {fact[n]})")
    remaining = list(range(1, n + 1))
    values = []
    for i in range(n, 0, -1):
        d, r = divmod(r, fact[i - 1])
        values.append(remaining.pop(d))
    return Permutation(tuple(values))


def _check_range(n: int, from_rank: int, to_rank: int) -> None:
    total = _factorials(n)[n]
    if not 0 <= from_rank <= to_rank <= total:
        raise RankRangeError(
            f"range [{from_rank}, {to_rank}) invalid for n={n} (n! = {total})"
        )


def _iter_value_tuples(n: int, from_rank: int, to_rank: int):
    # itertools.permutations of a sorted input is lexicographic
    return itertools.islice(
        itertools.permutations(range(1, n + 1)), from_rank, to_rank
    )


def iter_sn(n: int, from_rank: int = 0, to_rank: int | None = None) -> Iterator[Permutation]:
    """Permutations of lexicographic ranks [from_rank, to_rank), in order."""
    if n < 1:
        raise RankRangeError(f"n must be at least 1, got {n}")
    if to_rank is None:
        to_rank = _factorials(n)[n]
    _check_range(n, from_rank, to_rank)
    for values in _iter_value_tuples(n, from_rank, to_rank):
        yield Permutation(values)


# -- the fused audit ---------------------------------------------------------

_phi5_cache: dict[int, dict] = {}


def _phi5_map(n: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Value arrangements of 1..n forming a length-5 blocking pattern.

    Maps each arranged 5-tuple to the pattern it forms; a membership test on
    5-subsequences then costs one dict lookup.
    """
    table = _phi5_cache.get(n)
    if table is None:
        table = {}
        for vals in combinations(range(1, n + 1), 5):
            for p in _PHI5:
                table[tuple(vals[i - 1] for i in p)] = p
        _phi5_cache[n] = table
    return table


@dataclass(frozen=True)
class LevelFacts:
    """Per-stage summary recorded when an audit collects levels."""

    top: int
    repeat: tuple[int, ...]
    image: frozenset[tuple[int, ...]]
    occurrence_count: int
    has_phi_top: bool


@dataclass(frozen=True)
class AuditRecord:
    """Everything the fused sweep establishes about one permutation."""

    w: tuple[int, ...]
    rep: int
    patt: int
    count_321: int
    count_3412: int
    per_top: tuple[tuple[int, int], ...]
    phi_tops: frozenset[int]
    avoids_phi: bool
    failures: tuple[dict, ...]
    levels: tuple[LevelFacts, ...] | None

    @property
    def ok(self) -> bool:
        return not self.failures


def _audit_values(w, n, phi5get, deep=True, collect=False):
    """Fused checks on one value tuple.

    Returns (rep, patt, avoids, failures, extras); ``extras`` is None unless
    ``collect``, in which case it carries the per-top data and level facts.
    """
    failures = []

    inv = 0
    for i in range(n - 1):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j]:
                inv += 1
    big = 0
    nsupp = 0
    for k in range(1, n):
        v = w[k - 1]
        if v > big:
            big = v
        if big > k:
            nsupp += 1
    rep = inv - nsupp

    # 321 occurrences by top value
    t321: dict[int, list] = {}
    for t in combinations(w, 3):
        a, b, c = t
        if a > b > c:
            if a in t321:
                t321[a].append(t)
            else:
                t321[a] = [t]

    # 3412 occurrences by top; descending quadruples mark blocking tops
    t3412: dict[int, list] = {}
    phi_tops = set()
    phi_first = {}
    for t in combinations(w, 4):
        a, b, c, d = t
        if c < d:
            if d < a < b:
                if b in t3412:
                    t3412[b].append(t)
                else:
                    t3412[b] = [t]
        elif a > b > c > d:
            phi_tops.add(a)
            if a not in phi_first:
                phi_first[a] = (t, _DESC4)

    if n >= 5:
        for t in combinations(w, 5):
            p = phi5get(t)
            if p is not None:
                m = t[0] if t[0] > t[1] else t[1]
                if t[2] > m:
                    m = t[2]  # blocking patterns put the top in slot 1..3
                phi_tops.add(m)
                if m not in phi_first:
                    phi_first[m] = (t, p)

    c321 = sum(len(v) for v in t321.values())
    c3412 = sum(len(v) for v in t3412.values())
    patt = c321 + c3412
    avoids = not phi_tops

    if rep > patt:
        failures.append({"check": "rep<=patt", "detail": f"rep={rep} patt={patt}"})
    if (rep == patt) != avoids:
        failures.append(
            {
                "check": "equality-iff-avoidance",
                "detail": f"rep={rep} patt={patt} avoids={avoids}",
            }
        )
    if (rep == 0) != (patt == 0) or (rep == 1) != (patt == 1):
        failures.append({"check": "zero-one", "detail": f"rep={rep} patt={patt}"})
    if patt - rep < len(phi_tops):
        failures.append(
            {
                "check": "bound",
                "detail": f"patt-rep={patt - rep} < |tops|={len(phi_tops)}",
            }
        )

    levels = [] if collect else None
    if deep:
        u = list(w)
        rep_u = rep
        for m in range(n, 1, -1):
            q0 = u.index(m)
            ub = u[:q0] + u[q0 + 1:]
            lm = len(ub)
            q = q0 + 1

            prefmax = [0] * lm
            sufmin = [0] * lm
            big = 0
            for k in range(1, lm):
                v = ub[k - 1]
                if v > big:
                    big = v
                prefmax[k] = big
            small = m
            for k in range(lm - 1, 0, -1):
                if ub[k] < small:
                    small = ub[k]
                sufmin[k] = small

            repeat = []
            nsupp_ub = 0
            for k in range(1, lm):
                if prefmax[k] > k:
                    nsupp_ub += 1
                    if k >= q:
                        repeat.append(k)

            inv_ub = 0
            for i in range(lm - 1):
                vi = ub[i]
                for j in range(i + 1, lm):
                    if vi > ub[j]:
                        inv_ub += 1
            rep_ub = inv_ub - nsupp_ub
            if rep_u != rep_ub + len(repeat):
                failures.append(
                    {
                        "check": "new-repeats",
                        "detail": f"top={m} rep={rep_u} rep_reduced={rep_ub} "
                        f"repeat={repeat}",
                    }
                )

            occs = set(t321.get(m, ())) | set(t3412.get(m, ()))
            has_phi = m in phi_tops

            image = set()
            if repeat:
                pos = {v: i for i, v in enumerate(u)}
                parts: dict[tuple[int, int], list[int]] = {}
                for k in repeat:
                    key = (prefmax[k], sufmin[k])
                    if key in parts:
                        parts[key].append(k)
                    else:
                        parts[key] = [k]
                for ks in parts.values():
                    kmin = ks[0]
                    for k in ks:
                        mk_big = prefmax[k]
                        mk_small = sufmin[k]
                        wbk = ub[k - 1]
                        if k == kmin:
                            if q0 < pos[mk_big]:
                                vals = (m, mk_big, mk_small)
                            elif wbk > mk_small:
                                vals = (m, wbk, mk_small)
                            else:
                                vals = (mk_big, m, wbk, mk_small)
                        else:
                            vals = (m, mk_big, wbk)
                        image.add(tuple(sorted(vals, key=pos.__getitem__)))
                if len(image) != len(repeat):
                    failures.append(
                        {
                            "check": "xi-injective",
                            "detail": f"top={m} repeat={repeat} image={sorted(image)}",
                        }
                    )

            if not has_phi:
                if image != occs:
                    failures.append(
                        {
                            "check": "xi-bijective",
                            "detail": f"top={m} image={sorted(image)} "
                            f"occurrences={sorted(occs)}",
                        }
                    )
            else:
                if len(repeat) >= len(occs):
                    failures.append(
                        {
                            "check": "strict-level",
                            "detail": f"top={m} |repeat|={len(repeat)} "
                            f"|occurrences|={len(occs)}",
                        }
                    )
                occ_t, p = phi_first[m]
                wit = tuple(occ_t[i] for i in _WITNESS_PICK[p])
                if wit in image:
                    failures.append(
                        {
                            "check": "witness-in-image",
                            "detail": f"top={m} witness={wit}",
                        }
                    )

            if collect:
                levels.append(
                    LevelFacts(m, tuple(repeat), frozenset(image), len(occs), has_phi)
                )
            u = ub
            rep_u = rep_ub
        if rep_u != 0:
            failures.append(
                {"check": "rep-chain-end", "detail": f"residual rep {rep_u}"}
            )

    extras = None
    if collect:
        per_top: dict[int, int] = {}
        for top, lst in t321.items():
            per_top[top] = per_top.get(top, 0) + len(lst)
        for top, lst in t3412.items():
            per_top[top] = per_top.get(top, 0) + len(lst)
        extras = (c321, c3412, per_top, frozenset(phi_tops), levels)
    return rep, patt, avoids, failures, extras


def audit(w: Permutation, deep: bool = True) -> AuditRecord:
    """Run the fused sweep on one permutation and return the full record."""
    n = len(w)
    phi5get = _phi5_map(n).get if n >= 5 else (lambda t: None)
    rep, patt, avoids, failures, extras = _audit_values(
        w.values, n, phi5get, deep=deep, collect=True
    )
    for f in failures:
        f["w"] = str(w)
    c321, c3412, per_top, phi_tops, levels = extras
    return AuditRecord(
        w=w.values,
        rep=rep,
        patt=patt,
        count_321=c321,
        count_3412=c3412,
        per_top=tuple(sorted(per_top.items())),
        phi_tops=phi_tops,
        avoids_phi=avoids,
        failures=tuple(failures),
        levels=tuple(levels) if levels is not None else None,
    )


def _avoids_phi_values(w, n, phi5get) -> bool:
    for t in combinations(w, 4):
        a, b, c, d = t
        if a > b > c > d:
            return False
    if n >= 5:
        for t in combinations(w, 5):
            if phi5get(t) is not None:
                return False
    return True


# -- campaigns ---------------------------------------------------------------


def campaign_ceiling() -> int:
    """Largest allowed campaign n; override with the PERMSTAT_MAX_N variable."""
    raw = os.environ.get(CEILING_ENV_VAR)
    if raw is None:
        return DEFAULT_CAMPAIGN_CEILING
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{CEILING_ENV_VAR} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class CampaignReport:
    """Aggregate of a verification sweep over a rank range of S_n."""

    n: int
    from_rank: int
    to_rank: int
    checked: int
    failures: tuple[dict, ...]
    avoider_count: int
    equal_count: int
    strict_count: int
    wall_time: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, include_wall: bool = True) -> dict:
        doc = {
            "n": self.n,
            "from_rank": self.from_rank,
            "to_rank": self.to_rank,
            "checked": self.checked,
            "failures": list(self.failures),
            "avoider_count": self.avoider_count,
            "equal_count": self.equal_count,
            "strict_count": self.strict_count,
        }
        if include_wall:
            doc["wall_time"] = self.wall_time
        return doc

    def json_text(self, include_wall: bool = False) -> str:
        return json.dumps(self.to_json(include_wall=include_wall), sort_keys=True)


def _sweep_range(args):
    """Worker: audit every rank in [lo, hi); returns mergeable partial counts."""
    n, lo, hi, limit = args
    phi5get = _phi5_map(n).get if n >= 5 else (lambda t: None)
    checked = equal = strict = avoid = 0
    failures: list[dict] = []
    for values in _iter_value_tuples(n, lo, hi):
        rep, patt, avoids, fails, _ = _audit_values(values, n, phi5get)
        checked += 1
        if rep == patt:
            equal += 1
        else:
            strict += 1
        if avoids:
            avoid += 1
        if fails and len(failures) < limit:
            w_text = " ".join(map(str, values))
            for f in fails:
                f["w"] = w_text
            failures.extend(fails[: limit - len(failures)])
    return checked, equal, strict, avoid, failures


def run_campaign(
    n: int,
    jobs: int = 1,
    from_rank: int = 0,
    to_rank: int | None = None,
    failure_limit: int = 100,
) -> CampaignReport:
    """Audit every permutation in the range and aggregate the outcome.

    The result is independent of ``jobs``: workers own disjoint contiguous
    rank ranges and the merge is associative, so a parallel report equals the
    single-process one except for ``wall_time``.
    """
    ceiling = campaign_ceiling()
    if not 1 <= n <= ceiling:
        raise ValueError(
            f"campaign n={n} outside 1..{ceiling} "
            f"(raise the ceiling with {CEILING_ENV_VAR})"
        )
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    total = _factorials(n)[n]
    if to_rank is None:
        to_rank = total
    _check_range(n, from_rank, to_rank)

    started = time.perf_counter()
    span = to_rank - from_rank
    if jobs == 1 or span < 2:
        parts = [_sweep_range((n, from_rank, to_rank, failure_limit))]
    else:
        bounds = [
            from_rank + (span * i) // jobs for i in range(jobs + 1)
        ]
        tasks = [
            (n, bounds[i], bounds[i + 1], failure_limit)
            for i in range(jobs)
            if bounds[i] < bounds[i + 1]
        ]
        with get_context("fork").Pool(processes=jobs) as pool:
            parts = pool.map(_sweep_range, tasks)

    checked = equal = strict = avoid = 0
    failures: list[dict] = []
    for p_checked, p_equal, p_strict, p_avoid, p_failures in parts:
        checked += p_checked
        equal += p_equal
        strict += p_strict
        avoid += p_avoid
        failures.extend(p_failures)
    failures = failures[:failure_limit]

    return CampaignReport(
        n=n,
        from_rank=from_rank,
        to_rank=to_rank,
        checked=checked,
        failures=tuple(failures),
        avoider_count=avoid,
        equal_count=equal,
        strict_count=strict,
        wall_time=time.perf_counter() - started,
    )


def count_avoiders(n: int) -> int:
    """How many permutations in S_n avoid all ten blocking patterns.

    Short-circuiting subset scan; the descending-quadruple test runs first
    because it is the cheapest and most frequent rejection.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    phi5get = _phi5_map(n).get if n >= 5 else (lambda t: None)
    return sum(
        1
        for values in _iter_value_tuples(n, 0, _factorials(n)[n])
        if _avoids_phi_values(values, n, phi5get)
    )


def count_avoiders_naive(n: int) -> int:
    """Independent avoider census through the naive pattern scanner."""
    return sum(1 for w in iter_sn(n) if avoids_phi(w))


def find_counterexample(n: int) -> Permutation | None:
    """First permutation of S_n, in rank order, failing any audited claim."""
    phi5get = _phi5_map(n).get if n >= 5 else (lambda t: None)
    for values in _iter_value_tuples(n, 0, _factorials(n)[n]):
        _, _, _, fails, _ = _audit_values(values, n, phi5get)
        if fails:
            return Permutation(values)
    return None


def write_census_csv(reports, stream) -> None:
    """One CSV row per campaign: n, n!, avoiders, equal, strict."""
    stream.write("n,total,avoiders,equal,strict\n")
    for r in reports:
        stream.write(
            f"{r.n},{r.checked},{r.avoider_count},{r.equal_count},{r.strict_count}\n"
        )
