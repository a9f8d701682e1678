import pytest
from hypothesis import given, settings

from conftest import perm_strategy, sn
from permstat import (
    P_321,
    P_3412,
    PHI,
    CannotReduceError,
    NotApplicableError,
    Permutation,
    UndefinedAssignmentError,
    assign_pattern,
    avoids_phi,
    occurrences,
    parse,
    phi_witness,
    plus_minus,
    repeat_set,
    verify_bound,
    verify_global_bijection,
    verify_level,
    verify_main,
    xi,
)
from permstat.bijection import InvalidWitnessRequestError


def top_occurrence_values(w):
    n = len(w)
    out = {o.values for o in occurrences(w, P_321) if o.top == n}
    out |= {o.values for o in occurrences(w, P_3412) if o.top == n}
    return out


class TestRepeatSet:
    def test_examples(self):
        assert repeat_set(parse("35412")).indices == (2, 3)
        assert repeat_set(Permutation.identity(5)).indices == ()
        assert repeat_set(parse("4321")).indices == (1, 2)

    def test_single_letter_errors(self):
        with pytest.raises(CannotReduceError):
            repeat_set(parse("1"))

    def test_new_repeats_identity_exhaustive(self):
        for n in range(2, 7):
            for w in sn(n):
                assert w.rep() == w.reduce().rep() + len(repeat_set(w))

    @settings(max_examples=50)
    @given(perm_strategy(min_n=2, max_n=10))
    def test_new_repeats_identity_random(self, w):
        assert w.rep() == w.reduce().rep() + len(repeat_set(w))


class TestAssignPattern:
    def test_case_i_examples(self):
        a = assign_pattern(parse("35412"), 2)
        assert (a.case, a.occurrence.values) == ("I", (5, 4, 1))
        a = assign_pattern(parse("35412"), 3)
        assert (a.case, a.occurrence.values) == ("I", (5, 4, 2))

    def test_case_iii_example(self):
        a = assign_pattern(parse("45123"), 2)
        assert (a.case, a.occurrence.values) == ("III", (4, 5, 1, 2))
        assert a.occurrence.pattern == (3, 4, 1, 2)

    def test_case_ii_example(self):
        a = assign_pattern(parse("45321"), 3)
        assert (a.case, a.occurrence.values) == ("II", (5, 2, 1))

    def test_undefined_outside_repeat_set(self):
        with pytest.raises(UndefinedAssignmentError):
            assign_pattern(parse("35412"), 1)
        with pytest.raises(UndefinedAssignmentError):
            assign_pattern(parse("35412"), 4)

    def test_always_a_genuine_top_occurrence_exhaustive(self):
        for n in range(2, 7):
            for w in sn(n):
                for k in repeat_set(w):
                    a = assign_pattern(w, k)
                    occ = a.occurrence
                    assert occ.top == n
                    expected = (3, 2, 1) if a.case in ("I", "II") else (3, 4, 1, 2)
                    assert occ.pattern == expected
                    assert occ.values in top_occurrence_values(w)


class TestPlusMinus:
    def test_4321(self):
        plus, minus = plus_minus(parse("4321"), 2)
        assert plus.values == (4, 3, 2)
        assert minus.values == (4, 2, 1)

    def test_54321(self):
        plus, minus = plus_minus(parse("54321"), 2)
        assert plus.values == (5, 4, 3)
        assert minus.values == (5, 3, 1)

    def test_not_applicable_for_singleton_parts(self):
        with pytest.raises(NotApplicableError):
            plus_minus(parse("35412"), 3)

    def test_not_applicable_for_minimal_element(self):
        with pytest.raises(NotApplicableError):
            plus_minus(parse("4321"), 1)

    def test_outside_repeat_set(self):
        with pytest.raises(UndefinedAssignmentError):
            plus_minus(parse("4321"), 3)

    def test_colliding_parts_get_genuine_disjoint_replacements(self):
        # whenever assignments inside a part coincide, the replacement pair
        # consists of 321 occurrences distinct from every assignment
        for n in range(2, 7):
            for w in sn(n):
                asg = xi(w)
                all_pk = {
                    assign_pattern(w, k).occurrence.values for k in asg.repeat
                }
                for part in asg.parts:
                    if len(part) < 2:
                        continue
                    values = {assign_pattern(w, k).occurrence.values for k in part}
                    if len(values) > 1:
                        continue  # no collision, nothing to repair
                    for k in part[1:]:
                        plus, minus = plus_minus(w, k)
                        for occ in (plus, minus):
                            assert occ.pattern == (3, 2, 1)
                            assert occ.top == n
                            assert occ.values not in all_pk


class TestXi:
    def test_35412(self):
        asg = xi(parse("35412"))
        assert [(e.k, e.branch, e.occurrence.values) for e in asg.entries] == [
            (2, "I", (5, 4, 1)),
            (3, "I", (5, 4, 2)),
        ]
        # the 3412-occurrence 3512 is missed: two repeats, three occurrences
        assert (3, 5, 1, 2) not in asg.image()
        assert len(asg.repeat) == 2
        assert len(top_occurrence_values(parse("35412"))) == 3

    def test_identity(self):
        assert xi(Permutation.identity(5)).entries == ()

    def test_4321_uses_replacement(self):
        asg = xi(parse("4321"))
        assert [(e.k, e.branch, e.occurrence.values) for e in asg.entries] == [
            (1, "I", (4, 3, 1)),
            (2, "+", (4, 3, 2)),
        ]
        assert (4, 2, 1) not in asg.image()

    def test_parts_partition_by_profile_pair(self):
        for n in range(2, 7):
            for w in sn(n):
                asg = xi(w)
                flat = [k for part in asg.parts for k in part]
                assert sorted(flat) == list(asg.repeat.indices)
                if len(w.reduce()) >= 2:
                    profile = w.reduce().prefix_profile()
                    for part in asg.parts:
                        pairs = {
                            (profile.max_at(k), profile.min_at(k)) for k in part
                        }
                        assert len(pairs) == 1
                    part_keys = [
                        (profile.max_at(p[0]), profile.min_at(p[0]))
                        for p in asg.parts
                    ]
                    assert len(set(part_keys)) == len(part_keys)

    def test_injective_exhaustive(self):
        for n in range(2, 8):
            for w in sn(n):
                assert xi(w).is_injective()

    def test_bijective_iff_no_blocking_top_exhaustive(self):
        for n in range(2, 7):
            for w in sn(n):
                asg = xi(w)
                occs = top_occurrence_values(w)
                has_phi_top = any(
                    o.top == n for p in PHI for o in occurrences(w, p)
                )
                if has_phi_top:
                    assert len(asg.repeat) < len(occs)
                else:
                    assert asg.image() == occs

    def test_collisions_force_descending_quadruple_at_top(self):
        # distinct repeat indices sharing an assignment force a 4321 topped
        # by n; distinct case-III assignments never coincide at all
        for n in range(2, 7):
            for w in sn(n):
                rs = repeat_set(w)
                assigned = [assign_pattern(w, k) for k in rs]
                by_values = {}
                for a in assigned:
                    by_values.setdefault(a.occurrence.values, []).append(a)
                for values, group in by_values.items():
                    if len(group) > 1:
                        assert all(a.case != "III" for a in group)
                        assert any(
                            o.top == n
                            for o in occurrences(w, parse("4321"))
                        )


class TestPhiWitness:
    def test_table_rows(self):
        w = parse("4321")
        occ = occurrences(w, parse("4321"))[0]
        assert phi_witness(w, occ).values == (4, 2, 1)

        w = parse("35412")
        occ = occurrences(w, parse("35412"))[0]
        assert phi_witness(w, occ).values == (3, 5, 1, 2)

        w = parse("45231")
        occ = occurrences(w, parse("45231"))[0]
        assert phi_witness(w, occ).values == (4, 5, 2, 3)

    def test_rejects_non_blocking_occurrence(self):
        w = parse("4321")
        occ = occurrences(w, P_321)[0]
        with pytest.raises(InvalidWitnessRequestError):
            phi_witness(w, occ)

    def test_rejects_occurrence_not_topped_by_n(self):
        w = parse("54321")
        occ = next(
            o for o in occurrences(w, parse("4321")) if o.top == 4
        )
        with pytest.raises(InvalidWitnessRequestError):
            phi_witness(w, occ)

    def test_witness_may_hit_a_replaced_assignment(self):
        # for 45321 the witness of the only top blocking occurrence equals
        # p_3, but xi replaced k=3, so the witness still escapes the image
        w = parse("45321")
        occ = next(o for o in occurrences(w, parse("4321")) if o.top == 5)
        wit = phi_witness(w, occ)
        assert wit.values == (5, 2, 1)
        assert assign_pattern(w, 3).occurrence.values == (5, 2, 1)
        asg = xi(w)
        assert wit.values not in asg.image()
        assert asg.image() == {(5, 3, 1), (4, 5, 2)}

    def test_witness_outside_image_exhaustive(self):
        for n in range(2, 7):
            for w in sn(n):
                image = xi(w).image()
                for p in PHI:
                    for occ in occurrences(w, p):
                        if occ.top != n:
                            continue
                        wit = phi_witness(w, occ)
                        assert wit.pattern in ((3, 2, 1), (3, 4, 1, 2))
                        assert wit.top == n
                        assert wit.values not in image


class TestUndercounting:
    def test_top_321_occurrences_all_assigned_exhaustive(self):
        # no top occurrence of 4321, 45312, 53412 means every top 321
        # occurrence is an assignment
        blockers = [parse("4321"), parse("45312"), parse("53412")]
        for n in range(2, 7):
            for w in sn(n):
                if any(
                    o.top == n for p in blockers for o in occurrences(w, p)
                ):
                    continue
                pk = {
                    assign_pattern(w, k).occurrence.values
                    for k in repeat_set(w)
                }
                for o in occurrences(w, P_321):
                    if o.top == n:
                        assert o.values in pk

    def test_top_3412_occurrences_all_assigned_exhaustive(self):
        blockers = [
            parse(s)
            for s in ("45231", "45132", "43512", "34512", "35412", "45123", "45213")
        ]
        for n in range(2, 7):
            for w in sn(n):
                if any(
                    o.top == n for p in blockers for o in occurrences(w, p)
                ):
                    continue
                pk = {
                    assign_pattern(w, k).occurrence.values
                    for k in repeat_set(w)
                }
                for o in occurrences(w, P_3412):
                    if o.top == n:
                        assert o.values in pk


class TestVerifyLevel:
    def test_35412(self):
        report = verify_level(parse("35412"))
        assert report.repeat == (2, 3)
        assert report.count_top == 3
        assert report.has_phi_top
        assert report.verdict == "strict"
        assert report.witness["outside_image"]
        assert report.ok

    def test_3412(self):
        report = verify_level(parse("3412"))
        assert report.repeat == (2,)
        assert report.count_top == 1
        assert not report.has_phi_top
        assert report.verdict == "equal"
        assert report.bijective
        assert report.ok

    def test_identity(self):
        report = verify_level(parse("1234"))
        assert report.repeat == ()
        assert report.count_top == 0
        assert report.verdict == "equal"
        assert report.ok

    def test_single_letter_errors(self):
        with pytest.raises(CannotReduceError):
            verify_level(parse("1"))

    def test_json_schema(self):
        doc = verify_level(parse("35412")).to_json()
        assert set(doc) == {
            "w",
            "n",
            "repeat",
            "patt_top",
            "has_phi_top",
            "xi",
            "injective",
            "bijective",
            "verdict",
            "witness",
            "ok",
        }
        assert doc["xi"][0] == {"k": 2, "case": "I", "values": [5, 4, 1]}

    def test_ok_exhaustive(self):
        for n in range(2, 7):
            for w in sn(n):
                assert verify_level(w).ok, str(w)


class TestVerifyMain:
    def test_examples(self):
        r = verify_main(parse("35412"))
        assert (r.rep, r.patt, r.avoids_phi, r.verdict) == (3, 4, False, "strict")
        assert r.ok
        r = verify_main(parse("45312"))
        assert (r.rep, r.patt, r.verdict) == (4, 5, "strict")
        assert r.ok
        r = verify_main(parse("12345"))
        assert (r.rep, r.patt, r.verdict) == (0, 0, "equal")
        assert r.ok

    def test_single_letter(self):
        assert verify_main(parse("1")).ok

    def test_ok_exhaustive(self):
        for n in range(1, 7):
            for w in sn(n):
                assert verify_main(w).ok, str(w)

    @settings(max_examples=25)
    @given(perm_strategy(max_n=9))
    def test_ok_random(self, w):
        assert verify_main(w).ok


class TestVerifyGlobalBijection:
    def test_321(self):
        report = verify_global_bijection(parse("321"))
        assert report.stage_images == ((3, (3, 2, 1)),)
        assert report.ok

    def test_3412(self):
        report = verify_global_bijection(parse("3412"))
        assert report.stage_images == ((4, (3, 4, 1, 2)),)
        assert report.ok

    def test_identity(self):
        report = verify_global_bijection(Permutation.identity(4))
        assert report.stage_images == ()
        assert report.total_occurrences == 0
        assert report.ok

    def test_rejects_non_avoiders(self):
        with pytest.raises(NotApplicableError):
            verify_global_bijection(parse("4321"))

    def test_ok_for_every_avoider_exhaustive(self):
        for n in range(1, 7):
            for w in sn(n):
                if avoids_phi(w):
                    report = verify_global_bijection(w)
                    assert report.ok, str(w)
                    assert report.total_occurrences == w.rep()


class TestVerifyBound:
    def test_examples(self):
        r = verify_bound(parse("4321"))
        assert (r.patt - r.rep, r.phi_tops) == (1, (4,))
        assert r.ok
        r = verify_bound(parse("54321"))
        assert (r.rep, r.patt, r.phi_tops) == (6, 10, (4, 5))
        assert r.ok
        r = verify_bound(parse("1234"))
        assert (r.slack, r.phi_tops) == (0, ())
        assert r.ok

    def test_ok_exhaustive(self):
        for n in range(1, 7):
            for w in sn(n):
                assert verify_bound(w).ok, str(w)
