import json
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from fibdyck.core import rotate
from fibdyck.periodic import (
    OrbitTable, Sign, build_orbit_table, canonical, classify, enumerate_points, is_exceptional,
    is_primitive, lambda_stats, mobius_orbits, nu_counts, open_indices, orbit_table,
    orbits_to_points, period_labels, read_table, reversal_pairs, smallest_period, write_table,
)


def test_fixed_points():
    assert set(enumerate_points(1)) == {"a", "A"}


def test_period_two_points():
    pts = list(enumerate_points(2))
    assert len(pts) == 12
    assert sum(classify(p).sign is Sign.NEUTRAL for p in pts) == 6


@pytest.mark.parametrize("w,expected", [("aa", 1), ("cb", 2), ("cbcb", 2)])
def test_smallest_period(w, expected):
    assert smallest_period(w) == expected


@pytest.mark.parametrize("w,sign,necklace,kappa", [
    ("a", Sign.NEGATIVE, "0", 1),
    ("cb", Sign.NEGATIVE, "1", 1),
    ("bB", Sign.NEUTRAL, "", 1),
    ("aa", Sign.NEGATIVE, "0", 2),
    ("A", Sign.POSITIVE, "0", 1),
])
def test_classify(w, sign, necklace, kappa):
    m = classify(w)
    assert (m.sign, m.necklace, m.kappa) == (sign, necklace, kappa)


@pytest.mark.parametrize("w,i0,i1", [
    ("a", {0}, set()),
    ("aA", set(), set()),
    ("cCcb", set(), {3}),
])
def test_open_indices(w, i0, i1):
    assert open_indices(w) == (frozenset(i0), frozenset(i1))


def test_lambda_stats():
    st_aa = lambda_stats("aa")
    assert st_aa.lam == 0 and st_aa.J["B00"] == {0, 1}
    st_cb = lambda_stats("cb")
    assert st_cb.lam == 0 and st_cb.J["B1"] == {1}
    assert not any(lambda_stats("a").J.values())


@pytest.mark.parametrize("n,necklace,count", [(3, "0", 2), (4, "0", 2), (5, "0", 9)])
def test_orbit_table_counts(n, necklace, count):
    assert orbit_table(n).count(Sign.NEGATIVE, necklace) == count


@pytest.mark.parametrize("points,orbits", [
    ([2, 12], [2, 5]),
    ([7], [7]),
    ([1, 3, 4, 7, 11], [1, 1, 1, 1, 2]),
])
def test_mobius_orbits(points, orbits):
    assert mobius_orbits(points) == orbits


@given(st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=24))
def test_mobius_inverts_orbit_expansion(orbits):
    assert mobius_orbits(orbits_to_points(orbits)) == orbits


@pytest.mark.parametrize("necklace,n,expected", [("0", 1, True), ("1", 2, True)]
                         + [("01", n, False) for n in range(2, 11)])
def test_is_exceptional(necklace, n, expected):
    assert is_exceptional(necklace, n) is expected


@pytest.mark.parametrize("n", range(1, 9))
def test_time_reversal_swaps_signs(n):
    neg, pos = Counter(), Counter()
    for p, r in reversal_pairs(n):
        m, mr = classify(p), classify(r)
        assert mr.sign is Sign.POSITIVE and (mr.necklace, mr.kappa) == (m.necklace, m.kappa)
        neg[m.necklace] += 1
    t = orbit_table(n)
    for nk, c in neg.items():
        assert c == n * t.count(Sign.NEGATIVE, nk) == n * t.count(Sign.POSITIVE, nk)


_points = st.integers(1, 7).flatmap(lambda n: st.sampled_from(sorted(enumerate_points(n))))


@given(_points, st.integers(0, 20))
@settings(max_examples=200)
def test_classify_is_rotation_invariant(p, k):
    if is_primitive(p):
        assert classify(rotate(p, k)) == classify(p)


@given(_points)
@settings(max_examples=200)
def test_kappa_consistency(p):
    m = classify(p)
    if m.sign is Sign.NEGATIVE and is_primitive(p):
        phase = next(i for i, r in enumerate(period_labels(p)) if not r[0])
        assert nu_counts(p, phase) == (m.kappa * m.nu0, m.kappa * m.nu1)


def test_cache_round_trip(tmp_path):
    t = build_orbit_table(6)
    path = tmp_path / "orbits-006.jsonl"
    write_table(str(path), t)
    back = read_table(str(path), 6)
    assert back == t and back.to_records() == t.to_records()


def test_cache_rejects_tampering(tmp_path):
    path = tmp_path / "t.jsonl"
    write_table(str(path), build_orbit_table(4))
    lines = path.read_text().splitlines()
    rec = json.loads(lines[1])
    rec[2] += 1
    lines[1] = json.dumps(rec)
    path.write_text("\n".join(lines) + "\n")
    assert read_table(str(path), 4) is None


def test_canonical_orbits_are_counted_once():
    t = orbit_table(5)
    reps = {canonical(p) for p in enumerate_points(5) if is_primitive(p)}
    assert len(reps) == t.orbits
    assert isinstance(t, OrbitTable)
