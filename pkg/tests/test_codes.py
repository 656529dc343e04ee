import pytest

from fibdyck.codes import (
    Code, NotInClassStar, NotInDomain, delta0, delta0_inv, delta1, delta1_inv, factorize,
    lambda_len, member, phi0, phi0_inv, phi1, phi1_inv, psi, psi0, psi0_inv, psi_inv,
    xi_map, xi_map_inv,
)

from conftest import c0, c1, c_code, c_star, co1_star, upto


@pytest.mark.parametrize("w,code,expected", [
    ("aA", Code.C0, True),
    ("cbBC", Code.C1, True),
    ("cC", Code.C0, False),
])
def test_membership(w, code, expected):
    assert member(w, code) is expected


@pytest.mark.parametrize("w,code,factors", [
    ("aAcC", Code.C, ("aA", "cC")),
    ("", Code.C, ()),
    ("bBbB", Code.Co1, ("bB", "bB")),
])
def test_factorize(w, code, factors):
    assert factorize(w, code).factors == factors


def test_factorize_rejects_non_members():
    with pytest.raises(NotInClassStar):
        factorize("aAc", Code.C)


@pytest.mark.parametrize("fn,w,expected", [
    (psi0, "bB", "aA"),
    (psi0, "bcCB", "acCA"),
    (psi0_inv, "aA", "bB"),
    (psi, "", ""),
    (psi, "bBbB", "aAaA"),
    (psi_inv, "aA", "bB"),
    (xi_map, "cb", "aA"),
    (xi_map, "cbBb", "aaAA"),
    (xi_map_inv, "aA", "cb"),
    (phi0, "aA", "aa"),
    (phi0, "acCA", "acCa"),
    (phi0_inv, "aa", "aA"),
    (phi1, "cbBC", "cbcb"),
    (phi1, "cbBbBC", "cbBbcb"),
    (phi1_inv, "cbcb", "cbBC"),
    (delta0, "cCaA", "cCaa"),
    (delta0, "aAcC", "aacC"),
    (delta0, "aAaA", "aAaa"),
    (delta1, "cbBC", "cbcb"),
    (delta1, "cbBCcC", "cbcbcC"),
    (delta1, "cCcbBC", "cCcbcb"),
])
def test_bijections(fn, w, expected):
    assert fn(w) == expected


@pytest.mark.parametrize("w,code,expected", [
    ("cb", Code.B1, 0),
    ("acCa", Code.B00, 2),
    ("acCcb", Code.D01, 2),
])
def test_lambda_len(w, code, expected):
    assert lambda_len(w, code) == expected


def test_domain_errors():
    with pytest.raises(NotInDomain):
        phi0("cC")
    with pytest.raises(NotInDomain):
        lambda_len("aA", Code.B1)


def _b1(n):
    return tuple("c" + f + "b" for f in co1_star(n - 2)) if n >= 2 else ()


@pytest.mark.parametrize("fwd,inv,gen", [
    (phi0, phi0_inv, c0),
    (phi1, phi1_inv, c1),
    (psi, psi_inv, co1_star),
    (xi_map, xi_map_inv, _b1),
], ids=["phi0", "phi1", "psi", "xi"])
def test_round_trip_and_length_exhaustive(fwd, inv, gen):
    words = upto(gen, 12)
    assert words
    for w in words:
        v = fwd(w)
        assert len(v) == len(w)
        assert inv(v) == w


def test_unique_factorization_exhaustive():
    for n in range(0, 15, 2):
        ws = c_star(n)
        # the grammar emits each factorization once, so duplicates would mean ambiguity
        assert len(ws) == len(set(ws))
        for w in ws:
            assert "".join(factorize(w).factors) == w


def test_code_classes_are_disjoint():
    for n in range(2, 15, 2):
        for w in c_code(n):
            hits = [member(w, Code.C0), w == "cC", member(w, Code.C1)]
            assert sum(hits) == 1, w


def _c0_or_bb_star(w):
    return all(f == "cC" or f[0] == "a" for f in factorize(w).factors)


def test_q_partition_and_delta_injective_exhaustive():
    for n in range(0, 15, 2):
        img0, img1 = set(), set()
        for w in c_star(n):
            q0, q1 = member(w, Code.Q0), member(w, Code.Q1)
            assert not (q0 and q1)
            assert q1 == (not _c0_or_bb_star(w))
            assert q0 == (_c0_or_bb_star(w) and "a" in w)
            if q0:
                v = delta0(w)
                assert len(v) == n and delta0_inv(v) == w
                img0.add(v)
            if q1:
                v = delta1(w)
                assert len(v) == n and delta1_inv(v) == w
                img1.add(v)
        assert len(img0) == sum(member(w, Code.Q0) for w in c_star(n))
        assert len(img1) == sum(member(w, Code.Q1) for w in c_star(n))
