import pytest
from hypothesis import given, strategies as st

from fibdyck.core import (
    ALPHABET, ONE, ZERO, Element, NotAWord, format_word, generator, is_admissible,
    is_admissible_cycle, is_path, label_word, multiply, parse_word, rotate, time_reverse,
)

words = st.text(alphabet=ALPHABET, max_size=14)
signs = st.lists(st.tuples(st.sampled_from([-1, 1]), st.sampled_from([0, 1])), max_size=12)


@pytest.mark.parametrize("a,b,expected", [
    (generator(-1, 0), generator(1, 0), ONE),
    (generator(-1, 0), generator(1, 1), ZERO),
    (generator(1, 1), generator(-1, 0), Element(plus="1", minus="0")),
])
def test_multiply(a, b, expected):
    assert multiply(a, b) == expected


@pytest.mark.parametrize("w,expected", [
    ("aA", ONE),
    ("cC", ONE),
    ("acb", Element(plus="", minus="01")),
])
def test_label_word(w, expected):
    assert label_word(w) == expected


@pytest.mark.parametrize("w,cyclic,expected", [
    ("ac", False, True),
    ("ac", True, False),
    ("cb", True, True),
])
def test_is_path(w, cyclic, expected):
    assert is_path(w, cyclic) is expected


@pytest.mark.parametrize("w,expected", [("aB", False), ("bB", True), ("Aa", True)])
def test_is_admissible(w, expected):
    assert is_admissible(w) is expected


@pytest.mark.parametrize("w,expected", [("a", True), ("bB", True), ("Acb", False)])
def test_is_admissible_cycle(w, expected):
    assert is_admissible_cycle(w) is expected


@pytest.mark.parametrize("w,expected", [("a", "A"), ("", ""), ("cb", "BC")])
def test_time_reverse(w, expected):
    assert time_reverse(w) == expected


def test_parse_word_tokens_and_compact():
    assert parse_word("m0 m p p1 m1") == "acCBb"
    assert parse_word("acCBb") == "acCBb"
    assert format_word("acCBb", "tokens") == "m0 m p p1 m1"
    with pytest.raises(NotAWord):
        parse_word("m0 x")


@given(words, words)
def test_label_is_multiplicative(u, v):
    assert label_word(u + v) == multiply(label_word(u), label_word(v))


@given(st.sampled_from([generator(-1, 0), generator(1, 1), ONE, Element("01", "1")]))
def test_zero_absorbs(x):
    assert multiply(x, ZERO) is ZERO and multiply(ZERO, x) is ZERO


def _reduce_any_order(seq, pick):
    # cancel adjacent α⁻(n)α⁺(m) pairs in an order chosen by ``pick``
    seq = list(seq)
    while True:
        spots = [i for i in range(len(seq) - 1) if seq[i][0] < 0 < seq[i + 1][0]]
        if not spots:
            return Element(plus="".join(str(i) for s, i in seq if s > 0),
                           minus="".join(str(i) for s, i in seq if s < 0))
        i = spots[pick % len(spots)]
        if seq[i][1] != seq[i + 1][1]:
            return ZERO
        del seq[i:i + 2]


@given(signs, st.integers(0, 100))
def test_reduction_is_confluent(seq, pick):
    fold = ONE
    for s, i in seq:
        fold = multiply(fold, generator(s, i))
    assert _reduce_any_order(seq, pick) == fold


@given(words)
def test_time_reverse_involution(w):
    assert time_reverse(time_reverse(w)) == w
    assert is_admissible(w) == is_admissible(time_reverse(w))


@given(words)
def test_time_reverse_anti_homomorphism(w):
    lab = label_word(w)
    rev = label_word(time_reverse(w))
    assert (rev is ZERO) == (lab is ZERO)
    if lab is not ZERO:
        assert rev == lab.involution()


@given(words, st.integers(0, 14), st.integers(0, 14))
def test_factors_of_admissible_words_are_admissible(w, i, j):
    if is_admissible(w):
        assert is_admissible(w[min(i, j):max(i, j)])


@given(st.text(alphabet=ALPHABET, min_size=1, max_size=10), st.integers())
def test_rotation_preserves_cycle_admissibility(w, k):
    assert is_admissible_cycle(w) == is_admissible_cycle(rotate(w, k))
