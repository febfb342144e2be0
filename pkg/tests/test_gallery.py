from itertools import product

import pytest

from homing.analysis import cross_check, equivalence
from homing.codec import gsb_encode, gsb_symbols
from homing.gallery import (
    gallery_all,
    gallery_get,
    gallery_mpal,
    gallery_names,
    gallery_pow,
    gallery_pow_r,
    gallery_subsetsum_r,
    gallery_thm1_dim1,
    gallery_thm1_dim2,
    gallery_upow,
    mpal_member,
    pow_member,
    pow_r_member,
    subset_sum_instance,
    subsetsum_r_member,
    thm1_member,
    upow_off_by_one,
    upow_member,
)
from homing.linalg import Vector
from homing.machine import parse_word, run, trace


def words(alphabet, maxlen):
    for n in range(maxlen + 1):
        yield from ("".join(w) for w in product(alphabet, repeat=n))


# -- the predicates against languages built from their generators ------------


def test_thm1_predicate_matches_generator():
    L = 10
    generated = {
        "a" * n + "b" * p + "a" * q
        for n in range(L + 1)
        for p in range(L + 1)
        for q in range(L + 1)
        if n + p + q <= L and (n == p or n == p + q)
    }
    # a^n b^0 a^q is the same word as a^(n+q); only the whole leading block counts as n
    generated = {w for w in generated if "b" in w or not w}
    assert {w for w in words("ab", L) if thm1_member(w)} == generated


def test_upow_predicate_matches_generator():
    generated = {n + 2**n for n in range(1, 8)}
    assert {n for n in range(140) if upow_member("a" * n)} == {x for x in generated if x < 140}


def test_pow_predicates_match_generators():
    L = 12
    assert {w for w in words("ab", L) if pow_member(w)} == {
        "a" * n + "b" * 2**n for n in range(5) if n + 2**n <= L
    }
    assert {w for w in words("ab", L) if pow_r_member(w)} == {
        "a" * 2**n + "b" * n for n in range(5) if n + 2**n <= L
    }


def test_mpal_predicate_matches_generator():
    syms = gsb_symbols(2)
    generated = set()
    for n in range(4):
        for w in product(syms, repeat=n):
            generated.add(w + ("#",) + w[::-1])
    alphabet = syms + ("#",)
    found = {w for n in range(8) for w in product(alphabet, repeat=n) if mpal_member(2, w)}
    assert found == generated


def test_subset_sum_parsing():
    assert subset_sum_instance("11#1#01#") == (3, [1, 2])
    assert subset_sum_instance("0#1#") == (0, [1])
    assert subset_sum_instance("11#") is None
    assert subset_sum_instance("1##1#") is None
    assert subset_sum_instance("1#1") is None


def test_subset_sum_predicate_against_dynamic_programming():
    for w in words("01#", 9):
        inst = subset_sum_instance(w)
        if inst is None:
            assert not subsetsum_r_member(w)
            continue
        t, items = inst
        reachable = {0}
        for x in items:
            reachable |= {r + x for r in reachable}
        assert subsetsum_r_member(w) == (t in reachable)


# -- examples ----------------------------------------------------------------


@pytest.mark.parametrize(
    "builder,word,expected",
    [
        (gallery_thm1_dim2, "aabb", True),
        (gallery_thm1_dim2, "aaabba", True),
        (gallery_thm1_dim2, "aabbaa", True),
        (gallery_thm1_dim2, "aabbab", False),
        (gallery_thm1_dim2, "aabbb", False),
        (gallery_thm1_dim1, "ab", True),
        (gallery_thm1_dim1, "a", False),
        (gallery_thm1_dim1, "", True),
        (gallery_upow, "aaa", True),
        (gallery_upow, "aaaaaa", True),
        (gallery_upow, "aa", False),
        (gallery_subsetsum_r, "11#1#01#", True),
        (gallery_subsetsum_r, "1#1#", True),
        (gallery_subsetsum_r, "01#1#", False),
        (gallery_pow, "abb", True),
        (gallery_pow, "b", True),
        (gallery_pow, "abbb", False),
        (gallery_pow_r, "a", True),
        (gallery_pow_r, "aab", True),
        (gallery_pow_r, "ab", False),
    ],
)
def test_examples(builder, word, expected):
    entry = builder()
    assert run(entry.machine, word).accepted is expected
    assert entry.reference(word) is expected


def test_aabba_is_in_the_language():
    # n = 2 equals the b-block length, so the first clause holds
    assert thm1_member("aabba")
    assert run(gallery_thm1_dim2().machine, "aabba").accepted


def test_thm1_dim1_final_vector():
    (final,) = trace(gallery_thm1_dim1().machine, "ab")[-1]
    assert final.vector == Vector([1])


@pytest.mark.parametrize(
    "text,expected",
    [("a_1,a_2,#,a_2,a_1", True), ("#", True), ("a_1,#,a_2", False), ("a_1,a_1", False), ("#,#", False)],
)
def test_mpal_examples(text, expected):
    entry = gallery_mpal(2)
    w = parse_word(text, csv=True)
    assert run(entry.machine, w).accepted is expected
    assert entry.reference(w) is expected


def test_mpal_vector_is_gsb_encoding_before_hash():
    for l in (2, 3):
        m = gallery_mpal(l).machine
        syms = gsb_symbols(l)
        for n in range(6):
            for w in product(syms, repeat=n):
                (final,) = trace(m, w)[-1]
                assert final.vector == gsb_encode(w, l)


def test_upow_lengths():
    m = gallery_upow().machine
    accepted = [n for n in range(71) if run(m, "a" * n).accepted]
    assert accepted == [3, 6, 11, 20, 37, 70]


def test_pow_strings():
    m = gallery_pow().machine
    for n in range(7):
        for k in range(70 - n + 1):
            assert run(m, "a" * n + "b" * k).accepted == (k == 2**n)


def test_pow_r_strings():
    m = gallery_pow_r().machine
    for j in range(7):
        for k in range(70 - j + 1):
            assert run(m, "a" * k + "b" * j).accepted == (k == 2**j)


def test_thm1_machines_agree():
    assert equivalence(gallery_thm1_dim2().machine, gallery_thm1_dim1().machine, 14).passed


def test_off_by_one_upow_disagrees_at_aa():
    result = cross_check(upow_off_by_one(), upow_member, 12)
    assert not result.passed
    assert result.disagreement.word == ("a", "a")
    assert result.disagreement.left is True


# -- registry ---------------------------------------------------------------


def test_gallery_all():
    names = gallery_names()
    assert names == ["thm1_dim2", "thm1_dim1", "upow", "subsetsum_r", "mpal_2", "mpal_3", "pow", "pow_r"]
    assert all(e.notes for e in gallery_all())


def test_gallery_get():
    assert gallery_get("mpal_2").machine == gallery_mpal(2).machine
    assert gallery_get("mpal_5").machine.dimension == 5
    for bad in ("mpal_1", "nope", "mpal_x"):
        with pytest.raises(KeyError):
            gallery_get(bad)


@pytest.mark.parametrize("name", ["thm1_dim2", "thm1_dim1", "pow", "pow_r", "upow"])
def test_small_alphabet_entries_cross_check(name):
    entry = gallery_get(name)
    assert cross_check(entry.machine, entry.reference, 10).passed
