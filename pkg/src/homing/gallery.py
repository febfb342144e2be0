"""Concrete machines for the witness languages, each paired with a direct
membership predicate that serves as its oracle.

Reference predicates are module-level functions (or partials of them) so
entries can be shipped to worker processes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Callable, Sequence

from .codec import gsb_matrices, gsb_symbols
from .linalg import Matrix, Vector, identity, mat_inverse
from .machine import HVA, Guard, Transition, validate

Predicate = Callable[[Sequence[str]], bool]

ANY, EQ, NEQ = Guard.ANY, Guard.EQ, Guard.NEQ

M_PLUS = Matrix([[1, 0], [1, 1]])
M_MINUS = Matrix([[1, 0], [-1, 1]])

U1 = Matrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]])
U2 = Matrix([[1, 0, 0], [0, 0, 0], [-1, 1, 1]])

M_T0 = Matrix([
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 0, 0, 1],
])
M_T1 = Matrix([
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [1, 0, 1, 1, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 0, 0, 1],
])
M_HASH = Matrix([
    [1, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 1, 1, 1],
])
M_A0 = M_T0
M_A1 = Matrix([
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 1, 1, 1, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 0, 0, 1],
])

M_A = Matrix([[1, 0], [1, 1]])
M_B = Matrix([[Fraction(1, 2), 0], [0, 1]])


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    machine: HVA
    reference: Predicate
    alphabet: tuple[str, ...]
    notes: str = ""


def _t(source, symbol, target, matrix, guard=ANY):
    return Transition(source, symbol, guard, target, matrix)


def _entry(name, machine, reference, notes):
    problems = validate(machine)
    if problems:  # pragma: no cover - construction bug
        raise AssertionError(f"gallery machine {name} is invalid: {problems}")
    return GalleryEntry(name, machine, reference, machine.alphabet, notes)


# -- reference predicates ----------------------------------------------------


def _runs(word: Sequence[str]) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for sym in word:
        if out and out[-1][0] == sym:
            out[-1] = (sym, out[-1][1] + 1)
        else:
            out.append((sym, 1))
    return out


def thm1_member(word: Sequence[str]) -> bool:
    """a^n b^p a^q with n = p or n = p + q, where n is the whole leading a-block."""
    m = re.fullmatch(r"(a*)(b*)(a*)", "".join(word))
    if m is None:
        return False
    n, p, q = (len(g) for g in m.groups())
    return n == p or n == p + q


def upow_member(word: Sequence[str]) -> bool:
    if any(s != "a" for s in word):
        return False
    length = len(word)
    n = 1
    while n + 2**n <= length:
        if n + 2**n == length:
            return True
        n += 1
    return False


def subset_sum_instance(word: Sequence[str]):
    """Parse ``t^r # a_1^r # ... # a_n^r #`` into ``(t, [a_1, ..., a_n])``.

    Numbers are nonempty binary strings written least significant bit first.
    Returns None when the word is not of that shape (at least one a_i).
    """
    text = "".join(word)
    if not re.fullmatch(r"(?:[01]+#){2,}", text):
        return None
    nums = [int(block[::-1], 2) for block in text.split("#")[:-1]]
    return nums[0], nums[1:]


def subsetsum_r_member(word: Sequence[str]) -> bool:
    inst = subset_sum_instance(word)
    if inst is None:
        return False
    t, items = inst
    return any(
        sum(c) == t for r in range(len(items) + 1) for c in combinations(items, r)
    )


def mpal_member(l: int, word: Sequence[str]) -> bool:
    word = tuple(word)
    allowed = set(gsb_symbols(l))
    if word.count("#") != 1:
        return False
    i = word.index("#")
    left, right = word[:i], word[i + 1:]
    return all(s in allowed for s in left) and right == left[::-1]


def pow_member(word: Sequence[str]) -> bool:
    runs = _runs(word)
    if runs and runs[0][0] == "a":
        n, runs = runs[0][1], runs[1:]
    else:
        n = 0
    return len(runs) == 1 and runs[0] == ("b", 2**n)


def pow_r_member(word: Sequence[str]) -> bool:
    runs = _runs(word)
    if not runs or runs[0][0] != "a":
        return False
    m, rest = runs[0][1], runs[1:]
    j = 0
    if rest:
        if len(rest) != 1 or rest[0][0] != "b":
            return False
        j = rest[0][1]
    return m == 2**j


# -- machines ---------------------------------------------------------------


def _thm1_machine(name, init, plus, minus, ident):
    ts = [
        _t("lead", "a", "lead", plus),
        _t("lead", "b", "bs", minus),
        _t("bs", "b", "bs", minus),
        # vector back home right after the b's means n = p
        _t("bs", "a", "home", ident, EQ),
        _t("bs", "a", "tail", minus, NEQ),
        _t("home", "a", "home", ident),
        _t("tail", "a", "tail", minus),
    ]
    return HVA(
        name=name,
        dimension=len(init),
        alphabet=("a", "b"),
        states=("lead", "bs", "home", "tail"),
        initial_state="lead",
        accept_states=frozenset({"lead", "bs", "home", "tail"}),
        initial_vector=init,
        transitions=tuple(ts),
        deterministic=True,
        blind=False,
    )


def gallery_thm1_dim2() -> GalleryEntry:
    m = _thm1_machine("thm1_dim2", Vector([1, 1]), M_PLUS, M_MINUS, identity(2))
    return _entry(
        "thm1_dim2",
        m,
        thm1_member,
        "DHVA(2) for {a^n b^p a^q : n = p or n = p + q}; the first entry counts "
        "leading a's minus later symbols, and a home check after the b's switches to identity.",
    )


def gallery_thm1_dim1() -> GalleryEntry:
    m = _thm1_machine(
        "thm1_dim1", Vector([1]), Matrix([[2]]), Matrix([[Fraction(1, 2)]]), identity(1)
    )
    return _entry(
        "thm1_dim1",
        m,
        thm1_member,
        "DHVA(1) for the same language, counting multiplicatively with 2 and 1/2.",
    )


def gallery_upow() -> GalleryEntry:
    ts = [
        _t("start", "a", "double", U1),
        _t("double", "a", "double", U1),
        # the guessed switch consumes one a without touching the vector
        _t("double", "a", "switch", identity(3)),
        _t("switch", "a", "count", U2),
        _t("count", "a", "count", U2),
    ]
    m = HVA(
        name="upow",
        dimension=3,
        alphabet=("a",),
        states=("start", "double", "switch", "count"),
        initial_state="start",
        accept_states=frozenset({"switch", "count"}),
        initial_vector=Vector([1, 1, 1]),
        transitions=tuple(ts),
        deterministic=False,
        blind=True,
    )
    return _entry(
        "upow",
        m,
        upow_member,
        "NBHVA(3) for {a^(n+2^n) : n >= 1}: n doublings with U1, one identity "
        "step at the guessed switch, then U2 counts the remaining 2^n - 1 a's down.",
    )


def upow_off_by_one() -> HVA:
    """The UPOW construction with U2 applied from the switch onwards.

    It accepts a^(n + 2^n - 1) rather than a^(n + 2^n); kept to document that.
    """
    ts = [
        _t("start", "a", "double", U1),
        _t("double", "a", "double", U1),
        _t("double", "a", "count", U2),
        _t("count", "a", "count", U2),
    ]
    return HVA(
        name="upow_off_by_one",
        dimension=3,
        alphabet=("a",),
        states=("start", "double", "count"),
        initial_state="start",
        accept_states=frozenset({"count"}),
        initial_vector=Vector([1, 1, 1]),
        transitions=tuple(ts),
        deterministic=False,
        blind=True,
    )


def gallery_subsetsum_r() -> GalleryEntry:
    ident = identity(5)
    ts = [
        _t("t0", "0", "t", M_T0),
        _t("t0", "1", "t", M_T1),
        _t("t", "0", "t", M_T0),
        _t("t", "1", "t", M_T1),
        _t("t", "#", "block", M_HASH),
    ]
    for block in ("block", "done"):
        ts += [
            _t(block, "0", "take", M_A0),
            _t(block, "1", "take", M_A1),
            _t(block, "0", "skip", ident),
            _t(block, "1", "skip", ident),
        ]
    ts += [
        _t("take", "0", "take", M_A0),
        _t("take", "1", "take", M_A1),
        _t("take", "#", "done", M_HASH),
        _t("skip", "0", "skip", ident),
        _t("skip", "1", "skip", ident),
        _t("skip", "#", "done", M_HASH),
    ]
    m = HVA(
        name="subsetsum_r",
        dimension=5,
        alphabet=("0", "1", "#"),
        states=("t0", "t", "block", "take", "skip", "done"),
        initial_state="t0",
        accept_states=frozenset({"done"}),
        initial_vector=Vector([0, 0, 1, 1, 1]),
        transitions=tuple(ts),
        deterministic=False,
        blind=True,
    )
    return _entry(
        "subsetsum_r",
        m,
        subsetsum_r_member,
        "NBHVA(5) for SUBSETSUM_r: t is read LSB-first into entry 1, each a_i is "
        "either read into entry 2 (and subtracted at the next #) or skipped with the identity.",
    )


def gallery_mpal(l: int) -> GalleryEntry:
    if l < 2:
        raise ValueError(f"MPAL needs at least two letters, got l={l}")
    family = gsb_matrices(l)
    syms = gsb_symbols(l)
    ts = [_t("enc", s, "enc", a) for s, a in zip(syms, family.matrices)]
    ts.append(_t("enc", "#", "dec", identity(l)))
    ts += [_t("dec", s, "dec", mat_inverse(a)) for s, a in zip(syms, family.matrices)]
    m = HVA(
        name=f"mpal_{l}",
        dimension=l,
        alphabet=syms + ("#",),
        states=("enc", "dec"),
        initial_state="enc",
        accept_states=frozenset({"dec"}),
        initial_vector=Vector.ones(l),
        transitions=tuple(ts),
        deterministic=True,
        blind=True,
    )
    return _entry(
        f"mpal_{l}",
        m,
        partial(mpal_member, l),
        f"DBHVA({l}) for {{w#w^r}} over a_1..a_{l}: generalized Stern-Brocot "
        "encoding before the #, inverse matrices after it.",
    )


def gallery_pow() -> GalleryEntry:
    ts = [
        _t("as", "a", "as", U1),
        _t("as", "b", "first_b", identity(3)),
        _t("first_b", "b", "bs", U2),
        _t("bs", "b", "bs", U2),
    ]
    m = HVA(
        name="pow",
        dimension=3,
        alphabet=("a", "b"),
        states=("as", "first_b", "bs"),
        initial_state="as",
        accept_states=frozenset({"first_b", "bs"}),
        initial_vector=Vector([1, 1, 1]),
        transitions=tuple(ts),
        deterministic=True,
        blind=True,
    )
    return _entry(
        "pow",
        m,
        pow_member,
        "DBHVA(3) for {a^n b^(2^n) : n >= 0}: U1 per a, identity on the first b, U2 per later b.",
    )


def gallery_pow_r() -> GalleryEntry:
    ts = [
        _t("start", "a", "as", identity(2)),
        _t("as", "a", "as", M_A),
        _t("as", "b", "bs", M_B),
        _t("bs", "b", "bs", M_B),
    ]
    m = HVA(
        name="pow_r",
        dimension=2,
        alphabet=("a", "b"),
        states=("start", "as", "bs"),
        initial_state="start",
        accept_states=frozenset({"as", "bs"}),
        initial_vector=Vector([1, 1]),
        transitions=tuple(ts),
        deterministic=True,
        blind=True,
    )
    return _entry(
        "pow_r",
        m,
        pow_r_member,
        "DBHVA(2) for {a^(2^n) b^n : n >= 0} with initial vector [1 1]: identity on "
        "the first a, M_a on later a's, M_b = diag(1/2, 1) per b.",
    )


def gallery_all() -> list[GalleryEntry]:
    return [
        gallery_thm1_dim2(),
        gallery_thm1_dim1(),
        gallery_upow(),
        gallery_subsetsum_r(),
        gallery_mpal(2),
        gallery_mpal(3),
        gallery_pow(),
        gallery_pow_r(),
    ]


_BUILDERS = {
    "thm1_dim2": gallery_thm1_dim2,
    "thm1_dim1": gallery_thm1_dim1,
    "upow": gallery_upow,
    "subsetsum_r": gallery_subsetsum_r,
    "pow": gallery_pow,
    "pow_r": gallery_pow_r,
}


def gallery_names() -> list[str]:
    return [e.name for e in gallery_all()]


def gallery_get(name: str) -> GalleryEntry:
    """Look up an entry by name; ``mpal_L`` works for any L >= 2."""
    if name in _BUILDERS:
        return _BUILDERS[name]()
    m = re.fullmatch(r"mpal_(\d+)", name)
    if m and int(m.group(1)) >= 2:
        return gallery_mpal(int(m.group(1)))
    raise KeyError(name)
