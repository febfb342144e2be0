"""Stern-Brocot string encodings.

Binary strings map to positive integer pairs starting from ``[1, 1]``: a ``0``
adds the first entry to the second, a ``1`` adds the second to the first.
The k-ary generalisation starts from the all-ones k-vector and, for symbol
``a_j``, replaces entry j by the sum of all entries.  Both are injective and
decode greedily from the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .linalg import Matrix, Vector, mat_inverse, vec_mat_mul
from .machine import HVAError

M0 = Matrix([[1, 1], [0, 1]])
M1 = Matrix([[1, 0], [1, 1]])
N0 = Matrix([[1, -1], [0, 1]])
N1 = Matrix([[1, 0], [-1, 1]])


class InvalidEncoding(HVAError, ValueError):
    pass


@dataclass(frozen=True)
class SBMatrices:
    M0: Matrix = M0
    M1: Matrix = M1
    N0: Matrix = N0
    N1: Matrix = N1


def gsb_symbol(j: int) -> str:
    return f"a_{j}"


def gsb_symbols(k: int) -> tuple[str, ...]:
    return tuple(gsb_symbol(j) for j in range(1, k + 1))


@dataclass(frozen=True)
class GSBFamily:
    """``matrices[j-1]`` is A_j: the identity with column j set to all ones."""

    k: int
    matrices: tuple[Matrix, ...]

    @property
    def symbols(self) -> tuple[str, ...]:
        return gsb_symbols(self.k)

    def matrix(self, j: int) -> Matrix:
        return self.matrices[j - 1]

    def inverses(self) -> tuple[Matrix, ...]:
        return tuple(mat_inverse(a) for a in self.matrices)


@lru_cache(maxsize=None)
def gsb_matrices(k: int) -> GSBFamily:
    if k < 2:
        raise ValueError(f"generalized Stern-Brocot encoding needs k >= 2, got {k}")
    mats = tuple(
        Matrix([[1 if (c == j or r == c) else 0 for c in range(k)] for r in range(k)])
        for j in range(k)
    )
    return GSBFamily(k, mats)


def sb_encode(w: str) -> Vector:
    v = Vector.ones(2)
    for ch in w:
        if ch == "0":
            v = vec_mat_mul(v, M0)
        elif ch == "1":
            v = vec_mat_mul(v, M1)
        else:
            raise ValueError(f"not a binary string: {w!r}")
    return v


def _positive_ints(v: Vector) -> list[int]:
    entries = list(v)
    if any(x.denominator != 1 or x < 1 for x in entries):
        raise InvalidEncoding(f"[{v}] is not a vector of positive integers")
    return [int(x) for x in entries]


def sb_decode(v: Vector) -> str:
    """Invert :func:`sb_encode` by repeated subtraction.

    Raises :class:`InvalidEncoding` if ``v`` encodes no binary string.
    """
    if len(v) != 2:
        raise InvalidEncoding(f"binary Stern-Brocot vectors have 2 entries, got {len(v)}")
    a, b = _positive_ints(v)
    out = []
    while (a, b) != (1, 1):
        if a == b:
            raise InvalidEncoding(f"[{v}] is not a Stern-Brocot encoding: reached [{a} {b}]")
        if b > a:
            out.append("0")
            b -= a
        else:
            out.append("1")
            a -= b
    return "".join(reversed(out))


def sb_decode_by_inverse(v: Vector) -> str:
    """Same contract as :func:`sb_decode`, undoing each step with N0 or N1."""
    if len(v) != 2:
        raise InvalidEncoding(f"binary Stern-Brocot vectors have 2 entries, got {len(v)}")
    _positive_ints(v)
    home = Vector.ones(2)
    out = []
    while v != home:
        a, b = v
        if a == b:
            raise InvalidEncoding(f"not a Stern-Brocot encoding: reached [{v}]")
        if b > a:
            out.append("0")
            v = vec_mat_mul(v, N0)
        else:
            out.append("1")
            v = vec_mat_mul(v, N1)
    return "".join(reversed(out))


def _gsb_index(sym, k: int) -> int:
    if isinstance(sym, int) and not isinstance(sym, bool):
        j = sym
    elif isinstance(sym, str) and sym.startswith("a_") and sym[2:].isdigit():
        j = int(sym[2:])
    else:
        raise ValueError(f"not a generalized Stern-Brocot symbol: {sym!r}")
    if not 1 <= j <= k:
        raise ValueError(f"symbol {sym!r} is outside a_1..a_{k}")
    return j


def gsb_encode(w: Sequence, k: int) -> Vector:
    """Encode a word over ``a_1..a_k`` (symbols given as ``"a_j"`` or as ints j)."""
    family = gsb_matrices(k)
    v = Vector.ones(k)
    for sym in w:
        v = vec_mat_mul(v, family.matrix(_gsb_index(sym, k)))
    return v


def gsb_decode(v: Vector, k: int) -> tuple[str, ...]:
    """Invert :func:`gsb_encode`, returning symbol names ``a_j``.

    Raises :class:`InvalidEncoding` on a tied maximum or a non-positive entry.
    """
    if k < 2:
        raise ValueError(f"generalized Stern-Brocot encoding needs k >= 2, got {k}")
    if len(v) != k:
        raise InvalidEncoding(f"expected a vector with {k} entries, got {len(v)}")
    e = _positive_ints(v)
    total = sum(e)
    out = []
    while total != k:  # positive entries sum to k only for the all-ones vector
        top = max(e)
        j = e.index(top)
        if e.count(top) > 1:
            raise InvalidEncoding(f"[{v}] is not an encoding: tied maximum in {e}")
        rest = total - top
        if top - rest < 1:
            raise InvalidEncoding(f"[{v}] is not an encoding: entry {j + 1} drops below 1")
        e[j] = top - rest
        total = top
        out.append(gsb_symbol(j + 1))
    return tuple(reversed(out))
