"""Exact rational scalars, row vectors and square matrices.

Scalars are :class:`fractions.Fraction`.  :class:`Vector` and :class:`Matrix`
keep their entries as integer numerators over a single shared denominator,
always reduced, so that the hot path (``vec_mat_mul``) runs on plain integer
arithmetic while equality and hashing remain exact value comparisons.

Vectors are rows and multiply matrices on the right; there is no column
vector API.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

RationalLike = Union[int, str, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def rat(numer: int, denom: int = 1) -> Fraction:
    """Return ``numer/denom`` in lowest terms with the sign on the numerator.

    Raises ``ZeroDivisionError`` when ``denom`` is zero.
    """
    if denom == 0:
        raise ZeroDivisionError(f"rational with zero denominator: {numer}/0")
    return Fraction(numer, denom)


def parse_rational(text: RationalLike) -> Fraction:
    """Parse the ``p/q`` text form (``q`` omitted when 1).  Ints pass through."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    return rat(int(m.group(1)), int(m.group(2) or 1))


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _common(values: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    den = 1
    for x in values:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(x.numerator * (den // x.denominator) for x in values), den


def _reduce(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den != 1:
        g = gcd(den, *nums)
        if g != 1:
            return tuple(n // g for n in nums), den // g
    return tuple(nums), den


class Vector:
    """Immutable exact rational row vector."""

    __slots__ = ("_nums", "_den", "_hash")

    def __init__(self, entries: Iterable[RationalLike]):
        values = [parse_rational(x) for x in entries]
        if not values:
            raise DimensionError("vectors need at least one entry")
        nums, den = _common(values)
        self._set(nums, den)

    def _set(self, nums: tuple[int, ...], den: int) -> None:
        self._nums = nums
        self._den = den
        self._hash = hash((nums, den))

    @classmethod
    def _raw(cls, nums: Sequence[int], den: int) -> "Vector":
        v = cls.__new__(cls)
        v._set(*_reduce(nums, den))
        return v

    @classmethod
    def ones(cls, k: int) -> "Vector":
        return cls._raw((1,) * k, 1)

    def __len__(self) -> int:
        return len(self._nums)

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(self._nums[i], self._den)

    def __iter__(self):
        den = self._den
        return (Fraction(n, den) for n in self._nums)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(self)

    @property
    def raw(self) -> tuple[tuple[int, ...], int]:
        """(numerators, common denominator) in lowest terms."""
        return self._nums, self._den

    def is_integral(self) -> bool:
        return self._den == 1

    def max_abs(self) -> Fraction:
        return Fraction(max(abs(n) for n in self._nums), self._den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self._den == other._den and self._nums == other._nums

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Vector([{', '.join(repr(format_rational(x)) for x in self)}])"

    def __str__(self) -> str:
        return " ".join(format_rational(x) for x in self)


class Matrix:
    """Immutable exact rational square matrix; ``M[i, j]`` is row i, column j (0-based)."""

    __slots__ = ("_rows", "_nums", "_den", "_cols", "_hash")

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        grid = [[parse_rational(x) for x in row] for row in rows]
        k = len(grid)
        if k == 0 or any(len(row) != k for row in grid):
            raise DimensionError("matrix must be square and non-empty")
        self._rows = tuple(tuple(row) for row in grid)
        flat, den = _common([x for row in grid for x in row])
        self._den = den
        self._nums = tuple(flat[i * k:(i + 1) * k] for i in range(k))
        # sparse columns: for column j, the (row, numerator) pairs that are nonzero
        self._cols = tuple(
            tuple((i, self._nums[i][j]) for i in range(k) if self._nums[i][j])
            for j in range(k)
        )
        self._hash = hash(self._rows)

    @classmethod
    def identity(cls, k: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def max_abs(self) -> Fraction:
        return max(abs(x) for row in self._rows for x in row)

    def is_integral(self) -> bool:
        return self._den == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in row) + "]" for row in self._rows)
        return f"Matrix([{body}])"

    def to_text(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]


def vector(*entries: RationalLike) -> Vector:
    return Vector(entries)


def identity(k: int) -> Matrix:
    return Matrix.identity(k)


def mul_raw(nums: Sequence[int], den: int, m: Matrix) -> tuple[tuple[int, ...], int]:
    """``vec_mat_mul`` on a vector given as (numerators, common denominator).

    For callers that track very many vectors and want to skip object overhead.
    """
    out = []
    for col in m._cols:
        acc = 0
        for i, x in col:
            if x == 1:
                acc += nums[i]
            elif x == -1:
                acc -= nums[i]
            else:
                acc += nums[i] * x
        out.append(acc)
    return _reduce(out, den * m._den)


def vec_mat_mul(v: Vector, m: Matrix) -> Vector:
    """Return ``v M``: entry j is the sum over i of ``v[i] * M[i, j]``."""
    if len(v._nums) != len(m._rows):
        raise DimensionError(f"vector of dimension {len(v)} times {m.dim}x{m.dim} matrix")
    w = Vector.__new__(Vector)
    w._set(*mul_raw(v._nums, v._den, m))
    return w


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.dim != b.dim:
        raise DimensionError(f"{a.dim}x{a.dim} times {b.dim}x{b.dim}")
    k = a.dim
    ar, br = a.rows, b.rows
    return Matrix(
        [[sum((ar[i][t] * br[t][j] for t in range(k)), Fraction(0)) for j in range(k)] for i in range(k)]
    )


def mat_inverse(m: Matrix) -> Matrix:
    """Exact Gauss-Jordan inverse; first nonzero entry is the pivot.

    Raises :class:`SingularMatrixError` if ``m`` has no inverse.
    """
    k = m.dim
    aug = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(m.rows)]
    for c in range(k):
        p = next((r for r in range(c, k) if aug[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError(f"matrix is singular: {m!r}")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return Matrix([row[k:] for row in aug])
