"""Exact dense linear algebra over integers and rationals.

Matrices are backed by numpy ``object`` arrays so entries stay Python ``int``
or :class:`fractions.Fraction` and never overflow. Determinants use
fraction-free Bareiss elimination; modular determinants run Gaussian
elimination over F_p.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any, Union

import numpy as np

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
# residues below this bound keep products of two entries inside int64
FIXED_WIDTH_PRIME_LIMIT = 2**31


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit the requested operation."""


def _as_object_array(rows: Any) -> np.ndarray:
    if isinstance(rows, IntMatrix):
        return rows.to_array()
    if isinstance(rows, np.ndarray) and rows.dtype != object:
        # Leave no fixed-width integers behind.
        return np.array([[_exact(x) for x in row] for row in rows.tolist()], dtype=object).reshape(
            rows.shape
        )
    data = [[_exact(x) for x in row] for row in rows]
    if not data:
        return np.empty((0, 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise DimensionError("Matrix rows must all have the same length")
    array = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        for j, value in enumerate(row):
            array[i, j] = value
    return array


def _exact(value: Any) -> Rational:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, (int, np.integer)):
        return int(value)
    raise TypeError(f"Exact matrices hold integers or fractions, got {type(value).__name__}")


class IntMatrix:
    """Dense exact matrix with ``int`` or ``Fraction`` entries, stored row-major."""

    __slots__ = ("_data",)

    def __init__(self, rows: Any):
        self._data = _as_object_array(rows)
        self._data.flags.writeable = False

    @classmethod
    def _wrap(cls, array: np.ndarray) -> IntMatrix:
        matrix = cls.__new__(cls)
        array.flags.writeable = False
        matrix._data = array
        return matrix

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        array = np.empty((rows, cols), dtype=object)
        array.fill(0)
        return cls._wrap(array)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        array = np.empty((n, n), dtype=object)
        array.fill(0)
        for i in range(n):
            array[i, i] = 1
        return cls._wrap(array)

    @classmethod
    def diagonal(cls, values: Sequence[Rational]) -> IntMatrix:
        n = len(values)
        array = np.empty((n, n), dtype=object)
        array.fill(0)
        for i, value in enumerate(values):
            array[i, i] = _exact(value)
        return cls._wrap(array)

    @classmethod
    def block_diagonal(cls, blocks: Iterable[IntMatrix]) -> IntMatrix:
        blocks = list(blocks)
        n = sum(block.rows for block in blocks)
        m = sum(block.cols for block in blocks)
        array = np.empty((n, m), dtype=object)
        array.fill(0)
        r = c = 0
        for block in blocks:
            array[r : r + block.rows, c : c + block.cols] = block._data
            r += block.rows
            c += block.cols
        return cls._wrap(array)

    @property
    def rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self._data.flat)

    def to_array(self) -> np.ndarray:
        """A writable copy of the backing object array."""
        return self._data.copy()

    def to_rows(self) -> list[list[Rational]]:
        return [list(row) for row in self._data.tolist()]

    def __getitem__(self, index: tuple[int, int]) -> Rational:
        return self._data[index]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix._wrap(self._data.T.copy())

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"Cannot multiply {self.shape} by {other.shape}")
        return IntMatrix._wrap(np.dot(self._data, other._data))

    def scaled(self, factor: Rational) -> IntMatrix:
        return IntMatrix._wrap(self._data * factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return bool(np.all(np.asarray(self._data == other._data, dtype=bool)))

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._data.flat)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


def _square_array(matrix: Any) -> np.ndarray:
    array = _as_object_array(matrix)
    if array.shape[0] != array.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {array.shape}")
    return array


def det_exact(matrix: Any) -> Rational:
    """Determinant by Bareiss fraction-free elimination with row pivoting.

    Integer input stays integer throughout: each update divides exactly by the
    previous pivot. Rational input follows the same recurrence in ``Fraction``.
    """
    a = _square_array(matrix)
    n = a.shape[0]
    if n == 0:
        return 1
    integral = all(isinstance(x, int) for x in a.flat)
    if not integral:
        a = np.array([[Fraction(x) for x in row] for row in a.tolist()], dtype=object)
    sign = 1
    previous: Rational = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i, k] != 0), None)
            if pivot_row is None:
                return 0
            a[[k, pivot_row]] = a[[pivot_row, k]]
            sign = -sign
        pivot = a[k, k]
        update = a[k + 1 :, k + 1 :] * pivot - np.outer(a[k + 1 :, k], a[k, k + 1 :])
        a[k + 1 :, k + 1 :] = update // previous if integral else update / previous
        previous = pivot
    return _exact(sign * a[n - 1, n - 1])


def residue(value: Rational, prime: int) -> int:
    """Image of an integer or fraction in F_p; the denominator must be a unit."""
    if isinstance(value, Fraction):
        if value.denominator % prime == 0:
            raise ZeroDivisionError(f"Denominator of {value} vanishes modulo {prime}")
        return value.numerator * pow(value.denominator, -1, prime) % prime
    return int(value) % prime


def det_mod_p(matrix: Any, prime: int) -> int:
    """Determinant reduced modulo ``prime`` by Gaussian elimination over F_p."""
    if prime < 2:
        raise ValueError(f"Modulus must be a prime >= 2, got {prime}")
    a = _square_array(matrix)
    for index, value in np.ndenumerate(a):
        a[index] = residue(value, prime)
    if prime < FIXED_WIDTH_PRIME_LIMIT:
        a = a.astype(np.int64)
    n = a.shape[0]
    det = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i, k] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            det = -det
        pivot = int(a[k, k])
        det = det * pivot % prime
        if k + 1 < n:
            inverse = pow(pivot, -1, prime)
            factors = (a[k + 1 :, k] * inverse) % prime
            a[k + 1 :, k:] = (a[k + 1 :, k:] - np.outer(factors, a[k, k:])) % prime
    return det % prime


def _clear_denominators(a: np.ndarray) -> np.ndarray:
    for i in range(a.shape[0]):
        denominators = [x.denominator for x in a[i] if isinstance(x, Fraction)]
        if denominators:
            scale = math.lcm(*denominators)
            a[i] = np.array([int(x * scale) for x in a[i]], dtype=object)
    return a


def rank_exact(matrix: Any) -> int:
    """Rank computed fraction-free, with column skipping for rank-deficient input."""
    a = _clear_denominators(_as_object_array(matrix))
    rows, cols = a.shape
    rank = 0
    previous = 1
    for c in range(cols):
        if rank == rows:
            break
        pivot_row = next((i for i in range(rank, rows) if a[i, c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != rank:
            a[[rank, pivot_row]] = a[[pivot_row, rank]]
        pivot = a[rank, c]
        if rank + 1 < rows and c + 1 < cols:
            update = a[rank + 1 :, c + 1 :] * pivot - np.outer(a[rank + 1 :, c], a[rank, c + 1 :])
            a[rank + 1 :, c + 1 :] = update // previous
        a[rank + 1 :, c] = 0
        previous = pivot
        rank += 1
    return rank

