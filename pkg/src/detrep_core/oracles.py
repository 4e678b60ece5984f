"""Independent ground truth: permanents and determinants by other means.

These evaluators never touch a pencil. ``perm_naive`` and ``det_naive`` sum over
all permutations; ``perm_ryser`` is the Ryser-Glynn formula walked in Gray code
order. The ``TARGETS`` registry maps a pencil's target name to the exact
evaluator and symbolic polynomial used to check it.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from .linalg import det_exact
from .pencil import Variable
from .polynomial import Monomial, Polynomial

logger = logging.getLogger(__name__)

MAX_NAIVE_M = 10


class OracleGuardError(ValueError):
    """Raised when an exponential oracle is asked for a size it refuses."""


def _square(matrix: Any) -> list[list[Any]]:
    rows = matrix.to_rows() if hasattr(matrix, "to_rows") else [list(row) for row in matrix]
    if any(len(row) != len(rows) for row in rows):
        raise ValueError("Expected a square matrix")
    return rows


def _guard(m: int, limit: int) -> None:
    if m > limit:
        raise OracleGuardError(f"Refusing the naive m!-term sum for m={m} (limit {limit})")


def perm_naive(matrix: Any, limit: int = MAX_NAIVE_M) -> Any:
    """Permanent as the sum over all permutations."""
    rows = _square(matrix)
    m = len(rows)
    _guard(m, limit)
    total: Any = 0
    for sigma in itertools.permutations(range(m)):
        total += math.prod(rows[i][sigma[i]] for i in range(m))
    return total


def _parity(sigma: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])
    return -1 if inversions & 1 else 1


def det_naive(matrix: Any, limit: int = MAX_NAIVE_M) -> Any:
    """Determinant as the signed sum over all permutations."""
    rows = _square(matrix)
    m = len(rows)
    _guard(m, limit)
    total: Any = 0
    for sigma in itertools.permutations(range(m)):
        total += _parity(sigma) * math.prod(rows[i][sigma[i]] for i in range(m))
    return total


@dataclass
class RyserStats:
    """Counters filled by :func:`perm_ryser`."""

    terms: int = 0
    flips: int = 0
    multiplications: int = 0


def perm_ryser(matrix: Any, stats: RyserStats | None = None) -> int:
    """Permanent by Ryser-Glynn over sign vectors with the first sign fixed.

    ``perm(X) = 2^{1-m} Σ_ε (Π_i ε_i) Π_i Σ_j ε_j x_ij``. Walking the sign
    vectors in Gray code order changes one ``ε_j`` per step, so each step
    updates the row sums in ``O(m)``.
    """
    rows = _square(matrix)
    m = len(rows)
    if m == 0:
        return 1
    signs = [1] * m
    sums = [sum(row) for row in rows]
    parity = 1
    total = math.prod(sums)
    flips = 0
    steps = 1 << (m - 1)
    for step in range(1, steps):
        j = (step & -step).bit_length()
        old = signs[j]
        signs[j] = -old
        for i in range(m):
            sums[i] -= 2 * old * rows[i][j]
        parity = -parity
        total += parity * math.prod(sums)
        flips += 1
    assert flips == steps - 1, "Gray code walk must flip exactly one sign per step"
    quotient, remainder = divmod(total, steps)
    if remainder:
        raise RuntimeError(f"Ryser sum {total} is not divisible by {steps}")
    if stats is not None:
        stats.terms = steps
        stats.flips = flips
        stats.multiplications = steps * (m - 1)
    return quotient


def perm_polynomial(m: int) -> Polynomial:
    """``perm_m`` as a polynomial in the ``y^i_j``."""
    terms = {}
    for sigma in itertools.permutations(range(m)):
        terms[Monomial.from_mapping({Variable(i + 1, sigma[i] + 1): 1 for i in range(m)})] = 1
    return Polynomial(terms)


def det_polynomial(m: int) -> Polynomial:
    """``det_m`` as a polynomial in the ``y^i_j``."""
    terms = {}
    for sigma in itertools.permutations(range(m)):
        monomial = Monomial.from_mapping({Variable(i + 1, sigma[i] + 1): 1 for i in range(m)})
        terms[monomial] = _parity(sigma)
    return Polynomial(terms)


def quadric_half_polynomial(s: int) -> Polynomial:
    """``Σ x_j y_j`` with ``x_j = y^1_j`` and ``y_j = y^2_j``."""
    return sum(
        (Polynomial({Monomial.from_mapping({Variable(1, j): 1, Variable(2, j): 1}): 1}) for j in range(1, s + 1)),
        Polynomial.zero(),
    )


def quadric_full_polynomial(count: int) -> Polynomial:
    """``Σ z_j^2`` with ``z_j = y^1_j``."""
    return sum(
        (Polynomial({Monomial.of(Variable(1, j), 2): 1}) for j in range(1, count + 1)),
        Polynomial.zero(),
    )


def _quadric_half_value(point: Sequence[Sequence[int]]) -> int:
    return sum(x * y for x, y in zip(point[0], point[1], strict=True))


def _quadric_full_value(point: Sequence[Sequence[int]]) -> int:
    return sum(z * z for z in point[0])


@dataclass(frozen=True)
class Target:
    """A polynomial a pencil can represent: exact evaluator plus symbolic form."""

    name: str
    evaluate: Callable[[Sequence[Sequence[int]]], int]
    polynomial: Callable[[tuple[int, int]], Polynomial]


TARGETS: dict[str, Target] = {
    "perm": Target("perm", perm_ryser, lambda shape: perm_polynomial(shape[0])),
    "det": Target("det", det_exact, lambda shape: det_polynomial(shape[0])),
    "quadric_half": Target(
        "quadric_half", _quadric_half_value, lambda shape: quadric_half_polynomial(shape[1])
    ),
    "quadric_full": Target(
        "quadric_full", _quadric_full_value, lambda shape: quadric_full_polynomial(shape[1])
    ),
}


def get_target(name: str) -> Target:
    if name not in TARGETS:
        available = ", ".join(sorted(TARGETS))
        raise ValueError(f"Unknown target: {name}. Available targets: {available}")
    return TARGETS[name]
