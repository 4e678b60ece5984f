"""Equivalence transformations of pencils and the normal form of regular ones.

A pencil is regular when its constant part ``Λ`` has corank one. Row and
column operations ``L, R`` with ``L Λ R = Λ_{n-1} = diag(0, 1, …, 1)`` bring
every regular pencil to a common shape; the determinant picks up
``det(L) · det(R)``, which is recorded in the expected factor.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction

import numpy as np

from .linalg import IntMatrix, Rational, det_exact, rank_exact
from .pencil import (
    BasisKind,
    Block,
    BlockLayout,
    PencilBuilder,
    PencilMatrix,
)

logger = logging.getLogger(__name__)


class NotRegularError(ValueError):
    """Raised when the constant part of a pencil does not have rank ``n - 1``."""


def lambda_normal_form(n: int) -> IntMatrix:
    """``diag(0, 1, …, 1)`` of size ``n``."""
    return IntMatrix.diagonal([0] + [1] * (n - 1))


def transform_pencil(pencil: PencilMatrix, left: IntMatrix, right: IntMatrix, suffix: str) -> PencilMatrix:
    """``L · pencil · R`` with the metadata factor multiplied by ``det L · det R``.

    ``det(L A R) = det L · det R · det A``, so the new expected factor keeps
    ``det = sign · factor · target`` true. The layout collapses to one dense block.
    """
    n = pencil.n
    if left.shape != (n, n) or right.shape != (n, n):
        raise ValueError(f"Transformation matrices must be {n}x{n}")
    det_left, det_right = det_exact(left), det_exact(right)
    if det_left == 0 or det_right == 0:
        raise ValueError("Transformation matrices must be invertible")
    left_array, right_array = left.to_array(), right.to_array()

    def conjugate(sparse: dict[tuple[int, int], Rational]) -> np.ndarray:
        # L · S · R for sparse S, built row by row
        middle = np.empty((n, n), dtype=object)
        middle.fill(0)
        for (r, c), value in sparse.items():
            middle[r, :] = middle[r, :] + value * right_array[c, :]
        return np.dot(left_array, middle)

    builder = PencilBuilder(n)
    constant = conjugate(pencil.constant_part())
    for (r, c), value in np.ndenumerate(constant):
        if value != 0:
            builder.set_constant(r, c, value)
    for variable, part in sorted(pencil.coefficient_parts().items()):
        for (r, c), value in np.ndenumerate(conjugate(part)):
            if value != 0:
                builder.add_linear(r, c, variable, value)
    factor = Fraction(pencil.meta.expected_factor) * det_left * det_right
    meta = replace(
        pencil.meta,
        construction=f"{pencil.meta.construction}/{suffix}",
        expected_factor=factor.numerator if factor.denominator == 1 else factor,
        scaling_exponent=0,
    )
    layout = BlockLayout((Block(suffix, n, BasisKind.DENSE),))
    return builder.build(pencil.m, pencil.arg_shape, layout, meta)


def _full_pivot_reduction(constant: IntMatrix) -> tuple[IntMatrix, IntMatrix, int]:
    """Gauss-Jordan with full pivoting: ``L Λ R = diag(1, …, 1, 0, …, 0)``."""
    n = constant.rows
    work = np.array([[Fraction(x) for x in row] for row in constant.to_rows()], dtype=object)
    left = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    right = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    rank = 0
    for step in range(n):
        pivot = next(
            ((i, j) for i in range(step, n) for j in range(step, n) if work[i, j] != 0), None
        )
        if pivot is None:
            break
        i, j = pivot
        work[[step, i]] = work[[i, step]]
        left[[step, i]] = left[[i, step]]
        work[:, [step, j]] = work[:, [j, step]]
        right[:, [step, j]] = right[:, [j, step]]
        scale = work[step, step]
        work[step] = work[step] / scale
        left[step] = left[step] / scale
        for row in range(n):
            if row != step and work[row, step] != 0:
                factor = work[row, step]
                work[row] = work[row] - factor * work[step]
                left[row] = left[row] - factor * left[step]
        # clear the pivot row to the right with column operations
        for col in range(step + 1, n):
            if work[step, col] != 0:
                factor = work[step, col]
                work[:, col] = work[:, col] - factor * work[:, step]
                right[:, col] = right[:, col] - factor * right[:, step]
        rank += 1
    return IntMatrix(left.tolist()), IntMatrix(right.tolist()), rank


def normalize_regular(pencil: PencilMatrix) -> PencilMatrix:
    """Bring a regular pencil to constant part ``Λ_{n-1}``.

    Raises:
        NotRegularError: If ``rank Λ != n - 1``
    """
    n = pencil.n
    constant = pencil.constant_matrix()
    rank = rank_exact(constant)
    if rank != n - 1:
        raise NotRegularError(f"Constant part has rank {rank}, a regular pencil needs {n - 1}")
    left, right, _ = _full_pivot_reduction(constant)
    # cycle the zero from the last position to the first
    cycle = IntMatrix([[1 if j == (i - 1) % n else 0 for j in range(n)] for i in range(n)])
    left = cycle @ left
    right = right @ cycle.T
    result = transform_pencil(pencil, left, right, "normal-form")
    if result.constant_matrix() != lambda_normal_form(n):
        raise RuntimeError("Normalization did not reach diag(0, 1, ..., 1)")
    logger.debug(
        f"Normalized {pencil.meta.construction}: factor {result.meta.expected_factor}"
    )
    return result

