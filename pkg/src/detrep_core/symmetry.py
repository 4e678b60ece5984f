"""Group actions on the argument and their lifts to pencil bases.

An element acts on the ``m × m`` argument as ``Y ↦ h · Y · gᵀ`` (optionally
followed by transposition): ``g`` acts on ``E`` (argument columns, the
variable subscripts) and ``h`` on ``F*`` (argument rows, the superscripts).
A pencil is equivariant for the element when invertible ``B₁, B₂`` satisfy

    Ã(g·y) · B₂ = B₁ · Ã(y)    for all y,

and ``det B₁ / det B₂`` is the character by which the target polynomial
transforms. The check below compares coefficient matrices, so no inverse is
ever formed.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Any

import numpy as np

from .combinatorics import subset_rank, subsets
from .identity_testing import VerificationReport
from .linalg import IntMatrix, Rational, det_exact, rank_exact
from .oracles import det_naive, perm_naive
from .pencil import PencilMatrix, Variable

logger = logging.getLogger(__name__)

Matrix = tuple[tuple[Rational, ...], ...]


class ActionKind(StrEnum):
    PERM_SIDE = "perm_side"
    PERM_PAIR = "perm_pair"
    GL_SIDE = "gl_side"
    GL_PAIR = "gl_pair"
    TRANSPOSE = "transpose"


PERMUTATION_KINDS = frozenset({ActionKind.PERM_SIDE, ActionKind.PERM_PAIR})
GL_KINDS = frozenset({ActionKind.GL_SIDE, ActionKind.GL_PAIR})

# construction -> (subset pairs?, exterior?, supported kinds)
LIFT_FAMILIES: dict[str, tuple[bool, bool, frozenset[ActionKind]]] = {
    "grenet": (False, False, PERMUTATION_KINDS),
    "regular_det": (False, True, PERMUTATION_KINDS | GL_KINDS),
    "equivariant_perm": (True, False, PERMUTATION_KINDS | {ActionKind.TRANSPOSE}),
    "equivariant_det": (True, True, PERMUTATION_KINDS | GL_KINDS | {ActionKind.TRANSPOSE}),
}


class IncompatibleActionError(ValueError):
    """Raised when a pencil has no lift for the requested kind of group element."""


def _identity(m: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def _freeze(matrix: Any) -> Matrix:
    rows = matrix.to_rows() if isinstance(matrix, IntMatrix) else matrix
    return tuple(tuple(Fraction(x) if isinstance(x, Fraction) else int(x) for x in row) for row in rows)


def monomial_matrix(sigma: Sequence[int], scales: Sequence[Rational]) -> Matrix:
    """``P_σ · diag(scales)``: column ``j`` holds ``scales[j]`` in row ``sigma[j]`` (0-based)."""
    m = len(sigma)
    if sorted(sigma) != list(range(m)):
        raise ValueError(f"{list(sigma)} is not a permutation of 0..{m - 1}")
    if len(scales) != m or any(s == 0 for s in scales):
        raise ValueError("Monomial matrices need one nonzero scale per column")
    rows = [[0] * m for _ in range(m)]
    for j, image in enumerate(sigma):
        rows[image][j] = scales[j]
    return _freeze(rows)


def is_monomial(matrix: Matrix) -> bool:
    m = len(matrix)
    rows_hit = [sum(1 for x in row if x != 0) for row in matrix]
    cols_hit = [sum(1 for i in range(m) if matrix[i][j] != 0) for j in range(m)]
    return all(count == 1 for count in rows_hit + cols_hit)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    return _freeze([[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(m)] for i in range(m)])


@dataclass(frozen=True)
class GroupElement:
    """``Y ↦ f_matrix · Y · e_matrixᵀ``, transposed afterwards when ``transpose`` is set."""

    kind: ActionKind
    e_matrix: Matrix
    f_matrix: Matrix
    transpose: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ActionKind(self.kind))
        m = len(self.e_matrix)
        for matrix in (self.e_matrix, self.f_matrix):
            if len(matrix) != m or any(len(row) != m for row in matrix):
                raise ValueError("Group element matrices must both be m x m")
            if det_exact([list(row) for row in matrix]) == 0:
                raise ValueError("Group element matrices must be invertible")
        if self.kind in PERMUTATION_KINDS and not (
            is_monomial(self.e_matrix) and is_monomial(self.f_matrix)
        ):
            raise ValueError(f"{self.kind} elements must be monomial on both sides")
        if self.kind == ActionKind.PERM_SIDE or self.kind == ActionKind.GL_SIDE:
            if self.f_matrix != _identity(m):
                raise ValueError(f"{self.kind} elements act on E only")
        if self.transpose != (self.kind == ActionKind.TRANSPOSE):
            raise ValueError("Only transpose elements carry the transpose flag")

    @property
    def m(self) -> int:
        return len(self.e_matrix)

    @classmethod
    def identity(cls, m: int) -> GroupElement:
        return cls(ActionKind.PERM_SIDE, _identity(m), _identity(m))

    @classmethod
    def perm_side(cls, sigma: Sequence[int], scales: Sequence[Rational]) -> GroupElement:
        return cls(ActionKind.PERM_SIDE, monomial_matrix(sigma, scales), _identity(len(sigma)))

    @classmethod
    def perm_pair(
        cls,
        e_sigma: Sequence[int],
        e_scales: Sequence[Rational],
        f_sigma: Sequence[int],
        f_scales: Sequence[Rational],
    ) -> GroupElement:
        return cls(
            ActionKind.PERM_PAIR, monomial_matrix(e_sigma, e_scales), monomial_matrix(f_sigma, f_scales)
        )

    @classmethod
    def gl_side(cls, g: Any) -> GroupElement:
        frozen = _freeze(g)
        return cls(ActionKind.GL_SIDE, frozen, _identity(len(frozen)))

    @classmethod
    def gl_pair(cls, g: Any, h: Any) -> GroupElement:
        return cls(ActionKind.GL_PAIR, _freeze(g), _freeze(h))

    @classmethod
    def transposition(cls, m: int) -> GroupElement:
        return cls(ActionKind.TRANSPOSE, _identity(m), _identity(m), transpose=True)

    def compose(self, other: GroupElement) -> GroupElement:
        """``self ∘ other``: apply ``other`` first."""
        if self.transpose or other.transpose:
            raise ValueError("Composition with transposition is not supported")
        if self.kind == other.kind:
            kind = self.kind
        elif self.kind in GL_KINDS or other.kind in GL_KINDS:
            kind = ActionKind.GL_PAIR
        else:
            kind = ActionKind.PERM_PAIR
        return GroupElement(
            kind, _matmul(self.e_matrix, other.e_matrix), _matmul(self.f_matrix, other.f_matrix)
        )

    def describe(self) -> dict[str, Any]:
        def encode(matrix: Matrix) -> list[list[str | int]]:
            return [[x if isinstance(x, int) else str(x) for x in row] for row in matrix]

        return {
            "kind": self.kind.value,
            "e_matrix": encode(self.e_matrix),
            "f_matrix": encode(self.f_matrix),
            "transpose": self.transpose,
        }


def act_on_argument(element: GroupElement, y: Sequence[Sequence[Any]]) -> list[list[Any]]:
    """``h · Y · gᵀ`` (then transposed if flagged); works for numbers and polynomials."""
    m = element.m
    if len(y) != m or any(len(row) != m for row in y):
        raise ValueError(f"Argument must be {m}x{m}")
    g, h = element.e_matrix, element.f_matrix
    left = [[sum((h[a][i] * y[i][j] for i in range(m) if h[a][i]), 0) for j in range(m)] for a in range(m)]
    result = [[sum((left[a][j] * g[b][j] for j in range(m) if g[b][j]), 0) for b in range(m)] for a in range(m)]
    if element.transpose:
        result = [list(col) for col in zip(*result, strict=True)]
    return result


def argument_map(element: GroupElement) -> dict[Variable, list[tuple[Variable, Rational]]]:
    """For each entry ``v`` of ``g·y``, the pairs ``(u, c)`` with ``(g·y)_v = Σ c · y_u``."""
    m = element.m
    g, h = element.e_matrix, element.f_matrix
    image: dict[Variable, list[tuple[Variable, Rational]]] = {}
    for a, b in itertools.product(range(m), repeat=2):
        target = Variable(b + 1, a + 1) if element.transpose else Variable(a + 1, b + 1)
        image[target] = [
            (Variable(i + 1, j + 1), h[a][i] * g[b][j])
            for i in range(m)
            for j in range(m)
            if h[a][i] and g[b][j]
        ]
    return image


@dataclass(frozen=True)
class LiftedPair:
    """Invertible ``B₁, B₂`` and the character ``χ = det B₁ / det B₂``."""

    left: IntMatrix
    right: IntMatrix
    chi: Rational


def compound(matrix: Matrix, k: int, exterior: bool) -> np.ndarray:
    """``k``-th compound of ``matrix`` on colex-ordered ``k``-subsets.

    Entry ``[J, I]`` is the ``J × I`` minor: a determinant for exterior powers,
    a permanent for regular symmetric powers.
    """
    m = len(matrix)
    basis = subsets(m, k)
    size = len(basis)
    out = np.empty((size, size), dtype=object)
    minor = det_naive if exterior else perm_naive
    for target in basis:
        rows = [i - 1 for i in target.members]
        for source in basis:
            cols = [j - 1 for j in source.members]
            value = minor([[matrix[r][c] for c in cols] for r in rows]) if k else 1
            out[subset_rank(target), subset_rank(source)] = value
    return out


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows, cols = b.shape
    out = np.empty((a.shape[0] * rows, a.shape[1] * cols), dtype=object)
    for (i, j), value in np.ndenumerate(a):
        out[i * rows : (i + 1) * rows, j * cols : (j + 1) * cols] = value * b
    return out


def _block_diagonal(blocks: list[np.ndarray]) -> IntMatrix:
    return IntMatrix.block_diagonal(IntMatrix(block) for block in blocks)


def _transpose_permutation(m: int) -> IntMatrix:
    """Basis permutation ``(I, J) -> (J, I)`` on every pair block."""
    images: list[int] = [0]
    offset = 1
    for k in range(1, m):
        width = math.comb(m, k)
        for a, b in itertools.product(range(width), repeat=2):
            images.append(offset + b * width + a)
        offset += width * width
    n = len(images)
    array = np.empty((n, n), dtype=object)
    array.fill(0)
    for source, target in enumerate(images):
        array[target, source] = 1
    return IntMatrix(array)


def _family(pencil: PencilMatrix, element: GroupElement) -> tuple[bool, bool]:
    construction = pencil.meta.construction
    if construction not in LIFT_FAMILIES:
        raise IncompatibleActionError(f"No symmetry lift is known for {construction}")
    pairs, exterior, supported = LIFT_FAMILIES[construction]
    if element.kind not in supported:
        raise IncompatibleActionError(f"{construction} has no lift for {element.kind.value} elements")
    if element.m != pencil.m:
        raise IncompatibleActionError(f"Element acts on size {element.m}, pencil has m={pencil.m}")
    return pairs, exterior


def _chi(left: IntMatrix, right: IntMatrix) -> Rational:
    ratio = Fraction(det_exact(left)) / Fraction(det_exact(right))
    return ratio.numerator if ratio.denominator == 1 else ratio


def induced_action(pencil: PencilMatrix, element: GroupElement) -> LiftedPair:
    """Block-diagonal lift of ``element`` to the pencil's row and column bases.

    Subset constructions lift only the ``E`` part; pair constructions lift
    ``ρ_k(h) ⊗ ρ_k(g)`` on each block and map transposition to ``(I, J) ↦ (J, I)``.

    Raises:
        IncompatibleActionError: If the construction does not support the element
    """
    pairs, exterior = _family(pencil, element)
    m = pencil.m
    if element.transpose:
        permutation = _transpose_permutation(m)
        return LiftedPair(permutation, permutation, 1)
    g, h = element.e_matrix, element.f_matrix
    blocks = []
    for k in range(1, m):
        rho = compound(g, k, exterior)
        blocks.append(_kron(compound(h, k, exterior), rho) if pairs else rho)
    top = compound(g, m, exterior)[0, 0]
    if pairs:
        top = top * compound(h, m, exterior)[0, 0]
    one = np.array([[1]], dtype=object)
    right = _block_diagonal([one, *blocks])
    left = _block_diagonal([np.array([[top]], dtype=object), *blocks])
    return LiftedPair(left, right, _chi(left, right))


def expected_character(target: str, element: GroupElement) -> Rational | None:
    """How ``target`` transforms under ``element``; ``None`` when it is not a symmetry."""
    if element.transpose:
        return 1
    if target == "det":
        return det_exact([list(r) for r in element.e_matrix]) * det_exact([list(r) for r in element.f_matrix])
    if target == "perm":
        if not (is_monomial(element.e_matrix) and is_monomial(element.f_matrix)):
            return None
        nonzero = [x for matrix in (element.e_matrix, element.f_matrix) for row in matrix for x in row if x]
        return math.prod(nonzero)
    raise ValueError(f"No character is defined for target {target}")


def _substituted_parts(
    pencil: PencilMatrix, element: GroupElement
) -> dict[Variable, dict[tuple[int, int], Rational]]:
    """Coefficient matrices of ``Ã(g·y)``: ``M_u = Σ_v c(v, u) · A_v``."""
    parts = pencil.coefficient_parts()
    substituted: dict[Variable, dict[tuple[int, int], Rational]] = {}
    for v, sources in argument_map(element).items():
        part = parts.get(v)
        if not part:
            continue
        for u, coefficient in sources:
            target = substituted.setdefault(u, {})
            for rc, value in part.items():
                target[rc] = target.get(rc, 0) + coefficient * value
    return substituted


def _sparse_times_dense(sparse: dict[tuple[int, int], Rational], dense: np.ndarray) -> np.ndarray:
    out = np.empty(dense.shape, dtype=object)
    out.fill(0)
    for (r, c), value in sparse.items():
        if value:
            out[r, :] = out[r, :] + value * dense[c, :]
    return out


def _dense_times_sparse(dense: np.ndarray, sparse: dict[tuple[int, int], Rational]) -> np.ndarray:
    out = np.empty(dense.shape, dtype=object)
    out.fill(0)
    for (r, c), value in sparse.items():
        if value:
            out[:, c] = out[:, c] + value * dense[:, r]
    return out


def _encode(value: Rational) -> int | str:
    return value if isinstance(value, int) else str(value)


def check_equivariance(pencil: PencilMatrix, element: GroupElement) -> VerificationReport:
    """Verify ``Ã(g·y) B₂ = B₁ Ã(y)`` coefficient by coefficient, then the character.

    Raises:
        IncompatibleActionError: If the pencil has no lift for the element
    """
    lift = induced_action(pencil, element)
    left, right = lift.left.to_array(), lift.right.to_array()
    constant = pencil.constant_part()
    parts = pencil.coefficient_parts()
    substituted = _substituted_parts(pencil, element)
    comparisons = [("constant", constant, constant)]
    comparisons += [(str(u), substituted.get(u, {}), parts.get(u, {})) for u in pencil.variables()]
    blocks = pencil.layout.blocks
    witness = None
    for label, lhs_part, rhs_part in comparisons:
        lhs = _sparse_times_dense(lhs_part, right)
        rhs = _dense_times_sparse(left, rhs_part)
        mismatch = np.argwhere(np.asarray(lhs != rhs, dtype=bool))
        if len(mismatch):
            r, c = (int(x) for x in mismatch[0])
            witness = {
                "coefficient": label,
                "row": r,
                "col": c,
                "row_block": blocks[pencil.layout.block_index(r)].label,
                "col_block": blocks[pencil.layout.block_index(c)].label,
                "lhs": _encode(lhs[r, c]),
                "rhs": _encode(rhs[r, c]),
            }
            break
    expected = expected_character(pencil.meta.target, element)
    if witness is None and expected != lift.chi:
        witness = {
            "coefficient": "character",
            "chi": _encode(lift.chi),
            "expected": None if expected is None else _encode(expected),
        }
    verdict = "pass" if witness is None else "fail"
    if witness is not None:
        logger.debug(f"Equivariance of {pencil.meta.construction} fails: {witness}")
    return VerificationReport(
        check="equivariance",
        mode="exact",
        verdict=verdict,
        witness=witness,
        detail=f"{element.kind.value} element, chi={_encode(lift.chi)}",
        extra={"element": element.describe()},
    )


def check_regularity(pencil: PencilMatrix) -> VerificationReport:
    """``rank Λ == n - 1``."""
    rank = rank_exact(pencil.constant_matrix())
    ok = rank == pencil.n - 1
    return VerificationReport(
        check="regularity",
        mode="exact",
        verdict="pass" if ok else "fail",
        witness=None if ok else {"rank": rank, "n": pencil.n},
        detail=f"rank of constant part is {rank} of n={pencil.n}",
    )


SCALE_CHOICES = (1, -1, 2, -2, 3, -3)


def _random_monomial(m: int, rng: np.random.Generator) -> Matrix:
    sigma = [int(x) for x in rng.permutation(m)]
    scales = [int(x) for x in rng.choice(SCALE_CHOICES, size=m)]
    return monomial_matrix(sigma, scales)


def _random_invertible(m: int, rng: np.random.Generator, bound: int = 3) -> Matrix:
    while True:
        candidate = rng.integers(-bound, bound + 1, size=(m, m)).tolist()
        if det_exact(candidate) != 0:
            return _freeze(candidate)


def random_group_element(
    kind: ActionKind | str, m: int, rng: np.random.Generator, side: str = "both"
) -> GroupElement:
    """Sample an element of ``kind``; ``side`` restricts pair kinds to ``E`` or ``F*``."""
    kind = ActionKind(kind)
    if side not in ("left", "right", "both"):
        raise ValueError(f"Unknown side: {side}. Available sides: left, right, both")
    if kind == ActionKind.TRANSPOSE:
        return GroupElement.transposition(m)
    sample = _random_monomial if kind in PERMUTATION_KINDS else _random_invertible
    if kind in (ActionKind.PERM_SIDE, ActionKind.GL_SIDE):
        return GroupElement(kind, sample(m, rng), _identity(m))
    e_matrix = sample(m, rng) if side in ("left", "both") else _identity(m)
    f_matrix = sample(m, rng) if side in ("right", "both") else _identity(m)
    return GroupElement(kind, e_matrix, f_matrix)
