"""Builders for the concrete determinantal representations.

Each builder returns a :class:`~detrep_core.pencil.PencilMatrix` whose
metadata says which polynomial the determinant represents. Subset-indexed
constructions share one cyclic layout: block ``k`` is indexed by ``k``-subsets
(or pairs of ``k``-subsets) in colex order, block ``k`` feeds block ``k + 1``
through linear entries, and the top step wraps back into the 1×1 block 0.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import insert, subset_rank, subsets, wedge_sign
from .pencil import (
    BasisKind,
    Block,
    BlockLayout,
    PencilBuilder,
    PencilMatrix,
    PencilMeta,
    Variable,
)
from .polynomial import Polynomial

logger = logging.getLogger(__name__)

MAX_HALF_M = 12
MAX_PAIR_M = 6
MAX_QUADRIC_SIZE = 64
MAX_WARING_N = 12
MAX_TRIVIAL_M = 64


class SizeGuardError(ValueError):
    """Raised when a construction is requested beyond its supported size."""


def _guard(name: str, value: int, limit: int, minimum: int = 1) -> None:
    if not minimum <= value <= limit:
        raise SizeGuardError(f"{name} supports sizes {minimum}..{limit}, got {value}")


def _half_layout(m: int, exterior: bool) -> BlockLayout:
    blocks = []
    for k in range(m):
        dim = math.comb(m, k)
        if k == 0:
            blocks.append(Block("k=0", 1, BasisKind.SCALAR, 0, exterior))
        else:
            label = f"L^{k}E" if exterior else f"S^{k}E_reg"
            blocks.append(Block(label, dim, BasisKind.SUBSETS, k, exterior))
    return BlockLayout(tuple(blocks))


def _half_pencil(m: int, exterior: bool, first_diagonal: int, meta: PencilMeta) -> PencilMatrix:
    layout = _half_layout(m, exterior)
    offsets = layout.offsets
    builder = PencilBuilder(layout.n)
    for k in range(1, m):
        value = first_diagonal if k == 1 else 1
        for r in range(layout.blocks[k].dim):
            builder.set_constant(offsets[k] + r, offsets[k] + r, value)
    for k in range(m):
        for source in subsets(m, k):
            col = offsets[k] + subset_rank(source)
            for i in source.complement():
                image = insert(i, source)
                row = 0 if k == m - 1 else offsets[k + 1] + subset_rank(image)
                sign = wedge_sign(i, source) if exterior else 1
                builder.add_linear(row, col, Variable(k + 1, i), sign)
    return builder.build(m, (m, m), layout, meta)


def grenet(m: int, exact_sign: bool = True) -> PencilMatrix:
    """Permanent of size ``m`` as a determinant of size ``2^m - 1``.

    Without ``exact_sign`` the determinant is ``(-1)^(m+1) perm``; with it the
    first identity block is multiplied by ``(-1)^(m+1)`` so that ``det = perm``.
    """
    _guard("grenet", m, MAX_HALF_M, minimum=2)
    first = (-1) ** (m + 1) if exact_sign else 1
    sign = 1 if exact_sign else (-1) ** (m + 1)
    n = 2**m - 1
    meta = PencilMeta(
        "grenet", "perm", sign=sign, scaling_exponent=n - m, params={"m": m, "exact_sign": exact_sign}
    )
    return _half_pencil(m, exterior=False, first_diagonal=first, meta=meta)


def regular_det(m: int) -> PencilMatrix:
    """Determinant of size ``m`` through exterior powers of ``E``, size ``2^m - 1``."""
    _guard("regular_det", m, MAX_HALF_M, minimum=2)
    sign = 1 if m % 4 in (1, 2) else -1
    n = 2**m - 1
    meta = PencilMeta("regular_det", "det", sign=sign, scaling_exponent=n - m, params={"m": m})
    return _half_pencil(m, exterior=True, first_diagonal=1, meta=meta)


def _pair_layout(m: int, exterior: bool) -> BlockLayout:
    blocks = []
    for k in range(m):
        dim = math.comb(m, k) ** 2
        if k == 0:
            blocks.append(Block("k=0", 1, BasisKind.SCALAR, 0, exterior))
        else:
            label = f"L^{k}E(x)L^{k}F*" if exterior else f"S^{k}E_reg(x)S^{k}F*_reg"
            blocks.append(Block(label, dim, BasisKind.SUBSET_PAIRS, k, exterior))
    return BlockLayout(tuple(blocks))


def _pair_pencil(m: int, exterior: bool, meta: PencilMeta) -> PencilMatrix:
    layout = _pair_layout(m, exterior)
    offsets = layout.offsets
    builder = PencilBuilder(layout.n)
    for k in range(1, m):
        for r in range(layout.blocks[k].dim):
            builder.set_constant(offsets[k] + r, offsets[k] + r, 1)
    for k in range(m):
        width = math.comb(m, k)
        next_width = math.comb(m, k + 1)
        for rows_subset, cols_subset in itertools.product(subsets(m, k), repeat=2):
            col = offsets[k] + subset_rank(rows_subset) * width + subset_rank(cols_subset)
            for i in rows_subset.complement():
                for j in cols_subset.complement():
                    if k == m - 1:
                        row = 0
                    else:
                        row = (
                            offsets[k + 1]
                            + subset_rank(insert(i, rows_subset)) * next_width
                            + subset_rank(insert(j, cols_subset))
                        )
                    sign = wedge_sign(i, rows_subset) * wedge_sign(j, cols_subset) if exterior else 1
                    builder.add_linear(row, col, Variable(i, j), sign)
    return builder.build(m, (m, m), layout, meta)


def _pair_meta(name: str, target: str, m: int) -> PencilMeta:
    n = math.comb(2 * m, m) - 1
    return PencilMeta(
        name,
        target,
        sign=(-1) ** (m + 1),
        scaling_exponent=n - m,
        expected_factor=math.factorial(m),
        params={"m": m},
    )


def equivariant_perm(m: int) -> PencilMatrix:
    """``m! · perm_m`` up to sign, of size ``C(2m, m) - 1``, symmetric on both sides."""
    _guard("equivariant_perm", m, MAX_PAIR_M, minimum=2)
    return _pair_pencil(m, exterior=False, meta=_pair_meta("equivariant_perm", "perm", m))


def equivariant_det(m: int) -> PencilMatrix:
    """``m! · det_m`` up to sign, of size ``C(2m, m) - 1``, GL-equivariant on both sides."""
    _guard("equivariant_det", m, MAX_PAIR_M, minimum=2)
    return _pair_pencil(m, exterior=True, meta=_pair_meta("equivariant_det", "det", m))


def _quadric_layout(size: int) -> BlockLayout:
    return BlockLayout(
        (
            Block("k=0", 1, BasisKind.SCALAR),
            Block("coordinates", size, BasisKind.COORDINATES, 1),
        )
    )


def quadric_half(s: int) -> PencilMatrix:
    """``Σ_{j≤s} x_j y_j`` in size ``s + 1``; ``x`` is argument row 1, ``y`` row 2."""
    _guard("quadric_half", s, MAX_QUADRIC_SIZE)
    builder = PencilBuilder(s + 1)
    for j in range(1, s + 1):
        builder.set_constant(j, j, 1)
        builder.add_linear(0, j, Variable(1, j), -1)
        builder.add_linear(j, 0, Variable(2, j), 1)
    meta = PencilMeta("quadric_half", "quadric_half", scaling_exponent=s - 1, params={"s": s})
    return builder.build(s, (2, s), _quadric_layout(s), meta)


def quadric_full(size: int) -> PencilMatrix:
    """``Σ_{j≤size} z_j^2`` in size ``size + 1``, symmetric under ``O(size)``."""
    _guard("quadric_full", size, MAX_QUADRIC_SIZE)
    builder = PencilBuilder(size + 1)
    for j in range(1, size + 1):
        builder.set_constant(j, j, 1)
        builder.add_linear(0, j, Variable(1, j), -1)
        builder.add_linear(j, 0, Variable(1, j), 1)
    meta = PencilMeta("quadric_full", "quadric_full", scaling_exponent=size - 1, params={"M": size})
    return builder.build(size, (1, size), _quadric_layout(size), meta)


def trivial_det(m: int) -> PencilMatrix:
    """The argument matrix itself, as a reference pencil for ``det_m``."""
    _guard("trivial_det", m, MAX_TRIVIAL_M)
    builder = PencilBuilder(m)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            builder.add_linear(i - 1, j - 1, Variable(i, j))
    layout = BlockLayout((Block("argument", m, BasisKind.DENSE),))
    return builder.build(m, (m, m), layout, PencilMeta("trivial_det", "det", params={"m": m}))


# Waring decompositions -------------------------------------------------------


@dataclass(frozen=True)
class WaringDecomposition:
    """``x_1 ⋯ x_n = Σ coefficient · (Σ_j ε_j x_j)^n`` over the listed sign vectors."""

    n: int
    symmetric: bool
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @property
    def rank(self) -> int:
        return len(self.terms)


def waring_terms(n: int, symmetric: bool = False) -> WaringDecomposition:
    """Fischer-style power sum decomposition of the monomial ``x_1 ⋯ x_n``.

    The asymmetric form fixes ``ε_1 = 1`` and has ``2^(n-1)`` terms; the
    symmetric one ranges over all ``2^n`` sign vectors.
    """
    _guard("waring", n, MAX_WARING_N)
    if symmetric:
        vectors = list(itertools.product((1, -1), repeat=n))
        denominator = 2**n * math.factorial(n)
    else:
        vectors = [(1, *rest) for rest in itertools.product((1, -1), repeat=n - 1)]
        denominator = 2 ** (n - 1) * math.factorial(n)
    terms = tuple((Fraction(math.prod(eps), denominator), tuple(eps)) for eps in vectors)
    return WaringDecomposition(n, symmetric, terms)


def waring_expand(decomposition: WaringDecomposition) -> Polynomial:
    """Expand the decomposition exactly; the result should be ``x_1 ⋯ x_n``."""
    common = math.lcm(*(coefficient.denominator for coefficient, _ in decomposition.terms))
    total = Polynomial.zero()
    for coefficient, eps in decomposition.terms:
        linear = sum(
            (Polynomial.variable(Variable(1, j + 1), e) for j, e in enumerate(eps)),
            Polynomial.zero(),
        )
        scaled = coefficient * common
        total = total + (linear**decomposition.n).scale(int(scaled))
    return total.exact_divide(common)


# Registry --------------------------------------------------------------------

CONSTRUCTION_REGISTRY: dict[str, Callable[..., PencilMatrix]] = {}


def register_construction(name: str, builder: Callable[..., PencilMatrix]) -> None:
    """Register a pencil builder under a CLI-facing name."""
    CONSTRUCTION_REGISTRY[name] = builder


def create_pencil(name: str, size: int, **options) -> PencilMatrix:
    """Build the named construction at ``size``.

    Raises:
        ValueError: If ``name`` is not registered or the size is out of range
    """
    if name not in CONSTRUCTION_REGISTRY:
        available = ", ".join(list_available_constructions())
        raise ValueError(f"Unknown construction: {name}. Available constructions: {available}")
    logger.debug(f"Building {name} at size {size} with options {options}")
    return CONSTRUCTION_REGISTRY[name](size, **options)


def list_available_constructions() -> list[str]:
    return list(CONSTRUCTION_REGISTRY.keys())


def is_construction_available(name: str) -> bool:
    return name in CONSTRUCTION_REGISTRY


def _register_builtin_constructions():
    register_construction("grenet", grenet)
    register_construction("regular-det", regular_det)
    register_construction("equivariant-perm", equivariant_perm)
    register_construction("equivariant-det", equivariant_det)
    register_construction("quadric-half", quadric_half)
    register_construction("quadric-full", quadric_full)
    register_construction("trivial-det", trivial_det)


_register_builtin_constructions()
