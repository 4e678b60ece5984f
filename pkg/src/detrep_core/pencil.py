"""Linear matrix pencils: sparse matrices of affine forms.

A :class:`PencilMatrix` is ``Λ + Σ_v y_v · A_v`` stored entry by entry as
:class:`AffineForm` values. Entries absent from ``forms`` are zero. The block
layout records how rows and columns decompose into subset-indexed blocks, and
the metadata records which polynomial the determinant represents and with
which sign and scaling.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from types import MappingProxyType
from typing import Any, NamedTuple

import numpy as np

from .linalg import DimensionError, IntMatrix, Rational, residue
from .polynomial import Monomial, Polynomial

logger = logging.getLogger(__name__)

JSON_SAFE_INT_BITS = 53


class Variable(NamedTuple):
    """The argument entry ``y^row_col``, i.e. ``Y[row - 1][col - 1]`` (1-based)."""

    row: int
    col: int

    def __str__(self) -> str:
        return f"y{self.row}_{self.col}"


def _normalize(value: Rational) -> Rational:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, np.integer):
        return int(value)
    raise TypeError(f"Pencil coefficients must be int or Fraction, got {type(value).__name__}")


@dataclass(frozen=True, slots=True)
class AffineForm:
    """``constant + Σ coefficient · variable`` with no zero coefficients.

    ``linear`` is sorted by variable; use :meth:`build` to canonicalize loose input.
    """

    constant: Rational = 0
    linear: tuple[tuple[Variable, Rational], ...] = ()

    def __post_init__(self):
        previous = None
        for variable, coefficient in self.linear:
            if coefficient == 0:
                raise ValueError(f"Zero coefficient stored for {variable}")
            if previous is not None and not previous < variable:
                raise ValueError("Affine form variables must be strictly increasing")
            previous = variable

    @classmethod
    def build(
        cls, constant: Rational = 0, terms: Iterable[tuple[Variable, Rational]] = ()
    ) -> AffineForm:
        merged: dict[Variable, Rational] = {}
        for variable, coefficient in terms:
            merged[variable] = merged.get(variable, 0) + coefficient
        linear = tuple(
            (Variable(*variable), _normalize(c)) for variable, c in sorted(merged.items()) if c
        )
        return cls(_normalize(constant), linear)

    @classmethod
    def var(cls, variable: Variable, coefficient: Rational = 1) -> AffineForm:
        return cls.build(0, [(variable, coefficient)])

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.linear

    def is_constant(self) -> bool:
        return not self.linear

    def is_linear(self) -> bool:
        """True when the form has no constant part and at least one variable."""
        return self.constant == 0 and bool(self.linear)

    def is_integral(self) -> bool:
        return isinstance(self.constant, int) and all(isinstance(c, int) for _, c in self.linear)

    def variables(self) -> tuple[Variable, ...]:
        return tuple(variable for variable, _ in self.linear)

    def coefficient(self, variable: Variable) -> Rational:
        for candidate, coefficient in self.linear:
            if candidate == variable:
                return coefficient
        return 0

    def __add__(self, other: AffineForm) -> AffineForm:
        return AffineForm.build(self.constant + other.constant, self.linear + other.linear)

    def scaled(self, factor: Rational) -> AffineForm:
        return AffineForm.build(self.constant * factor, [(v, c * factor) for v, c in self.linear])

    def evaluate(self, point: Sequence[Sequence[Rational]]) -> Rational:
        value = self.constant
        for variable, coefficient in self.linear:
            value += coefficient * point[variable.row - 1][variable.col - 1]
        return _normalize(value)

    def evaluate_mod(self, point: Sequence[Sequence[int]], prime: int) -> int:
        value = residue(self.constant, prime)
        for variable, coefficient in self.linear:
            value += residue(coefficient, prime) * point[variable.row - 1][variable.col - 1]
        return value % prime

    def to_polynomial(self) -> Polynomial:
        if not self.is_integral():
            raise ValueError("Only integral affine forms convert to integer polynomials")
        terms: dict[Monomial, int] = {}
        if self.constant:
            terms[Monomial.one()] = int(self.constant)
        for variable, coefficient in self.linear:
            terms[Monomial.of(variable)] = int(coefficient)
        return Polynomial(terms)

    def __str__(self) -> str:
        pieces: list[str] = []
        if self.constant != 0 or not self.linear:
            pieces.append(str(self.constant))
        for variable, coefficient in self.linear:
            magnitude = abs(coefficient)
            body = str(variable) if magnitude == 1 else f"{magnitude}*{variable}"
            if not pieces:
                pieces.append(body if coefficient > 0 else f"-{body}")
            else:
                pieces.append(f"{'+' if coefficient > 0 else '-'} {body}")
        return " ".join(pieces)


ZERO_FORM = AffineForm()


class BasisKind(StrEnum):
    SCALAR = "scalar"
    SUBSETS = "subsets"
    SUBSET_PAIRS = "subset_pairs"
    COORDINATES = "coordinates"
    DENSE = "dense"


@dataclass(frozen=True, slots=True)
class Block:
    """One diagonal block of the layout.

    ``degree`` is the subset size indexing the block; ``exterior`` marks blocks
    built from exterior powers rather than regular symmetric powers.
    """

    label: str
    dim: int
    basis: BasisKind
    degree: int = 0
    exterior: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Block {self.label!r} must have positive dimension")


@dataclass(frozen=True, slots=True)
class BlockLayout:
    blocks: tuple[Block, ...]

    def __post_init__(self):
        labels = [block.label for block in self.blocks]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Duplicate block labels in layout: {labels}")
        if not self.blocks:
            raise ValueError("A layout needs at least one block")

    @property
    def n(self) -> int:
        return sum(block.dim for block in self.blocks)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, start = [], 0
        for block in self.blocks:
            out.append(start)
            start += block.dim
        return tuple(out)

    def block_index(self, index: int) -> int:
        """Index of the block containing row/column ``index``."""
        if not 0 <= index < self.n:
            raise IndexError(f"Index {index} outside 0..{self.n - 1}")
        for position, offset in enumerate(self.offsets):
            if index < offset + self.blocks[position].dim:
                return position
        raise AssertionError("unreachable")

    def locate(self, index: int) -> tuple[int, int]:
        """``(block index, offset within block)`` of a row/column index."""
        position = self.block_index(index)
        return position, index - self.offsets[position]


@dataclass(frozen=True)
class PencilMeta:
    """What the pencil's determinant represents.

    The determinant equals ``sign * expected_factor * target``; the factor is
    ``m!`` for the subset-pair constructions and 1 otherwise. Every term of
    the expansion uses ``scaling_exponent`` constant entries, so scaling all
    constants by ``factor ** (-1/scaling_exponent)`` removes the factor.
    """

    construction: str
    target: str
    sign: int = 1
    scaling_exponent: int = 0
    expected_factor: Rational = 1
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __hash__(self) -> int:
        return hash(
            (
                self.construction,
                self.target,
                self.sign,
                self.scaling_exponent,
                self.expected_factor,
                tuple(sorted(self.params.items())),
            )
        )

    def __reduce__(self):
        return (
            PencilMeta,
            (
                self.construction,
                self.target,
                self.sign,
                self.scaling_exponent,
                self.expected_factor,
                dict(self.params),
            ),
        )


@dataclass(frozen=True)
class PencilMatrix:
    """``n × n`` pencil over the ``arg_shape`` argument grid."""

    n: int
    m: int
    arg_shape: tuple[int, int]
    layout: BlockLayout
    meta: PencilMeta
    forms: Mapping[tuple[int, int], AffineForm]

    def __post_init__(self):
        object.__setattr__(self, "forms", MappingProxyType(dict(self.forms)))
        if self.layout.n != self.n:
            raise DimensionError(f"Layout covers {self.layout.n} indices but the pencil has n={self.n}")
        rows, cols = self.arg_shape
        for (r, c), form in self.forms.items():
            if not (0 <= r < self.n and 0 <= c < self.n):
                raise DimensionError(f"Entry ({r}, {c}) outside a {self.n}x{self.n} pencil")
            if form.is_zero():
                raise ValueError(f"Zero form stored at ({r}, {c})")
            for variable in form.variables():
                if not (1 <= variable.row <= rows and 1 <= variable.col <= cols):
                    raise DimensionError(f"Variable {variable} outside argument shape {self.arg_shape}")

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.arg_shape, self.layout, self.meta, frozenset(self.forms.items())))

    def __reduce__(self):
        # mappingproxy does not pickle; worker processes receive a plain dict
        return (PencilMatrix, (self.n, self.m, self.arg_shape, self.layout, self.meta, dict(self.forms)))

    def entry(self, row: int, col: int) -> AffineForm:
        return self.forms.get((row, col), ZERO_FORM)

    def is_integral(self) -> bool:
        return all(form.is_integral() for form in self.forms.values())

    def variables(self) -> list[Variable]:
        """All variables of the argument grid, row-major."""
        rows, cols = self.arg_shape
        return [Variable(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]

    def constant_part(self) -> dict[tuple[int, int], Rational]:
        return {rc: form.constant for rc, form in self.forms.items() if form.constant != 0}

    def coefficient_parts(self) -> dict[Variable, dict[tuple[int, int], Rational]]:
        """Sparse ``A_v`` for each variable that occurs in the pencil."""
        parts: dict[Variable, dict[tuple[int, int], Rational]] = {}
        for rc, form in self.forms.items():
            for variable, coefficient in form.linear:
                parts.setdefault(variable, {})[rc] = coefficient
        return parts

    def constant_matrix(self) -> IntMatrix:
        array = np.empty((self.n, self.n), dtype=object)
        array.fill(0)
        for (r, c), value in self.constant_part().items():
            array[r, c] = value
        return IntMatrix(array)

    def with_forms(self, forms: Mapping[tuple[int, int], AffineForm]) -> PencilMatrix:
        cleaned = {rc: form for rc, form in forms.items() if not form.is_zero()}
        return PencilMatrix(self.n, self.m, self.arg_shape, self.layout, self.meta, cleaned)


class PencilBuilder:
    """Accumulates entries of a pencil before freezing it into a :class:`PencilMatrix`."""

    def __init__(self, n: int):
        self.n = n
        self._constants: dict[tuple[int, int], Rational] = {}
        self._terms: dict[tuple[int, int], list[tuple[Variable, Rational]]] = {}

    def set_constant(self, row: int, col: int, value: Rational) -> None:
        self._constants[(row, col)] = value

    def add_linear(self, row: int, col: int, variable: Variable, coefficient: Rational = 1) -> None:
        self._terms.setdefault((row, col), []).append((variable, coefficient))

    def build(
        self, m: int, arg_shape: tuple[int, int], layout: BlockLayout, meta: PencilMeta
    ) -> PencilMatrix:
        forms = {}
        for rc in set(self._constants) | set(self._terms):
            form = AffineForm.build(self._constants.get(rc, 0), self._terms.get(rc, ()))
            if not form.is_zero():
                forms[rc] = form
        return PencilMatrix(self.n, m, tuple(arg_shape), layout, meta, forms)


def _check_point(pencil: PencilMatrix, point: Any) -> list[list[Any]]:
    rows = point.to_rows() if isinstance(point, IntMatrix) else [list(row) for row in point]
    shape = (len(rows), len(rows[0]) if rows else 0)
    if shape != tuple(pencil.arg_shape) or any(len(row) != shape[1] for row in rows):
        raise DimensionError(f"Point has shape {shape}, expected {tuple(pencil.arg_shape)}")
    return rows


def pencil_eval(pencil: PencilMatrix, point: Any) -> IntMatrix:
    """Substitute an integer or rational argument grid into every entry."""
    grid = _check_point(pencil, point)
    array = np.empty((pencil.n, pencil.n), dtype=object)
    array.fill(0)
    for (r, c), form in pencil.forms.items():
        array[r, c] = form.evaluate(grid)
    return IntMatrix(array)


def pencil_eval_mod(pencil: PencilMatrix, point: Any, prime: int) -> np.ndarray:
    """Residue matrix of the pencil at ``point`` modulo ``prime`` as an object array."""
    grid = _check_point(pencil, point)
    array = np.empty((pencil.n, pencil.n), dtype=object)
    array.fill(0)
    for (r, c), form in pencil.forms.items():
        array[r, c] = form.evaluate_mod(grid, prime)
    return array


# JSON export -----------------------------------------------------------------


def encode_number(value: Rational) -> int | str:
    """JSON-safe number: ints beyond 53 bits become strings, fractions ``"p/q"``."""
    value = _normalize(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if abs(value).bit_length() > JSON_SAFE_INT_BITS:
        return str(value)
    return value


def decode_number(value: int | str) -> Rational:
    if isinstance(value, bool):
        raise ValueError(f"Unexpected boolean in numeric field: {value}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return _normalize(Fraction(value)) if "/" in value else int(value)
    raise ValueError(f"Unsupported numeric value: {value!r}")


def export_pencil(pencil: PencilMatrix) -> dict[str, Any]:
    """Deterministic JSON-ready description of a pencil."""
    constant = [[0] * pencil.n for _ in range(pencil.n)]
    for (r, c), value in pencil.constant_part().items():
        constant[r][c] = encode_number(value)
    linear = []
    for (r, c) in sorted(pencil.forms):
        for variable, coefficient in pencil.forms[(r, c)].linear:
            linear.append(
                {
                    "row": r,
                    "col": c,
                    "var": [variable.row, variable.col],
                    "coeff": encode_number(coefficient),
                }
            )
    meta = pencil.meta
    return {
        "construction": meta.construction,
        "target": meta.target,
        "m": pencil.m,
        "n": pencil.n,
        "arg_shape": list(pencil.arg_shape),
        "layout": [
            {
                "label": block.label,
                "dim": block.dim,
                "basis": block.basis.value,
                "degree": block.degree,
                "exterior": block.exterior,
            }
            for block in pencil.layout.blocks
        ],
        "constant": constant,
        "linear": linear,
        "sign": meta.sign,
        "scaling_exponent": meta.scaling_exponent,
        "expected_factor": encode_number(meta.expected_factor),
        "params": dict(sorted(meta.params.items())),
    }


def pencil_to_json(pencil: PencilMatrix, pretty: bool = False) -> str:
    return json.dumps(export_pencil(pencil), indent=2 if pretty else None, sort_keys=False)


def import_pencil(data: Mapping[str, Any]) -> PencilMatrix:
    """Rebuild a pencil from :func:`export_pencil` output."""
    try:
        n = int(data["n"])
        blocks = tuple(
            Block(
                label=b["label"],
                dim=int(b["dim"]),
                basis=BasisKind(b["basis"]),
                degree=int(b.get("degree", 0)),
                exterior=bool(b.get("exterior", False)),
            )
            for b in data["layout"]
        )
        builder = PencilBuilder(n)
        for r, row in enumerate(data["constant"]):
            for c, value in enumerate(row):
                number = decode_number(value)
                if number:
                    builder.set_constant(r, c, number)
        for term in data["linear"]:
            builder.add_linear(
                int(term["row"]), int(term["col"]), Variable(*term["var"]), decode_number(term["coeff"])
            )
        meta = PencilMeta(
            construction=data["construction"],
            target=data["target"],
            sign=int(data.get("sign", 1)),
            scaling_exponent=int(data.get("scaling_exponent", 0)),
            expected_factor=decode_number(data.get("expected_factor", 1)),
            params=dict(data.get("params", {})),
        )
        return builder.build(int(data["m"]), tuple(data["arg_shape"]), BlockLayout(blocks), meta)
    except (KeyError, TypeError) as e:
        raise ValueError(f"Malformed pencil description: {e}") from e


def pencil_from_json(text: str) -> PencilMatrix:
    return import_pencil(json.loads(text))
