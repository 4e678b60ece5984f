"""Sparse multivariate polynomials over arbitrary-precision integers.

Polynomials are the verification currency of detrep: symbolic determinants of
pencils are expanded into :class:`Polynomial` values and compared with the
permutation-sum oracles term by term.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Hashable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any

logger = logging.getLogger(__name__)


class UnassignedVariableError(ValueError):
    """Raised when a polynomial is evaluated at a point missing one of its variables."""

    def __init__(self, variable: Hashable):
        super().__init__(f"Variable {variable} is not assigned at the evaluation point")
        self.variable = variable


@dataclass(frozen=True, slots=True)
class Monomial:
    """A product of variables with positive exponents.

    ``exponents`` is kept sorted by variable id and never stores a zero exponent,
    so two equal monomials always have equal tuples.
    """

    exponents: tuple[tuple[Any, int], ...] = ()

    def __post_init__(self):
        previous = None
        for variable, exponent in self.exponents:
            if exponent <= 0:
                raise ValueError(f"Monomial exponent must be positive, got {exponent}")
            if previous is not None and not previous < variable:
                raise ValueError("Monomial variables must be strictly increasing")
            previous = variable

    @classmethod
    def one(cls) -> Monomial:
        return cls(())

    @classmethod
    def of(cls, variable: Hashable, exponent: int = 1) -> Monomial:
        if exponent == 0:
            return cls(())
        return cls(((variable, exponent),))

    @classmethod
    def from_mapping(cls, exponents: Mapping[Any, int]) -> Monomial:
        """Build a monomial from a variable -> exponent mapping, dropping zeros."""
        for variable, exponent in exponents.items():
            if exponent < 0:
                raise ValueError(f"Negative exponent {exponent} for {variable}")
        return cls(tuple(sorted((v, e) for v, e in exponents.items() if e)))

    @property
    def degree(self) -> int:
        return sum(exponent for _, exponent in self.exponents)

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.exponents)

    def variables(self) -> tuple[Any, ...]:
        return tuple(variable for variable, _ in self.exponents)

    def __mul__(self, other: Monomial) -> Monomial:
        if not self.exponents:
            return other
        if not other.exponents:
            return self
        merged = dict(self.exponents)
        for variable, exponent in other.exponents:
            merged[variable] = merged.get(variable, 0) + exponent
        return Monomial(tuple(sorted(merged.items())))

    def evaluate(self, point: Mapping[Any, Any]) -> Any:
        value: Any = 1
        for variable, exponent in self.exponents:
            if variable not in point:
                raise UnassignedVariableError(variable)
            value *= point[variable] ** exponent
        return value

    def format(self, name: Callable[[Any], str] = str) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for variable, exponent in self.exponents:
            label = name(variable)
            parts.append(label if exponent == 1 else f"{label}**{exponent}")
        return "*".join(parts)

    def __str__(self) -> str:
        return self.format()


class Polynomial:
    """Immutable sparse polynomial with integer coefficients.

    Terms map :class:`Monomial` to nonzero ``int``; the zero polynomial has no
    terms. Equality and hashing do not depend on insertion order.
    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        cleaned: dict[Monomial, int] = {}
        if terms:
            for monomial, coefficient in terms.items():
                if not isinstance(coefficient, int):
                    raise TypeError(
                        f"Polynomial coefficients must be integers, got {type(coefficient).__name__}"
                    )
                if coefficient:
                    cleaned[monomial] = coefficient
        self._terms = cleaned
        self._hash: int | None = None

    @classmethod
    def _from_clean(cls, terms: dict[Monomial, int]) -> Polynomial:
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> Polynomial:
        return cls._from_clean({})

    @classmethod
    def constant(cls, value: int) -> Polynomial:
        return cls({Monomial.one(): value})

    @classmethod
    def variable(cls, variable: Hashable, coefficient: int = 1) -> Polynomial:
        return cls({Monomial.of(variable): coefficient})

    # Introspection -----------------------------------------------------------

    def terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical order: by degree, then by exponent tuple."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key)

    def coefficient(self, monomial: Monomial) -> int:
        return self._terms.get(monomial, 0)

    def variables(self) -> set[Any]:
        found: set[Any] = set()
        for monomial in self._terms:
            found.update(monomial.variables())
        return found

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max(monomial.degree for monomial in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms())

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Ring operations ---------------------------------------------------------

    @staticmethod
    def _coerce(other: Any) -> Polynomial | None:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.constant(other)
        return None

    def __add__(self, other: Any) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if not rhs._terms:
            return self
        if not self._terms:
            return rhs
        result = dict(self._terms)
        for monomial, coefficient in rhs._terms.items():
            total = result.get(monomial, 0) + coefficient
            if total:
                result[monomial] = total
            else:
                result.pop(monomial, None)
        return Polynomial._from_clean(result)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> Polynomial:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: Any) -> Polynomial:
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial.zero()
        result: dict[Monomial, int] = {}
        for left, a in self._terms.items():
            for right, b in other._terms.items():
                monomial = left * right
                total = result.get(monomial, 0) + a * b
                if total:
                    result[monomial] = total
                else:
                    result.pop(monomial, None)
        return Polynomial._from_clean(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Polynomial exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: int) -> Polynomial:
        if not factor:
            return Polynomial.zero()
        return Polynomial._from_clean({m: c * factor for m, c in self._terms.items()})

    def exact_divide(self, divisor: int) -> Polynomial:
        """Divide every coefficient by ``divisor``; raises if any division is inexact."""
        if divisor == 0:
            raise ZeroDivisionError("Polynomial division by zero")
        result = {}
        for monomial, coefficient in self._terms.items():
            quotient, remainder = divmod(coefficient, divisor)
            if remainder:
                raise ValueError(
                    f"Coefficient {coefficient} of {monomial} is not divisible by {divisor}"
                )
            result[monomial] = quotient
        return Polynomial._from_clean(result)

    # Evaluation --------------------------------------------------------------

    def evaluate(self, point: Mapping[Any, Any]) -> Any:
        total: Any = 0
        for monomial, coefficient in self._terms.items():
            total += coefficient * monomial.evaluate(point)
        return total

    def evaluate_mod(self, point: Mapping[Any, int], prime: int) -> int:
        total = 0
        for monomial, coefficient in self._terms.items():
            value = coefficient % prime
            for variable, exponent in monomial.exponents:
                if variable not in point:
                    raise UnassignedVariableError(variable)
                value = value * pow(point[variable], exponent, prime) % prime
            total += value
        return total % prime

    # Comparison and display --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def format(self, name: Callable[[Any], str] = str) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for monomial, coefficient in self.terms():
            body = monomial.format(name)
            if body == "1":
                text = str(abs(coefficient))
            elif abs(coefficient) == 1:
                text = body
            else:
                text = f"{abs(coefficient)}*{body}"
            sign = "-" if coefficient < 0 else "+"
            pieces.append((sign, text))
        first_sign, first_text = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r})"


def poly_arith(op: str, p: Polynomial, q: Polynomial) -> Polynomial:
    """Apply ``add`` or ``mul`` to two polynomials."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"Unknown polynomial operation: {op}. Available operations: add, mul")


def poly_eval(p: Polynomial, point: Mapping[Any, int]) -> int:
    """Evaluate ``p`` exactly; every variable of ``p`` must be assigned."""
    return p.evaluate(point)
