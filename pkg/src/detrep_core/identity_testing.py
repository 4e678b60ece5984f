"""Checking ``det(pencil) = sign · factor · target`` symbolically and by random evaluation."""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from tqdm import tqdm

from .determinants import (
    DEFAULT_SYMBOLIC_BOUND,
    SIGN_CHECK_MAX_N,
    pencil_symbolic_det,
    pencil_symbolic_path_det,
    scaled_float_det,
)
from .linalg import Rational, det_mod_p, residue
from .oracles import get_target
from .pencil import PencilMatrix, pencil_eval_mod
from .polynomial import Polynomial

logger = logging.getLogger(__name__)

MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
DEFAULT_PRIME_COUNT = 3
PRIME_CEILING = 2**61
FLOAT_TOLERANCE = 1e-9

TargetFn = Callable[[Sequence[Sequence[int]]], Any]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3 · 10^24``."""
    if n < 2:
        return False
    for p in MILLER_RABIN_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@functools.lru_cache(maxsize=8)
def default_primes(count: int = DEFAULT_PRIME_COUNT, below: int = PRIME_CEILING) -> tuple[int, ...]:
    """The ``count`` largest primes strictly below ``below``, descending."""
    found: list[int] = []
    candidate = below - 1
    while len(found) < count and candidate >= 2:
        if is_prime(candidate):
            found.append(candidate)
        candidate -= 1
    return tuple(found)


@dataclass
class VerificationReport:
    """Outcome of one check; ``witness`` is set exactly when the check failed."""

    check: str
    mode: str
    verdict: str
    trials: int = 0
    primes: tuple[int, ...] = ()
    seed: int | None = None
    witness: dict[str, Any] | None = None
    detail: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["primes"] = list(self.primes)
        return data


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def expected_scale(pencil: PencilMatrix) -> Rational:
    """``sign · expected_factor`` from the pencil metadata."""
    return pencil.meta.sign * pencil.meta.expected_factor


def _run_trial(
    pencil: PencilMatrix, target: TargetFn, trial: int, seed: int, primes: tuple[int, ...]
) -> dict[str, Any] | None:
    rng = np.random.default_rng(seed + trial)
    scale = expected_scale(pencil)
    for prime in primes:
        point = rng.integers(0, prime, size=pencil.arg_shape, dtype=np.int64).tolist()
        pencil_residue = det_mod_p(pencil_eval_mod(pencil, point, prime), prime)
        target_residue = residue(scale, prime) * (target(point) % prime) % prime
        if pencil_residue != target_residue:
            return {
                "trial": trial,
                "prime": prime,
                "point": point,
                "pencil_residue": pencil_residue,
                "target_residue": target_residue,
            }
    return None


def pencil_pit_equal(
    pencil: PencilMatrix,
    target: TargetFn,
    trials: int = 20,
    primes: Sequence[int] | None = None,
    seed: int = 0,
    jobs: int = 1,
    progress: bool = False,
) -> VerificationReport:
    """Schwartz-Zippel comparison of ``det(pencil)`` with the target modulo primes.

    Trial ``i`` draws every point from ``numpy.random.default_rng(seed + i)``,
    so results do not depend on ``jobs``. Stops at the first mismatch.
    """
    if trials < 1:
        raise ValueError(f"Trial count must be positive, got {trials}")
    primes = tuple(primes) if primes else default_primes()
    run = functools.partial(_run_trial, pencil, target, seed=seed, primes=primes)
    witness = None
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for result in executor.map(run, range(trials)):
                if result is not None:
                    witness = result
                    break
    else:
        for trial in tqdm(range(trials), desc="pit", disable=not progress, leave=False):
            witness = run(trial)
            if witness is not None:
                break
    if witness is not None:
        logger.info(
            f"PIT mismatch for {pencil.meta.construction} at trial {witness['trial']} "
            f"modulo {witness['prime']}"
        )
    return VerificationReport(
        check="identity",
        mode="pit",
        verdict=_verdict(witness is None),
        trials=trials,
        primes=primes,
        seed=seed,
        witness=witness,
        detail=f"det == {expected_scale(pencil)} * {pencil.meta.target}",
    )


def _polynomial_witness(actual: Polynomial, expected: Polynomial) -> dict[str, Any]:
    difference = actual - expected
    monomial, _ = difference.terms()[0]
    return {
        "monomial": monomial.format(),
        "pencil_coefficient": actual.coefficient(monomial),
        "target_coefficient": expected.coefficient(monomial),
        "differing_terms": len(difference),
    }


def _compare_polynomials(
    pencil: PencilMatrix, actual: Polynomial, mode: str
) -> VerificationReport:
    scale = expected_scale(pencil)
    if not isinstance(scale, int):
        raise ValueError(f"Symbolic comparison needs an integer scale, got {scale}")
    expected = get_target(pencil.meta.target).polynomial(pencil.arg_shape).scale(scale)
    ok = actual == expected
    return VerificationReport(
        check="identity",
        mode=mode,
        verdict=_verdict(ok),
        witness=None if ok else _polynomial_witness(actual, expected),
        detail=f"{len(actual)} terms, det == {scale} * {pencil.meta.target}",
    )


def symbolic_identity(pencil: PencilMatrix, bound: int = DEFAULT_SYMBOLIC_BOUND) -> VerificationReport:
    """Exact check through the column-subset expansion (``n <= bound``)."""
    return _compare_polynomials(pencil, pencil_symbolic_det(pencil, bound), "symbolic")


def structured_identity(
    pencil: PencilMatrix, check_bound: int = SIGN_CHECK_MAX_N
) -> VerificationReport:
    """Exact check through the cyclic path formula, for any ``n``."""
    return _compare_polynomials(pencil, pencil_symbolic_path_det(pencil, check_bound), "structured")


def float_identity(
    pencil: PencilMatrix, seed: int = 0, rel_tol: float = FLOAT_TOLERANCE, bound: int = 3
) -> VerificationReport:
    """Floating-point check of the constant-rescaled pencil at one small random point."""
    rng = np.random.default_rng(seed)
    point = rng.integers(-bound, bound + 1, size=pencil.arg_shape).tolist()
    value = scaled_float_det(pencil, point)
    target = get_target(pencil.meta.target).evaluate(point)
    meta = pencil.meta
    remaining = 1 if meta.scaling_exponent else meta.expected_factor
    expected = float(meta.sign * remaining * target)
    ok = math.isclose(value, expected, rel_tol=rel_tol, abs_tol=rel_tol * max(1.0, abs(expected)))
    return VerificationReport(
        check="float",
        mode="float",
        verdict=_verdict(ok),
        seed=seed,
        witness=None if ok else {"point": point, "float_det": value, "expected": expected},
        detail=f"rescaled det {value:.12g} vs {expected:.12g}",
    )
