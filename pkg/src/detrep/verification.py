"""Verification suites: identity, regularity and equivariance checks for one construction."""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from tqdm import tqdm

from detrep_core.constructions import create_pencil, waring_expand, waring_terms
from detrep_core.determinants import (
    DEFAULT_SYMBOLIC_BOUND,
    SIGN_CHECK_MAX_N,
    LayoutError,
    SymbolicBoundError,
    cyclic_structure,
)
from detrep_core.identity_testing import (
    VerificationReport,
    float_identity,
    pencil_pit_equal,
    structured_identity,
    symbolic_identity,
)
from detrep_core.oracles import get_target
from detrep_core.pencil import PencilMatrix, Variable
from detrep_core.polynomial import Monomial, Polynomial
from detrep_core.symmetry import (
    LIFT_FAMILIES,
    ActionKind,
    IncompatibleActionError,
    check_equivariance,
    check_regularity,
    random_group_element,
)

logger = logging.getLogger(__name__)

MODES = ("symbolic", "pit", "structured", "all")
EQUIVARIANCE_LEVELS = ("none", "left", "full")
NON_REGULAR_CONSTRUCTIONS = frozenset({"trivial_det"})
# independent random streams per equivariance suite
SIDE_STREAMS = {"left": 1, "right": 2}


@dataclass
class VerifyOptions:
    """Everything a verification run depends on; the same options give the same report."""

    construction: str
    size: int
    mode: str = "all"
    trials: int = 20
    seed: int = 0
    primes: tuple[int, ...] = ()
    equivariance: str = "none"
    samples: int = 20
    jobs: int = 1
    symbolic_bound: int = DEFAULT_SYMBOLIC_BOUND
    sign_check_bound: int = SIGN_CHECK_MAX_N
    float_check: bool = False
    exact_sign: bool = True
    symmetric: bool = False
    progress: bool = False


@dataclass
class SuiteReport:
    construction: str
    size: int
    n: int | None
    seed: int
    checks: list[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.verdict != "fail" for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "construction": self.construction,
            "size": self.size,
            "n": self.n,
            "seed": self.seed,
            "verdict": "pass" if self.passed else "fail",
            "checks": [check.to_dict() for check in self.checks],
        }


def build_pencil(construction: str, size: int, exact_sign: bool = True) -> PencilMatrix:
    options = {"exact_sign": exact_sign} if construction == "grenet" else {}
    return create_pencil(construction, size, **options)


def verify_waring(options: VerifyOptions) -> SuiteReport:
    """Check that the power-sum decomposition expands to ``x_1 ⋯ x_n`` exactly."""
    decomposition = waring_terms(options.size, options.symmetric)
    expanded = waring_expand(decomposition)
    product = Polynomial(
        {Monomial.from_mapping({Variable(1, j): 1 for j in range(1, options.size + 1)}): 1}
    )
    ok = expanded == product
    expected_terms = 2**options.size if options.symmetric else 2 ** (options.size - 1)
    ok = ok and decomposition.rank == expected_terms
    report = VerificationReport(
        check="identity",
        mode="symbolic",
        verdict="pass" if ok else "fail",
        witness=None if ok else {"expanded": expanded.format(), "terms": decomposition.rank},
        detail=f"{decomposition.rank} terms expand to x_1*...*x_{options.size}",
    )
    if options.equivariance != "none":
        logger.warning("Equivariance checks do not apply to waring decompositions; skipped")
    return SuiteReport("waring", options.size, None, options.seed, [report])


def _symbolic_or_structured(pencil: PencilMatrix, options: VerifyOptions) -> VerificationReport:
    if pencil.n <= options.symbolic_bound:
        return symbolic_identity(pencil, options.symbolic_bound)
    try:
        cyclic_structure(pencil)
    except LayoutError as e:
        raise SymbolicBoundError(
            f"n={pencil.n} exceeds the symbolic bound {options.symbolic_bound} "
            f"and the pencil has no cyclic layout: {e}"
        ) from e
    logger.info(f"n={pencil.n} exceeds the symbolic bound; using the structured path expansion")
    return structured_identity(pencil, options.sign_check_bound)


def identity_checks(pencil: PencilMatrix, options: VerifyOptions) -> list[VerificationReport]:
    if options.mode not in MODES:
        raise ValueError(f"Unknown mode: {options.mode}. Available modes: {', '.join(MODES)}")
    reports = []
    if options.mode in ("symbolic", "all"):
        reports.append(_symbolic_or_structured(pencil, options))
    if options.mode == "structured":
        reports.append(structured_identity(pencil, options.sign_check_bound))
    if options.mode in ("pit", "all"):
        reports.append(
            pencil_pit_equal(
                pencil,
                get_target(pencil.meta.target).evaluate,
                trials=options.trials,
                primes=options.primes or None,
                seed=options.seed,
                jobs=options.jobs,
                progress=options.progress,
            )
        )
    return reports


def _side_kind(construction: str, side: str) -> ActionKind:
    pairs, exterior, _ = LIFT_FAMILIES[construction]
    if side == "left" and not pairs:
        return ActionKind.GL_SIDE if exterior else ActionKind.PERM_SIDE
    return ActionKind.GL_PAIR if exterior else ActionKind.PERM_PAIR


def equivariance_suite(
    pencil: PencilMatrix, side: str, samples: int, seed: int, progress: bool = False
) -> VerificationReport:
    """Check ``samples`` seeded elements acting on one side (or the transposition)."""
    construction = pencil.meta.construction
    if construction not in LIFT_FAMILIES:
        raise IncompatibleActionError(f"No symmetry lift is known for {construction}")
    if side == "transpose":
        elements = [random_group_element(ActionKind.TRANSPOSE, pencil.m, np.random.default_rng(seed))]
    else:
        rng = np.random.default_rng((seed, SIDE_STREAMS[side]))
        kind = _side_kind(construction, side)
        elements = [random_group_element(kind, pencil.m, rng, side=side) for _ in range(samples)]
    passed = 0
    witness = None
    for element in tqdm(elements, desc=f"equivariance-{side}", disable=not progress, leave=False):
        report = check_equivariance(pencil, element)
        if report.passed:
            passed += 1
        elif witness is None:
            witness = {"element": element.describe(), **(report.witness or {})}
    ok = passed == len(elements)
    logger.info(f"{construction} {side} equivariance: {passed}/{len(elements)} elements pass")
    return VerificationReport(
        check=f"equivariance-{side}",
        mode="exact",
        verdict="pass" if ok else "fail",
        trials=len(elements),
        seed=seed,
        witness=witness,
        detail=f"{passed}/{len(elements)} elements pass",
    )


def run_verification(options: VerifyOptions) -> SuiteReport:
    """Run the identity, regularity and requested equivariance checks."""
    if options.equivariance not in EQUIVARIANCE_LEVELS:
        raise ValueError(
            f"Unknown equivariance level: {options.equivariance}. "
            f"Available levels: {', '.join(EQUIVARIANCE_LEVELS)}"
        )
    if options.construction == "waring":
        return verify_waring(options)

    pencil = build_pencil(options.construction, options.size, options.exact_sign)
    logger.info(f"Verifying {pencil.meta.construction} with n={pencil.n}")
    suite = SuiteReport(options.construction, options.size, pencil.n, options.seed)
    suite.checks.extend(identity_checks(pencil, options))

    if options.float_check:
        suite.checks.append(float_identity(pencil, options.seed))

    if pencil.meta.construction in NON_REGULAR_CONSTRUCTIONS:
        regularity = check_regularity(pencil)
        regularity.verdict = "skip"
        regularity.witness = None
        suite.checks.append(regularity)
    else:
        suite.checks.append(check_regularity(pencil))

    if options.equivariance != "none":
        sides = ["left"]
        if options.equivariance == "full":
            sides.append("right")
            pairs = LIFT_FAMILIES.get(pencil.meta.construction, (False,))[0]
            if pairs:
                sides.append("transpose")
        for side in sides:
            suite.checks.append(
                equivariance_suite(pencil, side, options.samples, options.seed, options.progress)
            )
    return suite
