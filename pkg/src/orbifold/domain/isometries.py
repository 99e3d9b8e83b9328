"""
The lattice isometries psi1, psi2 paired with the torus generators.

Each psi is a sign map: +-Id on every H block and, on the E8 blocks, either
the identity (BLOCKWISE) or +-Id matching its sign on x1 (EXTENDED, only
for perturbed periods).
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.algebra.linear import determinant, int_matrix, rat_matrix, solve_rational
from src.config import OrbifoldKind
from src.lattice.lattices import (
    E8_BLOCKS,
    H_BLOCKS,
    IntegerLattice,
    RationalLatticeVector,
)
from src.orbifold.domain.models import CheckResult, IsometryReading
from src.orbifold.domain.periods import PeriodTriple
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("Isometries")

Signs = tuple[int, ...]

# Sign of each psi on (x1, x2, x3), i.e. on the blocks H^1, H^2, H^3.
SIGN_TABLES: dict[OrbifoldKind, tuple[Signs, Signs]] = {
    OrbifoldKind.FIRST: ((-1, -1, 1), (-1, 1, -1)),
    OrbifoldKind.SECOND: ((-1, -1, 1), (1, -1, -1)),
}


@dataclass(frozen=True, eq=False)
class LatticeIsometry:
    name: str
    lattice: IntegerLattice
    matrix: np.ndarray
    h_signs: Signs
    e8_signs: Signs

    @classmethod
    def sign_map(
        cls, name: str, lattice: IntegerLattice, h_signs: Sequence[int], e8_signs: Sequence[int] = (1, 1)
    ) -> "LatticeIsometry":
        diagonal = [0] * lattice.rank
        for block, s in zip((*H_BLOCKS, *E8_BLOCKS), (*h_signs, *e8_signs), strict=True):
            for i in lattice.block(block).indices:
                diagonal[i] = s
        matrix = int_matrix([[diagonal[i] if i == j else 0 for j in range(lattice.rank)] for i in range(lattice.rank)])
        return cls(name, lattice, matrix, tuple(h_signs), tuple(e8_signs))

    def apply(self, v: RationalLatticeVector) -> RationalLatticeVector:
        coords = [
            sum((self.matrix[i, j] * v.coordinates[j] for j in range(self.lattice.rank)), Fraction(0))
            for i in range(self.lattice.rank)
        ]
        return self.lattice.rational_vector(coords)

    def preserves_gram(self) -> bool:
        return bool((self.matrix.T.dot(self.lattice.gram).dot(self.matrix) == self.lattice.gram).all())

    def is_involution(self) -> bool:
        n = self.lattice.rank
        square = self.matrix.dot(self.matrix)
        return all(square[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def commutes_with(self, other: "LatticeIsometry") -> bool:
        return bool((self.matrix.dot(other.matrix) == other.matrix.dot(self.matrix)).all())

    def restricted_to_periods(self, periods: PeriodTriple) -> np.ndarray | None:
        """3x3 matrix of psi on span(x1, x2, x3), or None if the span is not preserved."""
        basis = rat_matrix([[x.coordinates[i] for x in periods.vectors] for i in range(self.lattice.rank)])
        columns = []
        for x in periods.vectors:
            solution = solve_rational(basis, self.apply(x).coordinates)
            if solution is None:
                return None
            columns.append(solution)
        return rat_matrix([[columns[j][i] for j in range(3)] for i in range(3)])


@dataclass
class IsometryPair:
    kind: OrbifoldKind
    reading: IsometryReading
    psi1: LatticeIsometry
    psi2: LatticeIsometry
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def isometries(self) -> tuple[LatticeIsometry, LatticeIsometry]:
        return (self.psi1, self.psi2)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)


def positive_cone_criterion(psi: LatticeIsometry, periods: PeriodTriple) -> CheckResult:
    """psi preserves the positive cone iff det(psi | span(x1, x2, x3)) = +1."""
    restricted = psi.restricted_to_periods(periods)
    if restricted is None:
        return CheckResult.of(f"{psi.name}_positive_cone", False, "span of periods not preserved")
    det = determinant(restricted)
    return CheckResult.of(f"{psi.name}_positive_cone", det == 1, det)


def sign_table_check(psi: LatticeIsometry, periods: PeriodTriple, signs: Signs) -> CheckResult:
    mismatched = [
        i + 1 for i, (x, s) in enumerate(zip(periods.vectors, signs, strict=True)) if psi.apply(x) != x * s
    ]
    return CheckResult.of(f"{psi.name}_sign_table", not mismatched, mismatched)


def _e8_signs(h_signs: Signs, periods: PeriodTriple, reading: IsometryReading) -> Signs:
    if reading is IsometryReading.EXTENDED and periods.is_perturbed:
        return (h_signs[0], h_signs[0])
    return (1, 1)


def construct_isometries(
    kind: OrbifoldKind,
    periods: PeriodTriple,
    reading: IsometryReading = IsometryReading.EXTENDED,
) -> IsometryPair:
    lattice = periods.lattice
    psis = [
        LatticeIsometry.sign_map(name, lattice, signs, _e8_signs(signs, periods, reading))
        for name, signs in zip(("psi1", "psi2"), SIGN_TABLES[kind], strict=True)
    ]
    checks: list[CheckResult] = []
    for psi, signs in zip(psis, SIGN_TABLES[kind], strict=True):
        checks.append(CheckResult.of(f"{psi.name}_preserves_gram", psi.preserves_gram()))
        checks.append(CheckResult.of(f"{psi.name}_involution", psi.is_involution()))
        checks.append(sign_table_check(psi, periods, signs))
        checks.append(positive_cone_criterion(psi, periods))
    checks.append(CheckResult.of("psi_commute", psis[0].commutes_with(psis[1])))

    pair = IsometryPair(kind, reading, psis[0], psis[1], checks)
    _telemetry.log_info(
        "isometries_constructed",
        kind=kind.number,
        reading=reading.value,
        e8_signs=[list(p.e8_signs) for p in psis],
        valid=pair.valid,
    )
    return pair


def minus_identity_check(periods: PeriodTriple) -> CheckResult:
    """-Id is an isometry preserving span(x1, x2, x3) but reverses the positive cone."""
    minus = LatticeIsometry.sign_map("minus_identity", periods.lattice, (-1, -1, -1), (-1, -1))
    cone = positive_cone_criterion(minus, periods)
    exception_holds = minus.preserves_gram() and minus.restricted_to_periods(periods) is not None and not cone.passed
    return CheckResult.of("minus_identity_excluded", exception_holds, cone.witness)
