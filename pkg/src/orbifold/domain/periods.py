"""
Hyper-Kähler period triples (x1, x2, x3) in the K3 lattice.

x_i = v1 + 2 v2 in the block H_i; a perturbation adds u1 + u2 from the two
(-E8) blocks to x1. Equal norms are tracked with squared scales: the
effective norm of x_i is scale_i * (x_i . x_i) with scale_1 = 1.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, isqrt

from src.config import E8_NODES, PipelineConfig
from src.lattice.lattices import (
    E8_BLOCKS,
    H_BLOCKS,
    IntegerLattice,
    RationalLatticeVector,
    generic_orthogonal_vector,
    inner_product,
)
from src.orbifold.domain.models import CheckResult
from src.shared.errors import InvalidSpecError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("Periods")


@dataclass(frozen=True)
class PeriodTriple:
    lattice: IntegerLattice
    x1: RationalLatticeVector
    x2: RationalLatticeVector
    x3: RationalLatticeVector
    scale2: Fraction = Fraction(1)
    scale3: Fraction = Fraction(1)
    perturbations: tuple[RationalLatticeVector, ...] = field(default=())
    keep_sets: tuple[frozenset[int], ...] | None = None

    @property
    def vectors(self) -> tuple[RationalLatticeVector, RationalLatticeVector, RationalLatticeVector]:
        return (self.x1, self.x2, self.x3)

    @property
    def squared_scales(self) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(1), self.scale2, self.scale3)

    @property
    def is_perturbed(self) -> bool:
        return any(not u.is_zero() for u in self.perturbations)

    def effective_norm(self, i: int) -> Fraction:
        x = self.vectors[i]
        return self.squared_scales[i] * inner_product(x, x)

    @property
    def common_norm(self) -> Fraction:
        return self.effective_norm(0)

    def validate(self) -> list[CheckResult]:
        xs = self.vectors
        pairs = [(i, j, inner_product(xs[i], xs[j])) for i in range(3) for j in range(i + 1, 3)]
        skew = [(i + 1, j + 1, str(p)) for i, j, p in pairs if p != 0]
        raw = [inner_product(x, x) for x in xs]
        effective = [self.effective_norm(i) for i in range(3)]
        return [
            CheckResult.of("periods_orthogonal", not skew, skew),
            CheckResult.of("periods_positive", all(n > 0 for n in raw), [str(n) for n in raw]),
            CheckResult.of(
                "periods_equal_effective_norm",
                len(set(effective)) == 1,
                [str(n) for n in effective],
            ),
        ]


def _standard_vector(lattice: IntegerLattice, block: str) -> RationalLatticeVector:
    return (lattice.basis_vector(block, 1) + lattice.basis_vector(block, 2) * 2).as_rational()


def standard_periods(lattice: IntegerLattice) -> PeriodTriple:
    x1, x2, x3 = (_standard_vector(lattice, b) for b in H_BLOCKS)
    full = frozenset(E8_NODES)
    return PeriodTriple(lattice, x1, x2, x3, keep_sets=(full, full))


def _shrink(u: RationalLatticeVector, cap: Fraction) -> RationalLatticeVector:
    """u / m with |u.u| / m^2 < cap, m a positive integer."""
    norm = abs(inner_product(u, u))
    if norm == 0:
        return u
    m = isqrt(ceil(norm / cap)) + 1
    return u * Fraction(1, m)


def periods_for_keep_sets(
    lattice: IntegerLattice, keep1: Iterable[int], keep2: Iterable[int]
) -> PeriodTriple:
    """
    Periods whose orthogonal roots in (-E8)^i are spanned by keep_i. A full
    keep set leaves its block unperturbed.
    """
    keeps = (frozenset(keep1), frozenset(keep2))
    full = frozenset(E8_NODES)
    if keeps == (full, full):
        return standard_periods(lattice)

    per_block_cap = PipelineConfig.PERTURBATION_NORM_CAP / 2
    perturbations = []
    for block, keep in zip(E8_BLOCKS, keeps, strict=True):
        if keep == full:
            perturbations.append(lattice.rational_vector([0] * lattice.rank))
            continue
        u = generic_orthogonal_vector(lattice, block, keep)
        perturbations.append(_shrink(u, per_block_cap))

    u1, u2 = perturbations
    x1 = _standard_vector(lattice, H_BLOCKS[0]) + u1 + u2
    x2, x3 = (_standard_vector(lattice, b) for b in H_BLOCKS[1:])
    length = 4 + inner_product(u1, u1) + inner_product(u2, u2)
    if length <= 0:
        raise InvalidSpecError("perturbation leaves no positive length for x1", witness=str(length))
    scale = length / 4
    _telemetry.log_info(
        "periods_perturbed",
        keep1=sorted(keeps[0]),
        keep2=sorted(keeps[1]),
        length=str(length),
    )
    return PeriodTriple(lattice, x1, x2, x3, scale, scale, (u1, u2), keeps)


def perturbed_periods(lattice: IntegerLattice, keep1: Iterable[int], keep2: Iterable[int]) -> PeriodTriple:
    """As periods_for_keep_sets, but both keep sets must be proper."""
    keeps = [frozenset(keep1), frozenset(keep2)]
    for keep in keeps:
        if keep == frozenset(E8_NODES):
            raise InvalidSpecError("keep sets must be proper subsets of the E8 nodes", witness=sorted(keep))
    return periods_for_keep_sets(lattice, *keeps)
