"""
Betti numbers of the resolved quotient of S x T^3.

The group acts on S x T^3 through pairs (psi_h, A_h). Invariant dimensions
come from averaged characters; a second pass intersects the fixed spaces of
the generators and must agree.

    H^2 model: L (x) Q  +  Lambda^2 Q^3
    H^3 model: L (x) Q^3  +  Lambda^3 Q^3
"""

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.algebra.linear import block_diagonal, identity, rank
from src.orbifold.domain.isometries import IsometryPair, LatticeIsometry
from src.orbifold.domain.models import BettiReport, CheckResult
from src.orbifold.domain.periods import PeriodTriple
from src.shared.telemetry import Telemetry
from src.symmetry.torus_actions import AffineTorusIsometry, TorusGroup, named_group, pullback_matrix

_telemetry = Telemetry("Betti")


@dataclass(frozen=True, eq=False)
class PairedElement:
    torus: AffineTorusIsometry
    lattice_matrix: np.ndarray

    @property
    def key(self) -> tuple[AffineTorusIsometry, tuple[int, ...]]:
        return (self.torus, tuple(self.lattice_matrix.flatten().tolist()))

    def __matmul__(self, other: "PairedElement") -> "PairedElement":
        return PairedElement(self.torus @ other.torus, self.lattice_matrix.dot(other.lattice_matrix))


def paired_generators(group: TorusGroup, isometries: Sequence[LatticeIsometry]) -> list[PairedElement]:
    return [PairedElement(g, psi.matrix) for g, psi in zip(group.generators, isometries, strict=True)]


def paired_group(group: TorusGroup, isometries: Sequence[LatticeIsometry]) -> list[PairedElement]:
    """Closure of the generator pairs; its size equals |group| iff h -> psi_h is a homomorphism."""
    generators = paired_generators(group, isometries)
    rank_ = generators[0].lattice_matrix.shape[0]
    start = PairedElement(AffineTorusIsometry.identity(), identity(rank_))
    elements = {start.key: start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for s in generators:
            nxt = current @ s
            if nxt.key not in elements:
                elements[nxt.key] = nxt
                queue.append(nxt)
    return list(elements.values())


def pairing_check(group: TorusGroup, elements: Sequence[PairedElement]) -> CheckResult:
    return CheckResult.of(
        "generator_pairing_consistent",
        len(elements) == group.order,
        f"{len(elements)} pairs for a group of order {group.order}",
    )


# --- Characters ---


def _trace(m: np.ndarray) -> Fraction:
    return sum((Fraction(m[i, i]) for i in range(m.shape[0])), Fraction(0))


def _trace_wedge2(a: np.ndarray) -> Fraction:
    t = _trace(a)
    return (t * t - _trace(a.dot(a))) / 2


def _h2_character(e: PairedElement) -> Fraction:
    return _trace(e.lattice_matrix) + _trace_wedge2(e.torus.matrix)


def _h3_character(e: PairedElement) -> Fraction:
    return _trace(e.lattice_matrix) * _trace(e.torus.matrix) + e.torus.determinant


def _average(values: Sequence[Fraction]) -> int:
    mean = sum(values, Fraction(0)) / len(values)
    if mean.denominator != 1:
        raise ValueError(f"averaged character {mean} is not an integer")
    return int(mean)


def invariant_h2_dimension(elements: Sequence[PairedElement]) -> int:
    return _average([_h2_character(e) for e in elements])


def invariant_h3_dimension(elements: Sequence[PairedElement]) -> int:
    return _average([_h3_character(e) for e in elements])


def invariant_one_forms(elements: Sequence[PairedElement]) -> int:
    return _average([_trace(e.torus.matrix) for e in elements])


# --- Fixed-space intersection ---


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    out = np.array([[0] * cols for _ in range(rows)], dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j]:
                out[i * b.shape[0] : (i + 1) * b.shape[0], j * b.shape[1] : (j + 1) * b.shape[1]] = a[i, j] * b
    return out


def _h2_representation(e: PairedElement) -> np.ndarray:
    return block_diagonal([e.lattice_matrix, pullback_matrix(e.torus.matrix, 2)])


def _h3_representation(e: PairedElement) -> np.ndarray:
    return block_diagonal(
        [_kron(e.lattice_matrix, pullback_matrix(e.torus.matrix, 1)), pullback_matrix(e.torus.matrix, 3)]
    )


def fixed_space_dimension(matrices: Sequence[np.ndarray]) -> int:
    """dim of the common fixed space: n - rank of the stacked (M - I)."""
    n = matrices[0].shape[0]
    stacked = np.vstack([m - identity(n) for m in matrices])
    return n - rank(stacked)


def rank_method(generators: Sequence[PairedElement]) -> tuple[int, int, int]:
    return (
        fixed_space_dimension([_h2_representation(g) for g in generators]),
        fixed_space_dimension([_h3_representation(g) for g in generators]),
        fixed_space_dimension([pullback_matrix(g.torus.matrix, 1) for g in generators]),
    )


# --- Reports ---


def beta_invariant_h2(group: TorusGroup, psi1: LatticeIsometry) -> int:
    """Invariant H^2 of S x T^3 under the first generator alone."""
    single = named_group(group.generator_names[:1])
    return invariant_h2_dimension(paired_group(single, [psi1]))


def betti_numbers(
    group: TorusGroup,
    blockwise: IsometryPair,
    total_rank: int,
    extended: IsometryPair | None = None,
) -> tuple[BettiReport, list[CheckResult]]:
    """
    b2 = dim inv H^2 - rank of the singularities, b3 = dim inv H^3 and
    b1(N) = dim of the invariant one-forms on T^3.
    """
    elements = paired_group(group, blockwise.isometries)
    checks = [pairing_check(group, elements)]

    h2 = invariant_h2_dimension(elements)
    h3 = invariant_h3_dimension(elements)
    b1n = invariant_one_forms(elements)
    by_rank = rank_method(paired_generators(group, blockwise.isometries))
    agree = by_rank == (h2, h3, b1n)
    checks.append(CheckResult.of("invariant_dimension_methods_agree", agree, (by_rank, (h2, h3, b1n))))

    extended_h2 = None
    if extended is not None:
        extended_h2 = invariant_h2_dimension(paired_group(group, extended.isometries))

    report = BettiReport(
        b2=h2 - total_rank,
        b3=h3,
        b1N=b1n,
        invariant_h2=h2,
        beta_invariant_h2=beta_invariant_h2(group, blockwise.psi1),
        extended_invariant_h2=extended_h2,
        methods_agree=agree,
    )
    _telemetry.log_info("betti_computed", b2=report.b2, b3=report.b3, b1N=report.b1N, invariant_h2=h2)
    return report, checks


def pullback_condition(group: TorusGroup, pair: IsometryPair, periods: PeriodTriple) -> CheckResult:
    """psi_h restricted to span(x1, x2, x3) equals the rotation part of h."""
    mismatched = []
    for g, psi in zip(group.generators, pair.isometries, strict=True):
        restricted = psi.restricted_to_periods(periods)
        if restricted is None or not (restricted == g.matrix).all():
            mismatched.append(psi.name)
    return CheckResult.of("pullback_condition_k3", not mismatched, mismatched)
