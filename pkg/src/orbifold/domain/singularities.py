"""
Singularity sets: the norm -2 classes orthogonal to all three periods.

Two algorithms: enumeration in the orthogonal complement of the periods,
and the per-block filter d . u_i = 0 for periods built from keep sets.
"""

from fractions import Fraction

from src.algebra.linear import clear_denominators, int_matrix, integer_kernel
from src.config import E8_NODES
from src.lattice.lattices import (
    E8_BLOCKS,
    LatticeVector,
    NegativeDefiniteSublattice,
    block_roots,
    enumerate_roots,
    inner_product,
    orthogonal_root_set,
)
from src.lattice.root_systems import DynkinComponent, RootSubsystem, extract_simple_roots
from src.orbifold.domain.models import CheckResult, SingularityEntry
from src.orbifold.domain.periods import PeriodTriple
from src.shared.errors import RootSystemError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("Singularities")


def orthogonal_complement(periods: PeriodTriple) -> NegativeDefiniteSublattice:
    """Integral basis of {d in L : d.x_i = 0}, asserted negative definite."""
    lattice = periods.lattice
    rows = []
    for x in periods.vectors:
        pairing = [
            sum((lattice.gram[i, j] * x.coordinates[j] for j in range(lattice.rank)), Fraction(0))
            for i in range(lattice.rank)
        ]
        rows.append(clear_denominators(pairing))
    kernel = integer_kernel(int_matrix(rows))
    return NegativeDefiniteSublattice.from_basis(
        lattice, [lattice.vector(v) for v in kernel], saturated=True
    )


def singularity_set(periods: PeriodTriple) -> RootSubsystem:
    complement = orthogonal_complement(periods)
    roots = enumerate_roots(complement)
    subsystem = extract_simple_roots(roots)
    _telemetry.log_info(
        "singularity_set_computed",
        complement_rank=complement.rank,
        roots=len(roots),
        components=[c.label for c in subsystem.components],
    )
    return subsystem


def structured_singularity_set(periods: PeriodTriple) -> set[LatticeVector]:
    """Union over the E8 blocks of the roots orthogonal to that block's perturbation."""
    lattice = periods.lattice
    if not periods.perturbations:
        return {d for block in E8_BLOCKS for d in block_roots(lattice, block)}
    found: set[LatticeVector] = set()
    for block, u in zip(E8_BLOCKS, periods.perturbations, strict=True):
        found.update(orthogonal_root_set(lattice, block, u))
    return found


def crosscheck(periods: PeriodTriple, subsystem: RootSubsystem) -> CheckResult:
    computed = set(subsystem.roots)
    predicted = structured_singularity_set(periods)
    difference = sorted(computed ^ predicted)
    return CheckResult.of(
        "singularity_set_crosscheck",
        not difference,
        difference[0].coordinates if difference else None,
    )


def component_block(component: DynkinComponent) -> str:
    support = set().union(*(r.support() for r in component.simple_roots))
    if len(support) != 1:
        raise RootSystemError(
            f"component {component.label} is not confined to one block", witness=sorted(support)
        )
    return support.pop()


def component_nodes(component: DynkinComponent, block: str) -> list[int]:
    """Bourbaki nodes of the block met by the component's simple roots."""
    return sorted(
        k
        for k in E8_NODES
        if any(r.block_coordinates(block)[k - 1] for r in component.simple_roots)
    )


def singularity_entries(subsystem: RootSubsystem) -> list[SingularityEntry]:
    entries = []
    for comp in subsystem.components:
        block = component_block(comp)
        entries.append(
            SingularityEntry(
                block=block,
                label=comp.label,
                rank=comp.node_count,
                nodes=component_nodes(comp, block),
            )
        )
    return sorted(entries, key=lambda e: (e.block, e.nodes))


def sphere_area_squared(d: LatticeVector, periods: PeriodTriple) -> Fraction:
    """Squared area of the minimal 2-sphere in class d; zero exactly on the singularity set."""
    return sum(
        (s * inner_product(d, x) ** 2 for s, x in zip(periods.squared_scales, periods.vectors, strict=True)),
        Fraction(0),
    )


def is_smooth(periods: PeriodTriple, subsystem: RootSubsystem | None = None) -> bool:
    if subsystem is None:
        subsystem = singularity_set(periods)
    return not subsystem.roots


def sphere_area_check(periods: PeriodTriple, subsystem: RootSubsystem) -> CheckResult:
    """Every simple root of the singularity set spans a sphere of zero area."""
    simple = [r for comp in subsystem.components for r in comp.simple_roots]
    failures = [r.coordinates for r in simple if sphere_area_squared(r, periods) != 0]
    return CheckResult.of("collapsed_sphere_area", not failures, failures[:1])
