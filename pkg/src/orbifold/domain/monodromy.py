"""
Monodromy of each singularity component: the diagram automorphism left
after factoring psi | component into a Weyl element and a diagram symmetry.
"""

from collections.abc import Sequence
from functools import cache

import numpy as np

from src.algebra.linear import int_matrix, rat_matrix, solve_rational
from src.config import OrbifoldKind
from src.lattice.lattices import LatticeVector
from src.lattice.root_systems import DynkinComponent, RootSubsystem, fold_by_group, weyl_decompose
from src.orbifold.domain.flat_model import flat_model_report
from src.orbifold.domain.isometries import IsometryPair, LatticeIsometry
from src.orbifold.domain.models import FlatComparison, FlatModelReport, MonodromyEntry, MonodromyKind
from src.orbifold.domain.singularities import component_block
from src.shared.errors import RootSystemError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("Monodromy")


def restrict_to_component(psi: LatticeIsometry, component: DynkinComponent) -> np.ndarray:
    """psi on the root span in simple-root coordinates; column i is the image of alpha_i."""
    simple: Sequence[LatticeVector] = component.simple_roots
    span = rat_matrix([[r.coordinates[i] for r in simple] for i in range(psi.lattice.rank)])
    columns = []
    for root in simple:
        coords = solve_rational(span, psi.apply(root.as_rational()).coordinates)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise RootSystemError(
                f"{psi.name} does not preserve the {component.label} component", witness=root.coordinates
            )
        columns.append([int(c) for c in coords])
    n = len(simple)
    return int_matrix([[columns[j][i] for j in range(n)] for i in range(n)])


def component_monodromy(component: DynkinComponent, pair: IsometryPair) -> MonodromyEntry:
    automorphisms = [
        weyl_decompose(component, restrict_to_component(psi, component)).diagram_automorphism
        for psi in pair.isometries
    ]
    nontrivial = [s for s in automorphisms if s != tuple(range(component.node_count))]
    folded = fold_by_group(component, nontrivial) if nontrivial else None
    return MonodromyEntry(
        block=component_block(component),
        label=component.label,
        reading=pair.reading,
        diagram_automorphisms=[list(s) for s in automorphisms],
        kind=MonodromyKind.FLIP if nontrivial else MonodromyKind.TRIVIAL,
        folded_label=folded,
    )


@cache
def _flat_model(kind: OrbifoldKind, n: int) -> FlatModelReport:
    return flat_model_report(kind, n)


def compare_with_flat_model(entry: MonodromyEntry, kind: OrbifoldKind) -> MonodromyEntry:
    """Attaches the C^2 / Z_n x T^3 verdict to an A_(n-1) entry; other labels pass through."""
    if not entry.label.startswith("A"):
        return entry
    n = int(entry.label[1:]) + 1
    flat = _flat_model(kind, n)
    comparison = FlatComparison(
        n=n,
        exponent_multipliers=flat.exponent_multipliers,
        monodromy=flat.monodromy,
        folded_label=flat.folded_label,
        flat_model_valid=flat.valid,
        agrees=flat.monodromy is entry.kind,
    )
    return entry.model_copy(update={"flat_model": comparison})


def monodromy_report(
    subsystem: RootSubsystem,
    pairs: Sequence[IsometryPair],
    flat_kind: OrbifoldKind | None = None,
) -> list[MonodromyEntry]:
    """One entry per component and isometry reading; flat_kind adds the flat-model verdicts."""
    entries = [component_monodromy(comp, pair) for pair in pairs for comp in subsystem.components]
    if flat_kind is not None:
        entries = [compare_with_flat_model(e, flat_kind) for e in entries]
    _telemetry.log_info(
        "monodromy_computed",
        components=len(subsystem.components),
        flips=sum(e.kind is MonodromyKind.FLIP for e in entries),
    )
    return entries
