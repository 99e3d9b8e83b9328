"""
End-to-end construction for one choice of kind and keep sets: periods,
isometries, singularity set, Betti numbers and monodromy, collected into an
OrbifoldReport. Verification failures become named checks, never exceptions.
"""

from dataclasses import dataclass

from src.config import OrbifoldKind, PipelineConfig
from src.lattice.lattices import IntegerLattice
from src.lattice.root_systems import RootSubsystem, gauge_group
from src.orbifold.domain.betti import betti_numbers, pullback_condition
from src.orbifold.domain.isometries import IsometryPair, construct_isometries, minus_identity_check
from src.orbifold.domain.models import (
    BuildRequest,
    CheckResult,
    Conventions,
    IsometryReading,
    OrbifoldReport,
)
from src.orbifold.domain.monodromy import monodromy_report
from src.orbifold.domain.periods import PeriodTriple, periods_for_keep_sets
from src.orbifold.domain.singularities import (
    crosscheck,
    is_smooth,
    singularity_entries,
    singularity_set,
    sphere_area_check,
)
from src.orbifold.domain.supplements import field_content, holonomy_report
from src.shared.telemetry import Telemetry
from src.symmetry.torus_actions import TorusGroup, is_free, named_group

_telemetry = Telemetry("Pipeline")

_NOTES = (
    "the singularity set is the union of the roots found in both (-E8) blocks",
    "betti numbers use the blockwise isometries (identity on the E8 blocks); "
    "extended_invariant_h2 is the same count for the extended isometries",
)


@dataclass
class OrbifoldSpec:
    kind: OrbifoldKind
    keep1: list[int]
    keep2: list[int]
    periods: PeriodTriple
    extended: IsometryPair
    blockwise: IsometryPair
    subsystem: RootSubsystem
    group: TorusGroup

    @classmethod
    def build(cls, request: BuildRequest, lattice: IntegerLattice) -> "OrbifoldSpec":
        kind = OrbifoldKind.from_number(request.kind)
        periods = periods_for_keep_sets(lattice, request.keep1, request.keep2)
        return cls(
            kind=kind,
            keep1=list(request.keep1),
            keep2=list(request.keep2),
            periods=periods,
            extended=construct_isometries(kind, periods, IsometryReading.EXTENDED),
            blockwise=construct_isometries(kind, periods, IsometryReading.BLOCKWISE),
            subsystem=singularity_set(periods),
            group=named_group(kind.generators),
        )


def _conventions(spec: OrbifoldSpec) -> Conventions:
    notes = list(_NOTES)
    if spec.periods.is_perturbed:
        notes.append(
            f"x2 and x3 carry the squared scale {spec.periods.scale2}; "
            f"the common effective norm is {spec.periods.common_norm}"
        )
    return Conventions(isometry_reading=IsometryReading.EXTENDED, notes=notes)


def build_report(
    spec: OrbifoldSpec,
    crosscheck_roots: bool = PipelineConfig.CROSSCHECK,
    flat_comparison: bool = False,
) -> OrbifoldReport:
    checks: list[CheckResult] = list(spec.periods.validate())
    if crosscheck_roots:
        checks.append(crosscheck(spec.periods, spec.subsystem))

    gauge = gauge_group(spec.subsystem.components)
    freeness = is_free(spec.group)
    checks.append(CheckResult.of("torus_action_free", freeness.free))
    checks.extend(spec.extended.checks)
    checks.append(minus_identity_check(spec.periods))
    checks.append(sphere_area_check(spec.periods, spec.subsystem))
    checks.append(pullback_condition(spec.group, spec.extended, spec.periods))

    betti, betti_checks = betti_numbers(spec.group, spec.blockwise, gauge.total_rank, spec.extended)
    checks.extend(betti_checks)
    checks.append(
        CheckResult.of(
            "b2_consistent",
            betti.b2 == PipelineConfig.MAX_GAUGE_RANK - gauge.total_rank,
            (betti.b2, gauge.total_rank),
        )
    )

    monodromy = monodromy_report(
        spec.subsystem,
        [spec.extended, spec.blockwise],
        flat_kind=spec.kind if flat_comparison else None,
    )
    report = OrbifoldReport(
        kind=spec.kind.number,
        keep1=spec.keep1,
        keep2=spec.keep2,
        singularities=singularity_entries(spec.subsystem),
        gauge_group=gauge,
        betti=betti,
        smooth=is_smooth(spec.periods, spec.subsystem),
        singular_points=len(spec.subsystem.components),
        monodromy=monodromy,
        checks=checks,
        conventions=_conventions(spec),
        holonomy=holonomy_report(spec.kind),
    )
    report.field_content = field_content(report)
    _telemetry.log_info(
        "report_built",
        kind=spec.kind.number,
        keep1=spec.keep1,
        keep2=spec.keep2,
        gauge=gauge.formatted(),
        valid=report.valid,
    )
    return report


def run(request: BuildRequest, lattice: IntegerLattice) -> OrbifoldReport:
    options = request.options
    return build_report(OrbifoldSpec.build(request, lattice), options.crosscheck, options.flat_comparison)
