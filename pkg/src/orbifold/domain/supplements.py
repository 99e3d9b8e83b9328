from src.algebra.linear import identity
from src.config import OrbifoldKind
from src.orbifold.domain.models import FieldContent, HolonomyReport, OrbifoldReport
from src.symmetry.torus_actions import has_invariant_line, named_group


def holonomy_report(kind: OrbifoldKind) -> HolonomyReport:
    """
    Holonomy of the resolved orbifold: Sp(1) extended by the group of
    rotation parts of the torus maps.
    """
    group = named_group(kind.generators)
    rotations = group.rotation_parts()
    involutive = all((r.dot(r) == identity(3)).all() for r in rotations)
    if len(rotations) == 4 and involutive:
        structure = "Z2^2"
    else:
        structure = f"order {len(rotations)}"
    return HolonomyReport(
        kind=kind.number,
        rotation_group_order=len(rotations),
        structure=structure,
        label=f"Sp(1) ⋊ {structure}",
        invariant_line=has_invariant_line(group),
    )


def field_content(report: OrbifoldReport) -> FieldContent:
    """Four-dimensional multiplets: one abelian vector per b2, b3 + k b1(N) chiral."""
    return FieldContent(
        abelian_vector_multiplets=report.betti.b2,
        nonabelian_factors=list(report.gauge_group.nonabelian_factors),
        chiral_multiplets=report.betti.b3 + report.singular_points * report.betti.b1N,
    )
