from src.orbifold.domain.models import (
    AcceptanceReport,
    CheckResult,
    FlatModelReport,
    OrbifoldReport,
)


def _keep(nodes: list[int]) -> str:
    return ",".join(str(k) for k in nodes) if nodes else "none"


def _check_lines(checks: list[CheckResult]) -> list[str]:
    lines = []
    for c in checks:
        mark = "ok  " if c.passed else "FAIL"
        suffix = f"  ({c.witness})" if c.witness else ""
        lines.append(f"  [{mark}] {c.name}{suffix}")
    return lines


def render_orbifold(report: OrbifoldReport) -> str:
    lines = [
        f"Orbifold of kind {report.kind}  keep1={_keep(report.keep1)}  keep2={_keep(report.keep2)}",
        f"Gauge group:      {report.gauge_group.formatted()}",
        f"Singular points:  {report.singular_points}" + ("  (smooth)" if report.smooth else ""),
    ]
    for s in report.singularities:
        lines.append(f"  {s.block}: {s.label} on nodes {_keep(s.nodes)}")
    b = report.betti
    lines.append(f"Betti numbers:    b2={b.b2}  b3={b.b3}  b1(N)={b.b1N}")
    lines.append(f"Invariant H^2:    {b.invariant_h2} (first generator alone: {b.beta_invariant_h2})")
    if report.field_content:
        fc = report.field_content
        lines.append(
            f"Field content:    {fc.abelian_vector_multiplets} abelian vector, "
            f"{fc.chiral_multiplets} chiral multiplets"
        )
    if report.holonomy:
        lines.append(f"Holonomy:         {report.holonomy.label}")
    if report.monodromy:
        lines.append("Monodromy:")
        for m in report.monodromy:
            folded = f" -> {m.folded_label}" if m.folded_label else ""
            lines.append(f"  {m.block} {m.label} [{m.reading.value}]: {m.kind.value}{folded}")
            if m.flat_model:
                verdict = "agrees" if m.flat_model.agrees else "differs"
                lines.append(
                    f"    flat model n={m.flat_model.n}: {m.flat_model.monodromy.value} ({verdict})"
                )
    lines.append("Checks:")
    lines.extend(_check_lines(report.checks))
    lines.append(f"Valid: {'yes' if report.valid else 'no'}")
    return "\n".join(lines)


def render_flat(report: FlatModelReport) -> str:
    folded = f" -> {report.folded_label}" if report.folded_label else ""
    lines = [
        f"Flat model of kind {report.kind}, Gamma = {report.gamma_label} (order {report.gamma_order})",
        f"Torus group:  order {report.torus_group_order}, "
        f"{'abelian' if report.torus_group_abelian else 'nonabelian'}, element orders {report.torus_element_orders}",
        f"Multipliers:  {report.exponent_multipliers}",
        f"Monodromy:    {report.monodromy.value}{folded}",
        "Checks:",
        *_check_lines(report.checks),
    ]
    lines.extend(f"Note: {n}" for n in report.notes)
    return "\n".join(lines)


def render_acceptance(report: AcceptanceReport) -> str:
    lines = ["Acceptance criteria:", *_check_lines(report.criteria)]
    lines.append(f"{sum(c.passed for c in report.criteria)}/{len(report.criteria)} passed")
    return "\n".join(lines)


def render_catalog(reports: list[OrbifoldReport], completeness: CheckResult) -> str:
    rows = [
        f"  {_keep(r.keep1):<18} {_keep(r.keep2):<18} {r.gauge_group.formatted():<28} b2={r.betti.b2:<3}"
        f"{'' if r.valid else ' INVALID'}"
        for r in reports
    ]
    return "\n".join(["Catalog:", *rows, *_check_lines([completeness])])
