"""
Flat models (C^2 / Gamma) x T^3 with cyclic Gamma: the tau maps paired with
the torus generators, their action on Gamma and the resulting monodromy.
"""

from collections import deque

from src.algebra.cyclotomic import common_conductor
from src.config import OrbifoldKind, PipelineConfig
from src.g2.forms import find_basis_alignment
from src.lattice.root_systems import fold_by_automorphism, standard_component
from src.orbifold.domain.models import CheckResult, FlatModelReport, MonodromyKind
from src.shared.errors import ClosureBoundExceededError, InvalidSpecError, NormalizationError
from src.shared.telemetry import Telemetry
from src.symmetry.su2_groups import (
    AntiUnitaryMap,
    DiagramAction,
    FiniteSU2Group,
    closure,
    conjugation_action,
    cyclic_gamma,
    induced_diagram_automorphism,
    tau_1,
    tau_2,
    tau_3,
)
from src.symmetry.torus_actions import (
    AffineTorusIsometry,
    TorusGroup,
    is_free,
    is_free_on_grid,
    named_group,
    torus_part,
)

_telemetry = Telemetry("FlatModel")

_TAUS = {"tau_1": tau_1, "tau_2": tau_2, "tau_3": tau_3}

# C^2-part paired with each torus generator.
FLAT_PAIRING: dict[OrbifoldKind, tuple[tuple[str, str], ...]] = {
    OrbifoldKind.FIRST: (("tau_1", "beta"), ("tau_2", "gamma")),
    OrbifoldKind.SECOND: (("tau_1", "beta_prime"), ("tau_3", "eta")),
}


def paired_flat_elements(kind: OrbifoldKind) -> list[tuple[AntiUnitaryMap, AffineTorusIsometry]]:
    """Closure of the (tau, torus map) generator pairs."""
    generators = [(_TAUS[t](), torus_part(g)) for t, g in FLAT_PAIRING[kind]]
    elements = [(AntiUnitaryMap.identity(4), AffineTorusIsometry.identity())]
    seen = set(elements)
    queue = deque(elements)
    while queue:
        c, g = queue.popleft()
        for t, h in generators:
            nxt = (c @ t, g @ h)
            if nxt in seen:
                continue
            if len(elements) >= PipelineConfig.TORUS_CLOSURE_BOUND:
                raise ClosureBoundExceededError("paired flat group does not close", witness=str(nxt[1]))
            seen.add(nxt)
            elements.append(nxt)
            queue.append(nxt)
    return elements


def _powers(a: AntiUnitaryMap, n: int) -> list[AntiUnitaryMap]:
    out = [AntiUnitaryMap.identity(a.conductor)]
    for _ in range(n - 1):
        out.append(out[-1] @ a)
    return out


def monodromy_relation(t: AntiUnitaryMap, gamma: FiniteSU2Group, multiplier: int) -> CheckResult:
    """t a^k t^-1 = a^(m k) for every k, as exact matrix identities."""
    n = gamma.order
    conductor = common_conductor(t.conductor, gamma.conductor)
    t = t.embed(conductor)
    powers = _powers(gamma.embed(conductor).generators[0], n)
    failures = [k for k in range(n) if t @ powers[k] @ t.inverse() != powers[(multiplier * k) % n]]
    return CheckResult.of("monodromy_relation", not failures, failures)


def commutes_with_gamma(taus: list[AntiUnitaryMap], gamma: FiniteSU2Group) -> CheckResult:
    conductor = common_conductor(4, gamma.conductor)
    a = gamma.embed(conductor).generators[0]
    group = closure([t.embed(conductor) for t in taus])
    failures = [str(h) for h in group if h @ a != a @ h]
    return CheckResult.of("torus_lift_commutes_with_gamma", not failures, failures[:1])


def _torus_checks(kind: OrbifoldKind, group: TorusGroup) -> list[CheckResult]:
    expected = {OrbifoldKind.FIRST: (4, True), OrbifoldKind.SECOND: (8, False)}[kind]
    freeness = is_free(group)
    grid = is_free_on_grid(group)
    witness = next((v.word for v in freeness.verdicts if v.has_fixed_point), None)
    return [
        CheckResult.of(
            "torus_group_structure",
            (group.order, group.is_abelian()) == expected,
            (group.order, group.is_abelian()),
        ),
        CheckResult.of("torus_action_free", freeness.free, witness),
        CheckResult.of("freeness_grid_agrees", grid == freeness.free, grid),
    ]


def alignment_check(kind: OrbifoldKind) -> CheckResult:
    """One basis change of the self-dual forms matches every C^2-part with its rotation."""
    elements = paired_flat_elements(kind)
    expected = {OrbifoldKind.FIRST: 4, OrbifoldKind.SECOND: 8}[kind]
    if len(elements) != expected:
        return CheckResult.of("pullback_condition_flat", False, f"{len(elements)} paired elements")
    p = find_basis_alignment([(c.to_real_matrix(), g.matrix) for c, g in elements])
    return CheckResult.of("pullback_condition_flat", p is not None, "no signed permutation aligns the forms")


def flat_model_report(kind: OrbifoldKind, n: int) -> FlatModelReport:
    if n < 1:
        raise InvalidSpecError(f"cyclic order must be positive, got {n}", witness=n)
    gamma = cyclic_gamma(n)
    group = named_group(kind.generators)
    checks: list[CheckResult] = []
    multipliers: dict[str, int] = {}
    actions: list[DiagramAction] = []

    for tau_name, _ in FLAT_PAIRING[kind]:
        t = _TAUS[tau_name]()
        try:
            action = conjugation_action(t, gamma)
        except NormalizationError as e:
            checks.append(CheckResult.of(f"{tau_name}_normalizes_gamma", False, e.witness))
            continue
        checks.append(CheckResult.of(f"{tau_name}_normalizes_gamma", True))
        m = action.exponent_multiplier if action.exponent_multiplier is not None else 1
        multipliers[tau_name] = m
        actions.append(induced_diagram_automorphism(m, n))

    if kind is OrbifoldKind.FIRST and "tau_2" in multipliers:
        relation = monodromy_relation(tau_2(), gamma, -1)
        checks.append(relation)
        checks.append(CheckResult.of("tau_2_inverts_gamma", multipliers["tau_2"] % n == (-1) % n, multipliers["tau_2"]))
    if kind is OrbifoldKind.SECOND:
        checks.append(commutes_with_gamma([tau_1(), tau_3()], gamma))

    checks.extend(_torus_checks(kind, group))
    checks.append(alignment_check(kind))

    flip = DiagramAction.FLIP in actions
    folded = None
    if flip:
        component = standard_component(f"A{n - 1}")
        folded = fold_by_automorphism(component, tuple(reversed(range(n - 1))))

    notes = []
    if n == 2 and kind is OrbifoldKind.FIRST:
        notes.append(
            "inversion on Z2 is the identity and A1 has no diagram symmetry, "
            "so the monodromy is trivial although tau_2 acts by inversion"
        )

    report = FlatModelReport(
        kind=kind.number,
        n=n,
        gamma_label=gamma.label,
        gamma_order=gamma.order,
        torus_group_order=group.order,
        torus_group_abelian=group.is_abelian(),
        torus_element_orders=group.element_orders(),
        exponent_multipliers=multipliers,
        monodromy=MonodromyKind.FLIP if flip else MonodromyKind.TRIVIAL,
        folded_label=folded,
        checks=checks,
        notes=notes,
    )
    _telemetry.log_info(
        "flat_model_built", kind=kind.number, n=n, monodromy=report.monodromy.value, valid=report.valid
    )
    return report
