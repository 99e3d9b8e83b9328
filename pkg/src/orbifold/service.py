from src.algebra.linear import identity
from src.config import E8_NODES, OrbifoldKind, PipelineConfig
from src.g2.forms import SelfDualBasis, hodge_star, metric_from_phi, split_phi, split_star_phi, standard_phi
from src.lattice.lattices import E8_BLOCKS, block_roots, make_k3_lattice
from src.lattice.root_systems import reflection_closure, standard_component, weyl_decompose
from src.orbifold.domain.catalog import catalog, catalog_completeness
from src.orbifold.domain.flat_model import alignment_check, flat_model_report
from src.orbifold.domain.isometries import LatticeIsometry, positive_cone_criterion
from src.orbifold.domain.models import (
    AcceptanceReport,
    BuildRequest,
    CheckResult,
    FlatModelReport,
    MonodromyKind,
    OrbifoldReport,
)
from src.orbifold.domain.periods import standard_periods
from src.orbifold.domain.pipeline import run
from src.orbifold.domain.ports import IReportStore
from src.shared.telemetry import Telemetry, measure_time
from src.symmetry.su2_groups import binary_polyhedral, cyclic_gamma, expected_order

_BINARY_LABELS = ("D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8")


class OrbifoldService:
    def __init__(self, store: IReportStore | None = None) -> None:
        self.store = store
        self.lattice = make_k3_lattice()
        self.telemetry = Telemetry("OrbifoldService")

    # --- Single constructions ---

    @measure_time("orbifold_built")
    def build(self, request: BuildRequest) -> OrbifoldReport:
        return run(request, self.lattice)

    @measure_time("catalog_built")
    def catalog(self, kind: OrbifoldKind) -> tuple[list[OrbifoldReport], CheckResult]:
        reports = catalog(kind, self.lattice)
        return reports, catalog_completeness(reports)

    @measure_time("flat_model_built")
    def flat(self, kind: OrbifoldKind, n: int) -> FlatModelReport:
        return flat_model_report(kind, n)

    def save(self, name: str, report: OrbifoldReport | FlatModelReport | AcceptanceReport) -> str:
        if self.store is None:
            raise RuntimeError("no report store configured")
        location = self.store.save(name, report)
        self.telemetry.log_info("report_saved", name=name, location=location)
        return location

    # --- Acceptance suite ---

    def _roots_criterion(self) -> CheckResult:
        failures = []
        for block in E8_BLOCKS:
            roots = set(block_roots(self.lattice, block))
            oracle = reflection_closure([self.lattice.basis_vector(block, k) for k in E8_NODES])
            if len(roots) != 240 or roots != oracle:
                failures.append(block)
        return CheckResult.of("root_enumeration", not failures, failures)

    def _standard_criterion(self, standard: OrbifoldReport) -> CheckResult:
        ok = (
            standard.connected_labels() == ["E8", "E8"]
            and standard.gauge_group.nonabelian_factors == ["E8", "E8"]
            and standard.gauge_group.abelian_rank == 0
        )
        return CheckResult.of("standard_construction", ok, standard.gauge_group.formatted())

    @staticmethod
    def _betti_criterion(reports: list[OrbifoldReport], standard: OrbifoldReport) -> CheckResult:
        bad = [
            (r.kind, r.keep1, r.keep2)
            for r in reports
            if (r.betti.b3, r.betti.b1N, r.betti.b2) != (7, 0, PipelineConfig.MAX_GAUGE_RANK - r.gauge_group.total_rank)
        ]
        ok = not bad and standard.betti.beta_invariant_h2 == 19
        return CheckResult.of("betti_numbers", ok, bad or standard.betti.beta_invariant_h2)

    @staticmethod
    def _named_checks_criterion(name: str, reports: list[OrbifoldReport], prefix: str) -> CheckResult:
        failed = [
            (r.kind, r.keep1, r.keep2, c.name)
            for r in reports
            for c in r.checks
            if c.name.startswith(prefix) and not c.passed
        ]
        return CheckResult.of(name, not failed, failed[:3])

    def _isometry_criterion(self, reports: list[OrbifoldReport]) -> CheckResult:
        named = self._named_checks_criterion("isometries", reports, "psi")
        odd = LatticeIsometry.sign_map("odd", self.lattice, (-1, 1, 1))
        odd_rejected = not positive_cone_criterion(odd, standard_periods(self.lattice)).passed
        return CheckResult.of("isometries", named.passed and odd_rejected, named.witness or "odd sign map accepted")

    @staticmethod
    def _g2_criterion() -> CheckResult:
        omega = SelfDualBasis.standard()
        phi = standard_phi()
        ok = (
            bool((metric_from_phi(phi) == identity(7)).all())
            and hodge_star(phi) == split_star_phi(omega)
            and split_phi(omega) == phi
            and all(alignment_check(kind).passed for kind in OrbifoldKind)
        )
        return CheckResult.of("g2_form_identities", ok)

    def _monodromy_criterion(self, standard: OrbifoldReport) -> CheckResult:
        standard_trivial = all(e.kind is MonodromyKind.TRIVIAL for e in standard.monodromy)
        e8_minus = weyl_decompose(standard_component("E8"), identity(8) * -1).is_trivial
        a2_minus = not weyl_decompose(standard_component("A2"), identity(2) * -1).is_trivial
        flat_flips = all(
            flat_model_report(OrbifoldKind.FIRST, n).monodromy is MonodromyKind.FLIP
            for n in PipelineConfig.flat_model_orders()
            if n >= 3
        )
        ok = standard_trivial and e8_minus and a2_minus and flat_flips
        return CheckResult.of("monodromy", ok, (standard_trivial, e8_minus, a2_minus, flat_flips))

    @staticmethod
    def _flat_criterion() -> CheckResult:
        failed = [
            (kind.number, n, [c.name for c in report.checks if not c.passed])
            for kind in OrbifoldKind
            for n in PipelineConfig.flat_model_orders()
            if not (report := flat_model_report(kind, n)).valid
        ]
        return CheckResult.of("flat_models", not failed, failed[:3])

    @staticmethod
    def _group_order_criterion() -> CheckResult:
        bad = [n for n in range(1, 9) if cyclic_gamma(n).order != n]
        for label in _BINARY_LABELS:
            group = binary_polyhedral(label)
            if group.order != expected_order(label) or not all(g.is_special_unitary() for g in group.elements):
                bad.append(label)
        return CheckResult.of("group_orders", not bad, bad)

    @measure_time("acceptance_suite")
    def verify_all(self) -> AcceptanceReport:
        standard = self.build(BuildRequest(kind=1, keep1=list(E8_NODES), keep2=list(E8_NODES)))
        reports: list[OrbifoldReport] = []
        completeness: list[CheckResult] = []
        for kind in OrbifoldKind:
            entries, complete = self.catalog(kind)
            reports.extend(entries)
            completeness.append(complete)

        criteria = [
            self._roots_criterion(),
            self._standard_criterion(standard),
            self._betti_criterion(reports, standard),
            CheckResult.of(
                "catalog_completeness",
                all(c.passed for c in completeness),
                [c.witness for c in completeness if not c.passed],
            ),
            self._named_checks_criterion("dual_method_agreement", reports, "singularity_set_crosscheck"),
            self._flat_criterion(),
            self._g2_criterion(),
            self._isometry_criterion(reports),
            self._monodromy_criterion(standard),
            self._group_order_criterion(),
        ]
        report = AcceptanceReport(criteria=criteria)
        self.telemetry.log_info(
            "acceptance_suite_finished",
            passed=report.passed,
            failed=[c.name for c in criteria if not c.passed],
        )
        return report
