# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify request validation and report helpers.
# CONSTRAINTS:
#   1. EXECUTION: FAST.
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import pytest
from pydantic import ValidationError

from src.config import PipelineConfig
from src.lattice.root_systems import GaugeGroupReport
from src.orbifold.domain.models import (
    AcceptanceReport,
    BettiReport,
    BuildRequest,
    CheckResult,
    OrbifoldReport,
    SingularityEntry,
)


class TestCheckResult:
    def test_passed_check_drops_its_witness(self):
        assert CheckResult.of("c", True, [1, 2]).witness is None

    def test_failed_check_keeps_its_witness_as_text(self):
        assert CheckResult.of("c", False, [1, 2]).witness == "[1, 2]"

    def test_failed_check_without_witness(self):
        assert CheckResult.of("c", False).witness is None


class TestBuildRequest:
    def test_keep_sets_are_sorted(self):
        request = BuildRequest(kind=1, keep1=[4, 1, 3], keep2=[])

        assert request.keep1 == [1, 3, 4]

    def test_defaults(self):
        request = BuildRequest(kind=2)

        assert request.keep1 == request.keep2 == []
        assert request.options.crosscheck is PipelineConfig.CROSSCHECK

    @pytest.mark.parametrize("kind", [0, 3])
    def test_unknown_kind_is_rejected(self, kind):
        with pytest.raises(ValidationError):
            BuildRequest(kind=kind)

    @pytest.mark.parametrize("keep", [[0], [9], [1, 1]])
    def test_bad_nodes_are_rejected(self, keep):
        with pytest.raises(ValidationError):
            BuildRequest(kind=1, keep1=keep)


class TestReports:
    @pytest.fixture
    def report(self):
        return OrbifoldReport(
            kind=1,
            keep1=[1, 3],
            keep2=[],
            singularities=[
                SingularityEntry(block="E8_2", label="D4", rank=4, nodes=[2, 3, 4, 5]),
                SingularityEntry(block="E8_1", label="A2", rank=2, nodes=[1, 3]),
            ],
            gauge_group=GaugeGroupReport(nonabelian_factors=["A2", "D4"], total_rank=6, abelian_rank=10),
            betti=BettiReport(b2=10, b3=7, b1N=0, invariant_h2=16, beta_invariant_h2=19),
            smooth=False,
            singular_points=2,
            monodromy=[],
            checks=[CheckResult.of("a", True), CheckResult.of("b", False, "x")],
        )

    def test_connected_labels_are_sorted(self, report):
        assert report.connected_labels() == ["A2", "D4"]

    def test_failed_checks_make_the_report_invalid(self, report):
        assert not report.valid
        assert [c.name for c in report.failed_checks()] == ["b"]

    def test_schema_version(self, report):
        assert report.schema_version == PipelineConfig.REPORT_SCHEMA_VERSION

    def test_json_dump_keeps_the_gauge_group(self, report):
        assert report.model_dump(mode="json")["gauge_group"]["abelian_rank"] == 10

    def test_acceptance_passes_only_when_every_criterion_does(self):
        assert AcceptanceReport(criteria=[CheckResult.of("a", True)]).passed
        assert not AcceptanceReport(criteria=[CheckResult.of("a", True), CheckResult.of("b", False)]).passed
