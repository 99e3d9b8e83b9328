from fractions import Fraction
from unittest.mock import patch

import pytest

from src.config import E8_BOURBAKI_EDGES, E8_NODES, OrbifoldKind, PipelineConfig, _env_int


class TestOrbifoldKind:
    def test_from_number_returns_matching_kind(self):
        """from_number() maps the CLI values 1 and 2 to the two kinds."""
        assert OrbifoldKind.from_number(1) is OrbifoldKind.FIRST
        assert OrbifoldKind.from_number(2) is OrbifoldKind.SECOND

    def test_from_number_rejects_unknown_values(self):
        with pytest.raises(ValueError):
            OrbifoldKind.from_number(3)

    def test_kinds_have_required_attributes(self):
        """Each kind names two torus generators and a group label."""
        for kind in OrbifoldKind:
            assert len(kind.generators) == 2
            assert kind.group_label.startswith("H")

    def test_generators(self):
        assert OrbifoldKind.FIRST.generators == ("beta", "gamma")
        assert OrbifoldKind.SECOND.generators == ("beta_prime", "eta")

    def test_enum_members_match_expected_count(self):
        assert len(OrbifoldKind) == 2


class TestE8Diagram:
    def test_nodes_are_numbered_one_to_eight(self):
        assert E8_NODES == tuple(range(1, 9))

    def test_edges_form_a_tree(self):
        """Seven edges on eight nodes, all inside the node range."""
        assert len(E8_BOURBAKI_EDGES) == 7
        assert {n for edge in E8_BOURBAKI_EDGES for n in edge} == set(E8_NODES)

    def test_node_four_is_the_branch_point(self):
        degree = {k: sum(k in edge for edge in E8_BOURBAKI_EDGES) for k in E8_NODES}

        assert degree[4] == 3
        assert sorted(degree.values()) == [1, 1, 1, 2, 2, 2, 2, 3]


class TestPipelineConfig:
    def test_perturbation_cap_stays_below_four_ninths(self):
        """PERTURBATION_NORM_CAP must keep roots outside the E8 blocks away."""
        assert 0 < PipelineConfig.PERTURBATION_NORM_CAP < Fraction(4, 9)

    def test_search_heights_are_ordered(self):
        assert 1 <= PipelineConfig.ORTHOGONAL_SEARCH_HEIGHT <= PipelineConfig.ORTHOGONAL_SEARCH_MAX_HEIGHT

    def test_invariant_line_search_has_positive_height(self):
        assert PipelineConfig.INVARIANT_LINE_SEARCH_HEIGHT >= 1

    def test_closure_bounds_fit_the_groups(self):
        """The binary icosahedral group has 120 elements, H2 has 8."""
        assert PipelineConfig.SU2_CLOSURE_BOUND >= 120
        assert PipelineConfig.TORUS_CLOSURE_BOUND >= 8

    def test_max_gauge_rank(self):
        assert PipelineConfig.MAX_GAUGE_RANK == 16

    def test_flat_model_orders(self):
        orders = PipelineConfig.flat_model_orders()

        assert orders[0] == 2
        assert all(n >= 1 for n in orders)

    def test_report_dir_is_set(self):
        assert isinstance(PipelineConfig.REPORT_DIR, str)
        assert len(PipelineConfig.REPORT_DIR) > 0

    def test_env_int_reads_overrides(self):
        """_env_int() should prefer the environment over the default."""
        with patch("src.config.os.getenv", return_value="12"):
            assert _env_int("ORTHOGONAL_SEARCH_HEIGHT", 3) == 12

    def test_env_int_falls_back_to_default(self):
        with patch.dict("os.environ", {}, clear=True):
            assert _env_int("ORTHOGONAL_SEARCH_HEIGHT", 3) == 3
