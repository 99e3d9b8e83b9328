# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify the holonomy summary and the four-dimensional field content.
# CONSTRAINTS:
#   1. EXECUTION: FAST.
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import pytest

from src.config import OrbifoldKind
from src.orbifold.domain.supplements import field_content, holonomy_report


class TestHolonomy:
    @pytest.mark.parametrize("kind", list(OrbifoldKind))
    def test_rotation_parts_form_the_klein_group(self, kind):
        report = holonomy_report(kind)

        assert report.rotation_group_order == 4
        assert report.structure == "Z2^2"
        assert report.label == "Sp(1) ⋊ Z2^2"

    @pytest.mark.parametrize("kind", list(OrbifoldKind))
    def test_no_invariant_line(self, kind):
        """No circle factor splits off, so the holonomy is not reduced to SU(3)."""
        assert not holonomy_report(kind).invariant_line

    def test_kind_is_recorded(self):
        assert holonomy_report(OrbifoldKind.SECOND).kind == 2


class TestFieldContent:
    def test_standard_content(self, standard_report):
        content = field_content(standard_report)

        assert content.abelian_vector_multiplets == 0
        assert content.nonabelian_factors == ["E8", "E8"]
        assert content.chiral_multiplets == 7

    def test_chiral_count_adds_one_forms_per_singular_point(self, standard_report):
        """
        GIVEN a report with b1(N) = 1 and two singular points
        WHEN the field content is computed
        THEN each point contributes one extra chiral multiplet
        """
        betti = standard_report.betti.model_copy(update={"b1N": 1})
        report = standard_report.model_copy(update={"betti": betti})

        assert field_content(report).chiral_multiplets == 9
