# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify the sign-map isometries psi1, psi2 in both readings, the
#       positive-cone criterion and the excluded -Id.
# CONSTRAINTS:
#   1. EXECUTION: FAST.
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import pytest

from src.algebra.linear import rat_matrix
from src.config import OrbifoldKind
from src.orbifold.domain.isometries import (
    SIGN_TABLES,
    LatticeIsometry,
    construct_isometries,
    minus_identity_check,
    positive_cone_criterion,
    sign_table_check,
)
from src.orbifold.domain.models import IsometryReading


class TestSignMap:
    def test_acts_blockwise(self, k3, standard):
        psi = LatticeIsometry.sign_map("psi", k3, (-1, -1, 1))

        assert psi.apply(standard.x1) == standard.x1 * -1
        assert psi.apply(standard.x3) == standard.x3

    def test_is_a_gram_preserving_involution(self, k3):
        psi = LatticeIsometry.sign_map("psi", k3, (-1, 1, -1), (-1, -1))

        assert psi.preserves_gram()
        assert psi.is_involution()

    def test_sign_maps_commute(self, k3):
        a = LatticeIsometry.sign_map("a", k3, (-1, -1, 1))
        b = LatticeIsometry.sign_map("b", k3, (1, -1, -1), (-1, -1))

        assert a.commutes_with(b)

    def test_restriction_to_periods(self, k3, standard):
        psi = LatticeIsometry.sign_map("psi", k3, (-1, -1, 1))

        restricted = psi.restricted_to_periods(standard)

        assert (restricted == rat_matrix([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])).all()

    def test_restriction_fails_when_span_is_not_preserved(self, k3, a2_periods):
        """
        GIVEN x1 = x1_std + u1 + u2 and a map that flips H1 but fixes the E8 blocks
        WHEN it is restricted to span(x1, x2, x3)
        THEN the image of x1 leaves the span
        """
        psi = LatticeIsometry.sign_map("psi", k3, (-1, -1, 1))

        assert psi.restricted_to_periods(a2_periods) is None


class TestPositiveCone:
    def test_two_sign_flips_preserve_the_cone(self, k3, standard):
        psi = LatticeIsometry.sign_map("psi", k3, (-1, -1, 1))

        assert positive_cone_criterion(psi, standard).passed

    @pytest.mark.parametrize("signs", [(-1, 1, 1), (1, -1, 1), (-1, -1, -1)])
    def test_odd_sign_maps_reverse_the_cone(self, k3, standard, signs):
        psi = LatticeIsometry.sign_map("odd", k3, signs)

        result = positive_cone_criterion(psi, standard)

        assert result.name == "odd_positive_cone"
        assert not result.passed
        assert result.witness == "-1"

    def test_minus_identity_is_excluded(self, standard, a2_periods):
        assert minus_identity_check(standard).passed
        assert minus_identity_check(a2_periods).passed


class TestConstructIsometries:
    @pytest.mark.parametrize("kind", list(OrbifoldKind))
    def test_standard_pair_passes_every_check(self, kind, standard):
        pair = construct_isometries(kind, standard)

        assert pair.valid
        assert [psi.h_signs for psi in pair.isometries] == list(SIGN_TABLES[kind])

    def test_standard_pair_fixes_the_e8_blocks(self, standard):
        pair = construct_isometries(OrbifoldKind.FIRST, standard)

        assert [psi.e8_signs for psi in pair.isometries] == [(1, 1), (1, 1)]

    def test_check_names(self, standard):
        pair = construct_isometries(OrbifoldKind.FIRST, standard)

        names = [c.name for c in pair.checks]

        assert names[:4] == ["psi1_preserves_gram", "psi1_involution", "psi1_sign_table", "psi1_positive_cone"]
        assert names[-1] == "psi_commute"

    @pytest.mark.parametrize(
        "kind, e8_signs",
        [
            (OrbifoldKind.FIRST, [(-1, -1), (-1, -1)]),
            (OrbifoldKind.SECOND, [(-1, -1), (1, 1)]),
        ],
    )
    def test_extended_reading_follows_the_sign_on_x1(self, kind, e8_signs, a2_periods):
        pair = construct_isometries(kind, a2_periods, IsometryReading.EXTENDED)

        assert [psi.e8_signs for psi in pair.isometries] == e8_signs
        assert pair.valid

    def test_blockwise_reading_fails_on_perturbed_periods(self, a2_periods):
        """
        GIVEN perturbed periods
        WHEN psi1 is the identity on the E8 blocks
        THEN psi1 no longer maps x1 to -x1 and the cone check cannot be run
        """
        pair = construct_isometries(OrbifoldKind.FIRST, a2_periods, IsometryReading.BLOCKWISE)
        failed = {c.name for c in pair.checks if not c.passed}

        assert {"psi1_sign_table", "psi1_positive_cone"} <= failed
        assert "psi1_preserves_gram" not in failed

    def test_sign_table_check_reports_mismatched_periods(self, k3, standard):
        psi = LatticeIsometry.sign_map("psi1", k3, (-1, -1, 1))

        result = sign_table_check(psi, standard, (1, -1, -1))

        assert not result.passed
        assert result.witness == "[1, 3]"
