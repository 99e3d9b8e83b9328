# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify the invariant cohomology of S x T^3: character averages, the
#       fixed-space method, the pairing check and the pullback condition.
# CONSTRAINTS:
#   1. EXECUTION: FAST.
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import pytest

from src.algebra.linear import int_matrix
from src.config import OrbifoldKind
from src.orbifold.domain.betti import (
    beta_invariant_h2,
    betti_numbers,
    paired_generators,
    paired_group,
    pairing_check,
    pullback_condition,
    rank_method,
)
from src.orbifold.domain.isometries import LatticeIsometry, construct_isometries
from src.orbifold.domain.models import IsometryReading
from src.symmetry.torus_actions import named_group


def _reflection(lattice, root, name):
    """s(v) = v + (v.a) a for a root a of norm -2."""
    a = root.coordinates
    ga = [sum(lattice.gram[i, j] * a[j] for j in range(lattice.rank)) for i in range(lattice.rank)]
    matrix = int_matrix(
        [[(1 if i == j else 0) + a[i] * ga[j] for j in range(lattice.rank)] for i in range(lattice.rank)]
    )
    return LatticeIsometry(name, lattice, matrix, (1, 1, 1), (1, 1))


@pytest.fixture(params=list(OrbifoldKind), ids=lambda k: f"kind{k.number}")
def kind(request):
    return request.param


@pytest.fixture
def standard_setup(kind, standard):
    group = named_group(kind.generators)
    pair = construct_isometries(kind, standard, IsometryReading.BLOCKWISE)
    return group, pair


class TestStandardBettiNumbers:
    def test_invariant_dimensions(self, standard_setup):
        group, pair = standard_setup

        report, checks = betti_numbers(group, pair, total_rank=16)

        assert (report.invariant_h2, report.b3, report.b1N) == (16, 7, 0)
        assert report.b2 == 0
        assert all(c.passed for c in checks)

    def test_first_generator_alone_leaves_nineteen(self, standard_setup):
        group, pair = standard_setup

        assert beta_invariant_h2(group, pair.psi1) == 19

    def test_rank_method_agrees_with_characters(self, standard_setup):
        group, pair = standard_setup

        assert rank_method(paired_generators(group, pair.isometries)) == (16, 7, 0)

    def test_b2_counts_the_abelian_part(self, standard_setup):
        """
        GIVEN singularities of total rank 2
        WHEN the Betti numbers are computed
        THEN b2 keeps the remaining 14 classes
        """
        group, pair = standard_setup

        report, _ = betti_numbers(group, pair, total_rank=2)

        assert report.b2 == 14

    def test_paired_group_has_group_order(self, standard_setup):
        group, pair = standard_setup

        elements = paired_group(group, pair.isometries)

        assert len(elements) == group.order
        assert pairing_check(group, elements).passed

    def test_pullback_condition_holds(self, kind, standard_setup, standard):
        group, _ = standard_setup
        extended = construct_isometries(kind, standard)

        assert pullback_condition(group, extended, standard).passed


class TestPerturbedBettiNumbers:
    def test_extended_isometries_kill_invariant_h2(self, a2_periods):
        group = named_group(OrbifoldKind.FIRST.generators)
        blockwise = construct_isometries(OrbifoldKind.FIRST, a2_periods, IsometryReading.BLOCKWISE)
        extended = construct_isometries(OrbifoldKind.FIRST, a2_periods, IsometryReading.EXTENDED)

        report, _ = betti_numbers(group, blockwise, total_rank=2, extended=extended)

        assert report.invariant_h2 == 16
        assert report.extended_invariant_h2 == 0
        assert report.b2 == 14

    def test_pullback_condition_uses_extended_isometries(self, a2_periods):
        group = named_group(OrbifoldKind.FIRST.generators)
        extended = construct_isometries(OrbifoldKind.FIRST, a2_periods, IsometryReading.EXTENDED)
        blockwise = construct_isometries(OrbifoldKind.FIRST, a2_periods, IsometryReading.BLOCKWISE)

        assert pullback_condition(group, extended, a2_periods).passed
        result = pullback_condition(group, blockwise, a2_periods)
        assert not result.passed
        assert result.witness == "['psi1', 'psi2']"


class TestPairingCheck:
    def test_non_commuting_lifts_are_rejected(self, k3):
        """
        GIVEN the Klein group paired with reflections in two adjacent E8 roots
        WHEN the pairs are closed under composition
        THEN the closure outgrows the group and the pairing check fails
        """
        group = named_group(OrbifoldKind.FIRST.generators)
        s1 = _reflection(k3, k3.basis_vector("E8_1", 1), "s1")
        s3 = _reflection(k3, k3.basis_vector("E8_1", 3), "s3")

        assert s1.preserves_gram() and s1.is_involution()
        elements = paired_group(group, [s1, s3])

        assert len(elements) > group.order
        assert not pairing_check(group, elements).passed
