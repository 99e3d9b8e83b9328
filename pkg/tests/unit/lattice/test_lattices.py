# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify the K3 lattice, inner products and root enumeration.
# CONSTRAINTS:
#   1. EXECUTION: FAST (< 1s per test; E8 enumeration is cached per lattice).
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import random
from fractions import Fraction

import pytest

from src.algebra.linear import rational_kernel, rat_matrix
from src.lattice.lattices import (
    NegativeDefiniteSublattice,
    block_roots,
    enumerate_roots,
    generic_orthogonal_vector,
    inner_product,
    make_hyperbolic,
    make_minus_e8,
    orthogonal_root_set,
)
from src.lattice.root_systems import reflection_closure
from src.shared.errors import InvalidSpecError, LatticeMismatchError, NotDefiniteError


class TestHyperbolicPlane:
    def test_gram_entries(self):
        h = make_hyperbolic()
        v1, v2 = h.basis_vector("H", 1), h.basis_vector("H", 2)

        assert inner_product(v1, v2) == 1
        assert inner_product(v1, v1) == 0

    def test_period_vector_has_norm_four(self):
        h = make_hyperbolic()
        x = h.basis_vector("H", 1) + 2 * h.basis_vector("H", 2)

        assert x.norm() == 4

    def test_anti_period_vector_has_norm_minus_four(self):
        h = make_hyperbolic()
        y = -h.basis_vector("H", 1) + 2 * h.basis_vector("H", 2)

        assert y.norm() == -4


class TestMinusE8:
    def test_simple_roots_have_norm_minus_two(self):
        e8 = make_minus_e8()
        for k in range(1, 9):
            assert e8.basis_vector("E8", k).norm() == -2

    def test_bourbaki_adjacency(self):
        e8 = make_minus_e8()
        a = {k: e8.basis_vector("E8", k) for k in range(1, 9)}

        assert inner_product(a[3], a[4]) == 1
        assert inner_product(a[2], a[4]) == 1
        assert inner_product(a[1], a[2]) == 0

    def test_unimodular(self):
        assert abs(make_minus_e8().determinant()) == 1


class TestK3Lattice:
    def test_rank_and_signature(self, k3):
        assert k3.rank == 22
        assert k3.signature() == (3, 19)

    def test_determinant_is_minus_one(self, k3):
        assert k3.determinant() == -1

    def test_blocks_are_orthogonal(self, k3):
        x = k3.basis_vector("H1", 1)
        d = k3.basis_vector("E8_2", 5)

        assert inner_product(x, d) == 0

    def test_inner_product_is_bilinear_and_symmetric(self, k3):
        """
        GIVEN random rational vectors and scalars
        WHEN the form is evaluated
        THEN it is symmetric and linear in the first slot, exactly
        """
        rng = random.Random(5)

        def rvec():
            return k3.rational_vector([Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(22)])

        for _ in range(10):
            x, y, z = rvec(), rvec(), rvec()
            s = Fraction(rng.randint(-5, 5), rng.randint(1, 5))

            assert inner_product(x, y) == inner_product(y, x)
            assert inner_product(x * s + z, y) == s * inner_product(x, y) + inner_product(z, y)

    def test_mismatched_lattices_raise(self, k3):
        with pytest.raises(LatticeMismatchError):
            inner_product(k3.zero(), make_minus_e8().zero())


class TestRootEnumeration:
    def test_full_e8_block_has_240_roots_matching_reflection_closure(self, k3):
        # Arrange
        simple = [k3.basis_vector("E8_1", k) for k in range(1, 9)]

        # Act
        roots = block_roots(k3, "E8_1")

        # Assert
        assert len(roots) == 240
        assert set(roots) == reflection_closure(simple)
        assert list(roots) == sorted(roots)

    def test_zero_sublattice_is_empty(self, k3):
        sub = NegativeDefiniteSublattice.from_basis(k3, [])

        assert enumerate_roots(sub) == []

    def test_single_root_sublattice(self, k3):
        alpha = k3.basis_vector("E8_2", 3)
        sub = NegativeDefiniteSublattice.from_basis(k3, [alpha])

        assert set(enumerate_roots(sub)) == {alpha, -alpha}

    def test_saturation_finds_roots_of_non_primitive_basis(self, k3):
        alpha = k3.basis_vector("E8_2", 3)
        sub = NegativeDefiniteSublattice.from_basis(k3, [alpha * 2])

        assert set(enumerate_roots(sub)) == {alpha, -alpha}

    def test_indefinite_span_is_rejected(self, k3):
        with pytest.raises(NotDefiniteError):
            NegativeDefiniteSublattice.from_basis(k3, [k3.basis_vector("H1", 1), k3.basis_vector("H1", 2)])


class TestOrthogonalRootSets:
    def test_zero_perturbation_keeps_all_roots(self, k3):
        u = k3.embed_block("E8_1", [0] * 8)

        assert len(orthogonal_root_set(k3, "E8_1", u)) == 240

    def test_coweight_of_node_8_leaves_e7(self, k3):
        """
        GIVEN u orthogonal to the simple roots 1..7 of the first block
        WHEN the block roots are filtered by d.u = 0
        THEN exactly the 126 roots of E7 remain
        """
        gram = rat_matrix(k3.gram[6:14, 6:14].tolist())
        constraints = rat_matrix([list(gram[k]) for k in range(7)])
        (direction,) = rational_kernel(constraints)
        u = k3.embed_block("E8_1", direction)
        simple = [k3.basis_vector("E8_1", k) for k in range(1, 8)]

        roots = orthogonal_root_set(k3, "E8_1", u)

        assert len(roots) == 126
        assert set(roots) == reflection_closure(simple)

    def test_wrong_block_support_is_rejected(self, k3):
        u = k3.embed_block("E8_2", [1] + [0] * 7)

        with pytest.raises(InvalidSpecError):
            orthogonal_root_set(k3, "E8_1", u)


class TestGenericOrthogonalVector:
    def test_empty_keep_is_orthogonal_to_no_root(self, k3):
        u = generic_orthogonal_vector(k3, "E8_1", [])

        assert orthogonal_root_set(k3, "E8_1", u) == []

    def test_full_keep_is_rejected(self, k3):
        with pytest.raises(InvalidSpecError):
            generic_orthogonal_vector(k3, "E8_1", range(1, 9))

    def test_d7_subdiagram_gives_84_roots(self, k3):
        keep = [2, 3, 4, 5, 6, 7, 8]
        simple = [k3.basis_vector("E8_2", k) for k in keep]

        u = generic_orthogonal_vector(k3, "E8_2", keep)
        roots = orthogonal_root_set(k3, "E8_2", u)

        assert len(roots) == 84
        assert set(roots) == reflection_closure(simple)

    def test_unknown_node_is_rejected(self, k3):
        with pytest.raises(InvalidSpecError):
            generic_orthogonal_vector(k3, "E8_1", [9])
