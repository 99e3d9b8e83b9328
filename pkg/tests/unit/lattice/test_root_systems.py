# ==============================================================================
# ARCHITECTURE: UNIT TEST (CORE LOGIC)
# ------------------------------------------------------------------------------
# GOAL: Verify simple-root extraction, ADE classification, folding and Weyl
#       decomposition.
# CONSTRAINTS:
#   1. EXECUTION: FAST (the 2^8 subset sweep is marked slow).
#   2. I/O: FORBIDDEN. No Database, No Network, No File System.
# ==============================================================================
import itertools
import random

import numpy as np
import pytest

from src.algebra.linear import identity, int_matrix
from src.lattice.lattices import block_roots
from src.lattice.root_systems import (
    classify_components,
    extract_simple_roots,
    fold_by_automorphism,
    gauge_group,
    reflection_closure,
    standard_component,
    weyl_decompose,
)
from src.shared.errors import NotAnAutomorphismError, RootSystemError


def _simple(k3, block, nodes):
    return [k3.basis_vector(block, k) for k in nodes]


def _shape_oracle(nodes):
    """Label of the induced Bourbaki E8 subdiagram, read off component by component."""
    edges = {(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)}
    nodes = set(nodes)
    labels = []
    seen = set()
    for start in sorted(nodes):
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack += [w for w in nodes if (v, w) in edges or (w, v) in edges]
        seen |= comp
        degree = {v: sum(1 for w in comp if (v, w) in edges or (w, v) in edges) for v in comp}
        n = len(comp)
        if max(degree.values()) <= 2:
            labels.append(f"A{n}")
        elif {1, 2, 3, 4} <= comp and n >= 6:
            labels.append(f"E{n}")
        else:
            labels.append(f"D{n}")
    return sorted(labels)


class TestExtractSimpleRoots:
    def test_e8_block_gives_eight_simple_roots(self, k3):
        # Act
        sub = extract_simple_roots(block_roots(k3, "E8_1"))

        # Assert
        assert len(sub.simple_roots) == 8
        assert reflection_closure(sub.simple_roots) == set(sub.roots)
        assert [c.label for c in sub.components] == ["E8"]

    def test_single_pair(self, k3):
        alpha = k3.basis_vector("E8_1", 5)

        sub = extract_simple_roots([alpha, -alpha])

        assert len(sub.simple_roots) == 1
        assert [c.label for c in sub.components] == ["A1"]

    def test_empty_set(self):
        sub = extract_simple_roots([])

        assert sub.simple_roots == ()
        assert sub.components == ()

    def test_not_closed_under_negation(self, k3):
        alpha = k3.basis_vector("E8_1", 5)

        with pytest.raises(RootSystemError):
            extract_simple_roots([alpha])

    def test_not_reflection_closed(self, k3):
        """Two adjacent simple roots without their sum do not form a root system."""
        a, b = k3.basis_vector("E8_1", 3), k3.basis_vector("E8_1", 4)

        with pytest.raises(RootSystemError):
            extract_simple_roots([a, -a, b, -b])


class TestClassifyComponents:
    def test_e7_from_first_seven_nodes(self, k3):
        roots = reflection_closure(_simple(k3, "E8_1", range(1, 8)))

        sub = extract_simple_roots(roots)

        assert [c.label for c in classify_components(sub)] == ["E7"]

    def test_two_isolated_nodes(self, k3):
        roots = reflection_closure(_simple(k3, "E8_2", [1, 5]))

        sub = extract_simple_roots(roots)

        assert sorted(c.label for c in classify_components(sub)) == ["A1", "A1"]

    def test_d7_subdiagram(self, k3):
        roots = reflection_closure(_simple(k3, "E8_1", range(2, 9)))

        assert [c.label for c in extract_simple_roots(roots).components] == ["D7"]

    @pytest.mark.slow
    def test_every_subdiagram_matches_shape_oracle(self, k3):
        """
        GIVEN every subset of the E8 simple roots
        WHEN its reflection closure is classified
        THEN the labels match the induced-subdiagram shapes
        """
        for size in range(1, 9):
            for nodes in itertools.combinations(range(1, 9), size):
                roots = reflection_closure(_simple(k3, "E8_1", nodes))

                labels = sorted(c.label for c in extract_simple_roots(roots).components)

                assert labels == _shape_oracle(nodes), nodes


class TestGaugeGroup:
    def test_e8_e8(self):
        report = gauge_group([standard_component("E8"), standard_component("E8")])

        assert report.nonabelian_factors == ["E8", "E8"]
        assert report.abelian_rank == 0

    def test_no_components(self):
        report = gauge_group([])

        assert report.total_rank == 0
        assert report.abelian_rank == 16
        assert report.formatted() == "U(1)^16"

    def test_e7_plus_a1(self):
        report = gauge_group([standard_component("E7"), standard_component("A1")])

        assert report.total_rank == 8
        assert report.abelian_rank == 8

    def test_rank_overflow_raises(self):
        with pytest.raises(RootSystemError):
            gauge_group([standard_component("E8")] * 3)


class TestFolding:
    def test_identity_keeps_label(self):
        assert fold_by_automorphism(standard_component("E8"), tuple(range(8))) == "E8"

    def test_flip_on_a3_is_c2(self):
        assert fold_by_automorphism(standard_component("A3"), (2, 1, 0)) == "C2"

    def test_flip_on_a2_is_rank_one(self):
        assert fold_by_automorphism(standard_component("A2"), (1, 0)) == "BC1"

    def test_flip_on_a4_is_bc2(self):
        assert fold_by_automorphism(standard_component("A4"), (3, 2, 1, 0)) == "BC2"

    def test_d5_swap_is_b4(self):
        assert fold_by_automorphism(standard_component("D5"), (0, 1, 2, 4, 3)) == "B4"

    def test_e6_flip_is_f4(self):
        # Bourbaki E6: 1 <-> 6, 3 <-> 5, nodes 2 and 4 fixed.
        assert fold_by_automorphism(standard_component("E6"), (5, 1, 4, 3, 2, 0)) == "F4"

    def test_non_automorphism_raises(self):
        with pytest.raises(NotAnAutomorphismError):
            fold_by_automorphism(standard_component("A3"), (1, 0, 2))


class TestWeylDecompose:
    def test_identity(self):
        comp = standard_component("D5")

        result = weyl_decompose(comp, identity(5))

        assert result.is_trivial
        assert result.word == ()

    def test_minus_identity_on_e8_is_weyl(self):
        result = weyl_decompose(standard_component("E8"), -identity(8))

        assert result.is_trivial

    def test_minus_identity_on_a2_is_flip(self):
        result = weyl_decompose(standard_component("A2"), -identity(2))

        assert result.diagram_automorphism == (1, 0)

    def test_factorization_reassembles(self):
        comp = standard_component("A3")
        iso = -identity(3)

        result = weyl_decompose(comp, iso)

        sigma = int_matrix([[1 if result.diagram_automorphism[j] == i else 0 for j in range(3)] for i in range(3)])
        assert (result.weyl_matrix.dot(sigma) == iso).all()

    @pytest.mark.parametrize("label", ["A1", "A4", "A7", "D4", "D6", "E6", "E7", "E8"])
    def test_random_weyl_words_are_trivial(self, label):
        """
        GIVEN random products of simple reflections
        WHEN decomposed
        THEN the diagram part is the identity
        """
        comp = standard_component(label)
        n = comp.node_count
        cartan = np.array(comp.cartan, dtype=object)
        rng = random.Random(n)
        for _ in range(5):
            w = identity(n)
            for _ in range(rng.randint(1, 12)):
                j = rng.randrange(n)
                reflection = identity(n)
                for i in range(n):
                    reflection[j, i] -= cartan[j, i]
                w = reflection.dot(w)

            assert weyl_decompose(comp, w).is_trivial

    def test_non_isometry_raises(self):
        with pytest.raises(RootSystemError):
            weyl_decompose(standard_component("A2"), int_matrix([[2, 0], [0, 1]]))
