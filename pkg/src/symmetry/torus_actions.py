"""
Affine isometries x -> A x + v of T^3 = R^3 / Z^3 with signed-permutation A,
the finite groups they generate, freeness, and the induced action on the
cohomology of T^3.
"""

import itertools
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from src.algebra.linear import (
    column_space,
    identity,
    int_matrix,
    integer_kernel,
    inverse,
    rank,
    rat_matrix,
    smith_normal_form,
    solve_affine_congruence,
)
from src.config import PipelineConfig
from src.g2.forms import ExteriorForm, pullback
from src.shared.errors import ClosureBoundExceededError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("TorusActions")

Rotation = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]
Translation = tuple[Fraction, Fraction, Fraction]


def _mod1(values: Sequence[int | Fraction]) -> Translation:
    a, b, c = (Fraction(v) % 1 for v in values)
    return (a, b, c)


@dataclass(frozen=True)
class AffineTorusIsometry:
    rotation: Rotation
    translation: Translation

    def __post_init__(self) -> None:
        a = self.matrix
        if not (a.T.dot(a) == identity(3)).all():
            raise ValueError(f"rotation part is not orthogonal: {self.rotation}")
        if any(not 0 <= t < 1 for t in self.translation):
            raise ValueError(f"translation not reduced mod 1: {self.translation}")

    @classmethod
    def create(cls, rotation: Sequence[Sequence[int]], translation: Sequence[int | Fraction]) -> "AffineTorusIsometry":
        rows = tuple(tuple(int(x) for x in row) for row in rotation)
        return cls(rows, _mod1(translation))  # type: ignore[arg-type]

    @classmethod
    def identity(cls) -> "AffineTorusIsometry":
        return cls.create(identity(3).tolist(), (0, 0, 0))

    @property
    def matrix(self) -> np.ndarray:
        return int_matrix(self.rotation)

    @property
    def determinant(self) -> int:
        a = self.matrix
        return int(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )

    def apply(self, x: Sequence[int | Fraction]) -> Translation:
        a = self.matrix
        return _mod1([sum((a[i, j] * Fraction(x[j]) for j in range(3)), Fraction(0)) + self.translation[i] for i in range(3)])

    def compose(self, other: "AffineTorusIsometry") -> "AffineTorusIsometry":
        """self after other: (A, v) o (A', v') = (A A', A v' + v)."""
        a = self.matrix
        rotation = a.dot(other.matrix)
        shift = [sum((a[i, j] * other.translation[j] for j in range(3)), Fraction(0)) + self.translation[i] for i in range(3)]
        return AffineTorusIsometry.create(rotation.tolist(), shift)

    __matmul__ = compose

    def inverse(self) -> "AffineTorusIsometry":
        at = self.matrix.T
        shift = [-sum((at[i, j] * self.translation[j] for j in range(3)), Fraction(0)) for i in range(3)]
        return AffineTorusIsometry.create(at.tolist(), shift)

    def is_identity(self) -> bool:
        return self == AffineTorusIsometry.identity()

    def order(self, bound: int = PipelineConfig.TORUS_CLOSURE_BOUND) -> int:
        power, k = self, 1
        while not power.is_identity():
            power, k = power @ self, k + 1
            if k > bound:
                raise ClosureBoundExceededError(f"element order exceeds {bound}", witness=str(self))
        return k

    def __str__(self) -> str:
        return f"({[list(r) for r in self.rotation]}, {[str(t) for t in self.translation]})"


_TORUS_PARTS: dict[str, tuple[tuple[int, int, int], tuple[Fraction, Fraction, Fraction]]] = {
    "beta": ((-1, -1, 1), (Fraction(1, 2), Fraction(0), Fraction(1, 2))),
    "gamma": ((-1, 1, -1), (Fraction(0), Fraction(1, 2), Fraction(0))),
    "beta_prime": ((-1, -1, 1), (Fraction(0), Fraction(3, 4), Fraction(1, 2))),
    "eta": ((1, -1, -1), (Fraction(1, 4), Fraction(1, 4), Fraction(0))),
}


def torus_part(name: str) -> AffineTorusIsometry:
    if name not in _TORUS_PARTS:
        raise ValueError(f"unknown torus map {name!r}")
    signs, shift = _TORUS_PARTS[name]
    rotation = [[signs[i] if i == j else 0 for j in range(3)] for i in range(3)]
    return AffineTorusIsometry.create(rotation, shift)


# --- Groups ---


@dataclass(frozen=True)
class TorusGroup:
    generator_names: tuple[str, ...]
    elements: tuple[AffineTorusIsometry, ...]
    words: tuple[tuple[str, ...], ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> tuple[AffineTorusIsometry, ...]:
        return tuple(self.elements[self.words.index((name,))] for name in self.generator_names)

    def index(self, element: AffineTorusIsometry) -> int:
        return self.elements.index(element)

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))

    def element_orders(self) -> list[int]:
        return sorted(g.order() for g in self.elements)

    def rotation_parts(self) -> list[np.ndarray]:
        seen: list[Rotation] = []
        for g in self.elements:
            if g.rotation not in seen:
                seen.append(g.rotation)
        return [int_matrix(r) for r in seen]


def close_group(
    generators: Sequence[tuple[str, AffineTorusIsometry]],
    bound: int = PipelineConfig.TORUS_CLOSURE_BOUND,
) -> TorusGroup:
    """Breadth-first closure; element 0 is the identity with the empty word."""
    identity_map = AffineTorusIsometry.identity()
    elements = [identity_map]
    words: list[tuple[str, ...]] = [()]
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for name, s in generators:
            h = elements[k] @ s
            if h in elements:
                continue
            if len(elements) >= bound:
                raise ClosureBoundExceededError(f"torus group exceeds {bound} elements", witness=str(h))
            elements.append(h)
            words.append(words[k] + (name,))
            queue.append(len(elements) - 1)

    # Single-letter words for the generators, even when a generator coincides
    # with an element reached earlier.
    for name, s in generators:
        position = elements.index(s)
        if len(words[position]) != 1:
            words[position] = (name,)

    table = tuple(tuple(elements.index(a @ b) for b in elements) for a in elements)
    _telemetry.log_info("torus_group_closed", generators=[n for n, _ in generators], order=len(elements))
    return TorusGroup(tuple(n for n, _ in generators), tuple(elements), tuple(words), table)


def named_group(names: Sequence[str]) -> TorusGroup:
    return close_group([(name, torus_part(name)) for name in names])


# --- Freeness ---


@dataclass(frozen=True)
class FixedPointVerdict:
    word: tuple[str, ...]
    has_fixed_point: bool
    witness: tuple[Fraction, ...] | None = None


@dataclass(frozen=True)
class FreenessReport:
    free: bool
    verdicts: tuple[FixedPointVerdict, ...]


def fixed_point(g: AffineTorusIsometry) -> tuple[Fraction, ...] | None:
    """A solution of (A - I) x = -v (mod Z^3), or None."""
    a = g.matrix - identity(3)
    solution = solve_affine_congruence(a, [-t for t in g.translation])
    return solution.witness if solution.solvable else None


def is_free(group: TorusGroup) -> FreenessReport:
    verdicts = []
    for g, word in zip(group.elements, group.words, strict=True):
        if g.is_identity():
            continue
        x = fixed_point(g)
        verdicts.append(FixedPointVerdict(word, x is not None, x))
    free = not any(v.has_fixed_point for v in verdicts)
    _telemetry.log_info("freeness_checked", order=group.order, free=free)
    return FreenessReport(free, tuple(verdicts))


def is_free_on_grid(group: TorusGroup, denominator: int = PipelineConfig.FREENESS_GRID_DENOMINATOR) -> bool:
    """Brute-force search for fixed points on (1/d) Z^3 / Z^3."""
    grid = [Fraction(k, denominator) for k in range(denominator)]
    for g in group.elements:
        if g.is_identity():
            continue
        for x in itertools.product(grid, repeat=3):
            if g.apply(x) == x:
                return False
    return True


# --- Invariant lines ---


def _joint_eigendirections(rotations: Sequence[np.ndarray]) -> list[list[tuple[int, ...]]]:
    """Integral bases of the joint eigenspaces, one entry per sign pattern."""
    spaces = []
    for signs in itertools.product((1, -1), repeat=len(rotations)):
        stacked = np.vstack([a - identity(3) * s for a, s in zip(rotations, signs, strict=True)])
        basis = integer_kernel(int_matrix(stacked.tolist()))
        if basis:
            spaces.append(basis)
    return spaces


def _unimodular_completion(w: Sequence[int]) -> np.ndarray:
    """Unimodular B whose first column is +-w, for primitive w."""
    snf = smith_normal_form(int_matrix([list(w)]))
    return int_matrix(inverse(snf.V).T.tolist())


def _primitive_directions(
    space: Sequence[Sequence[int]], height: int
) -> list[tuple[int, ...]]:
    """Primitive vectors of span(space), coefficients up to height, up to sign."""
    found: set[tuple[int, ...]] = set()
    for coefficients in itertools.product(range(-height, height + 1), repeat=len(space)):
        v = [
            sum(c * b[i] for c, b in zip(coefficients, space, strict=True))
            for i in range(3)
        ]
        divisor = gcd(*v)
        if divisor == 0:
            continue
        w = tuple(x // divisor for x in v)
        if next(x for x in w if x) < 0:
            w = tuple(-x for x in w)
        found.add(w)
    return sorted(found, key=lambda w: (max(abs(x) for x in w), w))


def _line_is_invariant(generators: Sequence[AffineTorusIsometry], w: Sequence[int]) -> bool:
    """Some translate of the circle R w is preserved; w is a joint eigenvector."""
    b = _unimodular_completion(w)
    b_inv = int_matrix(inverse(b).tolist())
    blocks, shifts = [], []
    for g in generators:
        conjugated = b_inv.dot(g.matrix).dot(b)
        blocks.append(conjugated[1:, 1:] - identity(2))
        moved = b_inv.dot(np.array(g.translation, dtype=object))
        shifts += [-moved[1], -moved[2]]
    system = int_matrix(np.vstack(blocks).tolist())
    return solve_affine_congruence(system, shifts).solvable


def has_invariant_line(
    group: TorusGroup, height: int = PipelineConfig.INVARIANT_LINE_SEARCH_HEIGHT
) -> bool:
    """
    True when some closed line x0 + R w in T^3 is mapped to itself by every
    element, i.e. the Euclidean motions leave a one-dimensional direction and
    a common point of the quotient torus fixed.

    A one-dimensional joint eigenspace has a single direction. Inside a
    plane or the whole space every primitive direction is an eigenvector,
    and those are searched up to the given coefficient height.
    """
    generators = group.generators
    if not generators:
        return True
    rotations = [g.matrix for g in generators]
    for space in _joint_eigendirections(rotations):
        if len(space) == 1:
            directions = list(space)
        else:
            directions = _primitive_directions(space, height)
        if any(_line_is_invariant(generators, w) for w in directions):
            return True
    return False


# --- Cohomology ---


@dataclass(frozen=True)
class CohomologyAction:
    degree: int
    basis: tuple[tuple[int, ...], ...]
    matrices: tuple[np.ndarray, ...]
    invariant_dimension: int
    invariant_basis: tuple[tuple[Fraction, ...], ...]


def form_basis(degree: int, dimension: int = 3) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, dimension + 1), degree))


def pullback_matrix(a: np.ndarray, degree: int) -> np.ndarray:
    """Matrix of A^* on Lambda^k (R^n)^*; column j is the image of basis form j."""
    n = a.shape[0]
    basis = form_basis(degree, n)
    columns = []
    for idx in basis:
        image = pullback(a, ExteriorForm.basis(n, *idx))
        columns.append([image.coefficient(*jdx) for jdx in basis])
    return rat_matrix([[columns[j][i] for j in range(len(basis))] for i in range(len(basis))])


def averaged_projector(matrices: Sequence[np.ndarray]) -> np.ndarray:
    total = matrices[0] * Fraction(1)
    for m in matrices[1:]:
        total = total + m
    return total * Fraction(1, len(matrices))


def cohomology_action(group: TorusGroup, degree: int) -> CohomologyAction:
    if degree not in (1, 2, 3):
        raise ValueError(f"degree must be 1, 2 or 3, got {degree}")
    basis = form_basis(degree)
    matrices = tuple(pullback_matrix(g.matrix, degree) for g in group.elements)
    projector = averaged_projector(matrices)
    invariants = tuple(column_space(projector)) if rank(projector) else ()
    return CohomologyAction(degree, tuple(basis), matrices, len(invariants), invariants)
