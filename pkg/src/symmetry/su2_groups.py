"""
Finite subgroups of SU(2) and the (anti)linear maps tau_1, tau_2, tau_3 of C^2,
with exact entries in cyclotomic fields.
"""

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from src.algebra.cyclotomic import Cyclotomic, common_conductor
from src.config import PipelineConfig
from src.shared.errors import ClosureBoundExceededError, NormalizationError, OrbifoldError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("SU2Groups")

Entry = Cyclotomic | int | Fraction
Matrix2 = tuple[tuple[Cyclotomic, Cyclotomic], tuple[Cyclotomic, Cyclotomic]]


def _lift(conductor: int, value: Entry) -> Cyclotomic:
    if isinstance(value, Cyclotomic):
        return value.embed(conductor)
    return Cyclotomic.from_rational(conductor, value)


@dataclass(frozen=True)
class AntiUnitaryMap:
    """z -> M z (conjugating=False) or z -> M conj(z) (conjugating=True)."""

    matrix: Matrix2
    conjugating: bool = False

    @classmethod
    def from_rows(
        cls, conductor: int, rows: Sequence[Sequence[Entry]], conjugating: bool = False
    ) -> "AntiUnitaryMap":
        (a, b), (c, d) = rows
        return cls(
            ((_lift(conductor, a), _lift(conductor, b)), (_lift(conductor, c), _lift(conductor, d))),
            conjugating,
        )

    @classmethod
    def identity(cls, conductor: int) -> "AntiUnitaryMap":
        return cls.from_rows(conductor, [[1, 0], [0, 1]])

    @property
    def conductor(self) -> int:
        return self.matrix[0][0].conductor

    def embed(self, conductor: int) -> "AntiUnitaryMap":
        return AntiUnitaryMap(
            tuple(tuple(x.embed(conductor) for x in row) for row in self.matrix),  # type: ignore[arg-type]
            self.conjugating,
        )

    def _conj_matrix(self) -> Matrix2:
        (a, b), (c, d) = self.matrix
        return ((a.conj(), b.conj()), (c.conj(), d.conj()))

    @staticmethod
    def _mul(m: Matrix2, n: Matrix2) -> Matrix2:
        return (
            (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
            (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
        )

    def compose(self, other: "AntiUnitaryMap") -> "AntiUnitaryMap":
        """self after other: (M, c) o (N, d) = (M sigma^c(N), c xor d)."""
        n = other._conj_matrix() if self.conjugating else other.matrix
        return AntiUnitaryMap(self._mul(self.matrix, n), self.conjugating != other.conjugating)

    __matmul__ = compose

    def dagger(self) -> Matrix2:
        (a, b), (c, d) = self.matrix
        return ((a.conj(), c.conj()), (b.conj(), d.conj()))

    def inverse(self) -> "AntiUnitaryMap":
        m = self.dagger()
        if self.conjugating:
            m = AntiUnitaryMap(m)._conj_matrix()
        return AntiUnitaryMap(m, self.conjugating)

    def determinant(self) -> Cyclotomic:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def is_unitary(self) -> bool:
        one, zero = Cyclotomic.one(self.conductor), Cyclotomic.zero(self.conductor)
        return self._mul(self.matrix, self.dagger()) == ((one, zero), (zero, one))

    def is_special_unitary(self) -> bool:
        return (
            not self.conjugating
            and self.is_unitary()
            and self.determinant() == Cyclotomic.one(self.conductor)
        )

    def to_real_matrix(self) -> np.ndarray:
        """
        4x4 real form on (x4, x5, x6, x7) with z1 = x4 + i x5, z2 = x6 + i x7.
        Only defined when the real and imaginary parts of all entries are rational.
        """
        n = common_conductor(self.conductor, 4)
        m = self.embed(n)
        i = Cyclotomic.imaginary_unit(n)
        one, zero = Cyclotomic.one(n), Cyclotomic.zero(n)
        inputs = [(one, zero), (i, zero), (zero, one), (zero, i)]
        half_over_i = (i * 2).inverse()
        columns = []
        for z1, z2 in inputs:
            if m.conjugating:
                z1, z2 = z1.conj(), z2.conj()
            w1 = m.matrix[0][0] * z1 + m.matrix[0][1] * z2
            w2 = m.matrix[1][0] * z1 + m.matrix[1][1] * z2
            column = []
            for w in (w1, w2):
                column.append(w.real_part().to_rational())
                column.append(((w - w.conj()) * half_over_i).to_rational())
            columns.append(column)
        return np.array([[columns[j][r] for j in range(4)] for r in range(4)], dtype=object)

    def __str__(self) -> str:
        rows = "; ".join(", ".join(str(x) for x in row) for row in self.matrix)
        return f"[{rows}]" + (" conj" if self.conjugating else "")


# --- Groups ---


def closure(
    generators: Sequence[AntiUnitaryMap], bound: int = PipelineConfig.SU2_CLOSURE_BOUND
) -> list[AntiUnitaryMap]:
    """Breadth-first closure under composition, identity first."""
    if bound < 1:
        raise ValueError("closure bound must be positive")
    if not generators:
        raise ValueError("closure needs at least one generator")
    n = common_conductor(*(g.conductor for g in generators))
    gens = [g.embed(n) for g in generators]
    identity = AntiUnitaryMap.identity(n)
    elements = [identity]
    seen = {identity}
    queue = deque(elements)
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g @ s
            if h not in seen:
                if len(elements) >= bound:
                    raise ClosureBoundExceededError(
                        f"closure exceeds {bound} elements", witness=str(h)
                    )
                seen.add(h)
                elements.append(h)
                queue.append(h)
    return elements


@dataclass(frozen=True)
class FiniteSU2Group:
    label: str
    generators: tuple[AntiUnitaryMap, ...]
    elements: tuple[AntiUnitaryMap, ...]

    @classmethod
    def generate(cls, label: str, generators: Sequence[AntiUnitaryMap]) -> "FiniteSU2Group":
        for g in generators:
            if not g.is_special_unitary():
                raise OrbifoldError(f"generator of {label} is not in SU(2)", witness=str(g))
        # A correct generating set never exceeds its known order.
        bound = max(PipelineConfig.SU2_CLOSURE_BOUND, expected_order(label))
        elements = closure(generators, bound=bound)
        n = elements[0].conductor
        _telemetry.log_info("su2_group_closed", label=label, order=len(elements), conductor=n)
        return cls(label, tuple(g.embed(n) for g in generators), tuple(elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def conductor(self) -> int:
        return self.elements[0].conductor

    @property
    def is_cyclic_model(self) -> bool:
        return self.label.startswith("A") or self.label == "trivial"

    def embed(self, conductor: int) -> "FiniteSU2Group":
        return FiniteSU2Group(
            self.label,
            tuple(g.embed(conductor) for g in self.generators),
            tuple(g.embed(conductor) for g in self.elements),
        )


def cyclic_gamma(n: int) -> FiniteSU2Group:
    """Gamma = <diag(zeta_n, zeta_n^-1)>, the A_(n-1) group."""
    if n < 1:
        raise ValueError(f"cyclic order must be positive, got {n}")
    zeta = Cyclotomic.root_of_unity(n, 1)
    generator = AntiUnitaryMap.from_rows(n, [[zeta, 0], [0, zeta.conj()]])
    label = f"A{n - 1}" if n > 1 else "trivial"
    return FiniteSU2Group.generate(label, [generator])


def _quaternion(conductor: int, a: Entry, b: Entry, c: Entry, d: Entry) -> AntiUnitaryMap:
    """a + b i + c j + d k as [[a + b I, c + d I], [-c + d I, a - b I]]."""
    i = Cyclotomic.imaginary_unit(conductor)
    a_, b_, c_, d_ = (_lift(conductor, x) for x in (a, b, c, d))
    return AntiUnitaryMap(((a_ + b_ * i, c_ + d_ * i), (-c_ + d_ * i, a_ - b_ * i)))


def binary_polyhedral(label: str) -> FiniteSU2Group:
    half = Fraction(1, 2)
    if label.startswith("D"):
        n = int(label[1:])
        if n < 4:
            raise ValueError(f"D_n needs n >= 4, got {label}")
        m = 2 * (n - 2)
        conductor = common_conductor(m, 4)
        zeta = Cyclotomic.root_of_unity(conductor, conductor // m)
        rotation = AntiUnitaryMap.from_rows(conductor, [[zeta, 0], [0, zeta.conj()]])
        weyl = AntiUnitaryMap.from_rows(conductor, [[0, 1], [-1, 0]])
        return FiniteSU2Group.generate(label, [rotation, weyl])

    if label == "E6":
        conductor = 24
        gens = [_quaternion(conductor, half, half, half, half), _quaternion(conductor, 0, 1, 0, 0)]
    elif label == "E7":
        conductor = 24
        root2 = Cyclotomic.root_of_unity(conductor, 3) + Cyclotomic.root_of_unity(conductor, 21)
        inv_root2 = root2 * half
        gens = [
            _quaternion(conductor, half, half, half, half),
            _quaternion(conductor, 0, 1, 0, 0),
            _quaternion(conductor, inv_root2, inv_root2, 0, 0),
        ]
    elif label == "E8":
        conductor = 20
        # phi^-1 = zeta5 + zeta5^4, phi = 1 + phi^-1
        phi_inv = Cyclotomic.root_of_unity(conductor, 4) + Cyclotomic.root_of_unity(conductor, 16)
        phi = phi_inv + 1
        gens = [
            _quaternion(conductor, half, half, half, half),
            _quaternion(conductor, 0, 1, 0, 0),
            _quaternion(conductor, phi * half, phi_inv * half, half, 0),
        ]
    else:
        raise ValueError(f"unknown binary polyhedral label {label}")
    return FiniteSU2Group.generate(label, gens)


def expected_order(label: str) -> int:
    if label == "trivial":
        return 1
    family, n = label[0], int(label[1:])
    if family == "A":
        return n + 1
    if family == "D":
        return 4 * (n - 2)
    return {6: 24, 7: 48, 8: 120}[n]


# --- Maps tau and conjugation ---


def tau_1() -> AntiUnitaryMap:
    """(z1, z2) -> (-z1, z2)."""
    return AntiUnitaryMap.from_rows(4, [[-1, 0], [0, 1]])


def tau_2() -> AntiUnitaryMap:
    """(z1, z2) -> (-conj z1, -conj z2)."""
    return AntiUnitaryMap.from_rows(4, [[-1, 0], [0, -1]], conjugating=True)


def tau_3() -> AntiUnitaryMap:
    """(z1, z2) -> (-i conj z2, i conj z1)."""
    i = Cyclotomic.imaginary_unit(4)
    return AntiUnitaryMap.from_rows(4, [[0, -i], [i, 0]], conjugating=True)


@dataclass(frozen=True)
class ConjugationAction:
    permutation: tuple[int, ...]
    exponent_multiplier: int | None = None


def conjugation_action(t: AntiUnitaryMap, gamma: FiniteSU2Group) -> ConjugationAction:
    """g -> t g t^-1 on the elements of gamma, which t must normalize."""
    n = common_conductor(t.conductor, gamma.conductor)
    t, group = t.embed(n), gamma.embed(n)
    t_inv = t.inverse()
    index = {g: k for k, g in enumerate(group.elements)}

    permutation = []
    for g in group.elements:
        image = t @ g @ t_inv
        if image not in index:
            raise NormalizationError(
                f"conjugation does not preserve {gamma.label}", witness=str(g)
            )
        permutation.append(index[image])

    multiplier = None
    if group.is_cyclic_model:
        a = group.generators[0]
        powers = [AntiUnitaryMap.identity(n)]
        for _ in range(group.order - 1):
            powers.append(powers[-1] @ a)
        image = t @ a @ t_inv
        multiplier = powers.index(image) if group.order > 1 else 1
    return ConjugationAction(tuple(permutation), multiplier)


class DiagramAction(Enum):
    TRIVIAL = "trivial"
    FLIP = "flip"


def induced_diagram_automorphism(multiplier: int, n: int) -> DiagramAction:
    """Effect of k -> m k (mod n) on the A_(n-1) diagram."""
    if n < 1:
        raise ValueError(f"cyclic order must be positive, got {n}")
    m = multiplier % n
    if m == 1 % n:
        return DiagramAction.TRIVIAL
    if m == (-1) % n:
        return DiagramAction.FLIP if n >= 3 else DiagramAction.TRIVIAL
    raise OrbifoldError(
        f"exponent map k -> {multiplier}k mod {n} is neither identity nor inversion",
        witness=(multiplier, n),
    )
