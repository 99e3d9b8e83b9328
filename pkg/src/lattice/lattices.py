"""
Integral lattices with named blocks, the K3 lattice 3H + 2(-E8), and
root enumeration inside negative-definite sublattices.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import ceil, floor, isqrt

import numpy as np

from src.algebra.linear import (
    block_diagonal,
    determinant,
    inertia,
    int_matrix,
    inverse,
    saturate,
)
from src.config import E8_BOURBAKI_EDGES, E8_NODES, PipelineConfig
from src.shared.errors import (
    InvalidSpecError,
    LatticeMismatchError,
    NotDefiniteError,
    SearchExhaustedError,
)
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("LatticeCore")

H_BLOCKS: tuple[str, ...] = ("H1", "H2", "H3")
E8_BLOCKS: tuple[str, ...] = ("E8_1", "E8_2")


# --- Lattices ---


@dataclass(frozen=True)
class LatticeBlock:
    name: str
    offset: int
    size: int

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + self.size)


@dataclass(frozen=True, eq=False)
class IntegerLattice:
    gram: np.ndarray
    blocks: tuple[LatticeBlock, ...]

    def __post_init__(self) -> None:
        n = self.gram.shape[0]
        if self.gram.shape != (n, n) or n == 0:
            raise ValueError("gram matrix must be square and non-empty")
        if not (self.gram == self.gram.T).all():
            raise ValueError("gram matrix must be symmetric")
        covered = [i for b in self.blocks for i in b.indices]
        if covered != list(range(n)):
            raise ValueError("blocks must partition the coordinate range in order")
        for a in self.blocks:
            for b in self.blocks:
                if a is not b and any(self.gram[i, j] for i in a.indices for j in b.indices):
                    raise ValueError(f"gram not block-diagonal between {a.name} and {b.name}")

    @property
    def rank(self) -> int:
        return int(self.gram.shape[0])

    @cached_property
    def _entries(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            (i, j, int(self.gram[i, j]))
            for i in range(self.rank)
            for j in range(self.rank)
            if self.gram[i, j]
        )

    def block(self, name: str) -> LatticeBlock:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(f"no block named {name!r}")

    def signature(self) -> tuple[int, int]:
        pos, neg, _ = inertia(self.gram)
        return pos, neg

    def determinant(self) -> int:
        return int(determinant(self.gram))

    def matches(self, other: "IntegerLattice") -> bool:
        return self is other or (
            self.blocks == other.blocks and (self.gram == other.gram).all()
        )

    def vector(self, coordinates: Iterable[int]) -> "LatticeVector":
        return LatticeVector(self, tuple(int(c) for c in coordinates))

    def rational_vector(self, coordinates: Iterable[int | Fraction]) -> "RationalLatticeVector":
        return RationalLatticeVector(self, tuple(Fraction(c) for c in coordinates))

    def zero(self) -> "LatticeVector":
        return self.vector([0] * self.rank)

    def basis_vector(self, block: str, index: int) -> "LatticeVector":
        """1-based index inside the named block (Bourbaki node for E8 blocks)."""
        b = self.block(block)
        if not 1 <= index <= b.size:
            raise IndexError(f"{block} has no basis vector {index}")
        coords = [0] * self.rank
        coords[b.offset + index - 1] = 1
        return self.vector(coords)

    def embed_block(self, block: str, local: Sequence[int | Fraction]) -> "RationalLatticeVector":
        b = self.block(block)
        if len(local) != b.size:
            raise ValueError(f"{block} has size {b.size}, got {len(local)} coordinates")
        coords = [Fraction(0)] * self.rank
        for k, c in enumerate(local):
            coords[b.offset + k] = Fraction(c)
        return self.rational_vector(coords)


def _pair(lattice: IntegerLattice, x: Sequence[int | Fraction], y: Sequence[int | Fraction]) -> Fraction:
    total = Fraction(0)
    for i, j, g in lattice._entries:
        if x[i] and y[j]:
            total += g * x[i] * y[j]
    return total


# --- Vectors ---


@dataclass(frozen=True)
class RationalLatticeVector:
    lattice: IntegerLattice
    coordinates: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coordinates) != self.lattice.rank:
            raise ValueError(
                f"vector has {len(self.coordinates)} coordinates, lattice rank is {self.lattice.rank}"
            )

    def _check(self, other: "RationalLatticeVector | LatticeVector") -> None:
        if not self.lattice.matches(other.lattice):
            raise LatticeMismatchError("vectors live in different lattices")

    def __add__(self, other: "RationalLatticeVector | LatticeVector") -> "RationalLatticeVector":
        self._check(other)
        return RationalLatticeVector(
            self.lattice,
            tuple(a + b for a, b in zip(self.coordinates, other.coordinates, strict=True)),
        )

    def __sub__(self, other: "RationalLatticeVector | LatticeVector") -> "RationalLatticeVector":
        return self + (-other)

    def __neg__(self) -> "RationalLatticeVector":
        return RationalLatticeVector(self.lattice, tuple(-a for a in self.coordinates))

    def __mul__(self, scalar: int | Fraction) -> "RationalLatticeVector":
        s = Fraction(scalar)
        return RationalLatticeVector(self.lattice, tuple(a * s for a in self.coordinates))

    __rmul__ = __mul__

    def dot(self, other: "RationalLatticeVector | LatticeVector") -> Fraction:
        return inner_product(self, other)

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coordinates)

    def to_integral(self) -> "LatticeVector":
        if not self.is_integral():
            raise ValueError("vector has non-integral coordinates")
        return LatticeVector(self.lattice, tuple(int(c) for c in self.coordinates))

    def support(self) -> set[str]:
        return {
            b.name for b in self.lattice.blocks if any(self.coordinates[i] for i in b.indices)
        }

    def block_coordinates(self, block: str) -> tuple[Fraction, ...]:
        b = self.lattice.block(block)
        return tuple(self.coordinates[i] for i in b.indices)


@dataclass(frozen=True)
class LatticeVector:
    lattice: IntegerLattice
    coordinates: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coordinates) != self.lattice.rank:
            raise ValueError(
                f"vector has {len(self.coordinates)} coordinates, lattice rank is {self.lattice.rank}"
            )

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        if not self.lattice.matches(other.lattice):
            raise LatticeMismatchError("vectors live in different lattices")
        return LatticeVector(
            self.lattice,
            tuple(a + b for a, b in zip(self.coordinates, other.coordinates, strict=True)),
        )

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + (-other)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-a for a in self.coordinates))

    def __mul__(self, scalar: int) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(a * scalar for a in self.coordinates))

    __rmul__ = __mul__

    def __lt__(self, other: "LatticeVector") -> bool:
        return self.coordinates < other.coordinates

    def as_rational(self) -> RationalLatticeVector:
        return RationalLatticeVector(self.lattice, tuple(Fraction(c) for c in self.coordinates))

    def dot(self, other: "RationalLatticeVector | LatticeVector") -> Fraction:
        return inner_product(self, other)

    def norm(self) -> int:
        return int(inner_product(self, self))

    def support(self) -> set[str]:
        return {
            b.name for b in self.lattice.blocks if any(self.coordinates[i] for i in b.indices)
        }

    def block_coordinates(self, block: str) -> tuple[int, ...]:
        b = self.lattice.block(block)
        return tuple(self.coordinates[i] for i in b.indices)


def inner_product(
    x: RationalLatticeVector | LatticeVector, y: RationalLatticeVector | LatticeVector
) -> Fraction:
    if not x.lattice.matches(y.lattice):
        raise LatticeMismatchError("inner product of vectors in different lattices")
    return _pair(x.lattice, x.coordinates, y.coordinates)


# --- Standard lattices ---


def make_hyperbolic(name: str = "H") -> IntegerLattice:
    return IntegerLattice(int_matrix([[0, 1], [1, 0]]), (LatticeBlock(name, 0, 2),))


def e8_cartan_matrix() -> np.ndarray:
    """Positive E8 Cartan matrix in Bourbaki numbering."""
    n = len(E8_NODES)
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in E8_BOURBAKI_EDGES:
        rows[a - 1][b - 1] = rows[b - 1][a - 1] = -1
    return int_matrix(rows)


def make_minus_e8(name: str = "E8") -> IntegerLattice:
    return IntegerLattice(-e8_cartan_matrix(), (LatticeBlock(name, 0, len(E8_NODES)),))


def direct_sum(parts: Sequence[IntegerLattice]) -> IntegerLattice:
    blocks: list[LatticeBlock] = []
    offset = 0
    for part in parts:
        for b in part.blocks:
            blocks.append(LatticeBlock(b.name, offset + b.offset, b.size))
        offset += part.rank
    return IntegerLattice(block_diagonal([p.gram for p in parts]), tuple(blocks))


def make_k3_lattice() -> IntegerLattice:
    """L = H1 + H2 + H3 + (-E8)_1 + (-E8)_2, rank 22, signature (3, 19)."""
    return direct_sum(
        [make_hyperbolic(h) for h in H_BLOCKS] + [make_minus_e8(e) for e in E8_BLOCKS]
    )


# --- Negative-definite sublattices ---


@dataclass(frozen=True, eq=False)
class NegativeDefiniteSublattice:
    ambient: IntegerLattice
    basis: tuple[LatticeVector, ...]
    gram: np.ndarray

    @classmethod
    def from_basis(
        cls,
        ambient: IntegerLattice,
        vectors: Sequence[LatticeVector],
        *,
        saturated: bool = False,
    ) -> "NegativeDefiniteSublattice":
        """
        Restricts the form to span(vectors). Unless `saturated`, the basis is
        first replaced by a basis of span_Q(vectors) intersected with L.
        """
        for v in vectors:
            if not v.lattice.matches(ambient):
                raise LatticeMismatchError("basis vector outside the ambient lattice")
        coords = [list(v.coordinates) for v in vectors if any(v.coordinates)]
        if not saturated:
            coords = [list(c) for c in saturate(coords, ambient.rank)]
        basis = tuple(ambient.vector(c) for c in coords)
        if not basis:
            return cls(ambient, (), np.zeros((0, 0), dtype=object))
        gram = int_matrix([[int(inner_product(a, b)) for b in basis] for a in basis])
        if inertia(gram) != (0, len(basis), 0):
            raise NotDefiniteError(
                "restricted form is not negative definite", witness=inertia(gram)
            )
        return cls(ambient, basis, gram)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def combine(self, coefficients: Sequence[int]) -> LatticeVector:
        coords = [0] * self.ambient.rank
        for c, v in zip(coefficients, self.basis, strict=True):
            if c:
                for i, x in enumerate(v.coordinates):
                    coords[i] += c * x
        return self.ambient.vector(coords)


def _lll_reduce(gram: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """
    LLL on a positive definite Gram matrix (delta = 3/4), basis kept implicit.
    Returns the reduced Gram matrix and the transform T (rows = new basis in
    terms of the old one).
    """
    n = len(gram)
    g = [row[:] for row in gram]
    h = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    if n == 0:
        return g, h
    b[0] = Fraction(g[0][0])
    delta = Fraction(3, 4)
    k, kmax = 1, 0

    def reduce(k: int, j: int) -> None:
        if abs(mu[k][j]) <= Fraction(1, 2):
            return
        q = round(mu[k][j])
        h[k] = [x - q * y for x, y in zip(h[k], h[j], strict=True)]
        g[k][k] = g[k][k] - 2 * q * g[k][j] + q * q * g[j][j]
        for i in range(n):
            if i != k:
                g[k][i] -= q * g[j][i]
                g[i][k] = g[k][i]
        mu[k][j] -= q
        for i in range(j):
            mu[k][i] -= q * mu[j][i]

    def swap(k: int) -> None:
        h[k], h[k - 1] = h[k - 1], h[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        bn = b[k] + m * m * b[k - 1]
        mu[k][k - 1] = m * b[k - 1] / bn
        b[k] = b[k - 1] * b[k] / bn
        b[k - 1] = bn
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (g[k][j] - sum((mu[j][i] * mu[k][i] * b[i] for i in range(j)), Fraction(0))) / b[j]
            b[k] = g[k][k] - sum((mu[k][j] ** 2 * b[j] for j in range(k)), Fraction(0))
        reduce(k, k - 1)
        if b[k] < (delta - mu[k][k - 1] ** 2) * b[k - 1]:
            swap(k)
            k = max(1, k - 1)
            continue
        for j in range(k - 2, -1, -1):
            reduce(k, j)
        k += 1
    return g, h


def _short_vectors(q: list[list[int]], bound: int) -> Iterator[tuple[int, ...]]:
    """Nonzero integer x with x^T Q x <= bound, Q positive definite."""
    n = len(q)
    # Quadratic-form decomposition: Q(x) = sum_i a[i][i] (x_i + sum_{j>i} a[i][j] x_j)^2
    a = [[Fraction(v) for v in row] for row in q]
    for i in range(n):
        for j in range(i + 1, n):
            a[j][i] = a[i][j]
            a[i][j] = a[i][j] / a[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                a[k][m] -= a[k][i] * a[i][m]
    coupling = [[(j, a[i][j]) for j in range(i + 1, n) if a[i][j]] for i in range(n)]

    x = [0] * n

    def descend(i: int, remaining: Fraction) -> Iterator[tuple[int, ...]]:
        centre = -sum((c * x[j] for j, c in coupling[i]), Fraction(0))
        t = remaining / a[i][i]
        r = isqrt(floor(t)) + 1
        for xi in range(floor(centre) - r, ceil(centre) + r + 1):
            d = xi - centre
            if d * d > t:
                continue
            x[i] = xi
            rest = remaining - a[i][i] * d * d
            if i == 0:
                yield tuple(x)
            else:
                yield from descend(i - 1, rest)
        x[i] = 0

    if n == 0:
        return
    for v in descend(n - 1, Fraction(bound)):
        if any(v):
            yield v


def enumerate_roots(sub: NegativeDefiniteSublattice) -> list[LatticeVector]:
    """All norm -2 vectors of the sublattice, sorted lexicographically."""
    if sub.rank == 0:
        return []
    positive = [[-int(sub.gram[i, j]) for j in range(sub.rank)] for i in range(sub.rank)]
    reduced, transform = _lll_reduce(positive)
    roots: list[LatticeVector] = []
    for coeffs in _short_vectors(reduced, 2):
        norm = sum(
            reduced[i][j] * coeffs[i] * coeffs[j]
            for i in range(sub.rank)
            for j in range(sub.rank)
            if coeffs[i] and coeffs[j]
        )
        if norm != 2:
            continue
        original = [sum(coeffs[r] * transform[r][c] for r in range(sub.rank)) for c in range(sub.rank)]
        roots.append(sub.combine(original))
    roots.sort()
    _telemetry.log_info("roots_enumerated", rank=sub.rank, count=len(roots))
    return roots


# --- E8 block roots and perturbation directions ---


def _e8_block(lattice: IntegerLattice, block: str) -> LatticeBlock:
    b = lattice.block(block)
    if b.size != len(E8_NODES) or not (
        lattice.gram[b.offset : b.offset + b.size, b.offset : b.offset + b.size]
        == -e8_cartan_matrix()
    ).all():
        raise InvalidSpecError(f"block {block} is not a (-E8) block", witness=block)
    return b


@lru_cache(maxsize=16)
def block_roots(lattice: IntegerLattice, block: str) -> tuple[LatticeVector, ...]:
    """The 240 roots of a (-E8) block, via enumeration in the block's basis."""
    _e8_block(lattice, block)
    basis = [lattice.basis_vector(block, k) for k in E8_NODES]
    sub = NegativeDefiniteSublattice.from_basis(lattice, basis, saturated=True)
    return tuple(enumerate_roots(sub))


def orthogonal_root_set(
    lattice: IntegerLattice, block: str, u: RationalLatticeVector
) -> list[LatticeVector]:
    if u.support() - {block}:
        raise InvalidSpecError(
            f"perturbation must be supported in {block}", witness=sorted(u.support())
        )
    return [d for d in block_roots(lattice, block) if inner_product(d, u) == 0]


def _validate_keep(keep: Iterable[int]) -> frozenset[int]:
    nodes = frozenset(keep)
    if not nodes <= set(E8_NODES):
        raise InvalidSpecError(f"unknown E8 nodes {sorted(nodes - set(E8_NODES))}")
    return nodes


def generic_orthogonal_vector(
    lattice: IntegerLattice,
    block: str,
    keep: Iterable[int],
    height: int | None = None,
) -> RationalLatticeVector:
    """
    Vector u in the block with d.u = 0 exactly for the roots d spanned by the
    kept simple roots.

    Since the block form is unimodular, u is fixed by its pairings
    y_k = alpha_k . u; y_k = 0 on `keep`, the remaining y_k range over
    1..height in a fixed order and each candidate is checked against all
    240 roots. The height widens up to ORTHOGONAL_SEARCH_MAX_HEIGHT.
    """
    nodes = _validate_keep(keep)
    if nodes == set(E8_NODES):
        raise InvalidSpecError("keep must be a proper subset of the E8 nodes", witness=sorted(nodes))

    b = _e8_block(lattice, block)
    local_gram = lattice.gram[b.offset : b.offset + b.size, b.offset : b.offset + b.size]
    local_inverse = inverse(local_gram)
    roots = block_roots(lattice, block)
    keep_span = [r for r in roots if all(c == 0 for k, c in enumerate(r.block_coordinates(block), 1) if k not in nodes)]
    target = set(keep_span)
    free = [k for k in E8_NODES if k not in nodes]

    h = height or PipelineConfig.ORTHOGONAL_SEARCH_HEIGHT
    tried: set[tuple[int, ...]] = set()
    while h <= PipelineConfig.ORTHOGONAL_SEARCH_MAX_HEIGHT:
        for values in product(range(1, h + 1), repeat=len(free)):
            if values in tried:
                continue
            tried.add(values)
            pairings = [Fraction(0)] * b.size
            for k, y in zip(free, values, strict=True):
                pairings[k - 1] = Fraction(y)
            local = [sum((local_inverse[i, j] * pairings[j] for j in range(b.size)), Fraction(0)) for i in range(b.size)]
            u = lattice.embed_block(block, local)
            if {d for d in roots if inner_product(d, u) == 0} == target:
                _telemetry.log_info("orthogonal_vector_found", block=block, keep=sorted(nodes), height=h)
                return u
        _telemetry.log_info("orthogonal_search_widened", block=block, height=h)
        h += 1
    raise SearchExhaustedError(
        f"no generic vector for keep={sorted(nodes)} up to height {PipelineConfig.ORTHOGONAL_SEARCH_MAX_HEIGHT}",
        witness=sorted(nodes),
    )
