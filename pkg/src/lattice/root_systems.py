"""
Simply-laced root systems inside negative-definite lattices: simple roots,
Dynkin components, gauge groups, foldings and Weyl decompositions.

Inside (-E8) blocks roots have norm -2 and adjacent simple roots pair to +1,
so the positive Cartan matrix of a set of simple roots is C_ij = -d_i.d_j.
"""

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import pairwise

import numpy as np
from pydantic import BaseModel

from src.algebra.linear import identity, int_matrix, inverse, rank
from src.config import PipelineConfig
from src.lattice.lattices import IntegerLattice, LatticeVector, inner_product
from src.shared.errors import NotAnAutomorphismError, RootSystemError
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("RootSystems")

Permutation = tuple[int, ...]


# --- Types ---


@dataclass(frozen=True)
class DynkinComponent:
    label: str
    nodes: tuple[int, ...]
    cartan: tuple[tuple[int, ...], ...]
    simple_roots: tuple[LatticeVector, ...] = ()

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def family(self) -> str:
        return self.label[0]


@dataclass(frozen=True)
class RootSubsystem:
    lattice: IntegerLattice | None
    roots: tuple[LatticeVector, ...]
    simple_roots: tuple[LatticeVector, ...]
    components: tuple[DynkinComponent, ...] = field(default=())

    @property
    def total_rank(self) -> int:
        return len(self.simple_roots)


class GaugeGroupReport(BaseModel):
    nonabelian_factors: list[str]
    total_rank: int
    abelian_rank: int

    def formatted(self) -> str:
        parts = [f"U(1)^{self.abelian_rank}"] if self.abelian_rank else []
        parts += self.nonabelian_factors
        return " x ".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class WeylDecomposition:
    """iso = w . sigma, with w the product of `word` reflections (left to right)."""

    word: tuple[int, ...]
    weyl_matrix: np.ndarray
    diagram_automorphism: Permutation

    @property
    def is_trivial(self) -> bool:
        return self.diagram_automorphism == tuple(range(len(self.diagram_automorphism)))


# --- Reflection closures ---


def _reflect(v: LatticeVector, a: LatticeVector) -> LatticeVector:
    # s_a(v) = v - 2 (v.a)/(a.a) a = v + (v.a) a for a.a = -2
    return v + a * int(inner_product(v, a))


def reflection_closure(generators: Sequence[LatticeVector]) -> set[LatticeVector]:
    """Closure of the generators under their own reflections (the root system they span)."""
    for g in generators:
        if g.norm() != -2:
            raise RootSystemError("generator does not have norm -2", witness=g.coordinates)
    found: set[LatticeVector] = set(generators)
    queue = deque(generators)
    while queue:
        v = queue.popleft()
        for a in generators:
            w = _reflect(v, a)
            if w not in found:
                found.add(w)
                queue.append(w)
    return found


def cartan_closure(cartan: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    """All roots, in simple-root coordinates, of the system with positive Cartan matrix."""
    n = len(cartan)
    simple = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    found = set(simple)
    queue = deque(simple)
    while queue:
        v = queue.popleft()
        for j in range(n):
            pairing = sum(cartan[j][i] * v[i] for i in range(n))
            w = tuple(v[i] - (pairing if i == j else 0) for i in range(n))
            if w not in found:
                found.add(w)
                queue.append(w)
    return found


# --- Simple roots ---


def _positive_functional(roots: Sequence[LatticeVector]) -> list[int]:
    n = len(roots[0].coordinates)
    base = 10
    while True:
        weights = [base**k for k in range(n)]
        values = [sum(w * c for w, c in zip(weights, r.coordinates, strict=True)) for r in roots]
        if all(values):
            return values
        base *= 10


def extract_simple_roots(roots: Iterable[LatticeVector]) -> RootSubsystem:
    root_list = sorted(set(roots))
    if not root_list:
        return RootSubsystem(None, (), (), ())
    lattice = root_list[0].lattice
    root_set = set(root_list)
    for r in root_list:
        if r.norm() != -2:
            raise RootSystemError("vector of norm != -2 in root set", witness=r.coordinates)
        if -r not in root_set:
            raise RootSystemError("root set not closed under negation", witness=r.coordinates)

    values = _positive_functional(root_list)
    positive = [r for r, f in zip(root_list, values, strict=True) if f > 0]
    positive_coords = [p.coordinates for p in positive]
    positive_set = set(positive_coords)
    simple = sorted(
        a
        for a in positive
        if not any(
            tuple(x - y for x, y in zip(a.coordinates, b, strict=True)) in positive_set
            for b in positive_coords
        )
    )

    span_rank = rank(int_matrix([list(r.coordinates) for r in root_list]))
    if len(simple) != span_rank:
        raise RootSystemError(
            f"{len(simple)} indecomposable roots for a span of rank {span_rank}",
            witness=[s.coordinates for s in simple],
        )
    closure = reflection_closure(simple)
    if closure != root_set:
        stray = sorted(closure ^ root_set)[0]
        raise RootSystemError("root set is not reflection-closed", witness=stray.coordinates)

    components = _classify(simple)
    _telemetry.log_info(
        "simple_roots_extracted",
        roots=len(root_list),
        simple=len(simple),
        components=[c.label for c in components],
    )
    return RootSubsystem(lattice, tuple(root_list), tuple(simple), tuple(components))


# --- Dynkin classification ---


def shape_label(adjacency: dict[int, set[int]]) -> str:
    """ADE label of a connected simply-laced tree."""
    n = len(adjacency)
    edges = sum(len(v) for v in adjacency.values()) // 2
    if edges != n - 1:
        raise RootSystemError("Dynkin graph has a cycle", witness=sorted(adjacency))
    branch = [v for v, nbrs in adjacency.items() if len(nbrs) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(adjacency[branch[0]]) > 3:
        raise RootSystemError("not a simply-laced Dynkin diagram", witness=sorted(adjacency))
    centre = branch[0]
    arms = []
    for start in adjacency[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [v for v in adjacency[cur] if v != prev]
            if not nxt:
                break
            length, prev, cur = length + 1, cur, nxt[0]
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    exceptional = {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}
    label = exceptional.get((arms[0], arms[1], arms[2]))
    if label is None:
        raise RootSystemError(f"arm lengths {arms} are not ADE", witness=arms)
    return label


def _classify(simple: Sequence[LatticeVector]) -> list[DynkinComponent]:
    n = len(simple)
    gram = [[int(inner_product(a, b)) for b in simple] for a in simple]
    adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if gram[i][j] not in (0, 1):
                raise RootSystemError(
                    f"simple roots pair to {gram[i][j]}", witness=(simple[i].coordinates, simple[j].coordinates)
                )
            if gram[i][j]:
                adjacency[i].add(j)
                adjacency[j].add(i)

    seen: set[int] = set()
    components: list[DynkinComponent] = []
    for start in range(n):
        if start in seen:
            continue
        nodes, queue = [], deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            nodes.append(v)
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        nodes.sort()
        label = shape_label({v: adjacency[v] for v in nodes})
        cartan = tuple(tuple(-gram[i][j] for j in nodes) for i in nodes)
        components.append(
            DynkinComponent(label, tuple(nodes), cartan, tuple(simple[i] for i in nodes))
        )
    return components


def classify_components(sub: RootSubsystem) -> list[DynkinComponent]:
    return _classify(sub.simple_roots)


def standard_component(label: str) -> DynkinComponent:
    """Abstract component of the given type, nodes numbered as in Bourbaki."""
    family, n = label[0], int(label[1:])
    edges: list[tuple[int, int]]
    if family == "A" and n >= 1:
        edges = list(pairwise(range(n)))
    elif family == "D" and n >= 4:
        edges = list(pairwise(range(n - 1))) + [(n - 3, n - 1)]
    elif family == "E" and n in (6, 7, 8):
        edges = [(0, 2)] + list(pairwise(range(2, n))) + [(1, 3)]
    else:
        raise RootSystemError(f"unknown Dynkin label {label}", witness=label)
    cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        cartan[a][b] = cartan[b][a] = -1
    return DynkinComponent(label, tuple(range(n)), tuple(tuple(r) for r in cartan))


# --- Gauge group ---


def gauge_group(components: Sequence[DynkinComponent]) -> GaugeGroupReport:
    total = sum(c.node_count for c in components)
    if total > PipelineConfig.MAX_GAUGE_RANK:
        raise RootSystemError(f"total rank {total} exceeds {PipelineConfig.MAX_GAUGE_RANK}", witness=total)
    return GaugeGroupReport(
        nonabelian_factors=[c.label for c in components],
        total_rank=total,
        abelian_rank=PipelineConfig.MAX_GAUGE_RANK - total,
    )


# --- Folding ---


def _check_automorphism(comp: DynkinComponent, sigma: Permutation) -> None:
    n = comp.node_count
    if sorted(sigma) != list(range(n)):
        raise NotAnAutomorphismError(f"{sigma} is not a permutation of {n} nodes", witness=sigma)
    for i in range(n):
        for j in range(n):
            if comp.cartan[sigma[i]][sigma[j]] != comp.cartan[i][j]:
                raise NotAnAutomorphismError(
                    f"{sigma} does not preserve the {comp.label} diagram", witness=sigma
                )


def _permutation_group(generators: Sequence[Permutation], n: int) -> list[Permutation]:
    group = {tuple(range(n))}
    queue = deque(group)
    while queue:
        p = queue.popleft()
        for g in generators:
            q = tuple(g[p[i]] for i in range(n))
            if q not in group:
                group.add(q)
                queue.append(q)
    return sorted(group)


def _classify_folded(rank_: int, norms: list[Fraction]) -> str:
    count = len(norms)
    lengths = sorted(set(norms))
    ratio = lengths[-1] / lengths[0]
    by_length = {length: norms.count(length) for length in lengths}

    if len(lengths) == 1:
        if count == rank_ * (rank_ + 1):
            return f"A{rank_}"
        if rank_ >= 4 and count == 2 * rank_ * (rank_ - 1):
            return f"D{rank_}"
        exceptional = {(6, 72): "E6", (7, 126): "E7", (8, 240): "E8"}
        if (rank_, count) in exceptional:
            return exceptional[(rank_, count)]
    elif ratio == 4 and count == 2 * rank_ * rank_ + 2 * rank_:
        return f"BC{rank_}"
    elif len(lengths) == 2 and ratio == 2:
        short, long_ = by_length[lengths[0]], by_length[lengths[1]]
        if rank_ == 2 and count == 8:
            return "C2"
        if rank_ == 4 and short == long_ == 24:
            return "F4"
        if short == 2 * rank_ and long_ == 2 * rank_ * (rank_ - 1):
            return f"B{rank_}"
        if long_ == 2 * rank_ and short == 2 * rank_ * (rank_ - 1):
            return f"C{rank_}"
    elif len(lengths) == 2 and ratio == 3 and rank_ == 2 and count == 12:
        return "G2"
    raise RootSystemError(
        f"unrecognized folded system: rank {rank_}, {count} roots, lengths {lengths}",
        witness=(rank_, count, lengths),
    )


def fold_by_group(comp: DynkinComponent, generators: Sequence[Permutation]) -> str:
    """Type of the root system obtained by projecting onto the fixed subspace."""
    for g in generators:
        _check_automorphism(comp, g)
    n = comp.node_count
    group = _permutation_group(generators, n)
    if len(group) == 1:
        return comp.label

    projections: set[tuple[Fraction, ...]] = set()
    for v in cartan_closure(comp.cartan):
        p = [Fraction(0)] * n
        for g in group:
            for i in range(n):
                p[g[i]] += v[i]
        p = [x / len(group) for x in p]
        if any(p):
            projections.add(tuple(p))

    fixed_rank = len({min(g[i] for g in group) for i in range(n)})
    norms = [
        sum((comp.cartan[i][j] * p[i] * p[j] for i in range(n) for j in range(n)), Fraction(0))
        for p in projections
    ]
    label = _classify_folded(fixed_rank, norms)
    _telemetry.log_info("component_folded", source=comp.label, folded=label, group_order=len(group))
    return label


def fold_by_automorphism(comp: DynkinComponent, sigma: Permutation) -> str:
    return fold_by_group(comp, [sigma])


# --- Weyl decomposition ---


def weyl_decompose(comp: DynkinComponent, iso: np.ndarray) -> WeylDecomposition:
    """
    Factors iso (simple-root coordinates, column i = image of alpha_i) as
    w . sigma by reflecting iso(rho) back into the dominant chamber.
    """
    n = comp.node_count
    cartan = int_matrix(comp.cartan)
    m = int_matrix(iso.tolist())
    if m.shape != (n, n):
        raise RootSystemError(f"expected a {n}x{n} matrix, got {m.shape}", witness=m.shape)
    if not (m.T.dot(cartan).dot(m) == cartan).all():
        raise RootSystemError("map does not preserve the Cartan form", witness=m.tolist())
    roots = cartan_closure(comp.cartan)
    for v in roots:
        image = tuple(int(x) for x in m.dot(np.array(v, dtype=object)))
        if image not in roots:
            raise RootSystemError("map does not preserve the root set", witness=v)

    c_inv = inverse(cartan)
    rho = [sum((c_inv[i, j] for j in range(n)), Fraction(0)) for i in range(n)]
    lam = [sum((m[i, j] * rho[j] for j in range(n)), Fraction(0)) for i in range(n)]
    w = identity(n)
    word: list[int] = []
    while True:
        pairings = [sum((cartan[j, i] * lam[i] for i in range(n)), Fraction(0)) for j in range(n)]
        j = next((k for k in range(n) if pairings[k] < 0), None)
        if j is None:
            break
        lam[j] -= pairings[j]
        reflection = identity(n)
        for i in range(n):
            reflection[j, i] -= cartan[j, i]
        w = reflection.dot(w)
        word.append(j)

    sigma_matrix = w.dot(m)
    sigma: list[int] = []
    for i in range(n):
        column = [int(sigma_matrix[k, i]) for k in range(n)]
        if sorted(column) != [0] * (n - 1) + [1]:
            raise RootSystemError("dominant image is not a diagram automorphism", witness=column)
        sigma.append(column.index(1))
    # w was accumulated as the inverse Weyl element: iso = w^-1 . sigma and
    # w^-1 = s_(word[0]) ... s_(word[-1]).
    return WeylDecomposition(
        word=tuple(word),
        weyl_matrix=int_matrix(inverse(w).tolist()),
        diagram_automorphism=tuple(sigma),
    )
