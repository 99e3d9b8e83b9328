"""
Constant-coefficient exterior forms over the rationals, the model G2-form on
R^7 = R^3 (torus, indices 1..3) + R^4 (indices 4..7, z1 = x4 + i x5,
z2 = x6 + i x7) and the pull-back action on self-dual 2-forms.
"""

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.algebra.linear import identity, rat_matrix, zeros
from src.shared.errors import OrbifoldError

Index = tuple[int, ...]


def _sort_with_sign(indices: Sequence[int]) -> tuple[int, Index]:
    """Sign of the sorting permutation, 0 if an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    items = list(indices)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


@dataclass(frozen=True)
class ExteriorForm:
    """Alternating k-form on Q^n; `terms` holds increasing 1-based index tuples."""

    dimension: int
    degree: int
    terms: tuple[tuple[Index, Fraction], ...]

    @classmethod
    def from_terms(
        cls, dimension: int, degree: int, terms: Mapping[Index, int | Fraction]
    ) -> "ExteriorForm":
        acc: dict[Index, Fraction] = {}
        for idx, c in terms.items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have degree {degree}")
            if any(not 1 <= i <= dimension for i in idx):
                raise ValueError(f"index {idx} out of range for dimension {dimension}")
            sign, key = _sort_with_sign(idx)
            if sign:
                acc[key] = acc.get(key, Fraction(0)) + sign * Fraction(c)
        return cls(dimension, degree, tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def basis(cls, dimension: int, *indices: int) -> "ExteriorForm":
        """e^{i1 i2 ...}; basis(n) is the constant 1."""
        return cls.from_terms(dimension, len(indices), {tuple(indices): 1})

    @classmethod
    def zero(cls, dimension: int, degree: int) -> "ExteriorForm":
        return cls(dimension, degree, ())

    def coefficient(self, *indices: int) -> Fraction:
        sign, key = _sort_with_sign(indices)
        return sign * dict(self.terms).get(key, Fraction(0))

    def as_dict(self) -> dict[Index, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "ExteriorForm") -> None:
        if self.dimension != other.dimension:
            raise ValueError(f"dimension mismatch: {self.dimension} vs {other.dimension}")

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        acc = self.as_dict()
        for k, v in other.terms:
            acc[k] = acc.get(k, Fraction(0)) + v
        return ExteriorForm.from_terms(self.dimension, self.degree, acc)

    def __neg__(self) -> "ExteriorForm":
        return self * -1

    def __sub__(self, other: "ExteriorForm") -> "ExteriorForm":
        return self + (-other)

    def __mul__(self, scalar: int | Fraction) -> "ExteriorForm":
        s = Fraction(scalar)
        return ExteriorForm.from_terms(self.dimension, self.degree, {k: v * s for k, v in self.terms})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*e{''.join(map(str, k))}" for k, v in self.terms)


def wedge(a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    a._check(b)
    acc: dict[Index, Fraction] = {}
    for ia, ca in a.terms:
        for ib, cb in b.terms:
            sign, key = _sort_with_sign(ia + ib)
            if sign:
                acc[key] = acc.get(key, Fraction(0)) + sign * ca * cb
    return ExteriorForm.from_terms(a.dimension, a.degree + b.degree, acc)


def contract(x: Sequence[int | Fraction], a: ExteriorForm) -> ExteriorForm:
    """Interior product x -| a."""
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    if len(x) != a.dimension:
        raise ValueError(f"vector of length {len(x)} for dimension {a.dimension}")
    acc: dict[Index, Fraction] = {}
    for idx, c in a.terms:
        for p, i in enumerate(idx):
            xi = Fraction(x[i - 1])
            if xi:
                rest = idx[:p] + idx[p + 1 :]
                acc[rest] = acc.get(rest, Fraction(0)) + (-1) ** p * xi * c
    return ExteriorForm.from_terms(a.dimension, a.degree - 1, acc)


def hodge_star(a: ExteriorForm) -> ExteriorForm:
    """Euclidean Hodge star for the orientation e^{1..n}."""
    n = a.dimension
    acc: dict[Index, Fraction] = {}
    for idx, c in a.terms:
        complement = tuple(i for i in range(1, n + 1) if i not in idx)
        sign, _ = _sort_with_sign(idx + complement)
        acc[complement] = sign * c
    return ExteriorForm.from_terms(n, n - a.degree, acc)


def pullback(f: np.ndarray, a: ExteriorForm) -> ExteriorForm:
    """F^* a for the linear map x -> F x, so that F^* e^i = sum_j F_ij e^j."""
    n = a.dimension
    if f.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {f.shape}")
    images = [
        ExteriorForm.from_terms(n, 1, {(j + 1,): f[i, j] for j in range(n) if f[i, j]})
        for i in range(n)
    ]
    result = ExteriorForm.zero(n, a.degree)
    for idx, c in a.terms:
        term = ExteriorForm.basis(n)
        for i in idx:
            term = wedge(term, images[i - 1])
        result = result + term * c
    return result


def volume_form(dimension: int) -> ExteriorForm:
    return ExteriorForm.basis(dimension, *range(1, dimension + 1))


# --- The G2-form ---


def standard_phi() -> ExteriorForm:
    return ExteriorForm.from_terms(
        7,
        3,
        {
            (1, 2, 3): 1,
            (1, 4, 5): 1,
            (1, 6, 7): 1,
            (2, 4, 6): 1,
            (2, 5, 7): -1,
            (3, 4, 7): -1,
            (3, 5, 6): -1,
        },
    )


def metric_from_phi(phi: ExteriorForm) -> np.ndarray:
    """
    B_ij = 1/6 * coefficient of e^{1..7} in (e_i -| phi) ^ (e_j -| phi) ^ phi.

    The volume is held at e^{1..7}, so the result is cubic in phi.
    """
    if phi.dimension != 7 or phi.degree != 3:
        raise ValueError("metric_from_phi needs a 3-form on R^7")
    units = identity(7)
    contractions = [contract(list(units[i]), phi) for i in range(7)]
    top = tuple(range(1, 8))
    rows = []
    for i in range(7):
        row = []
        for j in range(7):
            top_form = wedge(wedge(contractions[i], contractions[j]), phi)
            row.append(top_form.coefficient(*top) / 6)
        rows.append(row)
    return rat_matrix(rows)


@dataclass(frozen=True)
class SelfDualBasis:
    omegas: tuple[ExteriorForm, ExteriorForm, ExteriorForm]

    @classmethod
    def standard(cls) -> "SelfDualBasis":
        w1 = ExteriorForm.from_terms(7, 2, {(4, 5): 1, (6, 7): 1})
        w2 = ExteriorForm.from_terms(7, 2, {(4, 6): 1, (5, 7): -1})
        w3 = ExteriorForm.from_terms(7, 2, {(4, 7): -1, (5, 6): -1})
        return cls((w1, w2, w3))

    @classmethod
    def zero(cls) -> "SelfDualBasis":
        z = ExteriorForm.zero(7, 2)
        return cls((z, z, z))

    def permuted(self, order: Sequence[int]) -> "SelfDualBasis":
        a, b, c = (self.omegas[k] for k in order)
        return SelfDualBasis((a, b, c))


def selfdual_volume() -> ExteriorForm:
    """vol_S := e^{4567}."""
    return ExteriorForm.basis(7, 4, 5, 6, 7)


def split_phi(omega: SelfDualBasis) -> ExteriorForm:
    """w1 ^ dx1 + w2 ^ dx2 + w3 ^ dx3 + dx123."""
    phi = ExteriorForm.basis(7, 1, 2, 3)
    for k, w in enumerate(omega.omegas, start=1):
        phi = phi + wedge(w, ExteriorForm.basis(7, k))
    return phi


def split_star_phi(omega: SelfDualBasis) -> ExteriorForm:
    """vol_S + w1 ^ dx23 + w2 ^ dx31 + w3 ^ dx12."""
    w1, w2, w3 = omega.omegas
    return (
        selfdual_volume()
        + wedge(w1, ExteriorForm.basis(7, 2, 3))
        + wedge(w2, ExteriorForm.basis(7, 3, 1))
        + wedge(w3, ExteriorForm.basis(7, 1, 2))
    )


def _extend_to_r7(f: np.ndarray) -> np.ndarray:
    full = identity(7)
    full[3:7, 3:7] = f
    return full


def action_matrix_on_selfdual(f: np.ndarray, omega: SelfDualBasis | None = None) -> np.ndarray:
    """
    M with F^* w_i = sum_j M_ij w_j, for an orthogonal map F of R^4 in the
    coordinates (x4, x5, x6, x7). M(F G) = M(F) M(G).
    """
    omega = omega or SelfDualBasis.standard()
    f = rat_matrix(f.tolist())
    if f.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {f.shape}")
    if not (f.T.dot(f) == identity(4)).all():
        raise OrbifoldError("map is not orthogonal", witness=f.tolist())

    full = _extend_to_r7(f)
    rows = []
    for w in omega.omegas:
        image = pullback(full, w)
        row = [wedge(image, v).coefficient(4, 5, 6, 7) / 2 for v in omega.omegas]
        expanded = ExteriorForm.zero(7, 2)
        for c, v in zip(row, omega.omegas, strict=True):
            expanded = expanded + v * c
        if expanded != image:
            raise OrbifoldError("pull-back leaves the self-dual span", witness=str(image))
        rows.append(row)
    return rat_matrix(rows)


def signed_permutations(n: int = 3) -> list[np.ndarray]:
    """All 2^n n! signed permutation matrices, identity first."""
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            p = zeros(n, n)
            for i, j in enumerate(perm):
                p[i, j] = signs[i]
            out.append(p)
    return out


def find_basis_alignment(pairs: Sequence[tuple[np.ndarray, np.ndarray]]) -> np.ndarray | None:
    """
    P with P . M(F_k) . P^-1 = R_k for every (F_k, R_k), searched over
    signed permutations; None when no candidate works.
    """
    actions = [(action_matrix_on_selfdual(f), rat_matrix(r.tolist())) for f, r in pairs]
    for p in signed_permutations(3):
        # Signed permutations are orthogonal: P^-1 = P^T.
        if all((p.dot(m).dot(p.T) == r).all() for m, r in actions):
            return p
    return None
