"""
Exact integer / rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ``int`` or
``fractions.Fraction`` entries, so products never overflow or round. Rank,
null spaces and linear solves go through sympy; the Smith normal form keeps
its unimodular transforms and is computed here.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

IntegerMatrix = np.ndarray
RationalMatrix = np.ndarray
RationalVector = tuple[Fraction, ...]


# --- Construction helpers ---


def int_matrix(rows: Iterable[Iterable[int]]) -> IntegerMatrix:
    data = [[int(v) for v in row] for row in rows]
    if not data or not data[0]:
        raise ValueError("matrix dimensions must be positive")
    return np.array(data, dtype=object)


def rat_matrix(rows: Iterable[Iterable[int | Fraction]]) -> RationalMatrix:
    data = [[Fraction(v) for v in row] for row in rows]
    if not data or not data[0]:
        raise ValueError("matrix dimensions must be positive")
    return np.array(data, dtype=object)


def identity(n: int) -> IntegerMatrix:
    return int_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros(rows: int, cols: int) -> IntegerMatrix:
    return int_matrix([[0] * cols for _ in range(rows)])


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.array([[0] * m for _ in range(n)], dtype=object)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def to_sympy(m: np.ndarray) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in m.tolist()]
    )


def _fraction(value: sympy.Expr) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def from_sympy(m: sympy.Matrix) -> RationalMatrix:
    return np.array(
        [[_fraction(m[i, j]) for j in range(m.cols)] for i in range(m.rows)],
        dtype=object,
    )


def is_integral(values: Iterable[int | Fraction]) -> bool:
    return all(Fraction(v).denominator == 1 for v in values)


def clear_denominators(row: Sequence[Fraction]) -> list[int]:
    """Scales a rational row by the lcm of its denominators."""
    scale = lcm(*(Fraction(v).denominator for v in row)) if row else 1
    return [int(Fraction(v) * scale) for v in row]


# --- Exact rank / determinant / kernels ---


def rank(m: np.ndarray) -> int:
    dm = DomainMatrix.from_Matrix(to_sympy(m)).to_field()
    return int(dm.rank())


def determinant(m: np.ndarray) -> Fraction:
    return _fraction(to_sympy(m).det())


def inverse(m: np.ndarray) -> RationalMatrix:
    return from_sympy(to_sympy(m).inv())


def rational_kernel(m: np.ndarray) -> list[RationalVector]:
    """Basis of {v : M v = 0} over the rationals."""
    basis = to_sympy(m).nullspace()
    return [tuple(_fraction(x) for x in vec) for vec in basis]


def column_space(m: np.ndarray) -> list[RationalVector]:
    basis = to_sympy(m).columnspace()
    return [tuple(_fraction(x) for x in vec) for vec in basis]


def solve_rational(a: np.ndarray, b: Sequence[Fraction]) -> RationalVector | None:
    """Unique solution of A x = b, or None when inconsistent or underdetermined."""
    sa = to_sympy(a)
    sb = sympy.Matrix([sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in b])
    try:
        solution, params = sa.gauss_jordan_solve(sb)
    except ValueError:
        return None
    if params.shape[0] != 0:
        return None
    return tuple(_fraction(x) for x in solution)


def inertia(gram: np.ndarray) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix by congruence."""
    n = gram.shape[0]
    a = [[Fraction(gram[i, j]) for j in range(n)] for i in range(n)]
    pos = neg = 0

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(k, n) if i != j and a[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal entry 2 a[i][j] != 0
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            pivot = i
        swap(k, pivot)
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f == 0:
                continue
            for c in range(n):
                a[i][c] -= f * a[k][c]
            for r in range(n):
                a[r][i] -= f * a[r][k]
    return pos, neg, n - pos - neg


# --- Smith normal form ---


@dataclass(frozen=True, eq=False)
class SmithForm:
    """U @ M @ V == D, D diagonal with d_i | d_(i+1), U and V unimodular."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def invariant_factors(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    rows, cols = m.shape
    a = [[int(v) for v in row] for row in m.tolist()]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, q: int) -> None:
        a[target] = [x + q * y for x, y in zip(a[target], a[source], strict=True)]
        u[target] = [x + q * y for x, y in zip(u[target], u[source], strict=True)]

    def add_col(target: int, source: int, q: int) -> None:
        for row in a:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]

    for t in range(min(rows, cols)):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)

        while True:
            # Bring the smallest nonzero entry of row t / column t to the pivot.
            line = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            line += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            _, pi, pj = min(line)
            swap_rows(t, pi)
            swap_cols(t, pj)

            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))

            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue

            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SmithForm(U=int_matrix(u), D=int_matrix(a), V=int_matrix(v))


def integer_kernel(m: IntegerMatrix) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^n : M x = 0}; the basis is saturated in Z^n."""
    snf = smith_normal_form(m)
    cols = m.shape[1]
    r = snf.rank
    return [tuple(int(snf.V[i, j]) for i in range(cols)) for j in range(r, cols)]


def saturate(rows: Sequence[Sequence[int]], dimension: int) -> list[tuple[int, ...]]:
    """Z-basis of span_Q(rows) intersected with Z^n."""
    if not rows:
        return []
    snf = smith_normal_form(int_matrix(rows))
    v_inv = inverse(snf.V)
    return [
        tuple(int(v_inv[i, j]) for j in range(dimension)) for i in range(snf.rank)
    ]


# --- Affine congruences ---


@dataclass(frozen=True)
class CongruenceSolution:
    solvable: bool
    witness: RationalVector | None = None


def solve_affine_congruence(a: IntegerMatrix, b: Sequence[Fraction]) -> CongruenceSolution:
    """
    Decides whether A x = b (mod Z^m) has a real solution x.

    With U A V = D, substitute x = V y: D y = U b (mod Z^m). Rows with a
    nonzero invariant factor are always solvable over the reals; rows with a
    zero factor (including rows past the rank) need an integral right side.
    """
    rows, cols = a.shape
    if len(b) != rows:
        raise ValueError(f"right side has length {len(b)}, expected {rows}")

    snf = smith_normal_form(a)
    rhs = [sum((Fraction(snf.U[i, k]) * Fraction(b[k]) for k in range(rows)), Fraction(0)) for i in range(rows)]

    y = [Fraction(0)] * cols
    for i in range(rows):
        d = int(snf.D[i, i]) if i < cols else 0
        if d == 0:
            if rhs[i].denominator != 1:
                return CongruenceSolution(solvable=False)
        else:
            y[i] = rhs[i] / d

    x = tuple(sum((Fraction(snf.V[i, j]) * y[j] for j in range(cols)), Fraction(0)) for i in range(cols))
    return CongruenceSolution(solvable=True, witness=x)
