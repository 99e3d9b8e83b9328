"""
Exact arithmetic in the cyclotomic field Q(zeta_N).

An element is the coefficient vector of a polynomial in zeta_N of degree
below phi(N), reduced modulo the N-th cyclotomic polynomial.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm

import sympy
from sympy import Poly, QQ, Symbol, cyclotomic_poly, totient

from src.shared.errors import ConductorMismatchError

_X = Symbol("x")


@lru_cache(maxsize=64)
def _modulus(conductor: int) -> Poly:
    return Poly(cyclotomic_poly(conductor, _X), _X, domain=QQ)


@lru_cache(maxsize=64)
def field_degree(conductor: int) -> int:
    return int(totient(conductor))


def _to_poly(coefficients: Sequence[Fraction]) -> Poly:
    # Poly.from_list wants the leading coefficient first.
    terms = [sympy.Rational(c.numerator, c.denominator) for c in reversed(coefficients)]
    return Poly.from_list(terms or [0], _X, domain=QQ)


def _reduce(conductor: int, poly: Poly) -> tuple[Fraction, ...]:
    rem = poly.rem(_modulus(conductor))
    raw = [Fraction(int(c.p), int(c.q)) for c in reversed(rem.all_coeffs())]
    degree = field_degree(conductor)
    raw += [Fraction(0)] * (degree - len(raw))
    return tuple(raw[:degree])


def _from_powers(conductor: int, powers: dict[int, Fraction]) -> tuple[Fraction, ...]:
    dense = [Fraction(0)] * conductor
    for k, c in powers.items():
        dense[k % conductor] += c
    return _reduce(conductor, _to_poly(dense))


@dataclass(frozen=True)
class Cyclotomic:
    conductor: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.conductor < 1:
            raise ValueError(f"conductor must be positive, got {self.conductor}")
        if len(self.coefficients) != field_degree(self.conductor):
            raise ValueError(
                f"expected {field_degree(self.conductor)} coefficients for conductor "
                f"{self.conductor}, got {len(self.coefficients)}"
            )

    # --- Constructors ---

    @classmethod
    def from_rational(cls, conductor: int, value: int | Fraction) -> "Cyclotomic":
        coeffs = [Fraction(0)] * field_degree(conductor)
        coeffs[0] = Fraction(value)
        return cls(conductor, tuple(coeffs))

    @classmethod
    def zero(cls, conductor: int) -> "Cyclotomic":
        return cls.from_rational(conductor, 0)

    @classmethod
    def one(cls, conductor: int) -> "Cyclotomic":
        return cls.from_rational(conductor, 1)

    @classmethod
    def root_of_unity(cls, conductor: int, k: int = 1) -> "Cyclotomic":
        """zeta_N ** k."""
        return cls(conductor, _from_powers(conductor, {k: Fraction(1)}))

    @classmethod
    def imaginary_unit(cls, conductor: int) -> "Cyclotomic":
        if conductor % 4:
            raise ConductorMismatchError(
                f"conductor {conductor} does not contain i", witness=conductor
            )
        return cls.root_of_unity(conductor, conductor // 4)

    # --- Predicates ---

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0]

    # --- Arithmetic ---

    def _check(self, other: "Cyclotomic") -> None:
        if self.conductor != other.conductor:
            raise ConductorMismatchError(
                f"conductors differ: {self.conductor} vs {other.conductor}",
                witness=(self.conductor, other.conductor),
            )

    def _lift(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            self._check(other)
            return other
        return Cyclotomic.from_rational(self.conductor, other)

    def __add__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        o = self._lift(other)
        return Cyclotomic(
            self.conductor,
            tuple(a + b for a, b in zip(self.coefficients, o.coefficients, strict=True)),
        )

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, tuple(-a for a in self.coefficients))

    def __sub__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        return self + (-self._lift(other))

    def __rsub__(self, other: int | Fraction) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            s = Fraction(other)
            return Cyclotomic(self.conductor, tuple(a * s for a in self.coefficients))
        self._check(other)
        product = _to_poly(self.coefficients) * _to_poly(other.coefficients)
        return Cyclotomic(self.conductor, _reduce(self.conductor, product))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        inv = _to_poly(self.coefficients).invert(_modulus(self.conductor))
        return Cyclotomic(self.conductor, _reduce(self.conductor, inv))

    def __truediv__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        return self * self._lift(other).inverse()

    def __pow__(self, exponent: int) -> "Cyclotomic":
        base = self if exponent >= 0 else self.inverse()
        result = Cyclotomic.one(self.conductor)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugation: zeta_N -> zeta_N ** (N - 1)."""
        n = self.conductor
        return Cyclotomic(
            n, _from_powers(n, {(-k) % n: c for k, c in enumerate(self.coefficients) if c})
        )

    def embed(self, conductor: int) -> "Cyclotomic":
        """Image under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M ** (M / N)."""
        if conductor % self.conductor:
            raise ConductorMismatchError(
                f"cannot embed conductor {self.conductor} into {conductor}",
                witness=(self.conductor, conductor),
            )
        if conductor == self.conductor:
            return self
        step = conductor // self.conductor
        return Cyclotomic(
            conductor,
            _from_powers(conductor, {k * step: c for k, c in enumerate(self.coefficients) if c}),
        )

    def real_part(self) -> "Cyclotomic":
        return (self + self.conj()) * Fraction(1, 2)

    def __str__(self) -> str:
        terms = [
            f"{c}" if k == 0 else f"{c}*z{self.conductor}^{k}"
            for k, c in enumerate(self.coefficients)
            if c
        ]
        return " + ".join(terms) if terms else "0"


def common_conductor(*conductors: int) -> int:
    return lcm(*conductors) if conductors else 1


class CyclotomicOp(Enum):
    ADD = "add"
    MUL = "mul"
    CONJ = "conj"
    INV = "inv"


def cyclotomic_arith(a: Cyclotomic, b: Cyclotomic | None, op: CyclotomicOp) -> Cyclotomic:
    """Single entry point for the four field operations; unary ops ignore b."""
    match op:
        case CyclotomicOp.ADD:
            if b is None:
                raise ValueError("add needs two operands")
            return a + b
        case CyclotomicOp.MUL:
            if b is None:
                raise ValueError("mul needs two operands")
            return a * b
        case CyclotomicOp.CONJ:
            return a.conj()
        case CyclotomicOp.INV:
            return a.inverse()
