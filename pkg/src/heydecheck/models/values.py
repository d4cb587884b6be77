"""Exact values of characteristic functions.

A value is a finite sum of terms c * zeta^angle * exp(-exponent), with c and angle
rational (zeta^angle = exp(2 pi i angle)) and exponent rational or float.
Exponents that are distinct rationals give exponentials that are linearly
independent over the algebraic numbers, so equality is decided exponent by
exponent; the cyclotomic part of each group is reduced modulo the cyclotomic
polynomial of its conductor.
"""

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, QQ, Rational, Symbol, cyclotomic_poly

Exponent = Fraction | float

_X = Symbol("x")
_HALF = Fraction(1, 2)


def _normalize_angle(angle: Fraction) -> Fraction:
    return angle - math.floor(angle)


@lru_cache(maxsize=256)
def _cyclotomic(conductor: int) -> Poly:
    return Poly(cyclotomic_poly(conductor, _X), _X, domain=QQ)


def _reduce_cyclotomic(parts: dict[Fraction, Fraction]) -> Poly | Fraction:
    """Canonical form of sum c * zeta^angle: a Fraction when real rational, else a Poly."""
    parts = {a: c for a, c in parts.items() if c != 0}
    if not parts:
        return Fraction(0)
    conductor = math.lcm(*(a.denominator for a in parts))
    if conductor <= 2:
        return sum((c if a == 0 else -c for a, c in parts.items()), Fraction(0))
    coefficients = {
        (int(a * conductor),): Rational(c.numerator, c.denominator)
        for a, c in parts.items()
    }
    remainder = Poly.from_dict(coefficients, _X, domain=QQ).rem(
        _cyclotomic(conductor)
    )
    if remainder.is_zero:
        return Fraction(0)
    if remainder.degree() == 0:
        constant = remainder.LC()
        return Fraction(int(constant.p), int(constant.q))
    return remainder


@dataclass(frozen=True)
class ExactValue:
    """Immutable sum of terms (angle, exponent) -> coefficient."""

    terms: tuple[tuple[Fraction, Exponent, Fraction], ...] = ()

    @classmethod
    def from_mapping(
        cls, mapping: dict[tuple[Fraction, Exponent], Fraction]
    ) -> "ExactValue":
        merged: dict[tuple[Fraction, Exponent], Fraction] = defaultdict(Fraction)
        for (angle, exponent), coefficient in mapping.items():
            angle = _normalize_angle(angle)
            if angle == _HALF:
                angle, coefficient = Fraction(0), -coefficient
            merged[(angle, exponent)] += coefficient
        return cls(
            tuple(
                sorted(
                    ((a, e, c) for (a, e), c in merged.items() if c != 0),
                    key=lambda t: (t[0], float(t[1]), t[2]),
                )
            )
        )

    @classmethod
    def zero(cls) -> "ExactValue":
        return cls()

    @classmethod
    def one(cls) -> "ExactValue":
        return cls.rational(Fraction(1))

    @classmethod
    def rational(cls, value: Fraction | int) -> "ExactValue":
        return cls.from_mapping({(Fraction(0), Fraction(0)): Fraction(value)})

    @classmethod
    def unit(cls, angle: Fraction) -> "ExactValue":
        """exp(2 pi i angle)."""
        return cls.from_mapping({(Fraction(angle), Fraction(0)): Fraction(1)})

    @classmethod
    def exponential(cls, exponent: Exponent) -> "ExactValue":
        """exp(-exponent)."""
        if not isinstance(exponent, float):
            exponent = Fraction(exponent)
        return cls.from_mapping({(Fraction(0), exponent): Fraction(1)})

    def _mapping(self) -> dict[tuple[Fraction, Exponent], Fraction]:
        return {(a, e): c for a, e, c in self.terms}

    def __add__(self, other: "ExactValue") -> "ExactValue":
        mapping = self._mapping()
        for a, e, c in other.terms:
            mapping[(a, e)] = mapping.get((a, e), Fraction(0)) + c
        return ExactValue.from_mapping(mapping)

    def __neg__(self) -> "ExactValue":
        return ExactValue(tuple((a, e, -c) for a, e, c in self.terms))

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        return self + (-other)

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        if not self.terms or not other.terms:
            return ExactValue.zero()
        mapping: dict[tuple[Fraction, Exponent], Fraction] = defaultdict(Fraction)
        for a1, e1, c1 in self.terms:
            for a2, e2, c2 in other.terms:
                mapping[(_normalize_angle(a1 + a2), e1 + e2)] += c1 * c2
        return ExactValue.from_mapping(mapping)

    def scale(self, factor: Fraction | int) -> "ExactValue":
        return ExactValue.from_mapping(
            {(a, e): c * factor for a, e, c in self.terms}
        )

    def conjugate(self) -> "ExactValue":
        return ExactValue.from_mapping({(-a, e): c for a, e, c in self.terms})

    def abs_squared(self) -> "ExactValue":
        return self * self.conjugate()

    @property
    def is_exact(self) -> bool:
        """False when some exponent is a float."""
        return all(not isinstance(e, float) for _, e, _ in self.terms)

    def _groups(self) -> dict[Exponent, dict[Fraction, Fraction]]:
        groups: dict[Exponent, dict[Fraction, Fraction]] = defaultdict(dict)
        for a, e, c in self.terms:
            groups[e][a] = groups[e].get(a, Fraction(0)) + c
        return groups

    def to_complex(self) -> complex:
        return sum(
            (
                float(c) * cmath.exp(2j * math.pi * float(a)) * math.exp(-float(e))
                for a, e, c in self.terms
            ),
            0j,
        )

    def is_zero(self, tol: float = 0.0) -> bool:
        """Exact zero test; inexact values are compared against ``tol``."""
        if not self.terms:
            return True
        if not self.is_exact:
            return abs(self.to_complex()) <= tol
        for parts in self._groups().values():
            reduced = _reduce_cyclotomic(parts)
            if not (isinstance(reduced, Fraction) and reduced == 0):
                return False
        return True

    def equals(self, other: "ExactValue", tol: float = 0.0) -> bool:
        if self.is_exact and other.is_exact:
            return (self - other).is_zero()
        return abs(self.to_complex() - other.to_complex()) <= tol

    def as_fraction(self) -> Fraction | None:
        """The value as a rational number, or None when it is not one."""
        if not self.is_exact:
            return None
        groups = {e: _reduce_cyclotomic(p) for e, p in self._groups().items()}
        groups = {e: r for e, r in groups.items() if not (r == 0)}
        if not groups:
            return Fraction(0)
        if len(groups) == 1 and Fraction(0) in groups:
            reduced = groups[Fraction(0)]
            if isinstance(reduced, Fraction):
                return reduced
        return None

    def as_exponent(self) -> Exponent | None:
        """E when the value is exactly exp(-E), else None."""
        if len(self.terms) == 1:
            angle, exponent, coefficient = self.terms[0]
            if angle == 0 and coefficient == 1:
                return exponent
        return None

    def modulus_is_one(self, tol: float = 0.0) -> bool:
        return self.abs_squared().equals(ExactValue.one(), tol)

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __str__(self) -> str:
        fraction = self.as_fraction()
        if fraction is not None:
            return str(fraction)
        pieces = []
        for a, e, c in self.terms:
            piece = str(c)
            if a != 0:
                piece += f"*e^(2pi i*{a})"
            if e != 0:
                piece += f"*e^(-{e})"
            pieces.append(piece)
        return " + ".join(pieces)
