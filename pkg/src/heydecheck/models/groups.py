"""Core data models for the dual groups of a-adic solenoids."""

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction

from sympy import factorint, isprime

INFINITE = math.inf

Multiplicity = int | float


class HostMismatchError(ValueError):
    """Raised when two dual elements or subgroups live in different hosts."""


def _check_multiplicity(prime: int, count: Multiplicity) -> None:
    if not isprime(prime):
        raise ValueError(f"Profile key is not prime: {prime}")
    if count != INFINITE and (not isinstance(count, int) or count < 1):
        raise ValueError(f"Invalid multiplicity for prime {prime}: {count}")


@dataclass(frozen=True)
class PrimeProfile:
    """Prime-multiplicity profile of a sequence a = (a_0, a_1, ...).

    The multiplicity of p is the total p-adic valuation of all a_j, INFINITE
    when p divides infinitely many terms. Primes absent from the map have
    multiplicity 0. ``all_infinite`` describes the universal solenoid (H_a = Q).
    """

    multiplicities: tuple[tuple[int, Multiplicity], ...] = ()
    all_infinite: bool = False

    def __post_init__(self) -> None:
        merged: dict[int, Multiplicity] = {}
        for prime, count in self.multiplicities:
            _check_multiplicity(prime, count)
            merged[prime] = count
        object.__setattr__(self, "multiplicities", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, mapping: Mapping[int, Multiplicity]) -> "PrimeProfile":
        """Build a profile from a prime -> multiplicity mapping, dropping zeros."""
        return cls(tuple((p, m) for p, m in mapping.items() if m != 0))

    @classmethod
    def infinite(cls, primes: Iterable[int]) -> "PrimeProfile":
        """Profile with every listed prime at INFINITE multiplicity."""
        return cls(tuple((p, INFINITE) for p in primes))

    @classmethod
    def universal(cls) -> "PrimeProfile":
        """Profile of the universal solenoid: every prime is INFINITE."""
        return cls(all_infinite=True)

    @classmethod
    def from_sequence(
        cls, terms: Iterable[int], *, repeat: bool = False
    ) -> "PrimeProfile":
        """Profile of a finite sequence, or of its infinite repetition."""
        totals: dict[int, Multiplicity] = {}
        for term in terms:
            if term < 2:
                raise ValueError(f"Sequence terms must exceed 1: {term}")
            for prime, exp in factorint(term).items():
                totals[prime] = totals.get(prime, 0) + exp
        if repeat:
            totals = dict.fromkeys(totals, INFINITE)
        return cls.of(totals)

    @classmethod
    def of_integer(cls, n: int) -> "PrimeProfile":
        """Profile of the factorisation of |n| (finite multiplicities)."""
        if n == 0:
            raise ValueError("Cannot build a profile from 0")
        return cls.of(factorint(abs(n)))

    def multiplicity(self, prime: int) -> Multiplicity:
        """Multiplicity of ``prime`` (0 when absent)."""
        if self.all_infinite:
            return INFINITE
        return dict(self.multiplicities).get(prime, 0)

    def is_infinite(self, prime: int) -> bool:
        return self.multiplicity(prime) == INFINITE

    def inverts(self, n: int) -> bool:
        """True when every prime of |n| is INFINITE, i.e. f_n is in Aut."""
        return all(self.is_infinite(p) for p in PrimeProfile.of_integer(n).primes)

    @property
    def primes(self) -> tuple[int, ...]:
        """Explicitly listed primes."""
        return tuple(p for p, _ in self.multiplicities)

    @property
    def is_finite(self) -> bool:
        """True when the profile bounds every prime by a finite count."""
        return not self.all_infinite and all(
            m != INFINITE for _, m in self.multiplicities
        )

    def admits_denominator(self, denominator: int) -> bool:
        """Check v_p(denominator) <= multiplicity(p) for every prime p."""
        if denominator == 1 or self.all_infinite:
            return True
        return all(
            exp <= self.multiplicity(p) for p, exp in factorint(denominator).items()
        )

    def is_bounded_by(self, other: "PrimeProfile") -> bool:
        """Pointwise comparison self <= other."""
        if other.all_infinite:
            return True
        if self.all_infinite:
            return False
        return all(m <= other.multiplicity(p) for p, m in self.multiplicities)

    def as_dict(self) -> dict[int, Multiplicity]:
        return dict(self.multiplicities)

    def __str__(self) -> str:
        if self.all_infinite:
            return "{*:inf}"
        body = ", ".join(
            f"{p}:{'inf' if m == INFINITE else m}" for p, m in self.multiplicities
        )
        return "{" + body + "}"


class HostKind(Enum):
    """Kind of discrete dual group a DualElement lives in."""

    RATIONAL = auto()  # H_a, a subgroup of Q
    PRUFER = auto()  # Z(p^inf), p-power rationals mod 1
    PRUFER_PRODUCT = auto()  # Z(p1^inf) x ... x Z(pk^inf), as rationals mod 1
    CYCLIC = auto()  # Z(n), as {k/n} mod 1


@dataclass(frozen=True)
class Host:
    """A concrete dual group: H_a, a Prüfer group, a product of Prüfer groups or Z(n).

    All hosts are realised inside Q (RATIONAL) or Q/Z (the others); ``profile``
    bounds the denominators of the elements.
    """

    kind: HostKind
    profile: PrimeProfile
    order: int | None = None

    @classmethod
    def rational(cls, profile: PrimeProfile) -> "Host":
        return cls(HostKind.RATIONAL, profile)

    @classmethod
    def prufer(cls, prime: int) -> "Host":
        return cls(HostKind.PRUFER, PrimeProfile.infinite([prime]))

    @classmethod
    def prufer_product(cls, primes: Iterable[int]) -> "Host":
        unique = sorted(set(primes))
        if len(unique) == 1:
            return cls.prufer(unique[0])
        return cls(HostKind.PRUFER_PRODUCT, PrimeProfile.infinite(unique))

    @classmethod
    def cyclic(cls, n: int) -> "Host":
        if n < 1:
            raise ValueError(f"Cyclic order must be positive: {n}")
        return cls(HostKind.CYCLIC, PrimeProfile.of(factorint(n)), order=n)

    @property
    def mod_one(self) -> bool:
        """True for torsion hosts realised as rationals modulo 1."""
        return self.kind != HostKind.RATIONAL

    def contains(self, value: Fraction) -> bool:
        return self.profile.admits_denominator(value.denominator)

    def normalize(self, value: Fraction) -> Fraction:
        if self.mod_one:
            return value - math.floor(value)
        return value

    def element(self, value: Fraction | int | str) -> "DualElement":
        return DualElement(Fraction(value), self)

    @property
    def label(self) -> str:
        """Human-readable name of the host."""
        if self.kind == HostKind.RATIONAL:
            return f"H_a{self.profile}"
        if self.kind == HostKind.CYCLIC:
            return f"Z({self.order})"
        return " x ".join(f"Z({p}^inf)" for p in self.profile.primes)


@dataclass(frozen=True)
class DualElement:
    """An element of a dual group Y, stored as a reduced rational."""

    value: Fraction
    host: Host

    def __post_init__(self) -> None:
        value = self.host.normalize(Fraction(self.value))
        if not self.host.contains(value):
            raise ValueError(f"{value} is not an element of {self.host.label}")
        object.__setattr__(self, "value", value)

    def _same_host(self, other: "DualElement") -> None:
        if other.host != self.host:
            raise HostMismatchError(
                f"Host mismatch: {self.host.label} vs {other.host.label}"
            )

    def __add__(self, other: "DualElement") -> "DualElement":
        self._same_host(other)
        return DualElement(self.value + other.value, self.host)

    def __sub__(self, other: "DualElement") -> "DualElement":
        self._same_host(other)
        return DualElement(self.value - other.value, self.host)

    def __neg__(self) -> "DualElement":
        return DualElement(-self.value, self.host)

    def __mul__(self, n: int) -> "DualElement":
        return DualElement(self.value * n, self.host)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of a host described by denominator bounds.

    Members are the y whose p-adic valuation is at least
    v_p(numerator_divisor) - bound(p) for every prime p; for torsion hosts the
    optional ``torsion_order`` further restricts to Y_(n). At most one of
    v_p(numerator_divisor) and bound(p) is nonzero for each p.
    """

    host: Host
    bound: PrimeProfile
    numerator_divisor: int = 1
    torsion_order: int | None = None

    def __post_init__(self) -> None:
        if not self.bound.is_bounded_by(self.host.profile):
            raise ValueError(
                f"Subgroup bound {self.bound} exceeds host profile {self.host.profile}"
            )
        if self.numerator_divisor < 1:
            raise ValueError(f"Invalid numerator divisor: {self.numerator_divisor}")
        if self.host.mod_one and self.numerator_divisor != 1:
            raise ValueError("Numerator divisors only apply to rational hosts")
        if self.torsion_order is not None:
            if not self.host.mod_one:
                raise ValueError("Torsion subgroups only apply to torsion hosts")
            if self.torsion_order < 1:
                raise ValueError(f"Invalid torsion order: {self.torsion_order}")
        for prime in factorint(self.numerator_divisor):
            if self.bound.multiplicity(prime) != 0:
                raise ValueError(
                    f"Prime {prime} is both a numerator divisor and a denominator bound"
                )

    @classmethod
    def whole(cls, host: Host) -> "SubgroupSpec":
        return cls(host, host.profile)

    @classmethod
    def local(cls, host: Host, primes: Iterable[int]) -> "SubgroupSpec":
        """Rationals whose denominators only involve ``primes`` (Z if empty)."""
        return cls(host, PrimeProfile.infinite(primes))

    @classmethod
    def torsion(cls, host: Host, n: int) -> "SubgroupSpec":
        """The torsion subgroup Y_(n) = Ker f_n of a torsion host."""
        if n < 1:
            raise ValueError(f"Torsion order must be positive: {n}")
        bound = {
            p: min(exp, host.profile.multiplicity(p))
            for p, exp in factorint(n).items()
        }
        return cls(host, PrimeProfile.of(bound), torsion_order=n)

    @property
    def label(self) -> str:
        parts = [f"bound={self.bound}"]
        if self.numerator_divisor != 1:
            parts.append(f"times {self.numerator_divisor}")
        if self.torsion_order is not None:
            parts.append(f"torsion {self.torsion_order}")
        return f"<{', '.join(parts)} in {self.host.label}>"


@dataclass(frozen=True)
class AadicInteger:
    """Level-N truncation of an a-adic integer: digits 0 <= x_j < a_j."""

    base: tuple[int, ...]
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "digits", tuple(self.digits))
        if len(self.base) != len(self.digits):
            raise ValueError("Base and digit vectors differ in length")
        for a_j in self.base:
            if a_j < 2:
                raise ValueError(f"Base entries must be at least 2: {a_j}")
        for x_j, a_j in zip(self.digits, self.base, strict=True):
            if not 0 <= x_j < a_j:
                raise ValueError(f"Digit {x_j} out of range for base entry {a_j}")

    @classmethod
    def zero(cls, base: Iterable[int]) -> "AadicInteger":
        base = tuple(base)
        return cls(base, (0,) * len(base))

    @classmethod
    def from_int(cls, base: Iterable[int], n: int) -> "AadicInteger":
        """Image of the integer n in the truncation (mixed-radix expansion)."""
        base = tuple(base)
        rest = n % math.prod(base)
        digits = []
        for a_j in base:
            rest, digit = divmod(rest, a_j)
            digits.append(digit)
        return cls(base, tuple(digits))

    @property
    def level(self) -> int:
        return len(self.base)

    @property
    def modulus(self) -> int:
        """a_0 a_1 ... a_{N-1}."""
        return math.prod(self.base)

    def valuation(self) -> int:
        """Positional valuation rho(x) = sum x_j a_0...a_{j-1}."""
        total, weight = 0, 1
        for x_j, a_j in zip(self.digits, self.base, strict=True):
            total += x_j * weight
            weight *= a_j
        return total


@dataclass(frozen=True)
class SolenoidPoint:
    """A point of the solenoid: coordinate t on the dense line plus a fiber coordinate."""

    t: Fraction
    d: AadicInteger | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))
