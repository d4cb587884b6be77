"""Exact arithmetic on the dual groups: automorphisms, subgroups, quotients, a-adic integers."""

import logging
import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint
from sympy.ntheory.modular import crt

from heydecheck.models.groups import (
    INFINITE,
    AadicInteger,
    DualElement,
    Host,
    HostMismatchError,
    Multiplicity,
    PrimeProfile,
    SolenoidPoint,
    SubgroupSpec,
)
from heydecheck.models.values import ExactValue

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _factor_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((int(p), int(e)) for p, e in factorint(n).items())


def _prime_factors(n: int) -> dict[int, int]:
    return dict(_factor_pairs(abs(n)))


def prime_witness(profile: PrimeProfile, n: int) -> int | None:
    """Smallest prime factor of |n| whose multiplicity is finite, or None."""
    if n == 0:
        raise ValueError("not an endomorphism candidate for Aut")
    for prime in sorted(_prime_factors(n)):
        if not profile.is_infinite(prime):
            return prime
    return None


def is_automorphism(profile: PrimeProfile, n: int) -> bool:
    """f_n is an automorphism iff every prime of |n| is INFINITE in the profile."""
    if n == 0:
        raise ValueError("not an endomorphism candidate for Aut")
    return profile.inverts(n)


def heyde_admissible(profile: PrimeProfile) -> bool:
    """Some coprime p, q have f_p, f_q, f_{p+-q} in Aut iff f_2, f_3 are in Aut."""
    return is_automorphism(profile, 2) and is_automorphism(profile, 3)


def nonvanishing_forces_f2(p: int, q: int) -> bool:
    """One of p, q, p + q, p - q is even, so the hypothesis always puts f_2 in Aut."""
    return any(n % 2 == 0 for n in (p, q, p + q, p - q))


def admissible_pairs(profile: PrimeProfile, bound: int) -> list[tuple[int, int]]:
    """Brute-force list of coprime (p, q), |p|, |q| <= bound, satisfying the Theorem-1 hypothesis."""
    pairs = []
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if p == 0 or q == 0 or p + q == 0 or p - q == 0:
                continue
            if math.gcd(p, q) != 1:
                continue
            if all(is_automorphism(profile, n) for n in (p, q, p + q, p - q)):
                pairs.append((p, q))
    return pairs


def prufer_factors(profile: PrimeProfile, n: int) -> Host:
    """Host Z(p_1^inf) x ... x Z(p_k^inf) for the primes of an automorphism f_n.

    These Prüfer groups sit inside Y/Z whenever f_n is an automorphism.
    """
    if not is_automorphism(profile, n):
        raise ValueError(f"f_{n} is not an automorphism of the profile {profile}")
    primes = sorted(_prime_factors(n))
    if not primes:
        raise ValueError(f"f_{n} has no prime factors")
    return Host.prufer_product(primes)


def _check_host(s: SubgroupSpec, y: DualElement) -> None:
    if y.host != s.host:
        raise HostMismatchError(
            f"Host mismatch: {y.host.label} vs subgroup host {s.host.label}"
        )


def _effective_bound(s: SubgroupSpec) -> PrimeProfile:
    """Denominator bound of a torsion-host subgroup, with the torsion order folded in."""
    if s.torsion_order is None:
        return s.bound
    return PrimeProfile.of(
        {
            p: min(exp, s.bound.multiplicity(p))
            for p, exp in _prime_factors(s.torsion_order).items()
        }
    )


def _floor(s: SubgroupSpec, prime: int) -> Multiplicity:
    """Least p-adic valuation allowed in a rational-host subgroup (-inf when unbounded)."""
    bound = s.bound.multiplicity(prime)
    if bound == INFINITE:
        return -INFINITE
    if bound > 0:
        return -bound
    return _prime_factors(s.numerator_divisor).get(prime, 0)


def _relevant_primes(*specs: SubgroupSpec) -> set[int]:
    primes: set[int] = set()
    for spec in specs:
        primes.update(spec.bound.primes)
        primes.update(_prime_factors(spec.numerator_divisor))
        if spec.torsion_order is not None:
            primes.update(_prime_factors(spec.torsion_order))
    return primes


def subgroup_member(s: SubgroupSpec, y: DualElement) -> bool:
    """Membership by denominator (and numerator) inspection."""
    _check_host(s, y)
    if y.is_zero:
        return True
    if s.host.mod_one:
        return _effective_bound(s).admits_denominator(y.value.denominator)
    return (
        s.bound.admits_denominator(y.value.denominator)
        and y.value.numerator % s.numerator_divisor == 0
    )


def contains_subgroup(outer: SubgroupSpec, inner: SubgroupSpec) -> bool:
    """True when inner is a subgroup of outer."""
    if outer.host != inner.host:
        raise HostMismatchError(
            f"Host mismatch: {outer.host.label} vs {inner.host.label}"
        )
    if outer.host.mod_one:
        return _effective_bound(inner).is_bounded_by(_effective_bound(outer))
    if outer.bound.all_infinite:
        return True
    if inner.bound.all_infinite:
        return False
    return all(
        _floor(inner, p) >= _floor(outer, p) for p in _relevant_primes(outer, inner)
    )


def scale_subgroup(s: SubgroupSpec, n: int) -> SubgroupSpec:
    """The image nS = f_n(S)."""
    if n == 0:
        raise ValueError("Cannot scale a subgroup by 0")
    factors = _prime_factors(n)
    if s.host.mod_one:
        bound = {
            p: m if m == INFINITE else max(m - factors.get(p, 0), 0)
            for p, m in s.bound.multiplicities
        }
        torsion = s.torsion_order
        if torsion is not None:
            torsion //= math.gcd(torsion, abs(n))
        return SubgroupSpec(s.host, PrimeProfile.of(bound), 1, torsion)
    if s.bound.all_infinite:
        return s
    bound = s.bound.as_dict()
    divisor = s.numerator_divisor
    for prime, exp in factors.items():
        current = bound.get(prime, 0)
        if current == INFINITE:
            continue
        if current >= exp:
            bound[prime] = current - exp
        else:
            bound.pop(prime, None)
            divisor *= prime ** (exp - int(current))
    return SubgroupSpec(s.host, PrimeProfile.of(bound), divisor)


def quotient_index(s: SubgroupSpec, sub: SubgroupSpec) -> int:
    """[s : sub] for sub contained in s; raises when the index is infinite."""
    if not contains_subgroup(s, sub):
        raise ValueError(f"{sub.label} is not contained in {s.label}")
    index = 1
    if s.host.mod_one:
        outer_bound, inner_bound = _effective_bound(s), _effective_bound(sub)
        for prime in set(outer_bound.primes) | set(inner_bound.primes):
            outer_m = outer_bound.multiplicity(prime)
            inner_m = inner_bound.multiplicity(prime)
            if outer_m == INFINITE:
                if inner_m != INFINITE:
                    raise ValueError("quotient not finite")
                continue
            index *= prime ** int(outer_m - inner_m)
        return index
    if s.bound.all_infinite:
        if sub.bound.all_infinite:
            return 1
        raise ValueError("quotient not finite")
    for prime in _relevant_primes(s, sub):
        outer_floor, inner_floor = _floor(s, prime), _floor(sub, prime)
        if outer_floor == -INFINITE:
            if inner_floor != -INFINITE:
                raise ValueError("quotient not finite")
            continue
        index *= prime ** int(inner_floor - outer_floor)
    return index


def _primary_part(value: Fraction, prime: int) -> Fraction:
    """p-primary component of a rational taken modulo 1."""
    exp = _prime_factors(value.denominator).get(prime, 0)
    if exp == 0:
        return Fraction(0)
    modulus = prime**exp
    cofactor = value.denominator // modulus
    residue = value.numerator * pow(cofactor, -1, modulus) % modulus
    return Fraction(residue, modulus)


def quotient_project(
    s: SubgroupSpec, sub: SubgroupSpec, y: DualElement
) -> DualElement:
    """Coset label of y in s/sub, as an element of the cyclic group Z(k), k = [s : sub]."""
    if not subgroup_member(s, y):
        raise ValueError(f"{y} is not an element of {s.label}")
    index = quotient_index(s, sub)
    target = Host.cyclic(index)
    if index == 1:
        return target.element(0)
    if s.host.mod_one:
        inner_bound = _effective_bound(sub)
        outer_bound = _effective_bound(s)
        label = Fraction(0)
        for prime in outer_bound.primes:
            if outer_bound.multiplicity(prime) == inner_bound.multiplicity(prime):
                continue
            shift = prime ** int(inner_bound.multiplicity(prime))
            label += shift * _primary_part(y.value, prime)
        return target.element(label)
    moduli, residues = [], []
    for prime in sorted(_relevant_primes(s, sub)):
        outer_floor, inner_floor = _floor(s, prime), _floor(sub, prime)
        depth = inner_floor - outer_floor
        if outer_floor == -INFINITE or depth == 0:
            continue
        modulus = prime ** int(depth)
        scaled = y.value / Fraction(prime) ** int(outer_floor)
        residues.append(
            scaled.numerator * pow(scaled.denominator, -1, modulus) % modulus
        )
        moduli.append(modulus)
    label, _ = crt(moduli, residues)
    return target.element(Fraction(int(label), index))


def torsion_elements(host: Host, n: int) -> list[DualElement]:
    """All elements of Y_(n) in a torsion host, in increasing order."""
    if not host.mod_one:
        raise ValueError(f"{host.label} has no nontrivial torsion")
    order = math.prod(
        p ** min(exp, host.profile.multiplicity(p))
        for p, exp in _prime_factors(n).items()
    )
    return [host.element(Fraction(k, order)) for k in range(order)]


def divide(y: DualElement, c: int) -> DualElement:
    """Some z with c z = y, when one exists in the host."""
    if c == 0:
        raise ValueError("Cannot divide by 0")
    host = y.host
    shifts = range(abs(c)) if host.mod_one else range(1)
    for shift in shifts:
        candidate = (y.value + shift) / c
        if host.contains(candidate):
            return host.element(candidate)
    raise ValueError(f"{y} is not divisible by {c} in {host.label}")


def aadic_add(x: AadicInteger, y: AadicInteger) -> AadicInteger:
    """Digitwise sum with carry: x_k + y_k + t_{k-1} = t_k a_k + z_k."""
    if x.base != y.base:
        raise ValueError(f"Base mismatch: {x.base} vs {y.base}")
    carry = 0
    digits = []
    for x_k, y_k, a_k in zip(x.digits, y.digits, x.base, strict=True):
        carry, z_k = divmod(x_k + y_k + carry, a_k)
        digits.append(z_k)
    return AadicInteger(x.base, tuple(digits))


def aadic_neg(x: AadicInteger) -> AadicInteger:
    return AadicInteger.from_int(x.base, -x.valuation())


def aadic_scale(x: AadicInteger, n: int) -> AadicInteger:
    """Multiplication by a (small) integer."""
    return AadicInteger.from_int(x.base, n * x.valuation())


def point_add(x: SolenoidPoint, y: SolenoidPoint) -> SolenoidPoint:
    if x.d is None:
        fiber = y.d
    elif y.d is None:
        fiber = x.d
    else:
        fiber = aadic_add(x.d, y.d)
    return SolenoidPoint(x.t + y.t, fiber)


def character_eval(x: SolenoidPoint, y: DualElement) -> ExactValue:
    """(x, y) = exp(2 pi i y t) exp(-2 pi i m rho(d) / (a_0...a_n)) for y = m / (a_0...a_n).

    Takes the value 1 on the identification subgroup B = {(n, n u)}.
    """
    if y.host.mod_one and x.t.denominator != 1:
        raise ValueError(
            f"Line coordinate {x.t} does not pair with the torsion host {y.host.label}"
        )
    angle = y.value * x.t
    if x.d is not None and y.value.denominator != 1:
        if (y.value * x.d.modulus).denominator != 1:
            raise ValueError(
                f"insufficient truncation level: {y} needs more than {x.d.level} digits"
            )
        angle -= y.value * x.d.valuation()
    return ExactValue.unit(angle)
