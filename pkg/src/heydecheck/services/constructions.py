"""Factories for the explicit distribution pairs.

Every factory returns the pair together with the equation it satisfies, the
default grid to check it on and the expected class of each distribution.
"""

import logging
import math
from fractions import Fraction

from sympy import factorint, isprime

from heydecheck.models.charfn import (
    CharFnExpr,
    ClassTag,
    CosetPiecewise,
    Gaussian,
    Product,
    SubgroupIndicator,
)
from heydecheck.models.construction import CaseSpec, ConstructionResult
from heydecheck.models.equation import GridSpec
from heydecheck.models.groups import INFINITE, Host, PrimeProfile, SubgroupSpec
from heydecheck.models.settings import DEFAULT_LEMMA2_LEVEL
from heydecheck.services import equations, group_core
from heydecheck.services.charfn import CharFnService
from heydecheck.services.grids import box_grid

logger = logging.getLogger(__name__)

DEFAULT_C = Fraction(1, 3)
CONSTRUCTION_NAMES = (
    "lemma2",
    "lemma3",
    "case1a",
    "case1b",
    "case2",
    "remark2",
    "gaussian",
    "theorem2",
)


def gaussian_sym_pair(p: int, q: int) -> tuple[Fraction, Fraction] | None:
    """Nonnegative (lambda_1, lambda_2) != (0, 0) with lambda_1 p + lambda_2 q = 0, if any."""
    if p * q > 0:
        return None
    g = math.gcd(p, q)
    return (Fraction(abs(q) // g), Fraction(abs(p) // g))


def _table_class(values: tuple[Fraction, ...]) -> ClassTag:
    if all(v == 1 for v in values) or all(v == 0 for v in values[1:]):
        return ClassTag.IDEMPOTENT_CLASS
    return ClassTag.OUTSIDE


def _largest_power_below(prime: int, limit: int) -> int:
    exp = 0
    while prime ** (exp + 1) <= limit:
        exp += 1
    return exp


def _local_subgroup(host: Host, s: int) -> tuple[SubgroupSpec, list[int]]:
    """H: rationals with denominators built from the primes of s (Z when |s| = 1)."""
    primes = sorted(int(p) for p in factorint(abs(s)))
    return SubgroupSpec.local(host, primes), primes


class ConstructionService:
    """Builds the distribution pairs and validates their tables."""

    def __init__(self, charfn: CharFnService | None = None) -> None:
        self._charfn = charfn or CharFnService()

    def lemma2_construct(
        self,
        q: int,
        c: Fraction | int | str = DEFAULT_C,
        *,
        force: bool = False,
        check_psd: bool = True,
        level: int = DEFAULT_LEMMA2_LEVEL,
    ) -> ConstructionResult:
        """mu = g_0 on Y_(2) of Z(2^inf), 0 elsewhere, for |q| = 2 or q = 3 mod 4.

        ``force`` builds the pair even when q violates the hypothesis (control runs).
        """
        c = Fraction(c)
        holds = abs(q) == 2 or q % 4 == 3
        if not holds and not force:
            raise ValueError(f"lemma hypothesis violated: q = {q} is neither +-2 nor 3 mod 4")
        host = Host.prufer(2)
        mu = self._charfn.torsion_extension(host, 2, c=c, check_psd=check_psd)
        notes: tuple[str, ...] = ()
        if not holds:
            notes = (
                f"forced: q = {q} violates the hypothesis",
                "witnesses are scanned v-major (v outer, u inner): on Z(8) the first"
                " reported is (u, v) = (1/8, 1/8), and (3/8, 1/8) also violates",
            )
        cls = _table_class((Fraction(1), c))
        return ConstructionResult(
            "lemma2",
            mu,
            mu,
            equations.lemma_single_equation(q),
            cls,
            cls,
            "Lemma 2",
            GridSpec.torsion(host, 2**level),
            {"q": q, "c": str(c), "forced": not holds},
            notes,
        )

    def lemma3_construct(
        self,
        q: int,
        c: Fraction | int | str = DEFAULT_C,
        table: tuple[Fraction, ...] | None = None,
        *,
        check_psd: bool = True,
    ) -> ConstructionResult:
        """mu = g_0 on Y_(2m+1), 0 elsewhere, for q = 4m + 1 with m not in {0, -1}."""
        if q % 4 != 1:
            raise ValueError(f"lemma hypothesis violated: q = {q} is not 1 mod 4")
        m = (q - 1) // 4
        if m in (0, -1):
            raise ValueError(f"lemma hypothesis violated: m = {m}")
        n = abs(2 * m + 1)
        factors = {int(p): int(e) for p, e in factorint(n).items()}
        host = Host.prufer_product(factors)
        mu = self._charfn.torsion_extension(
            host, n, table, c=c, check_psd=check_psd
        )
        values = tuple(v for _, v in mu.table)
        notes: tuple[str, ...] = ()
        if any(e > 1 for e in factors.values()):
            notes = (
                f"multiplicities of 2m+1 = {n} ({factors}) do not enter the host",
            )
        if len(factors) == 1:
            ((prime, exp),) = factors.items()
            order = prime ** max(exp + 1, _largest_power_below(prime, 100))
        else:
            order = math.prod(p ** (e + 1) for p, e in factors.items())
        cls = _table_class(values)
        return ConstructionResult(
            "lemma3",
            mu,
            mu,
            equations.lemma_single_equation(q),
            cls,
            cls,
            "Lemma 3",
            GridSpec.torsion(host, order),
            {"q": q, "m": m, "torsionOrder": n},
            notes,
        )

    def case1a_construct(
        self,
        spec: CaseSpec,
        table1: tuple[Fraction, ...] | None = None,
        table2: tuple[Fraction, ...] | None = None,
        c: Fraction | int | str = DEFAULT_C,
    ) -> ConstructionResult:
        """mu_j pulled back from H / H^(p) and H / H^(q), H the (p - q)-local subgroup."""
        if abs(spec.p) == 1 or abs(spec.q) == 1:
            raise ValueError("case 1a needs |p| > 1 and |q| > 1; use case1b")
        host = Host.rational(spec.profile)
        subgroup, primes = _local_subgroup(host, spec.s)
        mu1 = self._charfn.pullback(
            subgroup, group_core.scale_subgroup(subgroup, spec.p), table1, c=c
        )
        mu2 = self._charfn.pullback(
            subgroup, group_core.scale_subgroup(subgroup, spec.q), table2, c=c
        )
        return ConstructionResult(
            "case1a",
            mu1,
            mu2,
            equations.symmetry_equation(spec.p, spec.q),
            _table_class(mu1.table),
            _table_class(mu2.table),
            "Theorem 1, case 1a",
            box_grid(host, primes),
            {"p": spec.p, "q": spec.q, "s": spec.s},
        )

    def case1b_construct(
        self,
        spec: CaseSpec,
        q1: int | None = None,
        table1: tuple[Fraction, ...] | None = None,
        table2: tuple[Fraction, ...] | None = None,
        c: Fraction | int | str = DEFAULT_C,
    ) -> ConstructionResult:
        """|p| = 1, q = q1 q2 composite: pullbacks from H / H^(q1) and H / H^(q2)."""
        if abs(spec.p) != 1:
            raise ValueError("case 1b needs |p| = 1; use case1a")
        q = spec.q if spec.p == 1 else -spec.q
        notes: tuple[str, ...] = ()
        if spec.p == -1:
            notes = (f"p = -1 normalised to p = 1, q = {q} (v -> -v)",)
        if isprime(abs(q)):
            raise ValueError(f"q = {q} is prime: use case 2 lemmas")
        if q1 is None:
            q1 = min(int(p) for p in factorint(abs(q)))
        if q1 == 0 or q % q1 != 0:
            raise ValueError(f"q1 = {q1} does not divide q = {q}")
        q2 = q // q1
        if abs(q1) == 1 or abs(q2) == 1:
            raise ValueError(f"q = {q1} * {q2} needs both factors larger than 1 in modulus")
        host = Host.rational(spec.profile)
        subgroup, primes = _local_subgroup(host, 1 - q)
        mu1 = self._charfn.pullback(
            subgroup, group_core.scale_subgroup(subgroup, q1), table1, c=c
        )
        mu2 = self._charfn.pullback(
            subgroup, group_core.scale_subgroup(subgroup, q2), table2, c=c
        )
        return ConstructionResult(
            "case1b",
            mu1,
            mu2,
            equations.factored_equation(q1, q2),
            _table_class(mu1.table),
            _table_class(mu2.table),
            "Theorem 1, case 1b",
            box_grid(host, primes),
            {"p": spec.p, "q": spec.q, "q1": q1, "q2": q2},
            notes,
        )

    def case2_construct(
        self,
        p: int,
        q: int,
        profile: PrimeProfile,
        c: Fraction | int | str = DEFAULT_C,
    ) -> ConstructionResult:
        """|p| = 1 or |q| = 1 with the other prime: route to Lemma 2, Lemma 3 or Remark 2."""
        spec = CaseSpec(p, q, profile)
        swapped = abs(spec.p) != 1
        if swapped:
            if abs(spec.q) != 1:
                raise ValueError("case 2 needs |p| = 1 or |q| = 1")
            p, q = q, p
        if p == -1:
            q = -q
        if not isprime(abs(q)):
            raise ValueError(f"q = {q} is composite: use case 1b")
        if q == -3:
            base = self.remark2_pair(profile)
        elif abs(q) == 2 or q % 4 == 3:
            group_core.prufer_factors(profile, 2)
            base = self.lemma2_construct(q, c)
        else:
            group_core.prufer_factors(profile, (q + 1) // 2)
            base = self.lemma3_construct(q, c)
        mu1, mu2 = (base.mu2, base.mu1) if swapped else (base.mu1, base.mu2)
        logger.debug("case 2 (%d, %d) routed to %s", spec.p, spec.q, base.name)
        return ConstructionResult(
            "case2",
            mu1,
            mu2,
            equations.symmetry_equation(spec.p, spec.q),
            base.expected_class2 if swapped else base.expected_class1,
            base.expected_class1 if swapped else base.expected_class2,
            f"Theorem 1, case 2 via {base.provenance}",
            base.grid,
            {"p": spec.p, "q": spec.q, "route": base.name},
            base.notes,
        )

    def remark2_pair(self, profile: PrimeProfile) -> ConstructionResult:
        """p = 1, q = -3: Gaussians e^{-3y^2}, e^{-y^2} times Haar-type factors on H and L."""
        if not group_core.heyde_admissible(profile):
            raise ValueError(f"Remark 2 needs f_2 and f_3 in Aut; profile {profile}")
        host = Host.rational(profile)
        dyadic = SubgroupSpec.local(host, [2])
        extended = SubgroupSpec(host, PrimeProfile.of({2: INFINITE, 3: 1}))
        omega1 = CosetPiecewise(
            extended, dyadic, ((host.element(0), Fraction(1)),), Fraction(1, 2)
        )
        omega2 = SubgroupIndicator(dyadic)
        return ConstructionResult(
            "remark2",
            Product((Gaussian(3), omega1)),
            Product((Gaussian(1), omega2)),
            equations.remark_equation(),
            ClassTag.OUTSIDE,
            ClassTag.GAUSSIAN_TIMES_IDEMPOTENT,
            "Remark 2",
            GridSpec.box(host, 24, 24),
            {"p": 1, "q": -3},
        )

    def gaussian_construct(
        self,
        p: int,
        q: int,
        profile: PrimeProfile | None = None,
        scale: Fraction | int = 1,
    ) -> ConstructionResult:
        """Gaussian pair solving the symmetry equation identically (pq < 0 only)."""
        lambdas = gaussian_sym_pair(p, q)
        if lambdas is None:
            raise ValueError(f"pq > 0: only the trivial Gaussian pair exists for ({p}, {q})")
        profile = profile or PrimeProfile.infinite([2, 3])
        host = Host.rational(profile)
        return ConstructionResult(
            "gaussian",
            Gaussian(lambdas[0] * scale),
            Gaussian(lambdas[1] * scale),
            equations.symmetry_equation(p, q),
            ClassTag.GAUSSIAN_CLASS,
            ClassTag.GAUSSIAN_CLASS,
            "Theorem 2, statement 3 (Gaussian pair)",
            box_grid(host, profile.primes or (2, 3), power=2),
            {"p": p, "q": q, "lambda1": str(lambdas[0] * scale), "lambda2": str(lambdas[1] * scale)},
        )

    def theorem2_full_support_construct(
        self,
        spec: CaseSpec,
        scale: Fraction | int = 1,
        c: Fraction | int | str = DEFAULT_C,
    ) -> ConstructionResult:
        """pq < 0: the case 1a/1b pair times a Gaussian pair, giving full-support distributions."""
        if spec.p * spec.q > 0:
            raise ValueError("statement 3 needs pq < 0")
        if abs(spec.p) > 1 and abs(spec.q) > 1:
            base = self.case1a_construct(spec, c=c)
            lambdas = gaussian_sym_pair(spec.p, spec.q)
        else:
            base = self.case1b_construct(spec, c=c)
            lambdas = gaussian_sym_pair(base.parameters["q1"], base.parameters["q2"])
        assert lambdas is not None
        mu1: CharFnExpr = Product((Gaussian(lambdas[0] * scale), base.mu1))
        mu2: CharFnExpr = Product((Gaussian(lambdas[1] * scale), base.mu2))
        return ConstructionResult(
            "theorem2",
            mu1,
            mu2,
            base.equation,
            base.expected_class1,
            base.expected_class2,
            "Theorem 2, statement 3",
            base.grid,
            {**base.parameters, "lambda1": str(lambdas[0] * scale), "lambda2": str(lambdas[1] * scale)},
            base.notes,
        )
