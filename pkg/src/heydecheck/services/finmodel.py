"""Finite quotient models: exact probability vectors and enumerated conditional distributions."""

import logging
from collections import Counter, defaultdict
from fractions import Fraction

import numpy as np

from heydecheck.models.charfn import (
    CharFnExpr,
    Conjugate,
    CosetPiecewise,
    Mixture,
    Product,
    Pullback,
    Shift,
    SubgroupIndicator,
    TorsionExtension,
)
from heydecheck.models.equation import GridSpec
from heydecheck.models.finite import (
    PMF,
    CrossValidation,
    EmpiricalTable,
    FiniteModel,
    SymmetryResult,
)
from heydecheck.models.groups import Host
from heydecheck.models.values import ExactValue
from heydecheck.services import equations
from heydecheck.services.charfn import CharFnService
from heydecheck.services.verify import IVerificationService, VerificationService

logger = logging.getLogger(__name__)


def pmf_to_charfn(pmf: PMF) -> tuple[ExactValue, ...]:
    """f(k/N) = sum_x P(x) exp(2 pi i k x / N) for every character k."""
    n = pmf.order
    return tuple(
        sum(
            (
                ExactValue.unit(Fraction(k * x, n)).scale(prob)
                for x, prob in enumerate(pmf.probabilities)
                if prob
            ),
            ExactValue.zero(),
        )
        for k in range(n)
    )


def conditional_symmetry_enumerate(
    pmf1: PMF, pmf2: PMF, p: int, q: int
) -> SymmetryResult:
    """Exact joint law of (x1 + x2, p x1 + q x2); symmetric when P(h, g) = P(h, -g)."""
    if pmf1.order != pmf2.order:
        raise ValueError(f"PMF orders differ: {pmf1.order} vs {pmf2.order}")
    n = pmf1.order
    joint: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for x1, a in enumerate(pmf1.probabilities):
        if not a:
            continue
        for x2, b in enumerate(pmf2.probabilities):
            if b:
                joint[((x1 + x2) % n, (p * x1 + q * x2) % n)] += a * b
    deviation = Fraction(0)
    witness = None
    for h, g in sorted(joint):
        gap = abs(joint[(h, g)] - joint.get((h, -g % n), Fraction(0)))
        if gap > deviation:
            deviation, witness = gap, (h, g)
    return SymmetryResult(deviation == 0, deviation, witness)


def sample_forms(
    pmf1: PMF, pmf2: PMF, p: int, q: int, samples: int, seed: int = 0
) -> EmpiricalTable:
    """Empirical P(L2 = g | L1 = h) from seeded iid draws."""
    if samples < 1:
        raise ValueError(f"Sample count must be positive: {samples}")
    if pmf1.order != pmf2.order:
        raise ValueError(f"PMF orders differ: {pmf1.order} vs {pmf2.order}")
    n = pmf1.order
    rng = np.random.default_rng(seed)

    def draw(pmf: PMF) -> np.ndarray:
        weights = np.array([float(v) for v in pmf.probabilities])
        return rng.choice(n, size=samples, p=weights / weights.sum())

    x1, x2 = draw(pmf1), draw(pmf2)
    first = (x1 + x2) % n
    second = (p * x1 + q * x2) % n
    pairs = Counter(zip(first.tolist(), second.tolist(), strict=True))
    totals = Counter(first.tolist())
    conditional: dict[int, dict[int, float]] = defaultdict(dict)
    for (h, g), count in sorted(pairs.items()):
        conditional[h][g] = count / totals[h]
    asymmetry = max(
        abs(row.get(g, 0.0) - row.get(-g % n, 0.0))
        for row in conditional.values()
        for g in row
    )
    return EmpiricalTable(samples, seed, dict(conditional), asymmetry)


class FiniteModelService:
    """Moves characteristic functions onto finite models and cross-checks the equation engine."""

    def __init__(
        self,
        charfn: CharFnService | None = None,
        verifier: IVerificationService | None = None,
    ) -> None:
        self._charfn = charfn or CharFnService()
        self._verifier = verifier or VerificationService(self._charfn)

    def charfn_to_pmf(
        self, f: CharFnExpr, model: FiniteModel, *, check_support: bool = True
    ) -> PMF:
        """pmf(x) = (1/N) sum_k f(k/N) exp(-2 pi i k x / N), computed exactly.

        f must vanish off Y_(N) one level up. Pass ``check_support=False`` to
        take the image of a distribution that is not supported there, such as
        a point mass.
        """
        n = model.order
        if check_support:
            self._check_support(f, model)
        values = [self._charfn.eval(f, model.character(k)) for k in range(n)]
        probabilities = []
        for x in range(n):
            total = sum(
                (
                    value * ExactValue.unit(Fraction(-k * x, n))
                    for k, value in enumerate(values)
                    if value.terms
                ),
                ExactValue.zero(),
            )
            entry = total.as_fraction()
            if entry is None:
                raise ValueError(f"pmf entry at x = {x} is not rational: {total}")
            entry /= n
            if entry < 0:
                raise ValueError(
                    f"not a characteristic function at this truncation: pmf({x}) = {entry}"
                )
            probabilities.append(entry)
        return PMF(tuple(probabilities))

    def _check_support(self, f: CharFnExpr, model: FiniteModel) -> None:
        n = model.order
        for prime in model.host.profile.primes:
            finer = n * prime
            if not model.host.contains(Fraction(1, finer)):
                continue
            for k in range(finer):
                if k % prime == 0:
                    continue
                y = model.host.element(Fraction(k, finer))
                if not self._charfn.eval(f, y).is_zero():
                    raise ValueError(
                        f"support condition violated: f({y}) != 0 outside Y_({n})"
                    )

    def crossvalidate_lemma1(
        self,
        f1: CharFnExpr,
        f2: CharFnExpr,
        model: FiniteModel,
        p: int,
        q: int,
        *,
        check_support: bool = True,
    ) -> CrossValidation:
        """Equation verdict on the model's characters against exact enumeration."""
        report = self._verifier.verify_equation(
            equations.symmetry_equation(p, q),
            (f1, f2),
            GridSpec.torsion(model.host, model.order),
        )
        symmetry = conditional_symmetry_enumerate(
            self.charfn_to_pmf(f1, model, check_support=check_support),
            self.charfn_to_pmf(f2, model, check_support=check_support),
            p,
            q,
        )
        result = CrossValidation(p, q, model.label, report, symmetry)
        if not result.agree:
            logger.warning(
                "Oracle disagreement on %s for (%d, %d): equation %s, enumeration %s",
                model.label,
                p,
                q,
                report.status.label,
                symmetry.symmetric,
            )
        return result


def torsion_host(*fns: CharFnExpr) -> Host:
    """The torsion host the expressions live on; finite models need one."""
    hosts = {host for f in fns for host in _hosts(f)}
    torsion = sorted((h for h in hosts if h.mod_one), key=lambda h: h.label)
    if len(torsion) != 1 or len(hosts) != 1:
        labels = ", ".join(sorted(h.label for h in hosts)) or "none"
        raise ValueError(f"finite models need exactly one torsion host, found: {labels}")
    return torsion[0]


def _hosts(f: CharFnExpr) -> list[Host]:
    if isinstance(f, TorsionExtension):
        return [f.host]
    if isinstance(f, SubgroupIndicator):
        return [f.subgroup.host]
    if isinstance(f, CosetPiecewise):
        return [f.outer.host]
    if isinstance(f, Pullback):
        return [f.subgroup.host]
    if isinstance(f, Shift | Conjugate):
        return _hosts(f.child)
    if isinstance(f, Product | Mixture):
        return [h for child in f.children for h in _hosts(child)]
    return []
