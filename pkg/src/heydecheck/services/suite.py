"""Default verification matrix: every construction against its identities, plus negative controls."""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from heydecheck.models.charfn import (
    CharFnExpr,
    ClassTag,
    Gaussian,
    Shift,
    SubgroupIndicator,
)
from heydecheck.models.construction import CaseSpec, ConstructionResult
from heydecheck.models.equation import GridSpec, VerificationReport
from heydecheck.models.finite import FiniteModel
from heydecheck.models.groups import (
    INFINITE,
    DualElement,
    Host,
    Multiplicity,
    PrimeProfile,
    SolenoidPoint,
    SubgroupSpec,
)
from heydecheck.models.settings import DEFAULT_SEED, DEFAULT_TOLERANCE
from heydecheck.models.suite import SuiteEntry, SuiteLevel, SuiteReport
from heydecheck.models.values import ExactValue
from heydecheck.services import equations, group_core
from heydecheck.services.charfn import CharFnService
from heydecheck.services.constructions import (
    DEFAULT_C,
    ConstructionService,
    gaussian_sym_pair,
)
from heydecheck.services.finmodel import FiniteModelService
from heydecheck.services.grids import grid_points
from heydecheck.services.serialization import IReportCodec, JsonReportCodec
from heydecheck.services.verify import VerificationService, lambda_constraint

logger = logging.getLogger(__name__)

Outcome = tuple[bool, str, dict[str, Any]]

SMALL_PROFILE = PrimeProfile.infinite([2, 3])
WIDE_PROFILE = PrimeProfile.infinite([2, 3, 5, 7])
PSD_POINT_LIMIT = 32
# constructions whose equation is not of the symmetry form
LEMMA6_SKIP = frozenset({"case1b/(1,6)", "theorem2/(1,-6)"})


@dataclass(frozen=True)
class SuiteCheck:
    """A named check; ``run`` returns (succeeded, detail, data)."""

    name: str
    group: str
    run: Callable[[], Outcome]
    expect_success: bool = True


class SuiteService:
    """Builds and runs the verification matrix for one level."""

    def __init__(
        self,
        level: SuiteLevel = SuiteLevel.SMALL,
        *,
        lemma2_c: Fraction | int | str = DEFAULT_C,
        tolerance: float = DEFAULT_TOLERANCE,
        seed: int = DEFAULT_SEED,
        codec: IReportCodec | None = None,
    ) -> None:
        self._level = level
        self._lemma2_c = Fraction(lemma2_c)
        self._seed = seed
        self._charfn = CharFnService()
        self._verifier = VerificationService(self._charfn, tolerance)
        self._constructions = ConstructionService(self._charfn)
        self._finite = FiniteModelService(self._charfn, self._verifier)
        self._codec = codec or JsonReportCodec()
        self._cache: dict[str, ConstructionResult] = {}

    @property
    def full(self) -> bool:
        return self._level == SuiteLevel.FULL

    def run(self) -> SuiteReport:
        checks = list(self.checks())
        logger.info("Running %d suite checks at level %s", len(checks), self._level.label)
        entries = sorted((self._execute(c) for c in checks), key=lambda e: e.name)
        report = SuiteReport(self._level, tuple(entries))
        counts = report.counts()
        logger.info("Suite finished: %d green, %d red", counts["green"], counts["red"])
        return report

    def _execute(self, check: SuiteCheck) -> SuiteEntry:
        try:
            succeeded, detail, data = check.run()
        except Exception as e:
            logger.debug("%s raised %s: %s", check.name, type(e).__name__, e)
            entry = SuiteEntry(
                check.name,
                check.group,
                check.expect_success,
                False,
                error=f"{type(e).__name__}: {e}",
            )
        else:
            entry = SuiteEntry(
                check.name, check.group, check.expect_success, succeeded, detail, data=data
            )
        if not entry.green:
            logger.warning("%s is red: %s", entry.name, entry.error or entry.detail)
        return entry

    def checks(self) -> Iterator[SuiteCheck]:
        yield from self._group_core_checks()
        yield from self._construction_checks()
        yield from self._control_checks()
        yield from self._lemma6_checks()
        yield from self._lemma1_checks()
        yield from self._gaussian_checks()
        yield from self._theorem2_checks()
        yield from self._lemma78_checks()

    # constructions

    def _construction(self, key: str, build: Callable[[], ConstructionResult]) -> ConstructionResult:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _stored(self) -> dict[str, Callable[[], ConstructionResult]]:
        """Every positive construction of the matrix by key."""
        c = self._lemma2_c
        build = self._constructions
        stored: dict[str, Callable[[], ConstructionResult]] = {}
        for q in (2, -2, 3, 7, -5):
            for k in (3, 4, 5, 6):
                stored[f"lemma2/q={q}/k={k}"] = (
                    lambda q=q, k=k: build.lemma2_construct(q, c, level=k)
                )
        for q in (5, 13, 17, -7) if self.full else (5, 13):
            stored[f"lemma3/q={q}"] = lambda q=q: build.lemma3_construct(q)
        case1a = [(2, 5), (3, -5)] if self.full else [(2, 5)]
        for p, q in case1a:
            stored[f"case1a/({p},{q})"] = lambda p=p, q=q: build.case1a_construct(
                CaseSpec(p, q, WIDE_PROFILE)
            )
        stored["case1b/(1,6)"] = lambda: build.case1b_construct(
            CaseSpec(1, 6, WIDE_PROFILE)
        )
        for p, q in ((1, 2), (1, 3), (3, 1), (1, 5), (-1, 3)):
            stored[f"case2/({p},{q})"] = lambda p=p, q=q: build.case2_construct(
                p, q, WIDE_PROFILE, c
            )
        stored["remark2"] = lambda: build.remark2_pair(SMALL_PROFILE)
        stored["gaussian/(1,-3)"] = lambda: build.gaussian_construct(1, -3)
        for p, q in ((2, -5), (1, -6)):
            stored[f"theorem2/({p},{q})"] = (
                lambda p=p, q=q: build.theorem2_full_support_construct(
                    CaseSpec(p, q, WIDE_PROFILE)
                )
            )
        return stored

    def _verify(self, result: ConstructionResult, grid: GridSpec | None = None) -> VerificationReport:
        return self._verifier.verify_equation(
            result.equation, result.pair, grid or result.grid
        )

    def _construction_checks(self) -> Iterator[SuiteCheck]:
        for key, factory in self._stored().items():
            group = key.split("/")[0]

            def equation(key: str = key, factory: Callable[[], ConstructionResult] = factory) -> Outcome:
                result = self._construction(key, factory)
                report = self._verify(result)
                return (
                    report.verified,
                    f"{report.equation} on {result.grid.label}: {report.status.label}",
                    {"report": self._codec.encode(report)},
                )

            yield SuiteCheck(f"{key}/equation", group, equation)
            if key.startswith("lemma2") and not key.endswith("k=3"):
                continue

            def psd(key: str = key, factory: Callable[[], ConstructionResult] = factory) -> Outcome:
                result = self._construction(key, factory)
                points = grid_points(result.grid)[:PSD_POINT_LIMIT]
                outcomes = [self._charfn.psd_check(mu, points) for mu in result.pair]
                return (
                    all(o.positive for o in outcomes),
                    f"min eigenvalues {', '.join(f'{o.min_eigenvalue:.3g}' for o in outcomes)}",
                    {"psd": self._codec.encode(outcomes)},
                )

            def classify(key: str = key, factory: Callable[[], ConstructionResult] = factory) -> Outcome:
                result = self._construction(key, factory)
                found = (self._charfn.classify(result.mu1), self._charfn.classify(result.mu2))
                expected = (result.expected_class1, result.expected_class2)
                return (
                    found == expected,
                    f"classes {found[0].label} / {found[1].label}",
                    {"found": [t.name for t in found], "expected": [t.name for t in expected]},
                )

            yield SuiteCheck(f"{key}/psd", group, psd)
            yield SuiteCheck(f"{key}/classify", group, classify)

        for q in (5, 13, 17, -7) if self.full else (5, 13):

            def torsion_identity(q: int = q) -> Outcome:
                key = f"lemma3/q={q}"
                result = self._construction(key, self._stored()[key])
                n = result.parameters["torsionOrder"]
                elements = group_core.torsion_elements(result.grid.host, n)
                holds = all(v * q == -v for v in elements)
                return holds, f"q v = -v on Y_({n}) for {len(elements)} elements", {}

            yield SuiteCheck(f"lemma3/q={q}/torsion-identity", "lemma3", torsion_identity)

        def case1_outside() -> Outcome:
            found = []
            for key in ("case1a/(2,5)", "case1b/(1,6)"):
                result = self._construction(key, self._stored()[key])
                found.extend(self._charfn.classify(mu) for mu in result.pair)
            return (
                all(tag == ClassTag.OUTSIDE for tag in found),
                ", ".join(tag.label for tag in found),
                {},
            )

        yield SuiteCheck("case1/outside-gamma-i", "case1", case1_outside)

    def _control_checks(self) -> Iterator[SuiteCheck]:
        """Runs that must fail."""
        for q in (5, 13):

            def forced(q: int = q) -> Outcome:
                result = self._constructions.lemma2_construct(
                    q, self._lemma2_c, force=True, level=4
                )
                report = self._verify(result)
                confirmed = report.violated and self._verifier.recheck_witness(
                    report, result.equation, result.pair, result.grid.host
                )
                witness = report.witness
                detail = report.status.label
                if witness is not None:
                    detail += f" at (u,v) = ({witness.u}, {witness.v})"
                return not confirmed, detail, {"report": self._codec.encode(report)}

            yield SuiteCheck(f"controls/lemma2-forced/q={q}", "controls", forced, False)

        def gaussian_pq_positive() -> Outcome:
            result = self._constructions.gaussian_construct(2, 3)
            return True, f"built {result.name} for pq > 0", {}

        yield SuiteCheck(
            "controls/gaussian-pq-positive", "controls", gaussian_pq_positive, False
        )

        def trivial_gaussians() -> Outcome:
            host = Host.rational(PrimeProfile.universal())
            report = self._verifier.verify_equation(
                equations.symmetry_equation(2, 3),
                (Gaussian(1), Gaussian(1)),
                GridSpec.box(host, 3),
            )
            return report.verified, report.status.label, {}

        yield SuiteCheck("controls/gaussian-pair-pq-positive", "controls", trivial_gaussians, False)

    # group core

    def _random_profiles(self, count: int) -> list[PrimeProfile]:
        rng = np.random.default_rng(self._seed)
        choices: list[Multiplicity] = [0, 1, 2, INFINITE]
        profiles = [SMALL_PROFILE, PrimeProfile.infinite([2])]
        while len(profiles) < count:
            mapping = {
                p: choices[int(rng.integers(len(choices)))] for p in (2, 3, 5, 7)
            }
            profiles.append(PrimeProfile.of(mapping))
        return profiles

    def _group_core_checks(self) -> Iterator[SuiteCheck]:
        def remark3() -> Outcome:
            profiles = self._random_profiles(12)
            mismatches = [
                str(profile)
                for profile in profiles
                if group_core.heyde_admissible(profile)
                != bool(group_core.admissible_pairs(profile, 12))
            ]
            return (
                not mismatches,
                f"{len(profiles)} profiles, {len(mismatches)} mismatches",
                {"mismatches": mismatches},
            )

        def remark4() -> Outcome:
            pairs = [
                (p, q)
                for p in range(-12, 13)
                for q in range(-12, 13)
                if p and q and math.gcd(p, q) == 1
            ]
            failing = [pq for pq in pairs if not group_core.nonvanishing_forces_f2(*pq)]
            return not failing, f"{len(pairs)} coprime pairs", {"failing": failing}

        def aut_examples() -> Outcome:
            holds = (
                group_core.is_automorphism(SMALL_PROFILE, 6)
                and group_core.prime_witness(PrimeProfile.infinite([2]), 3) == 3
                and group_core.is_automorphism(PrimeProfile(), 1)
            )
            return holds, "f_6, f_3 and f_1 witnesses", {}

        yield SuiteCheck("aut/remark3-crosscheck", "aut", remark3)
        yield SuiteCheck("aut/f2-forced", "aut", remark4)
        yield SuiteCheck("aut/examples", "aut", aut_examples)

    # Lemma 6

    def _lemma6_checks(self) -> Iterator[SuiteCheck]:
        def coefficients() -> Outcome:
            first, second, _ = equations.heyde_to_independence(1, -3)
            return (
                first == (-2, -6) and second == (2, -2),
                f"alpha = {first}, beta = {second}",
                {},
            )

        yield SuiteCheck("lemma6/coefficients(1,-3)", "lemma6", coefficients)
        for key, factory in self._stored().items():
            if key in LEMMA6_SKIP:
                continue
            if key.startswith("lemma2") and not key.endswith("k=4"):
                continue

            def implication(key: str = key, factory: Callable[[], ConstructionResult] = factory) -> Outcome:
                result = self._construction(key, factory)
                delta1, delta2 = _symmetry_deltas(result)
                report = self._verifier.check_lemma6_implication(
                    result.pair, delta1, delta2, result.grid
                )
                statuses = ", ".join(
                    f"{c.equation} {c.status.label}" for c in report.conclusions
                )
                return (
                    report.premise.verified and report.holds,
                    f"{report.premise.equation} {report.premise.status.label} => {statuses}",
                    {"implication": self._codec.encode(report)},
                )

            yield SuiteCheck(f"lemma6/{key}", "lemma6", implication)

    # Lemma 1 oracle

    def _lemma1_triples(self) -> Iterator[tuple[str, CharFnExpr, CharFnExpr, FiniteModel, int, int, bool]]:
        levels = range(1, 6) if self.full else range(1, 5)
        prufer2 = Host.prufer(2)
        stored = self._stored()
        for q in (3, 7, -5, 2, -2):
            key = f"lemma2/q={q}/k=3"
            mu = self._construction(key, stored[key]).mu1
            for k in levels:
                yield f"lemma2(q={q})/Z({2**k})", mu, mu, FiniteModel(prufer2, (2**k,)), 1, q, True
        for q in (5, 13):
            forced = self._constructions.lemma2_construct(q, self._lemma2_c, force=True).mu1
            for k in (2, 3, 4):
                yield f"lemma2-forced(q={q})/Z({2**k})", forced, forced, FiniteModel(prufer2, (2**k,)), 1, q, True
        for q, orders in ((5, (3, 9, 27)), (13, (7, 49))):
            lemma3 = self._construction(f"lemma3/q={q}", stored[f"lemma3/q={q}"])
            mu, host = lemma3.mu1, lemma3.grid.host
            for n in orders:
                yield f"lemma3(q={q})/Z({n})", mu, mu, FiniteModel(host, (n,)), 1, q, True
        haar = SubgroupIndicator(SubgroupSpec.torsion(prufer2, 1))
        yield "haar/Z(8)", haar, haar, FiniteModel(prufer2, (8,)), 1, 3, True
        # Point masses do not vanish off Y_(8): their images are taken as they are.
        whole = SubgroupIndicator(SubgroupSpec.whole(prufer2))
        yield "point-mass-0/Z(8)", whole, whole, FiniteModel(prufer2, (8,)), 1, 3, False
        shifted = Shift(SolenoidPoint(Fraction(1)), whole)
        for q in (3, 2):
            yield f"point-mass-1/Z(8)/q={q}", shifted, shifted, FiniteModel(prufer2, (8,)), 1, q, False

    def _lemma1_checks(self) -> Iterator[SuiteCheck]:
        def oracle() -> Outcome:
            results = []
            disagreements = []
            for label, f1, f2, model, p, q, supported in self._lemma1_triples():
                cv = self._finite.crossvalidate_lemma1(
                    f1, f2, model, p, q, check_support=supported
                )
                results.append(cv)
                if not cv.agree or (cv.symmetry.symmetric and cv.symmetry.deviation != 0):
                    disagreements.append(label)
            return (
                not disagreements and len(results) >= 30,
                f"{len(results)} triples, {len(disagreements)} disagreements",
                {"disagreements": disagreements, "triples": len(results)},
            )

        def lemma2_pmf() -> Outcome:
            stored = self._stored()
            mu = self._construction("lemma2/q=3/k=3", stored["lemma2/q=3/k=3"]).mu1
            pmf = self._finite.charfn_to_pmf(mu, FiniteModel(Host.prufer(2), (8,)))
            expected = tuple(
                Fraction(1, 8) * (1 + self._lemma2_c * (-1) ** x) for x in range(8)
            )
            return (
                pmf.probabilities == expected,
                ", ".join(str(p) for p in pmf.probabilities),
                {"pmf": self._codec.encode(pmf)},
            )

        yield SuiteCheck("lemma1/oracle-equivalence", "lemma1", oracle)
        yield SuiteCheck("lemma1/lemma2-pmf-Z(8)", "lemma1", lemma2_pmf)

    # Gaussian criteria

    def _gaussian_checks(self) -> Iterator[SuiteCheck]:
        bound, radius = (7, 3) if self.full else (3, 2)
        host = Host.rational(PrimeProfile.universal())
        grid = GridSpec.box(host, radius)
        pairs = [
            (p, q)
            for p in range(-bound, bound + 1)
            for q in range(-bound, bound + 1)
            if p and q and p + q and math.gcd(p, q) == 1
        ]

        def symmetry_criterion() -> Outcome:
            failing = []
            for p, q in pairs:
                eq = equations.symmetry_equation(p, q)
                lambdas = gaussian_sym_pair(p, q)
                if lambdas is None:
                    ok = not self._verifier.verify_equation(
                        eq, (Gaussian(1), Gaussian(1)), grid
                    ).verified
                else:
                    lam1, lam2 = lambdas
                    ok = (
                        lam1 * p + lam2 * q == 0
                        and self._verifier.verify_equation(
                            eq, (Gaussian(lam1), Gaussian(lam2)), grid
                        ).verified
                        and self._verifier.verify_equation(
                            eq, (Gaussian(lam1), Gaussian(lam2 + 1)), grid
                        ).violated
                    )
                if not ok:
                    failing.append([p, q])
            return not failing, f"{len(pairs)} pairs", {"failing": failing}

        def independence_criterion() -> Outcome:
            failing = []
            for p, q in pairs:
                eq = equations.theorem2_independence(p, q)
                solution = lambda_constraint(p, q)
                ok = self._verifier.verify_equation(
                    eq, (Gaussian(1), Gaussian(1)), grid
                ).violated
                if solution.ratio is not None:
                    lam1, lam2 = Fraction(solution.b), Fraction(-solution.a)
                    ok = ok and self._verifier.verify_equation(
                        eq, (Gaussian(lam1), Gaussian(lam2)), grid
                    ).verified
                elif p * q < 0:
                    ok = False
                if not ok:
                    failing.append([p, q])
            return not failing, f"{len(pairs)} pairs", {"failing": failing}

        yield SuiteCheck("gaussian/symmetry-criterion", "gaussian", symmetry_criterion)
        yield SuiteCheck("gaussian/independence-criterion", "gaussian", independence_criterion)

    # Theorem 2

    def _theorem2_checks(self) -> Iterator[SuiteCheck]:
        def identities() -> Outcome:
            host = Host.rational(PrimeProfile.universal())
            report = self._verifier.derive_t2_identities(
                (Gaussian(1), Gaussian(8)), 1, -2, GridSpec.box(host, 3)
            )
            return (
                report.premise.verified and report.holds,
                ", ".join(f"{c.equation} {c.status.label}" for c in report.conclusions),
                {"implication": self._codec.encode(report)},
            )

        yield SuiteCheck("theorem2/t2-identities(1,-2)", "theorem2", identities)
        stored = self._stored()
        for key in ("theorem2/(2,-5)", "theorem2/(1,-6)"):

            def full_support(key: str = key) -> Outcome:
                result = self._construction(key, stored[key])
                points = grid_points(result.grid)
                holds = all(
                    self._charfn.full_support_check(mu, points) for mu in result.pair
                )
                return holds, f"|f(y)| < 1 off 0 on {result.grid.label}", {}

            yield SuiteCheck(f"{key}/full-support", "theorem2", full_support)

    # Lemmas 7 and 8

    def _lemma78_checks(self) -> Iterator[SuiteCheck]:
        host = Host.rational(PrimeProfile.universal())
        g1, g2 = Gaussian(5), Gaussian(2)

        def planted_subgroup() -> Outcome:
            cert = self._verifier.lemma7_subgroup(g1, g2, 1, 3, host.element(1))
            return cert.holds, f"generator {cert.generator}, window {cert.window}", {
                "certificate": self._codec.encode(cert)
            }

        def planted_fit() -> Outcome:
            cert = self._verifier.lemma7_subgroup(g1, g2, 1, 3, host.element(1))
            fit = self._verifier.lemma8_extract(
                g1, g2, 1, 3, host.element(cert.generator)
            )
            holds = (
                fit.accepted
                and fit.lambdas == (Fraction(5), Fraction(2))
                and fit.residual < 1e-10
            )
            return holds, f"lambdas {fit.lambdas[0]}, {fit.lambdas[1]}", {
                "fit": self._codec.encode(fit)
            }

        def quartic_fit() -> Outcome:
            def quartic(y: DualElement) -> ExactValue:
                return ExactValue.exponential(y.value**4 / 10**6)

            fit = self._verifier.lemma8_extract(quartic, g2, 1, 3, host.element(Fraction(1, 2)))
            return fit.accepted, f"third difference {fit.third_difference:.3g}", {
                "fit": self._codec.encode(fit)
            }

        def linear_fit() -> Outcome:
            def shifted(y: DualElement) -> ExactValue:
                return ExactValue.exponential(y.value**2 + y.value)

            fit = self._verifier.lemma8_extract(
                shifted, shifted, 2, 3, host.element(1), window=10
            )
            return fit.accepted, f"evenness {fit.evenness:.3g}", {
                "fit": self._codec.encode(fit)
            }

        def vanishing_subgroup() -> Outcome:
            rational = Host.rational(SMALL_PROFILE)
            g = SubgroupIndicator(SubgroupSpec.local(rational, [2]))
            cert = self._verifier.lemma7_subgroup(g, g, 1, 4, rational.element(1))
            return cert.holds, f"intermediate {cert.intermediate}", {
                "certificate": self._codec.encode(cert)
            }

        yield SuiteCheck("lemma7/planted-gaussians", "lemma7", planted_subgroup)
        yield SuiteCheck("lemma8/planted-gaussians", "lemma8", planted_fit)
        yield SuiteCheck("controls/lemma8-quartic", "controls", quartic_fit, False)
        yield SuiteCheck("controls/lemma8-linear", "controls", linear_fit, False)
        yield SuiteCheck("controls/lemma7-vanishing", "controls", vanishing_subgroup, False)


def _symmetry_deltas(result: ConstructionResult) -> tuple[int, int]:
    """(p, q) of a construction whose equation is the symmetry template."""
    right = result.equation.right
    if len(right) != 2 or any(t.u_coeff != 1 for t in right):
        raise ValueError(f"{result.equation.name} is not a symmetry equation")
    return -right[0].v_coeff, -right[1].v_coeff
