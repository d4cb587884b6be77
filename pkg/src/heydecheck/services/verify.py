"""Functional-equation engine: grid checks, implications and Gaussian-parameter algebra."""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from fractions import Fraction

from heydecheck.models.charfn import CharFnExpr
from heydecheck.models.equation import (
    EquationSpec,
    EquationTerm,
    GridSpec,
    ImplicationReport,
    LambdaSolution,
    NonvanishingCertificate,
    QuadraticFit,
    VerificationReport,
    VerificationStatus,
    Witness,
)
from heydecheck.models.groups import DualElement, Host
from heydecheck.models.settings import DEFAULT_TOLERANCE, DEFAULT_WINDOW
from heydecheck.models.values import ExactValue, Exponent
from heydecheck.services import equations, group_core
from heydecheck.services.charfn import CharFnService
from heydecheck.services.grids import grid_points

logger = logging.getLogger(__name__)

ValueSource = CharFnExpr | Callable[[DualElement], ExactValue]


def lambda_constraint(p: int, q: int) -> LambdaSolution:
    """Nonnegative solutions of 4pq lambda_1 + (p+q)^2 lambda_2 = 0."""
    if p + q == 0:
        raise ValueError("p + q = 0 is excluded: f_{p+q} must be an automorphism")
    a, b = 4 * p * q, (p + q) ** 2
    if a >= 0:
        return LambdaSolution(a, b, None)
    return LambdaSolution(a, b, Fraction(-a, b))


def finite_difference(
    f: Callable[[Fraction], Fraction], h: Fraction, order: int = 1
) -> Callable[[Fraction], Fraction]:
    """Delta_h^order f, with Delta_h f(y) = f(y + h) - f(y)."""
    if order < 0:
        raise ValueError(f"Difference order must be nonnegative: {order}")
    if order == 0:
        return f
    inner = finite_difference(f, h, order - 1)
    return lambda y: inner(y + h) - inner(y)


class IVerificationService(ABC):
    """Interface for checking characteristic-function identities."""

    @abstractmethod
    def verify_equation(
        self,
        eq: EquationSpec,
        fns: Sequence[CharFnExpr],
        grid: GridSpec,
        tol: float | None = None,
    ) -> VerificationReport:
        """Check eq at every grid pair; stop at the first violation."""
        ...

    @abstractmethod
    def recheck_witness(
        self,
        report: VerificationReport,
        eq: EquationSpec,
        fns: Sequence[CharFnExpr],
        host: Host,
    ) -> bool:
        """Re-evaluate a VIOLATED report's witness; True when the violation is genuine."""
        ...

    @abstractmethod
    def check_lemma6_implication(
        self,
        fns: Sequence[CharFnExpr],
        delta1: int,
        delta2: int,
        grid: GridSpec,
    ) -> ImplicationReport:
        """Symmetry with (delta1, delta2) must imply the transformed independence identity."""
        ...

    @abstractmethod
    def derive_t2_identities(
        self, fns: Sequence[CharFnExpr], p: int, q: int, grid: GridSpec
    ) -> ImplicationReport:
        """Independence of the symmetrized pair must imply both single-variable identities."""
        ...

    @abstractmethod
    def lemma7_subgroup(
        self,
        g1: ValueSource,
        g2: ValueSource,
        a: int,
        b: int,
        y0: DualElement,
        window: int = DEFAULT_WINDOW,
    ) -> NonvanishingCertificate:
        """Search the cyclic subgroup generated by a b z0 (y0 = c z0) for zeros of g1 g2."""
        ...

    @abstractmethod
    def lemma8_extract(
        self,
        g1: ValueSource,
        g2: ValueSource,
        a: int,
        b: int,
        generator: DualElement,
        window: int = DEFAULT_WINDOW,
    ) -> QuadraticFit:
        """Fit -ln g_j = lambda_j y^2 on {k c a b z : |k| <= window}."""
        ...


class VerificationService(IVerificationService):
    """Exhaustive grid checks with exact comparison wherever both sides are exact."""

    def __init__(
        self,
        charfn: CharFnService | None = None,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> None:
        self._charfn = charfn or CharFnService()
        self._tolerance = tolerance

    @property
    def tolerance(self) -> float:
        return self._tolerance

    def _value(self, g: ValueSource, y: DualElement) -> ExactValue:
        if isinstance(g, CharFnExpr):
            return self._charfn.eval(g, y)
        return g(y)

    def _side(
        self,
        terms: tuple[EquationTerm, ...],
        fns: Sequence[CharFnExpr],
        u: DualElement,
        v: DualElement,
        cache: dict[tuple[int, Fraction], ExactValue],
    ) -> ExactValue:
        value = ExactValue.one()
        for term in terms:
            y = u * term.u_coeff + v * term.v_coeff
            key = (term.function_index, y.value)
            if key not in cache:
                cache[key] = self._charfn.eval(fns[term.function_index], y)
            value = value * cache[key]
        return value

    def verify_equation(
        self,
        eq: EquationSpec,
        fns: Sequence[CharFnExpr],
        grid: GridSpec,
        tol: float | None = None,
    ) -> VerificationReport:
        tol = self._tolerance if tol is None else tol
        if len(fns) < eq.function_count:
            raise ValueError(
                f"{eq.name} needs {eq.function_count} functions, got {len(fns)}"
            )
        points = grid_points(grid)
        if not points:
            return VerificationReport(
                eq.name, VerificationStatus.INCONCLUSIVE, tolerance_used=tol, note="empty grid"
            )
        zero = grid.host.element(0)
        if eq.single_variable:
            pairs = [(u, zero) for u in points]
        else:
            pairs = [(u, v) for v in points for u in points]
        logger.info("Checking %s on %d pairs over %s", eq.name, len(pairs), grid.label)
        cache: dict[tuple[int, Fraction], ExactValue] = {}
        checked = exact = 0
        for u, v in pairs:
            lhs = self._side(eq.left, fns, u, v, cache)
            rhs = self._side(eq.right, fns, u, v, cache)
            checked += 1
            if lhs.is_exact and rhs.is_exact:
                exact += 1
            if not lhs.equals(rhs, tol):
                logger.debug("%s violated at (u,v) = (%s, %s): %s vs %s", eq.name, u, v, lhs, rhs)
                return VerificationReport(
                    eq.name,
                    VerificationStatus.VIOLATED,
                    checked,
                    exact,
                    tol,
                    Witness(u.value, v.value, lhs, rhs),
                )
        logger.info("%s verified on %d pairs (%d exact)", eq.name, checked, exact)
        return VerificationReport(eq.name, VerificationStatus.VERIFIED, checked, exact, tol)

    def recheck_witness(
        self,
        report: VerificationReport,
        eq: EquationSpec,
        fns: Sequence[CharFnExpr],
        host: Host,
    ) -> bool:
        if report.witness is None:
            return False
        u = host.element(report.witness.u)
        v = host.element(report.witness.v)
        lhs = self._side(eq.left, fns, u, v, {})
        rhs = self._side(eq.right, fns, u, v, {})
        return not lhs.equals(rhs, report.tolerance_used)

    def _skipped(self, eq: EquationSpec, reason: str) -> VerificationReport:
        return VerificationReport(
            eq.name,
            VerificationStatus.INCONCLUSIVE,
            tolerance_used=self._tolerance,
            note=reason,
        )

    def _implication(
        self,
        premise_eq: EquationSpec,
        premise_fns: Sequence[CharFnExpr],
        conclusions: Sequence[EquationSpec],
        grid: GridSpec,
    ) -> ImplicationReport:
        premise = self.verify_equation(premise_eq, premise_fns, grid)
        if not premise.verified:
            logger.debug("%s not verified; implication is vacuous", premise_eq.name)
            return ImplicationReport(
                premise,
                tuple(self._skipped(eq, f"{premise_eq.name} not verified") for eq in conclusions),
            )
        return ImplicationReport(
            premise,
            tuple(self.verify_equation(eq, premise_fns, grid) for eq in conclusions),
        )

    def check_lemma6_implication(
        self,
        fns: Sequence[CharFnExpr],
        delta1: int,
        delta2: int,
        grid: GridSpec,
    ) -> ImplicationReport:
        return self._implication(
            equations.lemma6_premise(delta1, delta2),
            fns,
            (
                equations.lemma6_left_identity(delta1, delta2),
                equations.lemma6_right_identity(delta1, delta2),
                equations.heyde_to_independence(delta1, delta2)[2],
            ),
            grid,
        )

    def derive_t2_identities(
        self, fns: Sequence[CharFnExpr], p: int, q: int, grid: GridSpec
    ) -> ImplicationReport:
        symmetrized = [self._charfn.symmetrize(f) for f in fns]
        return self._implication(
            equations.theorem2_independence(p, q),
            symmetrized,
            (
                equations.theorem2_first_identity(p, q),
                equations.theorem2_second_identity(p, q),
            ),
            grid,
        )

    def lemma7_subgroup(
        self,
        g1: ValueSource,
        g2: ValueSource,
        a: int,
        b: int,
        y0: DualElement,
        window: int = DEFAULT_WINDOW,
    ) -> NonvanishingCertificate:
        c = abs(a - b)
        if c == 0:
            raise ValueError("a and b must differ")

        def nonzero(g: ValueSource, y: DualElement) -> bool:
            return not self._value(g, y).is_zero(self._tolerance)

        if y0.is_zero:
            return NonvanishingCertificate(Fraction(0), window, True)
        if not (nonzero(g1, y0) and nonzero(g2, y0)):
            raise ValueError(f"g1(y0) g2(y0) vanishes at y0 = {y0}")
        z0 = group_core.divide(y0, c)
        intermediate = {
            "g1(a z0)": nonzero(g1, z0 * a),
            "g1(b z0)": nonzero(g1, z0 * b),
            "g2(a z0)": nonzero(g2, z0 * a),
            "g2(b z0)": nonzero(g2, z0 * b),
        }
        generator = z0 * (a * b)
        for k in range(-window, window + 1):
            if not (
                nonzero(g1, z0 * (k * a))
                and nonzero(g2, z0 * (k * b))
                and nonzero(g1, generator * k)
                and nonzero(g2, generator * k)
            ):
                logger.debug("Non-vanishing fails at k = %d", k)
                return NonvanishingCertificate(
                    generator.value, window, False, k, intermediate
                )
        return NonvanishingCertificate(
            generator.value, window, all(intermediate.values()), None, intermediate
        )

    def _phi(self, g: ValueSource, y: DualElement) -> Exponent:
        value = self._value(g, y)
        exponent = value.as_exponent()
        if exponent is not None:
            return exponent
        fraction = value.as_fraction()
        if fraction is not None:
            if fraction <= 0 or fraction > 1:
                raise ValueError(f"hypothesis (l7.1) violated: g({y}) = {fraction}")
            return -math.log(fraction)
        number = value.to_complex()
        if abs(number.imag) > self._tolerance or not 0 < number.real <= 1 + self._tolerance:
            raise ValueError(f"hypothesis (l7.1) violated: g({y}) = {number}")
        return -math.log(number.real)

    def lemma8_extract(
        self,
        g1: ValueSource,
        g2: ValueSource,
        a: int,
        b: int,
        generator: DualElement,
        window: int = DEFAULT_WINDOW,
    ) -> QuadraticFit:
        if generator.host.mod_one:
            raise ValueError("Quadratic extraction needs a subgroup of Q")
        step = generator * (abs(b - a) * a * b)
        ys = [(step * k).value for k in range(-window, window + 1)]
        lambdas: list[Fraction | float] = []
        residual = third = evenness = 0.0
        exact = True
        for g in (g1, g2):
            phis = [self._phi(g, generator.host.element(y)) for y in ys]
            exact_phis = all(isinstance(phi, Fraction) for phi in phis)
            exact = exact and exact_phis
            fit = _fit_quadratic(ys, phis, exact_phis)
            lambdas.append(fit)
            residual = max(
                residual, max(float(abs(phi - fit * y * y)) for phi, y in zip(phis, ys, strict=True))
            )
            third = max(
                third,
                max(
                    (
                        float(abs(phis[i + 3] - 3 * phis[i + 2] + 3 * phis[i + 1] - phis[i]))
                        for i in range(len(phis) - 3)
                    ),
                    default=0.0,
                ),
            )
            evenness = max(
                evenness,
                max(float(abs(phis[i] - phis[-1 - i])) for i in range(len(phis))),
            )
        accepted = (
            residual <= self._tolerance
            and third <= self._tolerance
            and evenness <= self._tolerance
            and all(lam >= 0 for lam in lambdas)
        )
        if not accepted:
            logger.info(
                "Quadratic fit rejected: residual %.3g, third difference %.3g, evenness %.3g",
                residual,
                third,
                evenness,
            )
        return QuadraticFit(
            (lambdas[0], lambdas[1]), residual, third, evenness, accepted, exact, len(ys)
        )


def _fit_quadratic(
    ys: list[Fraction], phis: list[Exponent], exact: bool
) -> Fraction | float:
    """Least-squares lambda for phi(y) = lambda y^2."""
    if exact:
        denominator = sum((y**4 for y in ys), Fraction(0))
        if denominator == 0:
            return Fraction(0)
        return sum((Fraction(phi) * y * y for phi, y in zip(phis, ys, strict=True)), Fraction(0)) / denominator
    denominator_f = sum(float(y) ** 4 for y in ys)
    if denominator_f == 0:
        return 0.0
    return sum(float(phi) * float(y) ** 2 for phi, y in zip(phis, ys, strict=True)) / denominator_f
