"""Tests for CharFnService."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heydecheck.models.charfn import (
    ClassTag,
    Conjugate,
    CosetPiecewise,
    Gaussian,
    HermitianViolationError,
    Mixture,
    Product,
    Shift,
    SubgroupIndicator,
    TorsionExtension,
)
from heydecheck.models.construction import CaseSpec, ConstructionResult
from heydecheck.models.groups import (
    INFINITE,
    Host,
    PrimeProfile,
    SolenoidPoint,
    SubgroupSpec,
)
from heydecheck.models.values import ExactValue
from heydecheck.services import group_core, grids
from heydecheck.services.charfn import CharFnService, constant_table
from heydecheck.services.constructions import ConstructionService

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
WIDE = PrimeProfile.infinite([2, 3, 5, 7])

_builder = ConstructionService()
STORED = [
    _builder.lemma2_construct(3),
    _builder.lemma3_construct(5),
    _builder.case1a_construct(CaseSpec(2, 5, WIDE)),
    _builder.case1b_construct(CaseSpec(1, 6, WIDE)),
    _builder.remark2_pair(PrimeProfile.infinite([2, 3])),
    _builder.gaussian_construct(1, -3),
    _builder.theorem2_full_support_construct(CaseSpec(2, -5, WIDE)),
]
stored = st.sampled_from(STORED)
EVALUATOR = CharFnService()


class TestEval:
    """Tests for eval."""

    def test_gaussian(self, charfn: CharFnService, rationals: Host) -> None:
        """exp(-3 y^2) at y = 1/2 is exp(-3/4)."""
        value = charfn.eval(Gaussian(3), rationals.element(HALF))

        assert value.as_exponent() == Fraction(3, 4)

    def test_gaussian_needs_rational_host(
        self, charfn: CharFnService, prufer2: Host
    ) -> None:
        """Gaussian factors do not live on torsion hosts."""
        with pytest.raises(ValueError, match="rational host"):
            charfn.eval(Gaussian(1), prufer2.element(HALF))

    def test_negative_gaussian_coefficient(self) -> None:
        """lambda must be nonnegative."""
        with pytest.raises(ValueError, match="nonnegative"):
            Gaussian(-1)

    def test_torsion_extension(self, charfn: CharFnService, prufer2: Host) -> None:
        """g_0 on Y_(2), extended by 0."""
        mu = charfn.torsion_extension(prufer2, 2, c=THIRD)

        assert charfn.eval(mu, prufer2.element(0)).as_fraction() == 1
        assert charfn.eval(mu, prufer2.element(HALF)).as_fraction() == THIRD
        assert charfn.eval(mu, prufer2.element(Fraction(1, 4))).is_zero()

    def test_pullback(self, charfn: CharFnService) -> None:
        """Table (1, 1/3, 1/3) on Z[1/2] / 3 Z[1/2]."""
        host = Host.rational(PrimeProfile.infinite([2, 3]))
        dyadic = SubgroupSpec.local(host, [2])
        mu = charfn.pullback(dyadic, group_core.scale_subgroup(dyadic, 3), c=THIRD)

        assert mu.table == (1, THIRD, THIRD)
        assert charfn.eval(mu, host.element(1)).as_fraction() == THIRD
        assert charfn.eval(mu, host.element(3)).as_fraction() == 1
        assert charfn.eval(mu, host.element(Fraction(3, 4))).as_fraction() == 1
        assert charfn.eval(mu, host.element(THIRD)).is_zero()

    def test_coset_piecewise(self, charfn: CharFnService, heyde_profile: PrimeProfile) -> None:
        """1 on Z[1/2], 1/2 on the rest of its 3-extension, 0 elsewhere."""
        host = Host.rational(heyde_profile)
        dyadic = SubgroupSpec.local(host, [2])
        extended = SubgroupSpec(host, PrimeProfile.of({2: INFINITE, 3: 1}))
        omega = CosetPiecewise(extended, dyadic, ((host.element(0), Fraction(1)),), HALF)

        assert charfn.eval(omega, host.element(THIRD)).as_fraction() == HALF
        assert charfn.eval(omega, host.element(Fraction(1, 4))).as_fraction() == 1
        assert charfn.eval(omega, host.element(Fraction(1, 9))).is_zero()

    def test_shift_conjugate_and_mixture(
        self, charfn: CharFnService, prufer2: Host
    ) -> None:
        """The point mass at 1 and its reflection average to a real value."""
        whole = SubgroupIndicator(SubgroupSpec.whole(prufer2))
        shifted = Shift(SolenoidPoint(Fraction(1)), whole)
        y = prufer2.element(Fraction(1, 4))

        value = charfn.eval(shifted, y)
        reflected = charfn.eval(Conjugate(shifted), y)
        mixed = charfn.eval(Mixture((HALF, HALF), (shifted, Conjugate(shifted))), y)

        assert value == ExactValue.unit(Fraction(1, 4))
        assert reflected == ExactValue.unit(Fraction(3, 4))
        assert mixed.is_zero()

    def test_product_short_circuits_on_zero(
        self, charfn: CharFnService, prufer2: Host
    ) -> None:
        """A zero factor makes the product zero."""
        haar = SubgroupIndicator(SubgroupSpec.torsion(prufer2, 1))
        whole = SubgroupIndicator(SubgroupSpec.whole(prufer2))

        assert charfn.eval(Product((haar, whole)), prufer2.element(HALF)).is_zero()

    def test_mixture_weights_must_sum_to_one(self, prufer2: Host) -> None:
        """Mixture weights are a probability vector."""
        whole = SubgroupIndicator(SubgroupSpec.whole(prufer2))

        with pytest.raises(ValueError, match="sum to 1"):
            Mixture((HALF, THIRD), (whole, whole))


class TestTables:
    """Validation of finite tables."""

    def test_constant_table(self) -> None:
        """(1, c, ..., c)."""
        assert constant_table(3, "1/3") == (1, THIRD, THIRD)

    def test_table_must_start_with_one(self, charfn: CharFnService, prufer2: Host) -> None:
        """g(0) = 1."""
        with pytest.raises(ValueError, match="at 0 must be 1"):
            charfn.torsion_extension(prufer2, 2, ["1/2", "1/3"])

    def test_table_must_be_even(self, charfn: CharFnService, prufer2: Host) -> None:
        """g(-y) = g(y)."""
        with pytest.raises(ValueError, match="g\\(-y\\) = g\\(y\\)"):
            charfn.torsion_extension(prufer2, 4, ["1", "1/2", "0", "1/4"])

    def test_table_size(self, charfn: CharFnService, prufer2: Host) -> None:
        """One value per element of Y_(n)."""
        with pytest.raises(ValueError, match="needs 4 entries"):
            charfn.torsion_extension(prufer2, 4, ["1", "0"])

    def test_table_must_be_positive_definite(
        self, charfn: CharFnService, prufer2: Host
    ) -> None:
        """c = 2 on Z(2) has eigenvalue -1."""
        with pytest.raises(ValueError, match="not positive definite"):
            charfn.torsion_extension(prufer2, 2, c=2)


class TestPsdCheck:
    """Tests for psd_check."""

    def test_lemma_table_is_exactly_psd(self, charfn: CharFnService, prufer2: Host) -> None:
        """(1, 1/3) on Y_(2) is positive definite on Y_(8)."""
        mu = charfn.torsion_extension(prufer2, 2, c=THIRD)

        result = charfn.psd_check(mu, group_core.torsion_elements(prufer2, 8))

        assert result.positive
        assert result.exact
        assert result.size == 8

    def test_indefinite_table(self, charfn: CharFnService, prufer2: Host) -> None:
        """(1, 2) fails with minimum eigenvalue -1."""
        mu = charfn.torsion_extension(prufer2, 2, c=2, check_psd=False)

        result = charfn.psd_check(mu, group_core.torsion_elements(prufer2, 2))

        assert not result.positive
        assert result.min_eigenvalue == pytest.approx(-1.0)

    def test_gaussian_uses_numeric_check(self, charfn: CharFnService, rationals: Host) -> None:
        """Gaussian Gram matrices are not rational."""
        points = [rationals.element(m) for m in range(-2, 3)]

        result = charfn.psd_check(Gaussian(1), points)

        assert result.positive
        assert not result.exact

    def test_non_hermitian_gram(self, charfn: CharFnService, prufer2: Host) -> None:
        """An asymmetric table is caught before the eigenvalue check."""
        table = ((0, 1), (Fraction(1, 4), HALF), (HALF, 0), (Fraction(3, 4), Fraction(1, 4)))
        f = TorsionExtension(prufer2, 4, table)

        with pytest.raises(HermitianViolationError):
            charfn.psd_check(f, group_core.torsion_elements(prufer2, 4))

    def test_duplicate_points(self, charfn: CharFnService, prufer2: Host) -> None:
        """Points must be distinct."""
        y = prufer2.element(HALF)

        with pytest.raises(ValueError, match="distinct points"):
            charfn.psd_check(Gaussian(1), [y, y])

    def test_empty_point_set(self, charfn: CharFnService) -> None:
        """No points is trivially positive."""
        assert charfn.psd_check(Gaussian(1), []).positive


class TestFullSupport:
    """Tests for full_support_check."""

    def test_gaussian_has_full_support(self, charfn: CharFnService, rationals: Host) -> None:
        """|exp(-y^2)| < 1 away from 0."""
        points = [rationals.element(Fraction(m, 4)) for m in range(-4, 5)]

        assert charfn.full_support_check(Gaussian(1), points)

    def test_point_mass_does_not(self, charfn: CharFnService, prufer2: Host) -> None:
        """The point mass at 0 has |f| = 1 everywhere."""
        whole = SubgroupIndicator(SubgroupSpec.whole(prufer2))

        assert not charfn.full_support_check(whole, group_core.torsion_elements(prufer2, 4))

    def test_needs_zero(self, charfn: CharFnService, rationals: Host) -> None:
        """0 must be among the points."""
        with pytest.raises(ValueError, match="needs 0"):
            charfn.full_support_check(Gaussian(1), [rationals.element(1)])


class TestClassify:
    """Tests for classify."""

    def test_gaussian(self, charfn: CharFnService) -> None:
        assert charfn.classify(Gaussian(2)) == ClassTag.GAUSSIAN_CLASS

    def test_idempotent(self, charfn: CharFnService, prufer2: Host) -> None:
        haar = SubgroupIndicator(SubgroupSpec.torsion(prufer2, 4))

        assert charfn.classify(haar) == ClassTag.IDEMPOTENT_CLASS

    def test_gaussian_times_idempotent(self, charfn: CharFnService, rationals: Host) -> None:
        f = Product((Gaussian(1), SubgroupIndicator(SubgroupSpec.local(rationals, [2]))))

        assert charfn.classify(f) == ClassTag.GAUSSIAN_TIMES_IDEMPOTENT

    def test_shift_keeps_class(self, charfn: CharFnService, prufer2: Host) -> None:
        """Shifts by points of X do not change the class."""
        haar = SubgroupIndicator(SubgroupSpec.torsion(prufer2, 4))

        assert charfn.classify(Shift(SolenoidPoint(Fraction(1)), haar)) == ClassTag.IDEMPOTENT_CLASS

    def test_intermediate_value_is_outside(self, charfn: CharFnService, prufer2: Host) -> None:
        """A value strictly between 0 and 1 rules out Gamma * I."""
        mu = charfn.torsion_extension(prufer2, 2, c=THIRD)

        assert charfn.classify(mu) == ClassTag.OUTSIDE

    def test_gaussian_times_intermediate_is_outside(
        self, charfn: CharFnService, heyde_profile: PrimeProfile
    ) -> None:
        """The Gaussian factor does not rescue an intermediate factor."""
        host = Host.rational(heyde_profile)
        dyadic = SubgroupSpec.local(host, [2])
        extended = SubgroupSpec(host, PrimeProfile.of({2: INFINITE, 3: 1}))
        omega = CosetPiecewise(extended, dyadic, ((host.element(0), Fraction(1)),), HALF)

        assert charfn.classify(Product((Gaussian(3), omega))) == ClassTag.OUTSIDE

    def test_intermediate_value_masked_by_a_sibling(
        self, charfn: CharFnService, prufer2: Host
    ) -> None:
        """g_0 times the indicator of {0} is the indicator of {0}."""
        mu = charfn.torsion_extension(prufer2, 2, c=THIRD)
        f = Product((mu, SubgroupIndicator(SubgroupSpec.torsion(prufer2, 1))))

        assert charfn.classify(f) == ClassTag.IDEMPOTENT_CLASS

    def test_pullback_masked_by_its_kernel(
        self, charfn: CharFnService, heyde_profile: PrimeProfile
    ) -> None:
        """The 1/3 coset of H/2H vanishes against the indicator of 2H."""
        host = Host.rational(heyde_profile)
        triadic = SubgroupSpec.local(host, [3])
        doubled = group_core.scale_subgroup(triadic, 2)
        omega = charfn.pullback(triadic, doubled, (1, THIRD))
        f = Product((omega, SubgroupIndicator(doubled)))

        assert charfn.classify(f) == ClassTag.IDEMPOTENT_CLASS
        assert charfn.classify(Product((Gaussian(1), f))) == ClassTag.GAUSSIAN_TIMES_IDEMPOTENT

    def test_mixture_of_gaussians_is_unknown(self, charfn: CharFnService) -> None:
        """Mixtures of Gaussians are outside the recognised grammar."""
        f = Mixture((HALF, HALF), (Gaussian(1), Gaussian(2)))

        assert charfn.classify(f) == ClassTag.UNKNOWN

    def test_symmetrize(self, charfn: CharFnService) -> None:
        """mu * mu-bar is f times its conjugate."""
        f = Gaussian(1)

        assert charfn.symmetrize(f) == Product((f, Conjugate(f)))


class TestConstructionInvariants:
    """Characteristic-function laws on the stored constructions' own grids."""

    @settings(max_examples=20, deadline=None)
    @given(result=stored, data=st.data())
    def test_conjugate_symmetry(self, result: ConstructionResult, data: st.DataObject) -> None:
        """f(-y) is the conjugate of f(y)."""
        y = data.draw(st.sampled_from(grids.grid_points(result.grid)))

        for f in result.pair:
            assert EVALUATOR.eval(f, -y).equals(EVALUATOR.eval(f, y).conjugate(), 1e-12)

    @settings(max_examples=15, deadline=None)
    @given(result=stored, data=st.data())
    def test_gram_matrices_are_positive(
        self, result: ConstructionResult, data: st.DataObject
    ) -> None:
        """Every finite Gram matrix of a characteristic function is PSD."""
        chosen = data.draw(
            st.lists(
                st.sampled_from(grids.grid_points(result.grid)),
                min_size=1,
                max_size=12,
                unique_by=lambda y: y.value,
            )
        )

        for f in result.pair:
            assert EVALUATOR.psd_check(f, chosen).positive

    @settings(max_examples=20, deadline=None)
    @given(result=stored, data=st.data())
    def test_symmetrization_is_real_and_bounded(
        self, result: ConstructionResult, data: st.DataObject
    ) -> None:
        """|f(y)|^2 lies in [0, 1]."""
        y = data.draw(st.sampled_from(grids.grid_points(result.grid)))

        for f in result.pair:
            value = EVALUATOR.eval(EVALUATOR.symmetrize(f), y).to_complex()
            assert abs(value.imag) < 1e-12
            assert -1e-12 <= value.real <= 1 + 1e-12
