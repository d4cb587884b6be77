"""Tests for the finite-model oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heydecheck.models.charfn import Gaussian, Shift, SubgroupIndicator
from heydecheck.models.finite import PMF, FiniteModel
from heydecheck.models.groups import Host, SolenoidPoint, SubgroupSpec
from heydecheck.models.values import ExactValue
from heydecheck.services.charfn import CharFnService
from heydecheck.services.constructions import ConstructionService
from heydecheck.services.finmodel import (
    FiniteModelService,
    conditional_symmetry_enumerate,
    pmf_to_charfn,
    sample_forms,
    torsion_host,
)

CHARFN = CharFnService()
FINITE = FiniteModelService(CHARFN)
DYADIC = Host.prufer(2)


@pytest.fixture
def z8(prufer2: Host) -> FiniteModel:
    return FiniteModel(prufer2, (8,))


@pytest.fixture
def point_mass(prufer2: Host) -> Shift:
    """Degenerate distribution at 1: the character (1, y) itself."""
    return Shift(SolenoidPoint(Fraction(1)), SubgroupIndicator(SubgroupSpec.whole(prufer2)))


class TestFiniteModel:
    """Tests for FiniteModel validation."""

    def test_product_of_coprime_orders(self) -> None:
        """Z(4) x Z(3) is Z(12)."""
        model = FiniteModel(Host.prufer_product([2, 3]), (4, 3))

        assert model.order == 12
        assert model.label == "Z(4) x Z(3)"
        assert model.character(13).value == Fraction(1, 12)

    def test_orders_must_be_coprime(self, prufer2: Host) -> None:
        with pytest.raises(ValueError, match="pairwise coprime"):
            FiniteModel(prufer2, (2, 4))

    def test_empty_orders(self, prufer2: Host) -> None:
        with pytest.raises(ValueError, match="Invalid model orders"):
            FiniteModel(prufer2, ())

    def test_rational_host(self, rationals: Host) -> None:
        """Q has no finite quotients to model."""
        with pytest.raises(ValueError, match="no finite torsion quotients"):
            FiniteModel(rationals, (2,))

    def test_order_must_embed(self, prufer2: Host) -> None:
        """Z(3) is not inside Z(2^inf)."""
        with pytest.raises(ValueError, match="does not embed"):
            FiniteModel(prufer2, (3,))


class TestPMF:
    """Tests for PMF validation and pmf_to_charfn."""

    def test_entries_must_sum_to_one(self) -> None:
        with pytest.raises(ValueError, match="not 1"):
            PMF((Fraction(1, 2), Fraction(1, 3)))

    def test_negative_entry(self) -> None:
        with pytest.raises(ValueError, match="nonnegative"):
            PMF((Fraction(3, 2), Fraction(-1, 2)))

    def test_empty(self) -> None:
        with pytest.raises(ValueError, match="at least one entry"):
            PMF(())

    def test_point_mass_transform(self) -> None:
        """The point mass at 1 on Z(4) has f(k/4) = exp(2 pi i k/4)."""
        values = pmf_to_charfn(PMF.point_mass(4, 1))

        assert values[0] == ExactValue.one()
        assert values[1] == ExactValue.unit(Fraction(1, 4))
        assert values[2].as_fraction() == -1

    def test_uniform_transform(self) -> None:
        """The uniform law on Z(3) is the indicator of the trivial character."""
        values = pmf_to_charfn(PMF((Fraction(1, 3),) * 3))

        assert values[0].as_fraction() == 1
        assert values[1].is_zero()
        assert values[2].is_zero()


class TestCharfnToPmf:
    """Tests for charfn_to_pmf."""

    def test_lemma2_table(
        self, finite: FiniteModelService, charfn: CharFnService, prufer2: Host, z8: FiniteModel
    ) -> None:
        """(1, 1/3) on Y_(2) gives 1/6 on even and 1/12 on odd points of Z(8)."""
        mu = charfn.torsion_extension(prufer2, 2, c=Fraction(1, 3))

        pmf = finite.charfn_to_pmf(mu, z8)

        assert pmf.probabilities == tuple(
            Fraction(1, 6) if x % 2 == 0 else Fraction(1, 12) for x in range(8)
        )

    def test_haar_is_uniform(
        self, finite: FiniteModelService, prufer2: Host, z8: FiniteModel
    ) -> None:
        """The indicator of {0} is the Haar distribution."""
        haar = SubgroupIndicator(SubgroupSpec.torsion(prufer2, 1))

        assert finite.charfn_to_pmf(haar, z8).probabilities == (Fraction(1, 8),) * 8

    def test_point_mass(
        self, finite: FiniteModelService, point_mass: Shift, z8: FiniteModel
    ) -> None:
        assert finite.charfn_to_pmf(point_mass, z8, check_support=False) == PMF.point_mass(8, 1)

    def test_negative_entry_is_rejected(
        self, finite: FiniteModelService, charfn: CharFnService, prufer2: Host
    ) -> None:
        """(1, 2) gives pmf(1) = -1/2 on Z(2)."""
        mu = charfn.torsion_extension(prufer2, 2, c=2, check_psd=False)

        with pytest.raises(ValueError, match="not a characteristic function"):
            finite.charfn_to_pmf(mu, FiniteModel(prufer2, (2,)))

    def test_support_is_checked_by_default(
        self, finite: FiniteModelService, charfn: CharFnService, prufer2: Host
    ) -> None:
        """A table on Y_(4) does not vanish on Y_(4) minus Y_(2)."""
        mu = charfn.torsion_extension(prufer2, 4, c=Fraction(1, 3))

        with pytest.raises(ValueError, match="support condition violated"):
            finite.charfn_to_pmf(mu, FiniteModel(prufer2, (2,)))

    def test_point_mass_needs_the_opt_out(
        self, finite: FiniteModelService, point_mass: Shift, prufer2: Host
    ) -> None:
        with pytest.raises(ValueError, match="support condition violated"):
            finite.charfn_to_pmf(point_mass, FiniteModel(prufer2, (2,)))


class TestInversion:
    """pmf_to_charfn inverts charfn_to_pmf on supported distributions."""

    @settings(deadline=None)
    @given(numerator=st.integers(-6, 6), level=st.integers(1, 5))
    def test_lemma2_tables(self, numerator: int, level: int) -> None:
        """(1, n/7) on Y_(2) comes back from every dyadic model."""
        mu = CHARFN.torsion_extension(DYADIC, 2, c=Fraction(numerator, 7))
        model = FiniteModel(DYADIC, (2**level,))

        values = pmf_to_charfn(FINITE.charfn_to_pmf(mu, model))

        for k, value in enumerate(values):
            assert value.equals(CHARFN.eval(mu, model.character(k)))

    @pytest.mark.parametrize(
        ("q", "order"), [(5, 3), (5, 9), (5, 27), (13, 7), (13, 49)]
    )
    def test_lemma3_tables(
        self, constructions: ConstructionService, q: int, order: int
    ) -> None:
        """The Y_(2m+1) table survives the trip through Z(order)."""
        result = constructions.lemma3_construct(q)
        model = FiniteModel(torsion_host(result.mu1), (order,))

        values = pmf_to_charfn(FINITE.charfn_to_pmf(result.mu1, model))

        for k, value in enumerate(values):
            assert value.equals(CHARFN.eval(result.mu1, model.character(k)))


class TestConditionalSymmetry:
    """Tests for conditional_symmetry_enumerate and sample_forms."""

    def test_point_masses(self) -> None:
        """L1 = 2, L2 = p + q: symmetric iff 2(p + q) = 0 in Z(8)."""
        mass = PMF.point_mass(8, 1)

        symmetric = conditional_symmetry_enumerate(mass, mass, 1, 3)
        asymmetric = conditional_symmetry_enumerate(mass, mass, 1, 2)

        assert symmetric.symmetric
        assert symmetric.deviation == 0
        assert not asymmetric.symmetric
        assert asymmetric.witness == (2, 3)
        assert asymmetric.deviation == 1

    def test_order_mismatch(self) -> None:
        with pytest.raises(ValueError, match="orders differ"):
            conditional_symmetry_enumerate(PMF.point_mass(2), PMF.point_mass(4), 1, 3)

    def test_sampled_point_masses(self) -> None:
        """Degenerate draws give one-point conditional tables."""
        mass = PMF.point_mass(8, 1)

        symmetric = sample_forms(mass, mass, 1, 3, samples=50, seed=7)
        asymmetric = sample_forms(mass, mass, 1, 2, samples=50, seed=7)

        assert symmetric.conditional == {2: {4: 1.0}}
        assert symmetric.max_asymmetry == 0
        assert asymmetric.conditional == {2: {3: 1.0}}
        assert asymmetric.max_asymmetry == 1.0

    def test_sampling_is_seeded(self) -> None:
        """Equal seeds give equal tables."""
        uniform = PMF((Fraction(1, 4),) * 4)

        first = sample_forms(uniform, uniform, 1, 3, samples=200, seed=3)
        second = sample_forms(uniform, uniform, 1, 3, samples=200, seed=3)

        assert first == second

    def test_sample_count(self) -> None:
        with pytest.raises(ValueError, match="must be positive"):
            sample_forms(PMF.point_mass(2), PMF.point_mass(2), 1, 3, samples=0)

    def test_sampled_lemma2_pair_is_nearly_symmetric(
        self, finite: FiniteModelService, constructions: ConstructionService, prufer2: Host
    ) -> None:
        """10^5 draws of the Lemma 2 pair on Z(4) keep every conditional gap under 0.02."""
        result = constructions.lemma2_construct(3)
        pmf = finite.charfn_to_pmf(result.mu1, FiniteModel(prufer2, (4,)))

        table = sample_forms(pmf, pmf, 1, 3, samples=100_000, seed=0)

        assert table.samples == 100_000
        assert table.max_asymmetry < 0.02


class TestCrossValidation:
    """Tests for crossvalidate_lemma1."""

    @pytest.mark.parametrize(("q", "verified"), [(3, True), (5, False)])
    def test_lemma2_pair(
        self,
        finite: FiniteModelService,
        constructions: ConstructionService,
        z8: FiniteModel,
        q: int,
        verified: bool,
    ) -> None:
        """Equation and enumeration agree for the valid and the forced pair."""
        result = constructions.lemma2_construct(q, force=True, level=3)

        check = finite.crossvalidate_lemma1(result.mu1, result.mu2, z8, 1, q)

        assert check.agree
        assert check.equation.verified is verified
        assert check.symmetry.symmetric is verified
        assert check.model == "Z(8)"


class TestTorsionHost:
    """Tests for torsion_host."""

    def test_single_host(self, charfn: CharFnService, prufer2: Host) -> None:
        mu = charfn.torsion_extension(prufer2, 2, c=Fraction(1, 3))

        assert torsion_host(mu, mu) == prufer2

    def test_no_host(self) -> None:
        """Gaussians carry no torsion host."""
        with pytest.raises(ValueError, match="found: none"):
            torsion_host(Gaussian(1))

    def test_mixed_hosts(self, charfn: CharFnService, prufer2: Host) -> None:
        mu = charfn.torsion_extension(prufer2, 2, c=Fraction(1, 3))
        nu = charfn.torsion_extension(Host.prufer(3), 3, c=Fraction(1, 3))

        with pytest.raises(ValueError, match="exactly one torsion host"):
            torsion_host(mu, nu)
