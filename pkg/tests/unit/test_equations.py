"""Tests for the equation templates."""

import pytest

from heydecheck.models.equation import EquationTerm
from heydecheck.services import equations


class TestTemplates:
    """Tests for the named templates."""

    def test_symmetry_equation(self) -> None:
        """mu1(u + p v) mu2(u + q v) = mu1(u - p v) mu2(u - q v)."""
        eq = equations.symmetry_equation(1, 3)

        assert eq.name == "symmetry(1,3)"
        assert eq.left == (EquationTerm(0, 1, 1), EquationTerm(1, 1, 3))
        assert eq.right == (EquationTerm(0, 1, -1), EquationTerm(1, 1, -3))
        assert eq.function_count == 2
        assert not eq.single_variable

    def test_single_distribution_equation(self) -> None:
        """l1 is the symmetry equation with p = 1."""
        eq = equations.lemma_single_equation(5)

        assert eq.name == "l1(q=5)"
        assert eq.left[1] == EquationTerm(1, 1, 5)

    def test_heyde_to_independence_coefficients(self) -> None:
        """(1, -3) gives L'1 = -2 x1 - 6 x2 and L'2 = 2 x1 - 2 x2."""
        first, second, eq = equations.heyde_to_independence(1, -3)

        assert first == (-2, -6)
        assert second == (2, -2)
        assert eq.name == "l4.6(1,-3)"
        assert eq.left == (EquationTerm(0, -2, 2), EquationTerm(1, -6, -2))

    def test_lemma6_identities_are_single_variable(self) -> None:
        """Both derived identities depend on y only."""
        left = equations.lemma6_left_identity(1, -3)
        right = equations.lemma6_right_identity(1, -3)

        assert left.single_variable and right.single_variable
        assert left.left == (EquationTerm(0, -4, 0),)
        assert left.right == (EquationTerm(0, -2, 0), EquationTerm(1, -6, 0))
        assert right.right == (EquationTerm(0, -2, 0), EquationTerm(1, 2, 0))

    def test_theorem2_independence(self) -> None:
        """Coefficients 4pq and (p + q)^2."""
        eq = equations.theorem2_independence(1, -2)

        assert eq.name == "t2.1(1,-2)"
        assert eq.left == (EquationTerm(0, 1, -8), EquationTerm(1, 1, 1))
        assert EquationTerm(0, 0, -8) in eq.right

    def test_theorem2_second_identity_squares_first_factor(self) -> None:
        """nu1(4pq y) appears twice on the right."""
        eq = equations.theorem2_second_identity(1, -2)

        assert eq.left == (EquationTerm(1, 9, 0),)
        assert eq.right.count(EquationTerm(0, -8, 0)) == 2

    def test_factored_equation(self) -> None:
        """mu1(q1 u + v) mu2(u + q2 v)."""
        eq = equations.factored_equation(2, 3)

        assert eq.left == (EquationTerm(0, 2, 1), EquationTerm(1, 1, 3))
        assert eq.right == (EquationTerm(0, 2, -1), EquationTerm(1, 1, -3))


class TestNamedEquation:
    """Tests for named_equation."""

    def test_every_name_resolves(self) -> None:
        """All CLI names map to templates."""
        for name in equations.NAMED_EQUATIONS:
            eq = equations.named_equation(name, 1, -3, q1=2, q2=3)
            assert eq.function_count <= 2

    def test_independence_alias(self) -> None:
        """independence is t2.1."""
        assert equations.named_equation("independence", 1, -2).name == "t2.1(1,-2)"

    def test_deltas_default_to_p_and_q(self) -> None:
        """l4.1 without deltas uses (p, q)."""
        assert equations.named_equation("l4.1", 2, 5).name == "l4.1(2,5)"
        assert equations.named_equation("l4.1", 2, 5, delta1=1, delta2=3).name == "l4.1(1,3)"

    def test_eq2_needs_factors(self) -> None:
        """eq2 without q1 and q2 is rejected."""
        with pytest.raises(ValueError, match="needs q1 and q2"):
            equations.named_equation("eq2", 1, 6)

    def test_unknown_name(self) -> None:
        with pytest.raises(ValueError, match="Unsupported equation"):
            equations.named_equation("l9", 1, 2)
