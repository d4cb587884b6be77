"""Finite quotient models and exact probability vectors."""

import math
from dataclasses import dataclass
from fractions import Fraction

from heydecheck.models.equation import VerificationReport
from heydecheck.models.groups import DualElement, Host


@dataclass(frozen=True)
class FiniteModel:
    """Z(n_1) x ... x Z(n_k) with pairwise coprime orders, identified with Z(n_1...n_k).

    Character k of the model is embedded into the torsion host as k/N.
    """

    host: Host
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(self.orders))
        if not self.orders or any(n < 1 for n in self.orders):
            raise ValueError(f"Invalid model orders: {self.orders}")
        if math.lcm(*self.orders) != math.prod(self.orders):
            raise ValueError(f"Model orders must be pairwise coprime: {self.orders}")
        if not self.host.mod_one:
            raise ValueError(f"{self.host.label} has no finite torsion quotients")
        if not self.host.contains(Fraction(1, self.order)):
            raise ValueError(f"Z({self.order}) does not embed into {self.host.label}")

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def character(self, k: int) -> DualElement:
        return self.host.element(Fraction(k % self.order, self.order))

    @property
    def label(self) -> str:
        return " x ".join(f"Z({n})" for n in self.orders)


@dataclass(frozen=True)
class PMF:
    """Exact probability vector on Z(order)."""

    probabilities: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probabilities = tuple(Fraction(p) for p in self.probabilities)
        if not probabilities:
            raise ValueError("A PMF needs at least one entry")
        if any(p < 0 for p in probabilities):
            raise ValueError("PMF entries must be nonnegative")
        if sum(probabilities) != 1:
            raise ValueError(f"PMF entries sum to {sum(probabilities)}, not 1")
        object.__setattr__(self, "probabilities", probabilities)

    @property
    def order(self) -> int:
        return len(self.probabilities)

    @classmethod
    def point_mass(cls, order: int, at: int = 0) -> "PMF":
        return cls(tuple(Fraction(int(x == at % order)) for x in range(order)))


@dataclass(frozen=True)
class SymmetryResult:
    """Exact check of P(L1 = h, L2 = g) = P(L1 = h, L2 = -g)."""

    symmetric: bool
    deviation: Fraction
    witness: tuple[int, int] | None = None


@dataclass(frozen=True)
class CrossValidation:
    """Equation verdict against the enumerated conditional-symmetry verdict."""

    p: int
    q: int
    model: str
    equation: VerificationReport
    symmetry: SymmetryResult

    @property
    def agree(self) -> bool:
        return self.equation.verified == self.symmetry.symmetric


@dataclass(frozen=True)
class EmpiricalTable:
    """Empirical conditional tables P^(L2 = g | L1 = h) from seeded samples."""

    samples: int
    seed: int
    conditional: dict[int, dict[int, float]]
    max_asymmetry: float
