"""Characteristic-function expression trees."""

from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction

from heydecheck.models.groups import DualElement, Host, SolenoidPoint, SubgroupSpec


class ClassTag(Enum):
    """Membership of a distribution in Gamma(X), I(X) or Gamma(X)*I(X)."""

    GAUSSIAN_CLASS = auto()
    IDEMPOTENT_CLASS = auto()
    GAUSSIAN_TIMES_IDEMPOTENT = auto()
    OUTSIDE = auto()
    UNKNOWN = auto()

    @property
    def label(self) -> str:
        labels = {
            ClassTag.GAUSSIAN_CLASS: "Gaussian",
            ClassTag.IDEMPOTENT_CLASS: "Idempotent",
            ClassTag.GAUSSIAN_TIMES_IDEMPOTENT: "Gaussian * Idempotent",
            ClassTag.OUTSIDE: "Outside Gamma*I",
            ClassTag.UNKNOWN: "Unknown",
        }
        return labels[self]


class HermitianViolationError(ValueError):
    """Gram matrix of a supposed characteristic function is not Hermitian."""


@dataclass(frozen=True)
class PsdResult:
    """Positive-semidefiniteness verdict for one Gram matrix."""

    positive: bool
    min_eigenvalue: float
    exact: bool
    size: int


class CharFnExpr:
    """Base class of all expression nodes; nodes are immutable."""

    kind: str = "abstract"


@dataclass(frozen=True)
class Gaussian(CharFnExpr):
    """y -> exp(-lam * y^2) on a rational host."""

    lam: Fraction | float
    kind = "gaussian"

    def __post_init__(self) -> None:
        if not isinstance(self.lam, float):
            object.__setattr__(self, "lam", Fraction(self.lam))
        if self.lam < 0:
            raise ValueError(f"Gaussian coefficient must be nonnegative: {self.lam}")


@dataclass(frozen=True)
class SubgroupIndicator(CharFnExpr):
    """Characteristic function of the Haar distribution of A(X, K): 1 on the subgroup, 0 off it."""

    subgroup: SubgroupSpec
    kind = "subgroupIndicator"


@dataclass(frozen=True)
class CosetPiecewise(CharFnExpr):
    """Value per coset of ``inner`` inside ``outer``, ``default`` on unlisted cosets, 0 off ``outer``."""

    outer: SubgroupSpec
    inner: SubgroupSpec
    pieces: tuple[tuple[DualElement, Fraction], ...]
    default: Fraction = Fraction(0)
    kind = "cosetPiecewise"


@dataclass(frozen=True)
class TorsionExtension(CharFnExpr):
    """g_0 on the torsion subgroup Y_(order) of a torsion host, 0 elsewhere."""

    host: Host
    order: int
    table: tuple[tuple[Fraction, Fraction], ...]
    kind = "torsionExtension"

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "table",
            tuple(sorted((Fraction(y), Fraction(g)) for y, g in self.table)),
        )

    def lookup(self) -> dict[Fraction, Fraction]:
        return dict(self.table)


@dataclass(frozen=True)
class Pullback(CharFnExpr):
    """Table on the finite quotient subgroup/kernel, 0 off ``subgroup``."""

    table: tuple[Fraction, ...]
    subgroup: SubgroupSpec
    kernel: SubgroupSpec
    kind = "pullback"

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(Fraction(v) for v in self.table))


@dataclass(frozen=True)
class Product(CharFnExpr):
    """Pointwise product (convolution of the distributions)."""

    children: tuple[CharFnExpr, ...]
    kind = "product"


@dataclass(frozen=True)
class Mixture(CharFnExpr):
    """Convex combination of children with positive rational weights summing to 1."""

    weights: tuple[Fraction, ...]
    children: tuple[CharFnExpr, ...]
    kind = "mixture"

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != len(self.children):
            raise ValueError("Mixture needs one weight per child")
        if any(w <= 0 for w in weights) or sum(weights) != 1:
            raise ValueError(f"Mixture weights must be positive and sum to 1: {weights}")
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class Conjugate(CharFnExpr):
    """Reflected distribution: complex conjugate of the child."""

    child: CharFnExpr
    kind = "conjugate"


@dataclass(frozen=True)
class Shift(CharFnExpr):
    """Child multiplied by the character value (x, y)."""

    point: SolenoidPoint
    child: CharFnExpr
    kind = "shift"
