"""Functional-equation templates, grids and verification reports."""

from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction

from heydecheck.models.groups import Host
from heydecheck.models.values import ExactValue


class VerificationStatus(Enum):
    """Outcome of a grid check."""

    VERIFIED = auto()
    VIOLATED = auto()
    INCONCLUSIVE = auto()

    @property
    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class EquationTerm:
    """One factor f_j(u_coeff * u + v_coeff * v)."""

    function_index: int
    u_coeff: int
    v_coeff: int = 0


@dataclass(frozen=True)
class EquationSpec:
    """prod f_j(a_j u + b_j v) over ``left`` equals the same product over ``right``.

    Single-variable identities ignore v and are checked for every u.
    """

    name: str
    left: tuple[EquationTerm, ...]
    right: tuple[EquationTerm, ...]
    single_variable: bool = False

    @property
    def function_count(self) -> int:
        indices = [t.function_index for t in (*self.left, *self.right)]
        return max(indices) + 1 if indices else 0


class GridKind(Enum):
    """How grid points are enumerated."""

    TORSION = auto()  # all of Y_(order) in a torsion host
    BOX = auto()  # {m / denominator : |m| <= numerator_bound}
    EXPLICIT = auto()


@dataclass(frozen=True)
class GridSpec:
    """Finite, deterministically ordered set of dual elements."""

    host: Host
    kind: GridKind
    order: int | None = None
    numerator_bound: int | None = None
    denominator: int | None = None
    points: tuple[Fraction, ...] = ()

    @classmethod
    def torsion(cls, host: Host, order: int) -> "GridSpec":
        if order < 1:
            raise ValueError(f"Grid order must be positive: {order}")
        return cls(host, GridKind.TORSION, order=order)

    @classmethod
    def box(cls, host: Host, numerator_bound: int, denominator: int = 1) -> "GridSpec":
        if numerator_bound < 0 or denominator < 1:
            raise ValueError(
                f"Invalid box: |m| <= {numerator_bound}, denominator {denominator}"
            )
        return cls(
            host,
            GridKind.BOX,
            numerator_bound=numerator_bound,
            denominator=denominator,
        )

    @classmethod
    def explicit(cls, host: Host, points: tuple[Fraction, ...]) -> "GridSpec":
        return cls(host, GridKind.EXPLICIT, points=tuple(Fraction(p) for p in points))

    @property
    def label(self) -> str:
        if self.kind == GridKind.TORSION:
            return f"Y_({self.order}) in {self.host.label}"
        if self.kind == GridKind.BOX:
            return f"{{m/{self.denominator} : |m| <= {self.numerator_bound}}}"
        return f"{len(self.points)} explicit points"


@dataclass(frozen=True)
class Witness:
    """A grid pair where the two sides of an equation differ."""

    u: Fraction
    v: Fraction
    lhs: ExactValue
    rhs: ExactValue


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one equation on one grid."""

    equation: str
    status: VerificationStatus
    pairs_checked: int = 0
    exact_pairs: int = 0
    tolerance_used: float = 0.0
    witness: Witness | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.status == VerificationStatus.VIOLATED and self.witness is None:
            raise ValueError("A VIOLATED report needs a witness")

    @property
    def verified(self) -> bool:
        return self.status == VerificationStatus.VERIFIED

    @property
    def violated(self) -> bool:
        return self.status == VerificationStatus.VIOLATED


@dataclass(frozen=True)
class ImplicationReport:
    """A premise check followed by the checks it is supposed to imply."""

    premise: VerificationReport
    conclusions: tuple[VerificationReport, ...]

    @property
    def vacuous(self) -> bool:
        return not self.premise.verified

    @property
    def holds(self) -> bool:
        """False only when the premise is VERIFIED and some conclusion is not."""
        return self.vacuous or all(c.verified for c in self.conclusions)


@dataclass(frozen=True)
class LambdaSolution:
    """Nonnegative solutions of a lambda_1 + b lambda_2 = 0.

    ``ratio`` is lambda_2 / lambda_1 along the solution ray; None means only (0, 0).
    """

    a: int
    b: int
    ratio: Fraction | None

    @property
    def trivial_only(self) -> bool:
        return self.ratio is None


@dataclass(frozen=True)
class NonvanishingCertificate:
    """Result of the finite-window subgroup search around y0 = c z0."""

    generator: Fraction
    window: int
    holds: bool
    failing_k: int | None = None
    intermediate: dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class QuadraticFit:
    """phi_j = -ln g_j fitted as lambda_j y^2 on a sampled cyclic subgroup."""

    lambdas: tuple[Fraction | float, Fraction | float]
    residual: float
    third_difference: float
    evenness: float
    accepted: bool
    exact: bool
    points: int
    reading: str = "g_1 = exp(-lambda_1 y^2), g_2 = exp(-lambda_2 y^2)"
