"""Distribution-pair constructions and their hypotheses."""

import math
from dataclasses import dataclass, field
from typing import Any

from heydecheck.models.charfn import CharFnExpr, ClassTag
from heydecheck.models.equation import EquationSpec, GridSpec
from heydecheck.models.groups import PrimeProfile


@dataclass(frozen=True)
class CaseSpec:
    """Coprime p, q with f_p, f_q, f_{p+q}, f_{p-q} all automorphisms."""

    p: int
    q: int
    profile: PrimeProfile

    def __post_init__(self) -> None:
        if self.p == 0 or self.q == 0:
            raise ValueError(f"p and q must be nonzero: ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime: ({self.p}, {self.q})")
        for n in (self.p, self.q, self.p + self.q, self.p - self.q):
            if n == 0 or not self.profile.inverts(n):
                raise ValueError(
                    f"f_{n} is not an automorphism for profile {self.profile}"
                )

    @property
    def s(self) -> int:
        return self.p - self.q


@dataclass(frozen=True)
class ConstructionResult:
    """A distribution pair, the equation it satisfies and its expected classes.

    ``grid`` is the default grid the pair is checked on.
    """

    name: str
    mu1: CharFnExpr
    mu2: CharFnExpr
    equation: EquationSpec
    expected_class1: ClassTag
    expected_class2: ClassTag
    provenance: str
    grid: GridSpec
    parameters: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def pair(self) -> tuple[CharFnExpr, CharFnExpr]:
        return (self.mu1, self.mu2)
