"""Data models for heydecheck."""

from heydecheck.models.charfn import CharFnExpr, ClassTag
from heydecheck.models.construction import CaseSpec, ConstructionResult
from heydecheck.models.equation import (
    EquationSpec,
    GridSpec,
    VerificationReport,
    VerificationStatus,
)
from heydecheck.models.finite import PMF, FiniteModel
from heydecheck.models.groups import (
    AadicInteger,
    DualElement,
    Host,
    PrimeProfile,
    SolenoidPoint,
    SubgroupSpec,
)
from heydecheck.models.settings import RunConfig

__all__ = [
    "AadicInteger",
    "CaseSpec",
    "CharFnExpr",
    "ClassTag",
    "ConstructionResult",
    "DualElement",
    "EquationSpec",
    "FiniteModel",
    "GridSpec",
    "Host",
    "PMF",
    "PrimeProfile",
    "RunConfig",
    "SolenoidPoint",
    "SubgroupSpec",
    "VerificationReport",
    "VerificationStatus",
]
