"""JSON codec for profiles, expressions, grids and reports.

Rationals travel as strings ("3/8"), INFINITE multiplicities as "inf".
"""

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any

from heydecheck.models.charfn import (
    CharFnExpr,
    Conjugate,
    CosetPiecewise,
    Gaussian,
    Mixture,
    Product,
    PsdResult,
    Pullback,
    Shift,
    SubgroupIndicator,
    TorsionExtension,
)
from heydecheck.models.construction import ConstructionResult
from heydecheck.models.equation import (
    EquationSpec,
    EquationTerm,
    GridKind,
    GridSpec,
    ImplicationReport,
    LambdaSolution,
    NonvanishingCertificate,
    QuadraticFit,
    VerificationReport,
    VerificationStatus,
    Witness,
)
from heydecheck.models.finite import (
    PMF,
    CrossValidation,
    EmpiricalTable,
    SymmetryResult,
)
from heydecheck.models.groups import (
    INFINITE,
    AadicInteger,
    Host,
    HostKind,
    Multiplicity,
    PrimeProfile,
    SolenoidPoint,
    SubgroupSpec,
)
from heydecheck.models.suite import SuiteEntry, SuiteReport
from heydecheck.models.values import ExactValue

_HOST_KINDS = {
    HostKind.RATIONAL: "rational",
    HostKind.PRUFER: "prufer",
    HostKind.PRUFER_PRODUCT: "pruferProduct",
    HostKind.CYCLIC: "cyclic",
}
_HOST_KINDS_BY_NAME = {v: k for k, v in _HOST_KINDS.items()}


def _require(data: Any, key: str, kind: type | tuple[type, ...] = object) -> Any:
    if not isinstance(data, dict):
        raise ValueError(f"Expected an object with key '{key}', got {type(data).__name__}")
    if key not in data:
        raise ValueError(f"Missing key '{key}'")
    value = data[key]
    if not isinstance(value, kind):
        raise ValueError(f"Key '{key}' has the wrong type: {type(value).__name__}")
    return value


def encode_fraction(value: Fraction | float | int) -> str | float:
    if isinstance(value, float):
        return value
    return str(Fraction(value))


def decode_fraction(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, str | int):
        raise ValueError(f"Expected a rational as string or integer, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational: {value!r}") from e


def _encode_multiplicity(m: Multiplicity) -> int | str:
    return "inf" if m == INFINITE else int(m)


def _decode_multiplicity(value: Any) -> Multiplicity:
    if value in ("inf", "infinite"):
        return INFINITE
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"Invalid multiplicity: {value!r}")
    return value


class IReportCodec(ABC):
    """Interface for report encoders."""

    @abstractmethod
    def encode(self, value: Any) -> Any:
        """Convert a domain object into JSON-compatible data."""
        ...

    @abstractmethod
    def decode_profile(self, data: Any) -> PrimeProfile:
        ...

    @abstractmethod
    def decode_charfn(self, data: Any) -> CharFnExpr:
        ...

    @abstractmethod
    def decode_grid(self, data: Any) -> GridSpec:
        ...

    @abstractmethod
    def decode_verification(self, data: Any) -> VerificationReport:
        ...


class JsonReportCodec(IReportCodec):
    """Camel-case JSON encoding of every domain record the CLI emits."""

    def encode(self, value: Any) -> Any:
        if value is None or isinstance(value, bool | int | str):
            return value
        if isinstance(value, Fraction | float):
            return encode_fraction(value)
        if isinstance(value, dict):
            return {str(k): self.encode(v) for k, v in value.items()}
        if isinstance(value, list | tuple):
            return [self.encode(v) for v in value]
        if isinstance(value, PrimeProfile):
            return self.encode_profile(value)
        if isinstance(value, Host):
            return self.encode_host(value)
        if isinstance(value, SubgroupSpec):
            return self.encode_subgroup(value)
        if isinstance(value, AadicInteger):
            return {"base": list(value.base), "digits": list(value.digits)}
        if isinstance(value, CharFnExpr):
            return self.encode_charfn(value)
        if isinstance(value, ExactValue):
            return self.encode_value(value)
        if isinstance(value, EquationSpec):
            return self.encode_equation(value)
        if isinstance(value, GridSpec):
            return self.encode_grid(value)
        if isinstance(value, VerificationReport):
            return self.encode_verification(value)
        if isinstance(value, ImplicationReport):
            return {
                "premise": self.encode_verification(value.premise),
                "conclusions": [self.encode_verification(c) for c in value.conclusions],
                "vacuous": value.vacuous,
                "holds": value.holds,
            }
        if isinstance(value, LambdaSolution):
            return {
                "a": value.a,
                "b": value.b,
                "ratio": None if value.ratio is None else str(value.ratio),
                "trivialOnly": value.trivial_only,
            }
        if isinstance(value, NonvanishingCertificate):
            return {
                "generator": str(value.generator),
                "window": value.window,
                "holds": value.holds,
                "failingK": value.failing_k,
                "intermediate": dict(value.intermediate),
            }
        if isinstance(value, QuadraticFit):
            return {
                "lambdas": [encode_fraction(lam) for lam in value.lambdas],
                "residual": value.residual,
                "thirdDifference": value.third_difference,
                "evenness": value.evenness,
                "accepted": value.accepted,
                "exact": value.exact,
                "points": value.points,
                "reading": value.reading,
            }
        if isinstance(value, PsdResult):
            return {
                "positive": value.positive,
                "minEigenvalue": value.min_eigenvalue,
                "exact": value.exact,
                "size": value.size,
            }
        if isinstance(value, PMF):
            return [str(p) for p in value.probabilities]
        if isinstance(value, SymmetryResult):
            return {
                "symmetric": value.symmetric,
                "deviation": str(value.deviation),
                "witness": None if value.witness is None else list(value.witness),
            }
        if isinstance(value, CrossValidation):
            return {
                "p": value.p,
                "q": value.q,
                "model": value.model,
                "equation": self.encode_verification(value.equation),
                "symmetry": self.encode(value.symmetry),
                "agree": value.agree,
            }
        if isinstance(value, EmpiricalTable):
            return {
                "samples": value.samples,
                "seed": value.seed,
                "conditional": {
                    str(h): {str(g): p for g, p in row.items()}
                    for h, row in sorted(value.conditional.items())
                },
                "maxAsymmetry": value.max_asymmetry,
            }
        if isinstance(value, ConstructionResult):
            return self.encode_construction(value)
        if isinstance(value, SuiteEntry):
            return {
                "name": value.name,
                "group": value.group,
                "expectSuccess": value.expect_success,
                "succeeded": value.succeeded,
                "green": value.green,
                "detail": value.detail,
                "error": value.error,
                "data": self.encode(value.data),
            }
        if isinstance(value, SuiteReport):
            return {
                "level": value.level.label,
                "green": value.green,
                "counts": value.counts(),
                "entries": [self.encode(e) for e in value.entries],
            }
        raise ValueError(f"Unsupported value for encoding: {type(value).__name__}")

    def encode_profile(self, profile: PrimeProfile) -> dict[str, int | str]:
        if profile.all_infinite:
            return {"*": "inf"}
        return {str(p): _encode_multiplicity(m) for p, m in profile.multiplicities}

    def decode_profile(self, data: Any) -> PrimeProfile:
        if not isinstance(data, dict):
            raise ValueError(f"A profile must be an object, got {type(data).__name__}")
        if "*" in data:
            if len(data) != 1 or _decode_multiplicity(data["*"]) != INFINITE:
                raise ValueError("The universal profile is written {\"*\": \"inf\"}")
            return PrimeProfile.universal()
        mapping: dict[int, Multiplicity] = {}
        for key, value in data.items():
            try:
                prime = int(key)
            except ValueError as e:
                raise ValueError(f"Profile key is not an integer: {key!r}") from e
            mapping[prime] = _decode_multiplicity(value)
        return PrimeProfile.of(mapping)

    def encode_host(self, host: Host) -> dict[str, Any]:
        data: dict[str, Any] = {
            "kind": _HOST_KINDS[host.kind],
            "profile": self.encode_profile(host.profile),
        }
        if host.order is not None:
            data["order"] = host.order
        return data

    def decode_host(self, data: Any) -> Host:
        kind = _require(data, "kind", str)
        if kind not in _HOST_KINDS_BY_NAME:
            raise ValueError(f"Unsupported host kind: {kind}")
        if kind == "cyclic":
            return Host.cyclic(_require(data, "order", int))
        profile = self.decode_profile(_require(data, "profile", dict))
        if kind == "rational":
            return Host.rational(profile)
        if not profile.primes or not all(profile.is_infinite(p) for p in profile.primes):
            raise ValueError(f"A Prüfer host needs infinite multiplicities: {profile}")
        return Host.prufer_product(profile.primes)

    def encode_subgroup(self, spec: SubgroupSpec) -> dict[str, Any]:
        data: dict[str, Any] = {
            "host": self.encode_host(spec.host),
            "bound": self.encode_profile(spec.bound),
        }
        if spec.numerator_divisor != 1:
            data["numeratorDivisor"] = spec.numerator_divisor
        if spec.torsion_order is not None:
            data["torsionOrder"] = spec.torsion_order
        return data

    def decode_subgroup(self, data: Any) -> SubgroupSpec:
        return SubgroupSpec(
            self.decode_host(_require(data, "host", dict)),
            self.decode_profile(_require(data, "bound", dict)),
            data.get("numeratorDivisor", 1),
            data.get("torsionOrder"),
        )

    def encode_charfn(self, f: CharFnExpr) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": f.kind}
        if isinstance(f, Gaussian):
            data["lam"] = encode_fraction(f.lam)
        elif isinstance(f, SubgroupIndicator):
            data["subgroup"] = self.encode_subgroup(f.subgroup)
        elif isinstance(f, CosetPiecewise):
            data["outer"] = self.encode_subgroup(f.outer)
            data["inner"] = self.encode_subgroup(f.inner)
            data["pieces"] = [[str(y.value), str(v)] for y, v in f.pieces]
            data["default"] = str(f.default)
        elif isinstance(f, TorsionExtension):
            data["host"] = self.encode_host(f.host)
            data["order"] = f.order
            data["table"] = [[str(y), str(g)] for y, g in f.table]
        elif isinstance(f, Pullback):
            data["table"] = [str(v) for v in f.table]
            data["subgroup"] = self.encode_subgroup(f.subgroup)
            data["kernel"] = self.encode_subgroup(f.kernel)
        elif isinstance(f, Mixture):
            data["weights"] = [str(w) for w in f.weights]
            data["children"] = [self.encode_charfn(c) for c in f.children]
        elif isinstance(f, Product):
            data["children"] = [self.encode_charfn(c) for c in f.children]
        elif isinstance(f, Conjugate):
            data["child"] = self.encode_charfn(f.child)
        elif isinstance(f, Shift):
            data["point"] = {
                "t": str(f.point.t),
                "fiber": None if f.point.d is None else self.encode(f.point.d),
            }
            data["child"] = self.encode_charfn(f.child)
        else:
            raise ValueError(f"Unsupported expression node: {type(f).__name__}")
        return data

    def decode_charfn(self, data: Any) -> CharFnExpr:
        kind = _require(data, "kind", str)
        if kind == Gaussian.kind:
            lam = data.get("lam")
            return Gaussian(lam if isinstance(lam, float) else decode_fraction(lam))
        if kind == SubgroupIndicator.kind:
            return SubgroupIndicator(self.decode_subgroup(_require(data, "subgroup", dict)))
        if kind == CosetPiecewise.kind:
            outer = self.decode_subgroup(_require(data, "outer", dict))
            pieces = tuple(
                (outer.host.element(decode_fraction(y)), decode_fraction(v))
                for y, v in _require(data, "pieces", list)
            )
            return CosetPiecewise(
                outer,
                self.decode_subgroup(_require(data, "inner", dict)),
                pieces,
                decode_fraction(data.get("default", "0")),
            )
        if kind == TorsionExtension.kind:
            return TorsionExtension(
                self.decode_host(_require(data, "host", dict)),
                _require(data, "order", int),
                tuple(
                    (decode_fraction(y), decode_fraction(g))
                    for y, g in _require(data, "table", list)
                ),
            )
        if kind == Pullback.kind:
            return Pullback(
                tuple(decode_fraction(v) for v in _require(data, "table", list)),
                self.decode_subgroup(_require(data, "subgroup", dict)),
                self.decode_subgroup(_require(data, "kernel", dict)),
            )
        if kind == Product.kind:
            return Product(
                tuple(self.decode_charfn(c) for c in _require(data, "children", list))
            )
        if kind == Mixture.kind:
            return Mixture(
                tuple(decode_fraction(w) for w in _require(data, "weights", list)),
                tuple(self.decode_charfn(c) for c in _require(data, "children", list)),
            )
        if kind == Conjugate.kind:
            return Conjugate(self.decode_charfn(_require(data, "child", dict)))
        if kind == Shift.kind:
            point = _require(data, "point", dict)
            fiber = point.get("fiber")
            return Shift(
                SolenoidPoint(
                    decode_fraction(_require(point, "t")),
                    None
                    if fiber is None
                    else AadicInteger(
                        tuple(_require(fiber, "base", list)),
                        tuple(_require(fiber, "digits", list)),
                    ),
                ),
                self.decode_charfn(_require(data, "child", dict)),
            )
        raise ValueError(f"Unsupported expression kind: {kind}")

    def encode_value(self, value: ExactValue) -> dict[str, Any]:
        number = value.to_complex()
        return {
            "text": str(value),
            "exact": value.is_exact,
            "terms": [
                [str(a), encode_fraction(e), str(c)] for a, e, c in value.terms
            ],
            "approx": [number.real, number.imag],
        }

    def decode_value(self, data: Any) -> ExactValue:
        terms = _require(data, "terms", list)
        mapping: dict[tuple[Fraction, Fraction | float], Fraction] = {}
        for term in terms:
            if not isinstance(term, list) or len(term) != 3:
                raise ValueError(f"Invalid value term: {term!r}")
            angle, exponent, coefficient = term
            key = (
                decode_fraction(angle),
                exponent if isinstance(exponent, float) else decode_fraction(exponent),
            )
            mapping[key] = mapping.get(key, Fraction(0)) + decode_fraction(coefficient)
        return ExactValue.from_mapping(mapping)

    def encode_equation(self, eq: EquationSpec) -> dict[str, Any]:
        return {
            "name": eq.name,
            "left": [[t.function_index, t.u_coeff, t.v_coeff] for t in eq.left],
            "right": [[t.function_index, t.u_coeff, t.v_coeff] for t in eq.right],
            "singleVariable": eq.single_variable,
        }

    def decode_equation(self, data: Any) -> EquationSpec:
        def terms(key: str) -> tuple[EquationTerm, ...]:
            return tuple(EquationTerm(*map(int, t)) for t in _require(data, key, list))

        return EquationSpec(
            _require(data, "name", str),
            terms("left"),
            terms("right"),
            bool(data.get("singleVariable", False)),
        )

    def encode_grid(self, grid: GridSpec) -> dict[str, Any]:
        data: dict[str, Any] = {
            "host": self.encode_host(grid.host),
            "kind": grid.kind.name.lower(),
            "label": grid.label,
        }
        if grid.kind == GridKind.TORSION:
            data["order"] = grid.order
        elif grid.kind == GridKind.BOX:
            data["numeratorBound"] = grid.numerator_bound
            data["denominator"] = grid.denominator
        else:
            data["points"] = [str(p) for p in grid.points]
        return data

    def decode_grid(self, data: Any) -> GridSpec:
        host = self.decode_host(_require(data, "host", dict))
        kind = _require(data, "kind", str)
        if kind == "torsion":
            return GridSpec.torsion(host, _require(data, "order", int))
        if kind == "box":
            return GridSpec.box(
                host,
                _require(data, "numeratorBound", int),
                data.get("denominator", 1),
            )
        if kind == "explicit":
            return GridSpec.explicit(
                host, tuple(decode_fraction(p) for p in _require(data, "points", list))
            )
        raise ValueError(f"Unsupported grid kind: {kind}")

    def encode_verification(self, report: VerificationReport) -> dict[str, Any]:
        witness = None
        if report.witness is not None:
            witness = {
                "u": str(report.witness.u),
                "v": str(report.witness.v),
                "lhs": self.encode_value(report.witness.lhs),
                "rhs": self.encode_value(report.witness.rhs),
            }
        return {
            "equation": report.equation,
            "status": report.status.label,
            "pairsChecked": report.pairs_checked,
            "exactPairs": report.exact_pairs,
            "toleranceUsed": report.tolerance_used,
            "witness": witness,
            "note": report.note,
        }

    def decode_verification(self, data: Any) -> VerificationReport:
        status_name = _require(data, "status", str)
        try:
            status = VerificationStatus[status_name]
        except KeyError:
            raise ValueError(f"Unsupported status: {status_name}") from None
        witness_data = data.get("witness")
        witness = None
        if witness_data is not None:
            witness = Witness(
                decode_fraction(_require(witness_data, "u")),
                decode_fraction(_require(witness_data, "v")),
                self.decode_value(_require(witness_data, "lhs", dict)),
                self.decode_value(_require(witness_data, "rhs", dict)),
            )
        tolerance = data.get("toleranceUsed", 0.0)
        if not isinstance(tolerance, int | float) or math.isnan(tolerance):
            raise ValueError(f"Invalid tolerance: {tolerance!r}")
        return VerificationReport(
            _require(data, "equation", str),
            status,
            _require(data, "pairsChecked", int),
            data.get("exactPairs", 0),
            float(tolerance),
            witness,
            data.get("note", ""),
        )

    def encode_construction(self, result: ConstructionResult) -> dict[str, Any]:
        return {
            "name": result.name,
            "provenance": result.provenance,
            "mu1": self.encode_charfn(result.mu1),
            "mu2": self.encode_charfn(result.mu2),
            "equation": self.encode_equation(result.equation),
            "expectedClass1": result.expected_class1.name,
            "expectedClass2": result.expected_class2.name,
            "grid": self.encode_grid(result.grid),
            "parameters": self.encode(result.parameters),
            "notes": list(result.notes),
        }
