"""Evaluation, positive-definiteness and class membership of characteristic functions."""

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np
from sympy import Matrix, Rational

from heydecheck.models.charfn import (
    CharFnExpr,
    ClassTag,
    Conjugate,
    CosetPiecewise,
    Gaussian,
    HermitianViolationError,
    Mixture,
    Product,
    PsdResult,
    Pullback,
    Shift,
    SubgroupIndicator,
    TorsionExtension,
)
from heydecheck.models.groups import (
    INFINITE,
    DualElement,
    Host,
    HostMismatchError,
    SubgroupSpec,
)
from heydecheck.models.values import ExactValue
from heydecheck.services import group_core

logger = logging.getLogger(__name__)

_EPSILON = 1e-12


def _indicator(member: bool) -> ExactValue:
    return ExactValue.one() if member else ExactValue.zero()


def constant_table(size: int, value: Fraction | int | str) -> tuple[Fraction, ...]:
    """Table (1, c, ..., c) of the given size."""
    if size < 1:
        raise ValueError(f"Table size must be positive: {size}")
    return (Fraction(1),) + (Fraction(value),) * (size - 1)


class CharFnService:
    """Evaluates expression trees and checks them against the characteristic-function axioms."""

    def eval(self, f: CharFnExpr, y: DualElement) -> ExactValue:
        """Value of f at y, exact wherever the tree allows it."""
        if isinstance(f, Gaussian):
            if y.host.mod_one:
                raise ValueError(
                    f"Gaussian factors need a rational host, got {y.host.label}"
                )
            if y.is_zero or f.lam == 0:
                return ExactValue.one()
            return ExactValue.exponential(f.lam * y.value * y.value)
        if isinstance(f, SubgroupIndicator):
            return _indicator(group_core.subgroup_member(f.subgroup, y))
        if isinstance(f, CosetPiecewise):
            if not group_core.subgroup_member(f.outer, y):
                return ExactValue.zero()
            for representative, value in f.pieces:
                if group_core.subgroup_member(f.inner, y - representative):
                    return ExactValue.rational(value)
            return ExactValue.rational(f.default)
        if isinstance(f, TorsionExtension):
            if y.host != f.host:
                raise HostMismatchError(
                    f"Host mismatch: {y.host.label} vs {f.host.label}"
                )
            if (y.value * f.order).denominator != 1:
                return ExactValue.zero()
            value = f.lookup().get(y.value)
            if value is None:
                raise ValueError(f"Torsion table has no entry for {y}")
            return ExactValue.rational(value)
        if isinstance(f, Pullback):
            if not group_core.subgroup_member(f.subgroup, y):
                return ExactValue.zero()
            label = group_core.quotient_project(f.subgroup, f.kernel, y)
            return ExactValue.rational(f.table[int(label.value * len(f.table))])
        if isinstance(f, Product):
            result = ExactValue.one()
            for child in f.children:
                result = result * self.eval(child, y)
                if not result.terms:
                    break
            return result
        if isinstance(f, Mixture):
            total = ExactValue.zero()
            for weight, child in zip(f.weights, f.children, strict=True):
                total = total + self.eval(child, y).scale(weight)
            return total
        if isinstance(f, Conjugate):
            return self.eval(f.child, y).conjugate()
        if isinstance(f, Shift):
            return group_core.character_eval(f.point, y) * self.eval(f.child, y)
        raise ValueError(f"Unsupported expression node: {type(f).__name__}")

    def psd_check(
        self, f: CharFnExpr, points: Sequence[DualElement], tolerance: float = 1e-9
    ) -> PsdResult:
        """Positive semidefiniteness of the Gram matrix G_jk = f(y_j - y_k)."""
        size = len(points)
        if len({p.value for p in points}) != size:
            raise ValueError("psd_check needs distinct points")
        if size == 0:
            return PsdResult(True, 0.0, True, 0)
        gram = [[self.eval(f, yj - yk) for yk in points] for yj in points]
        for j in range(size):
            for k in range(j, size):
                if not gram[j][k].equals(gram[k][j].conjugate(), tolerance):
                    raise HermitianViolationError(
                        f"G[{j}][{k}] = {gram[j][k]} is not the conjugate of "
                        f"G[{k}][{j}] = {gram[k][j]}"
                    )
        numeric = np.array([[v.to_complex() for v in row] for row in gram])
        min_eigenvalue = float(np.linalg.eigvalsh(numeric).min())
        rationals = [[v.as_fraction() for v in row] for row in gram]
        if all(r is not None for row in rationals for r in row):
            matrix = Matrix(
                size,
                size,
                lambda j, k: Rational(
                    rationals[j][k].numerator, rationals[j][k].denominator
                ),
            )
            positive = bool(matrix.is_positive_semidefinite)
            return PsdResult(positive, min_eigenvalue, True, size)
        return PsdResult(min_eigenvalue >= -tolerance, min_eigenvalue, False, size)

    def full_support_check(
        self, f: CharFnExpr, points: Sequence[DualElement], tolerance: float = _EPSILON
    ) -> bool:
        """|f(y)| < 1 at every nonzero point."""
        if not any(p.is_zero for p in points):
            raise ValueError("full_support_check needs 0 among the points")
        return all(
            not self.eval(f, y).modulus_is_one(tolerance)
            for y in points
            if not y.is_zero
        )

    def symmetrize(self, f: CharFnExpr) -> CharFnExpr:
        """f times its conjugate: the characteristic function of mu * mu-bar."""
        return Product((f, Conjugate(f)))

    def classify(self, f: CharFnExpr) -> ClassTag:
        """Structural membership in Gamma(X), I(X) or Gamma(X)*I(X)."""
        factors = _flatten(f)
        gaussians = [x for x in factors if isinstance(x, Gaussian)]
        indicators = [x for x in factors if isinstance(x, SubgroupIndicator)]
        others = [
            x for x in factors if not isinstance(x, Gaussian | SubgroupIndicator)
        ]
        if not all(_finite_valued(node) for node in others):
            return ClassTag.UNKNOWN
        # Gaussian factors never vanish, so the vanishing set is that of the rest.
        finite = [x for x in factors if not isinstance(x, Gaussian)]
        if finite:
            witness = self._intermediate_witness(Product(tuple(finite)))
            if witness is not None:
                logger.debug("Finite part takes a value strictly inside (0, 1) at %s", witness)
                return ClassTag.OUTSIDE
        masked = [node for node in others if not _trivial_table(node)]
        if any(self._intermediate_witness(node) is None for node in masked):
            return ClassTag.UNKNOWN
        if masked:
            logger.debug("Intermediate values of %d factor(s) vanish in the product", len(masked))
        gaussian = any(g.lam != 0 for g in gaussians)
        idempotent = bool(indicators) or bool(others)
        if gaussian and idempotent:
            return ClassTag.GAUSSIAN_TIMES_IDEMPOTENT
        if idempotent:
            return ClassTag.IDEMPOTENT_CLASS
        return ClassTag.GAUSSIAN_CLASS

    def _intermediate_witness(self, node: CharFnExpr) -> DualElement | None:
        for y in _candidate_points(node):
            try:
                modulus = abs(self.eval(node, y))
            except HostMismatchError:
                continue
            if _EPSILON < modulus < 1 - _EPSILON:
                return y
        return None

    def torsion_extension(
        self,
        host: Host,
        order: int,
        values: Sequence[Fraction | int | str] | None = None,
        *,
        c: Fraction | int | str = Fraction(1, 3),
        check_psd: bool = True,
    ) -> TorsionExtension:
        """g_0 on Y_(order) given in the order 0, 1/N, 2/N, ..., extended by 0."""
        elements = group_core.torsion_elements(host, order)
        table = tuple(
            Fraction(v)
            for v in (values if values is not None else constant_table(len(elements), c))
        )
        _validate_table(table, len(elements))
        extension = TorsionExtension(
            host, order, tuple(zip((e.value for e in elements), table, strict=True))
        )
        if check_psd:
            self._require_psd(extension, elements)
        return extension

    def pullback(
        self,
        subgroup: SubgroupSpec,
        kernel: SubgroupSpec,
        table: Sequence[Fraction | int | str] | None = None,
        *,
        c: Fraction | int | str = Fraction(1, 3),
        check_psd: bool = True,
    ) -> Pullback:
        """Table on the cyclic quotient subgroup/kernel, pulled back and extended by 0."""
        index = group_core.quotient_index(subgroup, kernel)
        values = tuple(
            Fraction(v) for v in (table if table is not None else constant_table(index, c))
        )
        _validate_table(values, index)
        if check_psd:
            quotient = Host.cyclic(index)
            self._require_psd(
                TorsionExtension(
                    quotient,
                    index,
                    tuple((Fraction(k, index), v) for k, v in enumerate(values)),
                ),
                group_core.torsion_elements(quotient, index),
            )
        return Pullback(values, subgroup, kernel)

    def _require_psd(self, f: CharFnExpr, points: list[DualElement]) -> None:
        result = self.psd_check(f, points)
        if not result.positive:
            raise ValueError(
                f"table is not positive definite (min eigenvalue {result.min_eigenvalue:.6g})"
            )


def _validate_table(table: tuple[Fraction, ...], size: int) -> None:
    if len(table) != size:
        raise ValueError(f"Table needs {size} entries, got {len(table)}")
    if table[0] != 1:
        raise ValueError(f"Table value at 0 must be 1, got {table[0]}")
    for k, value in enumerate(table):
        if value != table[-k % size]:
            raise ValueError(f"Table must satisfy g(-y) = g(y); fails at index {k}")


def _flatten(f: CharFnExpr) -> list[CharFnExpr]:
    """Product factors with shifts and conjugations stripped."""
    if isinstance(f, Shift | Conjugate):
        return _flatten(f.child)
    if isinstance(f, Product):
        return [leaf for child in f.children for leaf in _flatten(child)]
    return [f]


def _finite_valued(f: CharFnExpr) -> bool:
    if isinstance(f, Gaussian):
        return f.lam == 0
    if isinstance(f, Shift | Conjugate):
        return _finite_valued(f.child)
    if isinstance(f, Product | Mixture):
        return all(_finite_valued(child) for child in f.children)
    return isinstance(
        f, SubgroupIndicator | CosetPiecewise | TorsionExtension | Pullback
    )


def _trivial_table(f: CharFnExpr) -> bool:
    """Nodes that are subgroup indicators in disguise."""
    if isinstance(f, Pullback):
        return all(v == 1 for v in f.table)
    if isinstance(f, TorsionExtension):
        return all(v == 1 for _, v in f.table)
    if isinstance(f, CosetPiecewise):
        return f.default == 1 and all(v == 1 for _, v in f.pieces)
    if isinstance(f, Mixture):
        return len(set(f.children)) == 1 and _trivial_table(f.children[0])
    return isinstance(f, SubgroupIndicator)


def _collect(
    f: CharFnExpr, specs: list[SubgroupSpec], torsion: list[tuple[Host, int]]
) -> None:
    if isinstance(f, SubgroupIndicator):
        specs.append(f.subgroup)
    elif isinstance(f, CosetPiecewise):
        specs.extend((f.outer, f.inner))
    elif isinstance(f, Pullback):
        specs.extend((f.subgroup, f.kernel))
    elif isinstance(f, TorsionExtension):
        torsion.append((f.host, f.order))
    elif isinstance(f, Shift | Conjugate):
        _collect(f.child, specs, torsion)
    elif isinstance(f, Product | Mixture):
        for child in f.children:
            _collect(child, specs, torsion)


def _candidate_points(f: CharFnExpr) -> list[DualElement]:
    """Small points where a finite-valued tree shows its distinct values."""
    specs: list[SubgroupSpec] = []
    torsion: list[tuple[Host, int]] = []
    _collect(f, specs, torsion)
    hosts = {s.host for s in specs} | {h for h, _ in torsion}
    points: list[DualElement] = []
    for host in sorted(hosts, key=lambda h: h.label):
        if host.mod_one:
            orders = [n for h, n in torsion if h == host]
            orders += [s.torsion_order for s in specs if s.host == host and s.torsion_order]
            orders += [p**2 for p in host.profile.primes]
            points.extend(group_core.torsion_elements(host, math.lcm(*orders)))
            continue
        denominator = 1
        for spec in (s for s in specs if s.host == host):
            for prime, bound in spec.bound.multiplicities:
                exp = 2 if bound == INFINITE else min(int(bound), 2)
                denominator = math.lcm(denominator, prime**exp)
        points.extend(
            host.element(Fraction(m, denominator))
            for m in range(-denominator, denominator + 1)
        )
    return points
