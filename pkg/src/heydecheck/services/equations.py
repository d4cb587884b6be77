"""Standard functional-equation templates.

Terms are written as (function index, u coefficient, v coefficient); index 0 is
mu_1 and index 1 is mu_2.
"""

from heydecheck.models.equation import EquationSpec, EquationTerm


def _terms(*triples: tuple[int, int, int]) -> tuple[EquationTerm, ...]:
    return tuple(EquationTerm(j, a, b) for j, a, b in triples)


def conditional_symmetry_equation(
    alpha1: int, alpha2: int, beta1: int, beta2: int, name: str = "l0"
) -> EquationSpec:
    """mu1(a1 u + b1 v) mu2(a2 u + b2 v) = mu1(a1 u - b1 v) mu2(a2 u - b2 v).

    Symmetry of L2 = b1 x1 + b2 x2 given L1 = a1 x1 + a2 x2.
    """
    return EquationSpec(
        name,
        _terms((0, alpha1, beta1), (1, alpha2, beta2)),
        _terms((0, alpha1, -beta1), (1, alpha2, -beta2)),
    )


def independence_equation(
    alpha1: int, alpha2: int, beta1: int, beta2: int, name: str = "l5-1"
) -> EquationSpec:
    """mu1(a1 u + b1 v) mu2(a2 u + b2 v) = mu1(a1 u) mu1(b1 v) mu2(a2 u) mu2(b2 v).

    Independence of L1 = a1 x1 + a2 x2 and L2 = b1 x1 + b2 x2.
    """
    return EquationSpec(
        name,
        _terms((0, alpha1, beta1), (1, alpha2, beta2)),
        _terms((0, alpha1, 0), (0, 0, beta1), (1, alpha2, 0), (1, 0, beta2)),
    )


def symmetry_equation(p: int, q: int, name: str | None = None) -> EquationSpec:
    """mu1(u + p v) mu2(u + q v) = mu1(u - p v) mu2(u - q v)."""
    return conditional_symmetry_equation(1, 1, p, q, name or f"symmetry({p},{q})")


def lemma_single_equation(q: int) -> EquationSpec:
    """mu(u + v) mu(u + q v) = mu(u - v) mu(u - q v) for one distribution, as a pair."""
    return symmetry_equation(1, q, f"l1(q={q})")


def remark_equation() -> EquationSpec:
    return symmetry_equation(1, -3, "r1.2")


def factored_equation(q1: int, q2: int) -> EquationSpec:
    """mu1(q1 u + v) mu2(u + q2 v) = mu1(q1 u - v) mu2(u - q2 v)."""
    return conditional_symmetry_equation(q1, 1, 1, q2, f"eq2(q1={q1},q2={q2})")


def lemma6_premise(delta1: int, delta2: int) -> EquationSpec:
    return symmetry_equation(delta1, delta2, f"l4.1({delta1},{delta2})")


def lemma6_left_identity(delta1: int, delta2: int) -> EquationSpec:
    """mu1((d2 - d1) y) = mu1((d1 + d2) y) mu2(2 d2 y)."""
    return EquationSpec(
        f"l4.2({delta1},{delta2})",
        _terms((0, delta2 - delta1, 0)),
        _terms((0, delta1 + delta2, 0), (1, 2 * delta2, 0)),
        single_variable=True,
    )


def lemma6_right_identity(delta1: int, delta2: int) -> EquationSpec:
    """mu2((d2 - d1) y) = mu1(-2 d1 y) mu2(-(d1 + d2) y)."""
    return EquationSpec(
        f"l4.3({delta1},{delta2})",
        _terms((1, delta2 - delta1, 0)),
        _terms((0, -2 * delta1, 0), (1, -(delta1 + delta2), 0)),
        single_variable=True,
    )


def heyde_to_independence(
    delta1: int, delta2: int
) -> tuple[tuple[int, int], tuple[int, int], EquationSpec]:
    """Coefficients of L'1 = (d1 + d2) x1 + 2 d2 x2, L'2 = 2 d1 x1 + (d1 + d2) x2 and their equation."""
    first = (delta1 + delta2, 2 * delta2)
    second = (2 * delta1, delta1 + delta2)
    equation = independence_equation(
        first[0], first[1], second[0], second[1], f"l4.6({delta1},{delta2})"
    )
    return first, second, equation


def theorem2_independence(p: int, q: int) -> EquationSpec:
    """mu1(u + 4pq v) mu2(u + (p+q)^2 v) = mu1(u) mu1(4pq v) mu2(u) mu2((p+q)^2 v)."""
    return independence_equation(1, 1, 4 * p * q, (p + q) ** 2, f"t2.1({p},{q})")


def theorem2_first_identity(p: int, q: int) -> EquationSpec:
    """nu1((p-q)^2 y) = nu1((p+q)^2 y) nu1(4pq y) nu2((p+q)^2 y)^2."""
    plus, cross = (p + q) ** 2, 4 * p * q
    return EquationSpec(
        f"t2.2({p},{q})",
        _terms((0, (p - q) ** 2, 0)),
        _terms((0, plus, 0), (0, cross, 0), (1, plus, 0), (1, plus, 0)),
        single_variable=True,
    )


def theorem2_second_identity(p: int, q: int) -> EquationSpec:
    """nu2((p-q)^2 y) = nu1(4pq y)^2 nu2(4pq y) nu2((p+q)^2 y)."""
    plus, cross = (p + q) ** 2, 4 * p * q
    return EquationSpec(
        f"t2.3({p},{q})",
        _terms((1, (p - q) ** 2, 0)),
        _terms((0, cross, 0), (0, cross, 0), (1, cross, 0), (1, plus, 0)),
        single_variable=True,
    )


def nonvanishing_equation(a: int, b: int) -> EquationSpec:
    """g1(u + a v) g2(u + b v) = g1(u) g1(a v) g2(u) g2(b v)."""
    return independence_equation(1, 1, a, b, f"l5.1({a},{b})")


NAMED_EQUATIONS = (
    "symmetry",
    "independence",
    "r1.2",
    "l1",
    "eq2",
    "l4.1",
    "l4.2",
    "l4.3",
    "l4.6",
    "t2.1",
    "t2.2",
    "t2.3",
)


def named_equation(
    name: str,
    p: int = 1,
    q: int = 1,
    *,
    delta1: int | None = None,
    delta2: int | None = None,
    q1: int | None = None,
    q2: int | None = None,
) -> EquationSpec:
    """Resolve a CLI equation name into a template."""
    d1 = p if delta1 is None else delta1
    d2 = q if delta2 is None else delta2
    if name == "symmetry":
        return symmetry_equation(p, q)
    if name in ("independence", "t2.1"):
        return theorem2_independence(p, q)
    if name == "r1.2":
        return remark_equation()
    if name == "l1":
        return lemma_single_equation(q)
    if name == "eq2":
        if q1 is None or q2 is None:
            raise ValueError("eq2 needs q1 and q2")
        return factored_equation(q1, q2)
    if name == "l4.1":
        return lemma6_premise(d1, d2)
    if name == "l4.2":
        return lemma6_left_identity(d1, d2)
    if name == "l4.3":
        return lemma6_right_identity(d1, d2)
    if name == "l4.6":
        return heyde_to_independence(d1, d2)[2]
    if name == "t2.2":
        return theorem2_first_identity(p, q)
    if name == "t2.3":
        return theorem2_second_identity(p, q)
    raise ValueError(f"Unsupported equation: {name}")
