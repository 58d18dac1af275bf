"""Metrics and 2-forms on semidirect products, closedness, and (para-)Kähler criteria.

A bilinear form is stored by its Gram matrix ``B``: ``b(X, Y) = X^T B Y``.  The dual space
``h*`` is realized with the dual basis, so the flat map ``x -> omega(x, .)`` of a 2-form has
matrix ``B^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .connections import canonical_connection, induced_product, is_parallel, is_torsion_free
from .errors import (
    InternalEquivalenceViolation,
    NotAntisymmetric,
    NotPositiveDefinite,
    NotSymplectic,
    PreconditionFailed,
    StructureError,
)
from .lie import LieAlgebra, SplitAlgebra, coadjoint_representation, cotangent_algebra
from .linalg import Matrix, determinant, dot
from .structures import (
    SplitEndo,
    integrability_report,
    is_integrable,
    is_one_cocycle,
    make_E,
    make_F,
    make_J,
)

SYM, ANTISYM = "sym", "antisym"


class BilinearForm:
    def __init__(self, matrix: Matrix | Sequence[Sequence], symmetry: str | None = None):
        B = matrix if isinstance(matrix, Matrix) else Matrix(matrix)
        if not B.is_square:
            raise ValueError("Gram matrix must be square")
        if symmetry is None:
            if B == B.T:
                symmetry = SYM
            elif B == -B.T:
                symmetry = ANTISYM
            else:
                raise StructureError("form is neither symmetric nor antisymmetric")
        if symmetry == SYM and B != B.T:
            raise StructureError("form tagged symmetric is not", witness=B)
        if symmetry == ANTISYM and B != -B.T:
            raise NotAntisymmetric("form tagged antisymmetric is not", witness=B)
        if symmetry not in (SYM, ANTISYM):
            raise ValueError(f"unknown symmetry tag {symmetry!r}")
        self.B = B
        self.symmetry = symmetry

    @property
    def dim(self) -> int:
        return self.B.rows

    def __call__(self, X: Sequence, Y: Sequence) -> Fraction:
        return dot(tuple(X), self.B @ tuple(Y))

    def is_nondegenerate(self) -> bool:
        return determinant(self.B) != 0

    def is_positive_definite(self) -> bool:
        return self.symmetry == SYM and all(leading_minors(self.B)[k] > 0 for k in range(self.dim))

    def flat(self) -> Matrix:
        """Matrix of ``x -> b(x, .)`` into the dual basis."""
        return self.B.T

    def __neg__(self) -> "BilinearForm":
        return BilinearForm(-self.B, self.symmetry)

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearForm) and self.B == other.B and self.symmetry == other.symmetry

    def __hash__(self) -> int:
        return hash((self.B, self.symmetry))

    def __repr__(self) -> str:
        return f"BilinearForm({self.symmetry}, {self.B!r})"


def leading_minors(B: Matrix) -> list[Fraction]:
    return [determinant(B.submatrix(range(k), range(k))) for k in range(1, B.rows + 1)]


def standard_inner(n: int) -> BilinearForm:
    return BilinearForm(Matrix.identity(n), SYM)


def standard_symplectic(n: int) -> BilinearForm:
    """``omega(e_i, e_{m+i}) = 1`` on ``R^{2m}``."""
    m = n // 2
    Z, I = Matrix.zeros(m), Matrix.identity(m)
    return BilinearForm(Matrix.blocks([[Z, I], [-I, Z]]), ANTISYM)


# -- metric extensions -------------------------------------------------------------

FLAVORS = ("g", "g_bar", "g_tilde")


def extend_metric(split: SplitAlgebra, j: Matrix, inner: BilinearForm, flavor: str = "g") -> BilinearForm:
    """Extend an inner product on h to ``h (+) k`` through ``j``.

    ``g``: ``<x,y> + <j^-1 u, j^-1 v>``; ``g_bar``: same with a minus;
    ``g_tilde``: ``<x, j^-1 v> + <j^-1 u, y>``.
    """
    if inner.symmetry != SYM or not inner.is_positive_definite():
        raise NotPositiveDefinite("inner product on h must be symmetric positive definite",
                                  witness=leading_minors(inner.B))
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    G = inner.B
    jinv = j.inverse()
    Z = Matrix.zeros(split.h_dim)
    lower = jinv.T @ G @ jinv
    if flavor == "g":
        M, S, sign = Matrix.blocks([[G, Z], [Z, lower]]), make_J(split, j), 1
    elif flavor == "g_bar":
        M, S, sign = Matrix.blocks([[G, Z], [Z, -lower]]), make_E(split, j), -1
    else:
        M, S, sign = Matrix.blocks([[Z, G @ jinv], [jinv.T @ G, Z]]), make_F(split), -1
    if S.S.T @ M @ S.S != M * sign:
        raise InternalEquivalenceViolation(f"{flavor} is not compatible with {S.name}", (M, S))
    return BilinearForm(M, SYM)


def fundamental_form(metric: BilinearForm, S: SplitEndo | Matrix) -> BilinearForm:
    """``omega_S(X, Y) = metric(SX, Y)``."""
    M = S.S if isinstance(S, SplitEndo) else S
    W = M.T @ metric.B
    if W != -W.T:
        raise NotAntisymmetric("metric(S., .) is not antisymmetric; metric and S are incompatible", witness=W)
    return BilinearForm(W, ANTISYM)


@dataclass
class FundamentalForms:
    omega_J: BilinearForm
    omega_E: BilinearForm
    omega_F: BilinearForm
    metrics: dict


def fundamental_forms(split: SplitAlgebra, j: Matrix, inner: BilinearForm) -> FundamentalForms:
    """The forms of (g, J), (g_bar, E), (g_tilde, F); asserts ``omega_J = -omega_E = omega_F``."""
    metrics = {f: extend_metric(split, j, inner, f) for f in FLAVORS}
    wJ = fundamental_form(metrics["g"], make_J(split, j))
    wE = fundamental_form(metrics["g_bar"], make_E(split, j))
    wF = fundamental_form(metrics["g_tilde"], make_F(split))
    if not (wJ.B == -wE.B == wF.B):
        raise InternalEquivalenceViolation("omega_J, -omega_E and omega_F differ", (wJ, wE, wF))
    if not wJ.is_nondegenerate():
        raise InternalEquivalenceViolation("fundamental form is degenerate", wJ)
    return FundamentalForms(wJ, wE, wF, metrics)


# -- closedness ----------------------------------------------------------------------

def d2(g: LieAlgebra, omega: BilinearForm) -> dict[tuple[int, int, int], Fraction]:
    """``omega([x,y],z) + omega([y,z],x) + omega([z,x],y)`` on basis triples ``i < j < k``."""
    n = g.dim
    out = {}
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = g.basis(i), g.basis(j), g.basis(k)
        out[(i, j, k)] = (omega(g.bracket_basis(i, j), ek) + omega(g.bracket_basis(j, k), ei)
                          + omega(g.bracket_basis(k, i), ej))
    return out


def closedness_witnesses(g: LieAlgebra, omega: BilinearForm) -> list[tuple[tuple[int, int, int], Fraction]]:
    return [(t, v) for t, v in d2(g, omega).items() if v]


def is_closed(g: LieAlgebra, omega: BilinearForm) -> bool:
    return not closedness_witnesses(g, omega)


def symplectic_to_cocycle(h: LieAlgebra, omega: BilinearForm) -> Matrix:
    """The flat map ``h -> h*``; an ad*-cocycle exactly when omega is closed."""
    theta = omega.flat()
    closed = is_closed(h, omega)
    if is_one_cocycle(h, coadjoint_representation(h), theta) != closed:
        raise InternalEquivalenceViolation("flat map cocycle test disagrees with closedness", omega)
    return theta


def is_symplectic(h: LieAlgebra, omega: BilinearForm) -> bool:
    if omega.symmetry != ANTISYM:
        return False
    symplectic_to_cocycle(h, omega)  # cross-checks the two closedness routes
    return omega.is_nondegenerate() and is_closed(h, omega)


# -- Hermitian structures on the cotangent algebra ----------------------------------

def neutral_metric(n: int) -> Matrix:
    """``<(x,a),(y,b)> = a(y) + b(x)`` on ``h (+) h*``."""
    Z, I = Matrix.zeros(n), Matrix.identity(n)
    return Matrix.blocks([[Z, I], [I, Z]])


@dataclass
class HermitianReport:
    condition_i: bool
    condition_ii: bool
    integrable: bool
    neutral_isometry: bool

    @property
    def hermitian(self) -> bool:
        return self.condition_i and self.condition_ii and self.integrable and self.neutral_isometry


def hermitian_conditions(split: SplitAlgebra, J: Matrix) -> HermitianReport:
    """Block conditions for ``J = [[J1, J2], [J3, J4]]`` on ``h (+) h*``; the dual of a block is
    its transpose."""
    n = split.h_dim
    top, bot = range(n), range(n, 2 * n)
    J1, J2 = J.submatrix(top, top), J.submatrix(top, bot)
    J3, J4 = J.submatrix(bot, top), J.submatrix(bot, bot)
    I = Matrix.identity(n)
    cond_i = J4 == -J1.T and J2 == -J2.T and J3 == -J3.T
    cond_ii = (J1 @ J1 + J2 @ J3 == -I and J1 @ J2 == -(J1 @ J2).T and J3 @ J1 == -(J3 @ J1).T)
    N = neutral_metric(n)
    integrable = is_integrable(split.g, SplitEndo(J, -1, "J"))
    return HermitianReport(cond_i, cond_ii, integrable, J.T @ N @ J == N)


def hermitian_cotangent_from_symplectic(h: LieAlgebra, omega: BilinearForm):
    """``J(x, a) = (-omega^-1(a), omega(x))`` on ``T*h``; returns ``(split, J, report)``."""
    if not is_symplectic(h, omega):
        raise NotSymplectic("form is not symplectic on h", witness=closedness_witnesses(h, omega))
    split = cotangent_algebra(h)
    J = make_J(split, omega.flat())
    report = hermitian_conditions(split, J.S)
    if not report.integrable:
        raise InternalEquivalenceViolation("J from a symplectic form must be integrable", report)
    return split, J, report


def lift_complex_structure(h: LieAlgebra, I: Matrix):
    """``J = diag(I, -I*)`` on ``T*h``; returns ``(split, J, report)``."""
    split = cotangent_algebra(h)
    Z = Matrix.zeros(h.dim)
    J = SplitEndo(Matrix.blocks([[I, Z], [Z, -I.T]]), -1, "J")
    return split, J, hermitian_conditions(split, J.S)


# -- almost Kähler criteria ----------------------------------------------------------

def _equation_defect(split: SplitAlgebra, j: Matrix, inner: BilinearForm):
    """Triples where ``<pt(y)z, x> - <pt(x)z, y> != <[x,y], z>`` with ``pt(x) = j^-1 pi(x) j``."""
    n = split.h_dim
    tilde = induced_product(split, j)
    h = split.h
    bad = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs = inner(tilde[y].col(z), h.basis(x)) - inner(tilde[x].col(z), h.basis(y))
                rhs = inner(h.bracket_basis(x, y), h.basis(z))
                if lhs != rhs:
                    bad.append(((x, y, z), lhs, rhs))
    return bad


@dataclass
class ClosednessReport:
    omega_J_closed: bool
    omega_E_closed: bool
    omega_F_closed: bool
    algebraic: bool
    k_abelian: bool
    equation_witnesses: list = field(default_factory=list)
    forms: FundamentalForms | None = None

    @property
    def statements(self) -> tuple[bool, ...]:
        return (self.omega_J_closed, self.omega_E_closed, self.omega_F_closed, self.algebraic)

    @property
    def agree(self) -> bool:
        return len(set(self.statements)) == 1


def kahler_closedness_report(split: SplitAlgebra, j: Matrix, inner: BilinearForm) -> ClosednessReport:
    """Closedness of omega_J, omega_E, omega_F against the algebraic criterion; all four agree."""
    forms = fundamental_forms(split, j, inner)
    g = split.g
    n = split.h_dim
    metric = forms.metrics["g"]
    if any(metric.B[a, n + b] for a in range(n) for b in range(n)):
        raise InternalEquivalenceViolation("h and k are not g-orthogonal", metric)
    if any(forms.omega_J.B[n + a, n + b] for a in range(n) for b in range(n)):
        raise InternalEquivalenceViolation("k is not isotropic for omega_J", forms.omega_J)
    defect = _equation_defect(split, j, inner)
    k_ab = split.k.is_abelian
    report = ClosednessReport(is_closed(g, forms.omega_J), is_closed(g, forms.omega_E), is_closed(g, forms.omega_F),
                              k_ab and not defect, k_ab, defect, forms)
    if not report.agree:
        raise InternalEquivalenceViolation("closedness of the fundamental forms and the criterion disagree", report)
    return report


@dataclass
class KahlerReport:
    almost_kahler: bool
    integrable: bool | None = None
    torsion_free: bool | None = None
    metric_parallel: bool | None = None
    J_parallel: bool | None = None

    @property
    def kahler(self) -> bool:
        return bool(self.almost_kahler and self.integrable and self.torsion_free
                    and self.metric_parallel and self.J_parallel)


def kahler_check(split: SplitAlgebra, j: Matrix, inner: BilinearForm) -> KahlerReport:
    """For ``j^-1 pi(x) j`` skew with respect to ``inner``: almost Kähler implies Kähler, with the
    canonical connection as the witness."""
    G = inner.B
    for i, P in enumerate(induced_product(split, j)):
        if P.T @ G + G @ P != Matrix.zeros(split.h_dim):
            raise PreconditionFailed(f"j^-1 pi(e_{i + 1}) j is not skew-symmetric", witness=(i, P))
    closed = kahler_closedness_report(split, j, inner)
    report = KahlerReport(closed.omega_J_closed)
    if not report.almost_kahler:
        return report
    report.integrable = integrability_report(split, j).integrable
    nabla = canonical_connection(split, j)
    g = split.g
    metric = extend_metric(split, j, inner, "g").B
    report.torsion_free = is_torsion_free(g, nabla)
    zero = Matrix.zeros(g.dim)
    # g(nabla_X Y, Z) + g(Y, nabla_X Z) = 0 for every basis X
    report.metric_parallel = all(
        nabla.operator_basis(i).T @ metric + metric @ nabla.operator_basis(i) == zero for i in range(g.dim))
    report.J_parallel = is_parallel(g, nabla, make_J(split, j))
    if not report.kahler:
        raise InternalEquivalenceViolation("almost Kähler structure with skew pi-tilde is not Kähler", report)
    return report
