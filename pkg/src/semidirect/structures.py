"""Split endomorphisms J, E, F on a semidirect product and their integrability.

Given ``g = h (+) k`` with ``dim h = dim k`` and a linear isomorphism ``j: h -> k``:

* ``F(x, v) = (x, -v)``            (paracomplex, always integrable)
* ``J(x, v) = (-j^-1 v, j x)``     (almost complex)
* ``E(x, v) = (j^-1 v, j x)``      (almost paracomplex)

``j`` is stored as a ``k_dim x h_dim`` matrix whose column ``i`` is ``j(e_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .errors import InternalEquivalenceViolation, NotAutomorphism, NotSplit, NotSquare
from .lie import LieAlgebra, Representation, SplitAlgebra, Subspace, is_subalgebra
from .linalg import (
    Matrix,
    SingularMatrix,
    Vector,
    determinant,
    kernel_basis,
    lincomb,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class SplitEndo:
    """An endomorphism S with ``S^2 = epsilon * Id``, ``S != +-Id`` and, for epsilon = +1,
    equal-dimensional eigenspaces."""

    S: Matrix
    epsilon: int
    name: str = "S"
    balanced: bool = True

    def __post_init__(self):
        S, eps = self.S, self.epsilon
        if eps not in (1, -1):
            raise NotSplit(f"epsilon must be +1 or -1, got {eps}")
        if not S.is_square:
            raise NotSplit("split endomorphism must be square")
        n = S.rows
        I = Matrix.identity(n)
        if S @ S != I * eps:
            raise NotSplit(f"{self.name}^2 != {eps:+d} Id")
        if n and (S == I or S == -I):
            raise NotSplit(f"{self.name} is +-Id")
        if eps == 1 and self.balanced and S.trace() != 0:
            raise NotSplit(f"{self.name} has eigenspaces of unequal dimension")

    @property
    def dim(self) -> int:
        return self.S.rows

    def __call__(self, X: Sequence) -> Vector:
        return self.S @ X

    def __matmul__(self, other):
        return self.S @ (other.S if isinstance(other, SplitEndo) else other)


def _check_j(split: SplitAlgebra, j: Matrix) -> Matrix:
    if split.h_dim != split.k_dim:
        raise NotSquare(f"dim h = {split.h_dim} differs from dim k = {split.k_dim}")
    if j.shape != (split.k_dim, split.h_dim):
        raise NotSquare(f"j must be {split.k_dim}x{split.h_dim}, got {j.rows}x{j.cols}")
    if determinant(j) == 0:
        raise SingularMatrix("j is singular")
    return j


def make_F(split: SplitAlgebra) -> SplitEndo:
    n, m = split.h_dim, split.k_dim
    # with dim h != dim k this is a product structure but not a paracomplex one
    return SplitEndo(Matrix.diag([1] * n + [-1] * m), 1, "F", balanced=(n == m))


def make_J(split: SplitAlgebra, j: Matrix) -> SplitEndo:
    j = _check_j(split, j)
    n = split.h_dim
    Z = Matrix.zeros(n)
    return SplitEndo(Matrix.blocks([[Z, -j.inverse()], [j, Z]]), -1, "J")


def make_E(split: SplitAlgebra, j: Matrix) -> SplitEndo:
    j = _check_j(split, j)
    n = split.h_dim
    Z = Matrix.zeros(n)
    return SplitEndo(Matrix.blocks([[Z, j.inverse()], [j, Z]]), 1, "E")


def j_from_structure(split: SplitAlgebra, J: Matrix) -> Matrix:
    """Recover ``j = J|_h`` from a totally real J (or E) given as a full matrix."""
    n = split.h_dim
    if not J.submatrix(range(n), range(n)).is_zero():
        raise NotSplit("structure does not map h into k")
    return J.submatrix(range(n, J.rows), range(n))


# -- Nijenhuis tensors -------------------------------------------------------

def nijenhuis(g: LieAlgebra, S: SplitEndo, X: Sequence, Y: Sequence) -> Vector:
    """``N_S(X,Y) = [SX,SY] + eps[X,Y] - S[SX,Y] - S[X,SY]``."""
    SX, SY = S(X), S(Y)
    t1 = g.bracket(SX, SY)
    t2 = g.bracket(X, Y)
    t3 = S(g.bracket(SX, Y))
    t4 = S(g.bracket(X, SY))
    e = S.epsilon
    return tuple(a + e * b - c - d for a, b, c, d in zip(t1, t2, t3, t4))


def nijenhuis_witnesses(g: LieAlgebra, S: SplitEndo) -> list[tuple[tuple[int, int], Vector]]:
    n = g.dim
    cols = S.S.columns()
    # B[i][j] = [S e_i, e_j]; every term of N on basis pairs is a combination of these
    B = [[g.bracket(cols[i], g.basis(j)) for j in range(n)] for i in range(n)]
    e = S.epsilon
    bad = []
    for i, j in combinations(range(n), 2):
        t1 = [Fraction(0)] * n
        for b, s in enumerate(cols[j]):
            if s:
                for k, v in enumerate(B[i][b]):
                    if v:
                        t1[k] += s * v
        t2 = g.bracket_basis(i, j)
        t34 = S(tuple(x - y for x, y in zip(B[i][j], B[j][i])))
        N = tuple(a + e * c - d for a, c, d in zip(t1, t2, t34))
        if any(N):
            bad.append(((i, j), N))
    return bad


def is_integrable(g: LieAlgebra, S: SplitEndo) -> bool:
    return not nijenhuis_witnesses(g, S)


def eigenspace(S: SplitEndo, value: int) -> Subspace:
    n = S.dim
    return Subspace(n, tuple(kernel_basis(S.S - Matrix.identity(n) * value)))


# -- 1-cocycles ---------------------------------------------------------------

def cocycle_defect(h: LieAlgebra, pi: Representation, theta: Matrix) -> list[tuple[tuple[int, int], Vector]]:
    """Basis pairs where ``pi(x)theta(y) - pi(y)theta(x) - theta[x,y]`` is nonzero."""
    if theta.shape != (pi.target_dim, h.dim):
        raise NotSquare(f"theta must be {pi.target_dim}x{h.dim}, got {theta.rows}x{theta.cols}")
    cols = theta.columns()
    bad = []
    for i, j in combinations(range(h.dim), 2):
        a = pi.matrices[i] @ cols[j]
        b = pi.matrices[j] @ cols[i]
        c = theta @ h.bracket_basis(i, j)
        d = tuple(x - y - z for x, y, z in zip(a, b, c))
        if any(d):
            bad.append(((i, j), d))
    return bad


def is_one_cocycle(h: LieAlgebra, pi: Representation, theta: Matrix) -> bool:
    return not cocycle_defect(h, pi, theta)


def coboundary(pi: Representation, u: Sequence) -> Matrix:
    """``theta_u(x) = pi(x) u``."""
    return Matrix.from_columns([M @ u for M in pi.matrices], pi.target_dim)


@dataclass
class CocycleSpace:
    basis: list[Matrix]
    nonsingular: Matrix | None = None
    bound: int | None = None
    candidates_tried: int = 0
    coefficients: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)


def cocycle_equations(h: LieAlgebra, pi: Representation) -> Matrix:
    """Coefficient matrix of the cocycle condition in the entries ``theta[a][l]`` (index a*n + l)."""
    n, m = h.dim, pi.target_dim
    rows = []
    for i, j in combinations(range(n), 2):
        Pi, Pj = pi.matrices[i], pi.matrices[j]
        c = h.bracket_basis(i, j)
        for a in range(m):
            row = [Fraction(0)] * (m * n)
            for b in range(m):
                row[b * n + j] += Pi[a, b]
                row[b * n + i] -= Pj[a, b]
            for l in range(n):
                row[a * n + l] -= c[l]
            rows.append(row)
    return Matrix(rows, len(rows), m * n)


def _shell(dim: int, radius: int):
    """Integer vectors with max-norm exactly ``radius``, in a fixed order."""
    values = [0]
    for r in range(1, radius + 1):
        values += [r, -r]
    for c in product(values, repeat=dim):
        if max((abs(x) for x in c), default=0) == radius:
            yield c


def cocycle_space(h: LieAlgebra, pi: Representation, nonsingular: bool = False, bound: int = 2) -> CocycleSpace:
    """Exact basis of Z^1(h, pi); optionally search a nonsingular element on the grid {-bound..bound}."""
    n, m = h.dim, pi.target_dim
    eqs = cocycle_equations(h, pi)
    basis_vecs = kernel_basis(eqs) if eqs.rows else [tuple(Fraction(int(k == t)) for k in range(m * n))
                                                       for t in range(m * n)]
    basis = [Matrix([v[a * n:(a + 1) * n] for a in range(m)], m, n) for v in basis_vecs]
    space = CocycleSpace(basis, bound=bound if nonsingular else None)
    if not nonsingular or m != n:
        return space
    tried = 0
    for radius in range(1, bound + 1):
        for coeffs in _shell(len(basis), radius):
            tried += 1
            flat = lincomb(coeffs, basis_vecs, m * n)
            theta = Matrix([flat[a * n:(a + 1) * n] for a in range(m)], m, n)
            if determinant(theta) != 0:
                space.nonsingular = theta
                space.coefficients = coeffs
                space.candidates_tried = tried
                return space
    space.candidates_tried = tried
    return space


# -- integrability criterion ----------------------------------------------------

@dataclass
class IntegrabilityReport:
    J_integrable: bool
    E_integrable: bool
    k_abelian: bool
    j_cocycle: bool
    J_witnesses: list = field(default_factory=list)
    E_witnesses: list = field(default_factory=list)
    k_witnesses: list = field(default_factory=list)
    cocycle_witnesses: list = field(default_factory=list)

    @property
    def criterion(self) -> bool:
        return self.k_abelian and self.j_cocycle

    @property
    def equivalence_holds(self) -> bool:
        return self.J_integrable == self.E_integrable == self.criterion

    @property
    def integrable(self) -> bool:
        return self.J_integrable and self.E_integrable and self.criterion


def integrability_report(split: SplitAlgebra, j: Matrix) -> IntegrabilityReport:
    """Decide integrability of J and E three ways (N_J, N_E, abelian k + cocycle) and compare."""
    J, E = make_J(split, j), make_E(split, j)
    g = split.g
    nJ = nijenhuis_witnesses(g, J)
    nE = nijenhuis_witnesses(g, E)
    cols = j.columns()
    k_bad = []
    for a, b in combinations(range(split.h_dim), 2):
        br = split.k.bracket(cols[a], cols[b])
        if any(br):
            k_bad.append(((a, b), cols[a], cols[b], br))
    # k abelian is a property of k itself; j is onto so the pairs (jx, jy) cover it
    k_abelian = split.k.is_abelian
    coc = cocycle_defect(split.h, split.pi, j)
    report = IntegrabilityReport(not nJ, not nE, k_abelian, not coc, nJ, nE, k_bad, coc)
    if not report.equivalence_holds:
        raise InternalEquivalenceViolation("J, E integrability and the cocycle criterion disagree", report)
    return report


# -- special classes ----------------------------------------------------------

@dataclass
class SpecialClasses:
    bi_invariant: bool
    abelian: bool
    anti_bi_invariant: bool
    predicted_bi_invariant: bool | None = None
    predicted_abelian: bool | None = None
    printed_abelian_condition: bool | None = None


def _holds_on_basis(g: LieAlgebra, pred) -> bool:
    return all(pred(g.basis(a), g.basis(b)) for a in range(g.dim) for b in range(g.dim))


def _pi_j_symmetric(split: SplitAlgebra, j: Matrix, sign: int) -> bool:
    cols = j.columns()
    P = split.pi.matrices
    n = split.h_dim
    return all(P[x] @ cols[y] == vscale(sign, P[y] @ cols[x]) for x in range(n) for y in range(n))


def classify_special(g: LieAlgebra, S: SplitEndo, split: SplitAlgebra | None = None,
                     j: Matrix | None = None) -> SpecialClasses:
    """Bi-invariant ``S[Y,Z] = [Y,SZ]``, abelian ``[SY,SZ] = -eps[Y,Z]``, anti bi-invariant
    ``[SY,Z] = -S[Y,Z]``.

    When ``split`` and ``j`` are given and S is the J or E they induce, the structural
    predictions are computed as well and must agree with the direct checks.
    """
    e = S.epsilon
    bi = _holds_on_basis(g, lambda Y, Z: S(g.bracket(Y, Z)) == g.bracket(Y, S(Z)))
    ab = _holds_on_basis(g, lambda Y, Z: g.bracket(S(Y), S(Z)) == vscale(-e, g.bracket(Y, Z)))
    anti = _holds_on_basis(g, lambda Y, Z: g.bracket(S(Y), Z) == vscale(-1, S(g.bracket(Y, Z))))
    out = SpecialClasses(bi, ab, anti)
    if split is not None and j is not None:
        built = make_J(split, j) if e == -1 else make_E(split, j)
        if built.S != S.S:
            return out
        both_abelian = split.h.is_abelian and split.k.is_abelian
        out.predicted_bi_invariant = g.is_abelian
        out.predicted_abelian = both_abelian and _pi_j_symmetric(split, j, 1)
        # the alternative sign pi(x)jy = -pi(y)jx, kept for comparison in the E case
        out.printed_abelian_condition = both_abelian and _pi_j_symmetric(split, j, 1 if e == -1 else -1)
        if out.predicted_bi_invariant != bi or out.predicted_abelian != ab:
            raise InternalEquivalenceViolation("special-class prediction disagrees with direct check", out)
    return out


# -- equivalence of structures ---------------------------------------------------

def automorphism_defect(g: LieAlgebra, phi: Matrix) -> list[tuple[tuple[int, int], Vector]]:
    cols = phi.columns()
    bad = []
    for i, j in combinations(range(g.dim), 2):
        d = vsub(phi @ g.bracket_basis(i, j), g.bracket(cols[i], cols[j]))
        if any(d):
            bad.append(((i, j), d))
    return bad


@dataclass
class EquivalenceReport:
    automorphism: bool
    commutes_with_F: bool
    blocks_invariant: bool
    intertwines_J: bool
    block_criterion: bool | None
    intertwines_E: bool
    pair_FJ_equivalent: bool
    pair_EJ_equivalent: bool


def check_equivalence(phi: Matrix, split: SplitAlgebra, j: Matrix, j_prime: Matrix) -> EquivalenceReport:
    """Check that ``phi`` is an automorphism with ``J phi = phi J'`` (and the F / E companions)."""
    g = split.g
    if phi.shape != (g.dim, g.dim):
        raise NotSquare(f"phi must be {g.dim}x{g.dim}")
    bad = automorphism_defect(g, phi)
    if bad or determinant(phi) == 0:
        raise NotAutomorphism("phi is not a Lie algebra automorphism", witness=bad or "singular")
    F = make_F(split).S
    J, Jp = make_J(split, j).S, make_J(split, j_prime).S
    E, Ep = make_E(split, j).S, make_E(split, j_prime).S
    n = split.h_dim
    C = phi.submatrix(range(n), range(n, g.dim))
    B = phi.submatrix(range(n, g.dim), range(n))
    commutes = phi @ F == F @ phi
    invariant = C.is_zero() and B.is_zero()
    if commutes != invariant:
        raise InternalEquivalenceViolation("F-commutation and block invariance disagree")
    intertwines = J @ phi == phi @ Jp
    block = None
    if invariant:
        A = phi.submatrix(range(n), range(n))
        D = phi.submatrix(range(n, g.dim), range(n, g.dim))
        block = D @ j_prime == j @ A
        if block != intertwines:
            raise InternalEquivalenceViolation("D j' = j A disagrees with J phi = phi J'")
    intertwines_E = E @ phi == phi @ Ep
    return EquivalenceReport(True, commutes, invariant, intertwines, block, intertwines_E,
                             commutes and intertwines, intertwines_E and intertwines)


def is_complex_product_pair(J: Matrix | SplitEndo, P: Matrix | SplitEndo) -> bool:
    """``J^2 = -Id``, ``P^2 = Id`` (split) and ``JP = -PJ``."""
    J = J.S if isinstance(J, SplitEndo) else J
    P = P.S if isinstance(P, SplitEndo) else P
    if J.shape != P.shape or not J.is_square:
        return False
    I = Matrix.identity(J.rows)
    if J @ J != -I or P @ P != I or P == I or P == -I or P.trace() != 0:
        return False
    return J @ P == -(P @ J)


def check_complex_product_pair(J: SplitEndo, E: SplitEndo, F: SplitEndo | None = None) -> bool:
    """Complex product pair test, plus ``F = E J`` when F is supplied."""
    ok = is_complex_product_pair(J, E)
    if F is not None:
        ok = ok and (E.S @ J.S == F.S)
    return ok


def eigenspaces_are_subalgebras(g: LieAlgebra, S: SplitEndo) -> bool:
    if S.epsilon != 1:
        raise NotSplit("eigenspace criterion needs a real (paracomplex) structure")
    return is_subalgebra(g, eigenspace(S, 1)) and is_subalgebra(g, eigenspace(S, -1))
