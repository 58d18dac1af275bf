"""Left-symmetric algebras and their bridge to affine structures and totally real structures.

``a[i][j]`` is the coordinate vector of ``e_i . e_j``.  Left symmetry means the associator
``(x.y).z - x.(y.z)`` is symmetric in ``x, y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Sequence

from .connections import (
    Connection,
    canonical_connection,
    curvature_witnesses,
    induced_product,
    is_flat,
    is_torsion_free,
    torsion_witnesses,
)
from .errors import (
    Degenerate,
    InternalEquivalenceViolation,
    NotClosed,
    NotIntegrable,
    NotLeftSymmetric,
    NotTorsionFree,
    NotFlat,
    SingularTheta,
)
from .geometry import ANTISYM, BilinearForm, closedness_witnesses
from .lie import LieAlgebra, Representation, SplitAlgebra, default_labels, semidirect_product
from .linalg import Matrix, Vector, commutator, determinant, vadd, vsub, zero_vector
from .structures import SplitEndo, integrability_report, is_one_cocycle, make_E, make_J


class LSAProduct:
    def __init__(self, dim: int, table: Sequence[Sequence[Sequence]], labels: Sequence[str] | None = None,
                 validate: bool = True):
        if len(table) != dim or any(len(row) != dim for row in table):
            raise ValueError(f"product table must be {dim}x{dim}")
        self.dim = dim
        self.a = tuple(tuple(tuple(Fraction(c) for c in v) for v in row) for row in table)
        if any(len(v) != dim for row in self.a for v in row):
            raise ValueError(f"product entries must have length {dim}")
        self.labels = tuple(labels) if labels is not None else default_labels(dim)
        if validate:
            bad = left_symmetry_witnesses(self)
            if bad:
                raise NotLeftSymmetric("associator is not symmetric in its first two arguments", witness=bad)

    @classmethod
    def from_labels(cls, labels: Sequence[str], products: dict, validate: bool = True) -> "LSAProduct":
        """``products`` maps ``("e1", "e2")`` to ``{"e3": coeff}``; missing products are zero."""
        n = len(labels)
        idx = {name: i for i, name in enumerate(labels)}
        table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (x, y), terms in products.items():
            for name, c in terms.items():
                table[idx[x]][idx[y]][idx[name]] += Fraction(c)
        return cls(n, table, labels, validate)

    @classmethod
    def zero(cls, dim: int, labels: Sequence[str] | None = None) -> "LSAProduct":
        return cls(dim, [[zero_vector(dim)] * dim for _ in range(dim)], labels)

    @classmethod
    def from_left_multiplications(cls, mats: Sequence[Matrix], labels: Sequence[str] | None = None,
                                  validate: bool = True) -> "LSAProduct":
        n = len(mats)
        return cls(n, [M.columns() for M in mats], labels, validate)

    def __call__(self, X: Sequence, Y: Sequence) -> Vector:
        out = zero_vector(self.dim)
        for i, x in enumerate(X):
            if not x:
                continue
            for j, y in enumerate(Y):
                if y:
                    out = vadd(out, tuple(x * y * c for c in self.a[i][j]))
        return out

    def basis(self, i: int) -> Vector:
        return tuple(Fraction(int(a == i)) for a in range(self.dim))

    def L(self, X: Sequence) -> Matrix:
        return Matrix.from_columns([self(X, self.basis(b)) for b in range(self.dim)], self.dim)

    def R(self, X: Sequence) -> Matrix:
        return Matrix.from_columns([self(self.basis(b), X) for b in range(self.dim)], self.dim)

    def left_basis(self, i: int) -> Matrix:
        return Matrix.from_columns(self.a[i], self.dim)

    def commutator_bracket(self, X: Sequence, Y: Sequence) -> Vector:
        return vsub(self(X, Y), self(Y, X))

    def table(self) -> dict[tuple[str, str], Vector]:
        """Nonzero products keyed by label pairs."""
        return {(self.labels[i], self.labels[j]): v for i in range(self.dim) for j in range(self.dim)
                for v in [self.a[i][j]] if any(v)}

    def perturbed(self, i: int, j: int, k: int, delta) -> "LSAProduct":
        """Copy with ``a[i][j][k]`` shifted by ``delta``, unvalidated."""
        rows = [[list(v) for v in row] for row in self.a]
        rows[i][j][k] += Fraction(delta)
        return LSAProduct(self.dim, rows, self.labels, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, LSAProduct) and self.a == other.a

    def __hash__(self) -> int:
        return hash(self.a)

    def __repr__(self) -> str:
        return f"LSAProduct(dim={self.dim}, nonzero={len(self.table())})"


def associator(A: LSAProduct, x: Sequence, y: Sequence, z: Sequence) -> Vector:
    return vsub(A(A(x, y), z), A(x, A(y, z)))


def left_symmetry_witnesses(A: LSAProduct) -> list[tuple[tuple[int, int, int], Vector]]:
    n = A.dim
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                x, y, z = A.basis(i), A.basis(j), A.basis(k)
                d = vsub(associator(A, x, y, z), associator(A, y, x, z))
                if any(d):
                    out.append(((i, j, k), d))
    return out


def is_left_symmetric(A: LSAProduct) -> bool:
    return not left_symmetry_witnesses(A)


def commutator_algebra(A: LSAProduct) -> LieAlgebra:
    """``[x, y] = x.y - y.x``; Jacobi is revalidated by the constructor."""
    n = A.dim
    constants = {(i, j): A.commutator_bracket(A.basis(i), A.basis(j)) for i in range(n) for j in range(i + 1, n)}
    return LieAlgebra(n, constants, A.labels)


@dataclass
class Compatibility:
    compatible: bool
    mismatches: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.compatible


def is_compatible(A: LSAProduct, h: LieAlgebra) -> Compatibility:
    """Compare the commutator of A with h; each mismatch is ``((x, y), [x,y]_A, [x,y]_h)``."""
    if A.dim != h.dim:
        return Compatibility(False, [("dimension", A.dim, h.dim)])
    bad = []
    for i in range(h.dim):
        for j in range(i + 1, h.dim):
            mine = A.commutator_bracket(A.basis(i), A.basis(j))
            theirs = h.bracket_basis(i, j)
            if mine != theirs:
                bad.append(((h.labels[i], h.labels[j]), mine, theirs))
    return Compatibility(not bad, bad)


# -- affine structures -------------------------------------------------------------

def affine_from_lsa(A: LSAProduct) -> Connection:
    """``nabla_x y = x.y``, torsion-free and flat for the commutator algebra."""
    bad = left_symmetry_witnesses(A)
    if bad:
        raise NotLeftSymmetric("product is not left-symmetric", witness=bad)
    nabla = Connection(A.dim, A.a)
    g = commutator_algebra(A)
    if not (is_torsion_free(g, nabla) and is_flat(g, nabla)):
        raise InternalEquivalenceViolation("connection of an LSA is not affine", nabla)
    return nabla


def lsa_from_affine(nabla: Connection, g: LieAlgebra) -> LSAProduct:
    """``x.y = nabla_x y`` for a torsion-free flat connection on g."""
    bad = torsion_witnesses(g, nabla)
    if bad:
        raise NotTorsionFree("connection has torsion", witness=bad)
    bad = curvature_witnesses(g, nabla)
    if bad:
        raise NotFlat("connection has curvature", witness=bad)
    A = LSAProduct(g.dim, nabla.gamma, g.labels)
    if not is_compatible(A, g):
        raise InternalEquivalenceViolation("LSA of a torsion-free connection is not compatible", A)
    return A


# -- left multiplication checks --------------------------------------------------

def _bracket_fn(A: LSAProduct, g: LieAlgebra | None):
    return A.commutator_bracket if g is None else g.bracket


@dataclass
class LeftMultReport:
    L_homomorphism: bool
    Id_cocycle: bool
    homomorphism_witnesses: list = field(default_factory=list)
    cocycle_witnesses: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.L_homomorphism and self.Id_cocycle


def left_mult_checks(A: LSAProduct, g: LieAlgebra | None = None) -> LeftMultReport:
    """``L[x,y] = [L x, L y]`` and ``L(x)y - L(y)x = [x,y]``.

    The bracket is the one of ``g`` when given, otherwise the commutator of A (in which case
    the cocycle condition holds by definition and only left symmetry is tested).
    """
    n = A.dim
    br = _bracket_fn(A, g)
    Ls = [A.left_basis(i) for i in range(n)]
    hom, coc = [], []
    for i in range(n):
        for j in range(i + 1, n):
            b = br(A.basis(i), A.basis(j))
            lhs = _combine(Ls, b, n)
            rhs = commutator(Ls[i], Ls[j])
            if lhs != rhs:
                hom.append(((i, j), lhs - rhs))
            d = vsub(vsub(Ls[i].col(j), Ls[j].col(i)), b)
            if any(d):
                coc.append(((i, j), d))
    return LeftMultReport(not hom, not coc, hom, coc)


def _combine(mats: Sequence[Matrix], coeffs: Sequence, n: int) -> Matrix:
    out = Matrix.zeros(n)
    for c, M in zip(coeffs, mats):
        if c:
            out = out + M * c
    return out


def alpha_homomorphism_check(A: LSAProduct, g: LieAlgebra | None = None) -> bool:
    """``alpha(x) = (L(x), x)`` into ``End(V) (+) V`` with ``[(T,x),(S,y)] = (TS - ST, Ty - Sx)``.

    Evaluated blockwise; the ambient algebra is never built.
    """
    n = A.dim
    br = _bracket_fn(A, g)
    Ls = [A.left_basis(i) for i in range(n)]
    for i, j in product(range(n), repeat=2):
        x, y = A.basis(i), A.basis(j)
        b = br(x, y)
        end_block = commutator(Ls[i], Ls[j]) == _combine(Ls, b, n)
        vec_block = vsub(Ls[i] @ y, Ls[j] @ x) == b
        if not (end_block and vec_block):
            return False
    return True


@dataclass
class CommutativeAssociativeReport:
    abelian: bool
    associative: bool
    commutative: bool

    @property
    def holds(self) -> bool:
        return self.abelian == (self.associative and self.commutative)


def commutative_associative_check(A: LSAProduct) -> CommutativeAssociativeReport:
    """For an LSA: the commutator algebra is abelian iff A is commutative and associative."""
    bad = left_symmetry_witnesses(A)
    if bad:
        raise NotLeftSymmetric("product is not left-symmetric", witness=bad)
    n = A.dim
    es = [A.basis(i) for i in range(n)]
    comm = all(A(es[i], es[j]) == A(es[j], es[i]) for i in range(n) for j in range(i + 1, n))
    assoc = all(not any(associator(A, *t)) for t in product(es, repeat=3))
    report = CommutativeAssociativeReport(commutator_algebra(A).is_abelian, assoc, comm)
    if not report.holds:
        raise InternalEquivalenceViolation("abelian commutator without commutative associative product", report)
    return report


# -- semidirect products from an LSA -----------------------------------------------

class LSASemidirect(NamedTuple):
    split: SplitAlgebra
    theta: Matrix
    J: SplitEndo
    E: SplitEndo


def _v_labels(labels: Sequence[str]) -> tuple[str, ...]:
    n = len(labels)
    if tuple(labels) == default_labels(n):
        return default_labels(n, "v")
    return tuple(f"{name}'" for name in labels)


def semidirect_from_lsa(A: LSAProduct, theta: Matrix | None = None) -> LSASemidirect:
    """``h (+) V`` with ``[x, v] = theta L(x) theta^-1 v`` and V abelian; ``theta`` is then a
    cocycle and both ``J`` and ``E`` built from it are integrable."""
    n = A.dim
    theta = Matrix.identity(n) if theta is None else theta
    if theta.shape != (n, n) or determinant(theta) == 0:
        raise SingularTheta("theta must be a nonsingular square matrix", witness=theta)
    h = commutator_algebra(A)
    tinv = theta.inverse()
    pi = Representation(h, [theta @ A.left_basis(i) @ tinv for i in range(n)], n)
    V = LieAlgebra.abelian(n, _v_labels(A.labels))
    split = semidirect_product(h, V, pi, tuple(A.labels) + V.labels)
    if not is_one_cocycle(h, pi, theta):
        raise InternalEquivalenceViolation("theta is not a 1-cocycle of the induced representation", theta)
    report = integrability_report(split, theta)
    if not report.integrable:
        raise InternalEquivalenceViolation("J, E built from an LSA are not integrable", report)
    return LSASemidirect(split, theta, make_J(split, theta), make_E(split, theta))


def lsa_from_totally_real(split: SplitAlgebra, j: Matrix) -> LSAProduct:
    """``x.y = j^-1 pi(x) j y`` on h."""
    report = integrability_report(split, j)
    if not report.integrable:
        raise NotIntegrable("k must be abelian and j a 1-cocycle", witness=report.k_witnesses[:1]
                            or report.cocycle_witnesses[:1])
    A = LSAProduct.from_left_multiplications(induced_product(split, j), split.h.labels, validate=False)
    bad = left_symmetry_witnesses(A)
    if bad or not is_compatible(A, split.h):
        raise InternalEquivalenceViolation("induced product is not a compatible LSA", bad)
    return A


# -- Chu connection ----------------------------------------------------------------

def chu_connection(h: LieAlgebra, omega: BilinearForm) -> Connection:
    """The affine structure of a symplectic form: ``omega(nabla_x y, z) = -omega(y, [x, z])``.

    In matrices ``nabla_x = -W^-1 ad_x^T W`` with ``W`` the Gram matrix of omega.
    """
    W = omega.B
    if omega.symmetry != ANTISYM:
        raise Degenerate("form is not antisymmetric", witness=W)
    if determinant(W) == 0:
        raise Degenerate("form is degenerate", witness=W)
    bad = closedness_witnesses(h, omega)
    if bad:
        raise NotClosed("form is not closed", witness=bad)
    Winv = W.inverse()
    nabla = Connection.from_operators([-(Winv @ h.ad_basis(i).T @ W) for i in range(h.dim)])
    if not (is_torsion_free(h, nabla) and is_flat(h, nabla)):
        raise InternalEquivalenceViolation("symplectic connection is not affine", nabla)
    return nabla


# -- round trip ------------------------------------------------------------------------

@dataclass
class RoundTripReport:
    lsa: LSAProduct
    lsa_roundtrip: bool
    connection_matches: bool
    J_integrable: bool
    E_integrable: bool

    @property
    def holds(self) -> bool:
        return self.lsa_roundtrip and self.connection_matches and self.J_integrable and self.E_integrable


def affine_correspondence_roundtrip(split: SplitAlgebra, j: Matrix) -> RoundTripReport:
    """LSA on h, J, E and the parallelizing connection, passed through each other and back."""
    A = lsa_from_totally_real(split, j)
    nabla_h = affine_from_lsa(A)
    rebuilt = semidirect_from_lsa(A, j)
    back = lsa_from_totally_real(rebuilt.split, rebuilt.theta)
    canon = canonical_connection(split, j).restrict(range(split.h_dim))
    integ = integrability_report(rebuilt.split, rebuilt.theta)
    report = RoundTripReport(A, back == A, canon == nabla_h, integ.J_integrable, integ.E_integrable)
    if lsa_from_affine(nabla_h, split.h) != A:
        report.lsa_roundtrip = False
    if not report.holds:
        raise InternalEquivalenceViolation("affine correspondence round trip failed", report)
    return report
