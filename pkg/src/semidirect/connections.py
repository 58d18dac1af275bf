"""Left-invariant connections stored as coefficient tensors.

``gamma[i][j]`` is the coordinate vector of ``nabla_{e_i} e_j``; everything else is
extended bilinearly.  No symmetry is imposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import FactorNotTorsionFree, InternalEquivalenceViolation, NotIntegrable
from .lie import LieAlgebra, SplitAlgebra
from .linalg import LinearSystem, Matrix, Vector, is_zero_vector, vadd, vsub, zero_vector
from .structures import SplitEndo, integrability_report, make_E, make_F, make_J


class Connection:
    def __init__(self, dim: int, gamma: Sequence[Sequence[Sequence]]):
        if len(gamma) != dim or any(len(row) != dim for row in gamma):
            raise ValueError(f"gamma must be a {dim}x{dim} table of vectors")
        self.dim = dim
        self.gamma = tuple(tuple(tuple(Fraction(c) for c in v) for v in row) for row in gamma)
        if any(len(v) != dim for row in self.gamma for v in row):
            raise ValueError(f"gamma entries must have length {dim}")

    @classmethod
    def zero(cls, dim: int) -> "Connection":
        return cls(dim, [[zero_vector(dim)] * dim for _ in range(dim)])

    @classmethod
    def from_operators(cls, operators: Sequence[Matrix]) -> "Connection":
        """Build from the matrices of ``nabla_{e_i}`` (column j is ``nabla_{e_i} e_j``)."""
        n = len(operators)
        return cls(n, [M.columns() for M in operators])

    @classmethod
    def from_flat(cls, dim: int, values: Sequence) -> "Connection":
        """Inverse of :meth:`flat`; index ``(i*dim + j)*dim + k``."""
        n = dim
        return cls(n, [[tuple(values[(i * n + j) * n: (i * n + j + 1) * n]) for j in range(n)]
                       for i in range(n)])

    def flat(self) -> Vector:
        return tuple(c for row in self.gamma for v in row for c in v)

    def __call__(self, X: Sequence, Y: Sequence) -> Vector:
        n = self.dim
        out = zero_vector(n)
        for i, x in enumerate(X):
            if not x:
                continue
            for j, y in enumerate(Y):
                if y:
                    out = vadd(out, tuple(x * y * c for c in self.gamma[i][j]))
        return out

    def operator(self, X: Sequence) -> Matrix:
        n = self.dim
        return Matrix.from_columns([self(X, tuple(int(a == b) for a in range(n))) for b in range(n)], n)

    def operator_basis(self, i: int) -> Matrix:
        return Matrix.from_columns(self.gamma[i], self.dim)

    def restrict(self, indices: Sequence[int]) -> "Connection":
        """Coefficients between the basis vectors in ``indices``, projected onto them."""
        idx = list(indices)
        return Connection(len(idx), [[tuple(self.gamma[i][j][k] for k in idx) for j in idx] for i in idx])

    def __eq__(self, other) -> bool:
        return isinstance(other, Connection) and self.gamma == other.gamma

    def __hash__(self) -> int:
        return hash(self.gamma)

    def __repr__(self) -> str:
        nz = sum(1 for row in self.gamma for v in row if any(v))
        return f"Connection(dim={self.dim}, nonzero_pairs={nz})"


def _basis(n: int, i: int) -> Vector:
    return tuple(Fraction(int(a == i)) for a in range(n))


def torsion(g: LieAlgebra, nabla: Connection, X: Sequence, Y: Sequence) -> Vector:
    return vsub(vsub(nabla(X, Y), nabla(Y, X)), g.bracket(X, Y))


def curvature(g: LieAlgebra, nabla: Connection, X: Sequence, Y: Sequence, Z: Sequence) -> Vector:
    first = nabla(X, nabla(Y, Z))
    second = nabla(Y, nabla(X, Z))
    return vsub(vsub(first, second), nabla(g.bracket(X, Y), Z))


def torsion_witnesses(g: LieAlgebra, nabla: Connection) -> list[tuple[tuple[int, int], Vector]]:
    n = g.dim
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            t = torsion(g, nabla, _basis(n, i), _basis(n, j))
            if any(t):
                out.append(((i, j), t))
    return out


def curvature_witnesses(g: LieAlgebra, nabla: Connection) -> list[tuple[tuple[int, int, int], Vector]]:
    n = g.dim
    ops = [nabla.operator_basis(i) for i in range(n)]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            R = ops[i] @ ops[j] - ops[j] @ ops[i] - _combine(ops, g.bracket_basis(i, j))
            for k in range(n):
                col = R.col(k)
                if any(col):
                    out.append(((i, j, k), col))
    return out


def _combine(ops: Sequence[Matrix], coeffs: Sequence) -> Matrix:
    n = ops[0].rows if ops else 0
    out = Matrix.zeros(n)
    for c, M in zip(coeffs, ops):
        if c:
            out = out + M * c
    return out


def is_torsion_free(g: LieAlgebra, nabla: Connection) -> bool:
    return not torsion_witnesses(g, nabla)


def is_flat(g: LieAlgebra, nabla: Connection) -> bool:
    return not curvature_witnesses(g, nabla)


def covariant_endo(g: LieAlgebra, nabla: Connection, S: SplitEndo | Matrix) -> list[list[Vector]]:
    """``D[i][j] = (nabla_{e_i} S)(e_j) = nabla_{e_i}(S e_j) - S(nabla_{e_i} e_j)``."""
    M = S.S if isinstance(S, SplitEndo) else S
    n = g.dim
    return [[vsub(nabla(_basis(n, i), M.col(j)), M @ nabla.gamma[i][j]) for j in range(n)] for i in range(n)]


def is_parallel(g: LieAlgebra, nabla: Connection, S: SplitEndo | Matrix) -> bool:
    return all(is_zero_vector(v) for row in covariant_endo(g, nabla, S) for v in row)


# -- constructions ---------------------------------------------------------------

def assemble_product_connection(split: SplitAlgebra, nabla1: Connection, nabla2: Connection) -> Connection:
    """``nabla_{x+u}(y+v) = nabla1_x y + nabla2_u v + pi(x) v``; parallelizes F and is torsion-free."""
    bad1 = torsion_witnesses(split.h, nabla1)
    if bad1:
        raise FactorNotTorsionFree("connection on h has torsion", witness=bad1)
    bad2 = torsion_witnesses(split.k, nabla2)
    if bad2:
        raise FactorNotTorsionFree("connection on k has torsion", witness=bad2)
    n, m = split.h_dim, split.k_dim
    zero = zero_vector(n + m)
    gamma = [[zero] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            gamma[i][j] = split.embed_h(nabla1.gamma[i][j])
        for b in range(m):
            gamma[i][n + b] = split.embed_k(split.pi.matrices[i].col(b))
    for a in range(m):
        for b in range(m):
            gamma[n + a][n + b] = split.embed_k(nabla2.gamma[a][b])
    return Connection(n + m, gamma)


def induced_product(split: SplitAlgebra, j: Matrix) -> list[Matrix]:
    """Matrices of ``x -> j^-1 pi(x) j`` on the h basis."""
    jinv = j.inverse()
    return [jinv @ P @ j for P in split.pi.matrices]


def canonical_connection(split: SplitAlgebra, j: Matrix) -> Connection:
    """``nabla_{x1+u1}(x2+u2) = j^-1 pi(x1) j x2 + pi(x1) u2``; k-directions act by zero."""
    report = integrability_report(split, j)
    if not report.integrable:
        witness = report.k_witnesses[:1] or report.cocycle_witnesses[:1]
        raise NotIntegrable("J is not integrable: k must be abelian and j a 1-cocycle", witness=witness)
    n = split.h_dim
    tilde = induced_product(split, j)
    zero = zero_vector(2 * n)
    gamma = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for l in range(n):
            gamma[i][l] = split.embed_h(tilde[i].col(l))
            gamma[i][n + l] = split.embed_k(split.pi.matrices[i].col(l))
    return Connection(2 * n, gamma)


# -- constraint systems -----------------------------------------------------------

def _index(n: int, i: int, j: int, k: int) -> int:
    return (i * n + j) * n + k


def add_torsion_free(system: LinearSystem, g: LieAlgebra) -> None:
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            br = g.bracket_basis(i, j)
            for k in range(n):
                system.add({_index(n, i, j, k): 1, _index(n, j, i, k): -1}, br[k])


def add_parallel(system: LinearSystem, S: Matrix) -> None:
    """Linear equations for ``nabla_{e_i}(S e_j) = S(nabla_{e_i} e_j)``."""
    n = S.rows
    in_col = [[(l, S[l, j]) for l in range(n) if S[l, j]] for j in range(n)]
    in_row = [[(l, S[k, l]) for l in range(n) if S[k, l]] for k in range(n)]
    for i, j, k in product(range(n), repeat=3):
        coeffs: dict[int, Fraction] = {}
        for l, a in in_col[j]:
            key = _index(n, i, l, k)
            coeffs[key] = coeffs.get(key, 0) + a
        for l, a in in_row[k]:
            key = _index(n, i, j, l)
            coeffs[key] = coeffs.get(key, 0) - a
        if any(coeffs.values()):
            system.add(coeffs)


def parallel_system(g: LieAlgebra, *structures: Matrix) -> LinearSystem:
    system = LinearSystem(g.dim ** 3)
    add_torsion_free(system, g)
    for S in structures:
        add_parallel(system, S)
    return system


def preserves_blocks(split: SplitAlgebra, nabla: Connection) -> bool:
    """``p_h nabla_X v = 0`` and ``p_k nabla_X y = 0`` for all basis X, y in h, v in k."""
    n = split.h_dim
    for row in nabla.gamma:
        for j, v in enumerate(row):
            block = v[n:] if j < n else v[:n]
            if any(block):
                return False
    return True


def _homogeneous_preserves(split: SplitAlgebra, system: LinearSystem) -> bool:
    # the homogeneous solutions differ from a particular one by tensors with the same block property
    n = split.dim
    for vec in system.homogeneous_basis():
        for i, j in product(range(n), repeat=2):
            base = _index(n, i, j, 0)
            v = vec[base: base + n]
            block = v[split.h_dim:] if j < split.h_dim else v[: split.h_dim]
            if any(block):
                return False
    return True


@dataclass
class ParallelConnectionReport:
    FJ_exists: bool
    FE_exists: bool
    EJ_exists: bool
    J_integrable: bool
    E_integrable: bool
    ranks: dict = field(default_factory=dict)
    unique: dict = field(default_factory=dict)
    block_form: dict = field(default_factory=dict)
    matches_canonical: bool | None = None
    solution: Connection | None = None

    @property
    def statements(self) -> tuple[bool, ...]:
        return (self.FJ_exists, self.FE_exists, self.EJ_exists, self.J_integrable, self.E_integrable)

    @property
    def agree(self) -> bool:
        return len(set(self.statements)) == 1


def parallel_connection_report(split: SplitAlgebra, j: Matrix) -> ParallelConnectionReport:
    """Decide existence of torsion-free connections parallelizing (F,J), (F,E), (E,J) by exact
    linear solve, compare with integrability of J and E, and check uniqueness against the
    canonical connection."""
    g = split.g
    F, J, E = make_F(split).S, make_J(split, j).S, make_E(split, j).S
    systems = {"FJ": parallel_system(g, F, J), "FE": parallel_system(g, F, E), "EJ": parallel_system(g, E, J)}
    integ = integrability_report(split, j)
    report = ParallelConnectionReport(
        systems["FJ"].feasible, systems["FE"].feasible, systems["EJ"].feasible,
        integ.J_integrable, integ.E_integrable,
        ranks={k: s.rank for k, s in systems.items()},
        unique={k: s.unique for k, s in systems.items()},
    )
    for key, system in systems.items():
        if system.feasible:
            sol = Connection.from_flat(g.dim, system.particular_solution())
            report.block_form[key] = preserves_blocks(split, sol) and _homogeneous_preserves(split, system)
    if not report.agree:
        raise InternalEquivalenceViolation("parallel-connection existence and integrability disagree", report)
    if report.FJ_exists:
        canon = canonical_connection(split, j)
        sols = {k: Connection.from_flat(g.dim, s.particular_solution()) for k, s in systems.items()}
        report.solution = sols["FJ"]
        report.matches_canonical = all(report.unique.values()) and all(s == canon for s in sols.values())
        if not report.matches_canonical or not all(report.block_form.values()):
            raise InternalEquivalenceViolation("parallelizing connection is not the canonical one", report)
    return report
