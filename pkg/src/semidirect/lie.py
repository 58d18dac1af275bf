"""Lie algebras given by structure constants, representations and semidirect products."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import JacobiViolation, NotAntisymmetric, NotDerivation, NotRepresentation, NotSplit
from .linalg import (
    DimensionMismatch,
    Matrix,
    Vector,
    as_scalar,
    commutator,
    in_span,
    is_zero_vector,
    rank,
    span_basis,
    unit_vector,
    vector,
    zero_vector,
)


def default_labels(n: int, stem: str = "e") -> tuple[str, ...]:
    return tuple(f"{stem}{i + 1}" for i in range(n))


def _normalize_constants(dim: int, constants: Mapping) -> dict[tuple[int, int], Vector]:
    """Bring a raw (i, j) -> vector table into the stored i < j form, checking antisymmetry."""
    out: dict[tuple[int, int], Vector] = {}
    seen: dict[tuple[int, int], Vector] = {}
    for (i, j), v in constants.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionMismatch(f"basis index pair {(i, j)} outside dimension {dim}")
        v = vector(v)
        if len(v) != dim:
            raise DimensionMismatch(f"bracket value of length {len(v)} in dimension {dim}")
        if i == j:
            if not is_zero_vector(v):
                raise NotAntisymmetric(f"[e{i + 1}, e{i + 1}] must vanish", witness=(i, i))
            continue
        key, val = ((i, j), v) if i < j else ((j, i), tuple(-a for a in v))
        if key in seen and seen[key] != val:
            raise NotAntisymmetric(f"bracket of pair {key} given inconsistently", witness=key)
        seen[key] = val
        if not is_zero_vector(val):
            out[key] = val
    return out


class LieAlgebra:
    """A finite-dimensional Lie algebra over Q.

    Only brackets ``[e_i, e_j]`` with ``i < j`` are stored; the rest follow from
    antisymmetry.  The Jacobi identity is checked on construction unless
    ``validate=False``.
    """

    def __init__(self, dim: int, constants: Mapping | None = None, labels: Sequence[str] | None = None,
                 validate: bool = True):
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else default_labels(dim)
        if len(self.labels) != dim:
            raise DimensionMismatch(f"{len(self.labels)} labels for dimension {dim}")
        if len(set(self.labels)) != dim:
            raise ValueError("basis labels must be distinct")
        self.constants = _normalize_constants(dim, constants or {})
        zero = zero_vector(dim)
        table = [[zero] * dim for _ in range(dim)]
        for (i, j), v in self.constants.items():
            table[i][j] = v
            table[j][i] = tuple(-a for a in v)
        self._table = table
        if validate:
            bad = jacobi_violations(self)
            if bad:
                raise JacobiViolation(f"Jacobi identity fails on {len(bad)} triple(s), first {bad[0][0]}",
                                      witness=bad)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_labels(cls, labels: Sequence[str], brackets: Mapping[tuple[str, str], Mapping[str, object]],
                    validate: bool = True) -> "LieAlgebra":
        """Build from ``{("e1", "e2"): {"e3": 1}}`` style tables."""
        index = {name: k for k, name in enumerate(labels)}
        n = len(labels)
        constants: dict[tuple[int, int], Vector] = {}
        for (a, b), terms in brackets.items():
            v = [Fraction(0)] * n
            for name, c in terms.items():
                v[index[name]] += as_scalar(c)
            key = (index[a], index[b])
            if key in constants:
                raise NotAntisymmetric(f"bracket [{a},{b}] given twice", witness=key)
            constants[key] = tuple(v)
        return cls(n, constants, labels, validate=validate)

    @classmethod
    def abelian(cls, n: int, labels: Sequence[str] | None = None) -> "LieAlgebra":
        return cls(n, {}, labels)

    # -- evaluation -----------------------------------------------------------
    def basis(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self._table[i][j]

    def bracket(self, X: Sequence, Y: Sequence) -> Vector:
        if len(X) != self.dim or len(Y) != self.dim:
            raise DimensionMismatch(f"bracket of vectors of lengths {len(X)}, {len(Y)} in dimension {self.dim}")
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(X):
            if not x:
                continue
            row = self._table[i]
            for j, y in enumerate(Y):
                if not y or i == j:
                    continue
                c = x * y
                for k, a in enumerate(row[j]):
                    if a:
                        out[k] += c * a
        return tuple(out)

    def ad(self, X: Sequence) -> Matrix:
        """Matrix of ``ad(X)``; column j is ``[X, e_j]``."""
        return Matrix.from_columns([self.bracket(X, self.basis(j)) for j in range(self.dim)], self.dim)

    def ad_basis(self, i: int) -> Matrix:
        return Matrix.from_columns([self._table[i][j] for j in range(self.dim)], self.dim)

    @property
    def is_abelian(self) -> bool:
        return not self.constants

    def vec(self, terms: Mapping[str, object]) -> Vector:
        """Vector from a ``{label: coefficient}`` mapping."""
        v = [Fraction(0)] * self.dim
        for name, c in terms.items():
            v[self.index(name)] += as_scalar(c)
        return tuple(v)

    def format_vector(self, v: Sequence) -> str:
        from .linalg import format_rational

        parts = []
        for c, name in zip(v, self.labels):
            if c == 0:
                continue
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{format_rational(c)} {name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def bracket_table(self) -> dict[tuple[str, str], str]:
        return {(self.labels[i], self.labels[j]): self.format_vector(v) for (i, j), v in sorted(self.constants.items())}

    def change_basis(self, P: Matrix, labels: Sequence[str] | None = None) -> "LieAlgebra":
        """The same algebra in the basis given by the columns of ``P``."""
        Pinv = P.inverse()
        cols = P.columns()
        constants = {}
        for i, j in combinations(range(self.dim), 2):
            constants[(i, j)] = Pinv @ self.bracket(cols[i], cols[j])
        return LieAlgebra(self.dim, constants, labels, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.dim == other.dim and self.constants == other.constants

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self.constants.items()))))

    def __repr__(self) -> str:
        table = ", ".join(f"[{a},{b}]={v}" for (a, b), v in self.bracket_table().items())
        return f"LieAlgebra(dim={self.dim}, {table or 'abelian'})"


def jacobi_violations(g: LieAlgebra) -> list[tuple[tuple[int, int, int], Vector]]:
    """Basis triples i < j < k whose cyclic sum [[e_i,e_j],e_k] + ... is nonzero."""
    bad = []
    for i, j, k in combinations(range(g.dim), 3):
        ei, ej, ek = g.basis(i), g.basis(j), g.basis(k)
        s = [a + b + c for a, b, c in zip(g.bracket(g.bracket_basis(i, j), ek),
                                          g.bracket(g.bracket_basis(j, k), ei),
                                          g.bracket(g.bracket_basis(k, i), ej))]
        if any(s):
            bad.append(((i, j, k), tuple(s)))
    return bad


def check_jacobi(dim: int, constants: Mapping, labels: Sequence[str] | None = None) -> LieAlgebra:
    """Validate raw structure constants; raise :class:`JacobiViolation` listing every bad triple."""
    g = LieAlgebra(dim, constants, labels, validate=False)
    bad = jacobi_violations(g)
    if bad:
        raise JacobiViolation(f"Jacobi identity fails on {len(bad)} triple(s), first {bad[0][0]}", witness=bad)
    return g


def bracket(g: LieAlgebra, X: Sequence, Y: Sequence) -> Vector:
    return g.bracket(X, Y)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(as_scalar(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", b)
        if any(len(v) != self.ambient_dim for v in b):
            raise DimensionMismatch("subspace basis vector of the wrong length")
        if b and rank(Matrix(b, len(b), self.ambient_dim)) != len(b):
            raise ValueError("subspace basis is linearly dependent")

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(span_basis(vectors, ambient_dim)))

    @classmethod
    def coordinate(cls, indices: Sequence[int], ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit_vector(ambient_dim, i) for i in indices))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return in_span(tuple(v), self.basis)


def bracket_span(g: LieAlgebra, U: Sequence[Vector], V: Sequence[Vector]) -> list[Vector]:
    return span_basis((g.bracket(u, v) for u in U for v in V), g.dim)


def is_subalgebra(g: LieAlgebra, V: Subspace) -> bool:
    return all(V.contains(g.bracket(a, b)) for a, b in combinations(V.basis, 2))


def is_ideal(g: LieAlgebra, V: Subspace) -> bool:
    return all(V.contains(g.bracket(g.basis(i), b)) for i in range(g.dim) for b in V.basis)


@dataclass(frozen=True)
class Solvability:
    kind: str  # "abelian" | "nilpotent" | "solvable" | "non_solvable"
    step: int | None = None  # nilpotency step (lower central series length)
    length: int | None = None  # derived length
    lower_central_dims: tuple = ()
    derived_dims: tuple = ()

    @property
    def is_solvable(self) -> bool:
        return self.kind != "non_solvable"

    @property
    def is_nilpotent(self) -> bool:
        return self.kind in ("abelian", "nilpotent")

    def __str__(self) -> str:
        if self.kind == "nilpotent":
            return f"nilpotent({self.step})"
        if self.kind == "solvable":
            return f"solvable({self.length})"
        return self.kind


def _series(g: LieAlgebra, derived: bool) -> list[list[Vector]]:
    full = [g.basis(i) for i in range(g.dim)]
    series = [full]
    while True:
        cur = series[-1]
        nxt = bracket_span(g, cur if derived else full, cur)
        if len(nxt) == len(cur):
            return series
        series.append(nxt)
        if not nxt:
            return series


def solvability_class(g: LieAlgebra) -> Solvability:
    """Classify via the lower central and derived series (computed by exact spans)."""
    lcs = _series(g, derived=False)
    ds = _series(g, derived=True)
    lc_dims = tuple(len(s) for s in lcs)
    d_dims = tuple(len(s) for s in ds)
    if g.dim == 0 or g.is_abelian:
        return Solvability("abelian", 1 if g.dim else 0, 1 if g.dim else 0, lc_dims, d_dims)
    if not lcs[-1]:
        return Solvability("nilpotent", len(lcs) - 1, len(ds) - 1, lc_dims, d_dims)
    if not ds[-1]:
        return Solvability("solvable", None, len(ds) - 1, lc_dims, d_dims)
    return Solvability("non_solvable", None, None, lc_dims, d_dims)


def derivation_defect(g: LieAlgebra, D: Matrix) -> list[tuple[tuple[int, int], Vector]]:
    """Basis pairs where D[X,Y] - [DX,Y] - [X,DY] is nonzero."""
    if D.shape != (g.dim, g.dim):
        raise DimensionMismatch(f"{D.shape} map on a {g.dim}-dimensional algebra")
    cols = D.columns()
    bad = []
    for i, j in combinations(range(g.dim), 2):
        lhs = D @ g.bracket_basis(i, j)
        r1 = g.bracket(cols[i], g.basis(j))
        r2 = g.bracket(g.basis(i), cols[j])
        d = tuple(a - b - c for a, b, c in zip(lhs, r1, r2))
        if any(d):
            bad.append(((i, j), d))
    return bad


def is_derivation(g: LieAlgebra, D: Matrix) -> bool:
    return not derivation_defect(g, D)


class Representation:
    """A homomorphism ``pi: h -> gl(V)`` given by one matrix per basis vector of h."""

    def __init__(self, domain: LieAlgebra, matrices: Sequence[Matrix], target_dim: int | None = None,
                 validate: bool = True):
        self.domain = domain
        self.matrices = tuple(matrices)
        if len(self.matrices) != domain.dim:
            raise DimensionMismatch(f"{len(self.matrices)} matrices for a {domain.dim}-dimensional algebra")
        n = target_dim if target_dim is not None else (self.matrices[0].rows if self.matrices else 0)
        if any(M.shape != (n, n) for M in self.matrices):
            raise DimensionMismatch("representation matrices must all be square of the target dimension")
        self.target_dim = n
        if validate:
            bad = self.homomorphism_defect()
            if bad:
                (i, j), diff = bad[0]
                raise NotRepresentation(
                    f"pi([{domain.labels[i]},{domain.labels[j]}]) != [pi({domain.labels[i]}), pi({domain.labels[j]})]",
                    witness=bad)

    def __call__(self, x: Sequence) -> Matrix:
        out = Matrix.zeros(self.target_dim)
        for c, M in zip(x, self.matrices):
            if c:
                out = out + M * c
        return out

    def act(self, x: Sequence, v: Sequence) -> Vector:
        return self(x) @ v

    def homomorphism_defect(self) -> list[tuple[tuple[int, int], Matrix]]:
        h = self.domain
        bad = []
        for i, j in combinations(range(h.dim), 2):
            diff = self(h.bracket_basis(i, j)) - commutator(self.matrices[i], self.matrices[j])
            if not diff.is_zero():
                bad.append(((i, j), diff))
        return bad

    def conjugate(self, T: Matrix) -> "Representation":
        """The equivalent representation ``x -> T^-1 pi(x) T``."""
        Tinv = T.inverse()
        return Representation(self.domain, [Tinv @ M @ T for M in self.matrices], T.cols, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self.matrices == other.matrices

    def __hash__(self) -> int:
        return hash(self.matrices)

    def __repr__(self) -> str:
        return f"Representation({self.domain.dim} -> gl({self.target_dim}))"


def adjoint_representation(g: LieAlgebra) -> Representation:
    return Representation(g, [g.ad_basis(i) for i in range(g.dim)], g.dim, validate=False)


def coadjoint_representation(g: LieAlgebra) -> Representation:
    """``ad*(x) phi = -phi o ad(x)``: in the dual basis the matrix is ``-(ad x)^T``."""
    return Representation(g, [-(g.ad_basis(i).T) for i in range(g.dim)], g.dim, validate=False)


class SplitAlgebra:
    """A Lie algebra ``g = h (+) k`` whose basis lists the h-block first, then the k-block.

    ``h`` is a subalgebra, ``k`` an ideal and ``pi(x) v = [x, v]``.
    """

    def __init__(self, g: LieAlgebra, h_dim: int, h: LieAlgebra, k: LieAlgebra, pi: Representation):
        self.g = g
        self.h_dim = h_dim
        self.k_dim = g.dim - h_dim
        self.h = h
        self.k = k
        self.pi = pi
        self._validate()

    def _validate(self) -> None:
        g, n = self.g, self.h_dim
        if not is_subalgebra(g, self.h_block()):
            raise NotSplit("h-block is not a subalgebra")
        if not is_ideal(g, self.k_block()):
            raise NotSplit("k-block is not an ideal")
        for i in range(n):
            for j in range(n):
                if self.embed_h(self.h.bracket_basis(i, j)) != g.bracket_basis(i, j):
                    raise NotSplit(f"bracket of h-basis pair {(i, j)} disagrees with h")
            for b in range(self.k_dim):
                if self.embed_k(self.pi.matrices[i].col(b)) != g.bracket_basis(i, n + b):
                    raise NotSplit(f"[h_{i}, k_{b}] disagrees with pi")
        for a in range(self.k_dim):
            for b in range(self.k_dim):
                if self.embed_k(self.k.bracket_basis(a, b)) != g.bracket_basis(n + a, n + b):
                    raise NotSplit(f"bracket of k-basis pair {(a, b)} disagrees with k")

    @classmethod
    def from_algebra(cls, g: LieAlgebra, h_dim: int) -> "SplitAlgebra":
        """Read off h, k and pi from an algebra whose first ``h_dim`` basis vectors span h."""
        n, m = h_dim, g.dim - h_dim
        if not is_subalgebra(g, Subspace.coordinate(range(n), g.dim)):
            raise NotSplit("leading block is not a subalgebra")
        if not is_ideal(g, Subspace.coordinate(range(n, g.dim), g.dim)):
            raise NotSplit("trailing block is not an ideal")
        h = LieAlgebra(n, {(i, j): g.bracket_basis(i, j)[:n] for i, j in combinations(range(n), 2)},
                       g.labels[:n], validate=False)
        k = LieAlgebra(m, {(a, b): g.bracket_basis(n + a, n + b)[n:] for a, b in combinations(range(m), 2)},
                       g.labels[n:], validate=False)
        pi = Representation(h, [Matrix.from_columns([g.bracket_basis(i, n + b)[n:] for b in range(m)], m)
                                for i in range(n)], m, validate=False)
        return cls(g, n, h, k, pi)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.g.labels

    @property
    def dim(self) -> int:
        return self.g.dim

    def h_block(self) -> Subspace:
        return Subspace.coordinate(range(self.h_dim), self.g.dim)

    def k_block(self) -> Subspace:
        return Subspace.coordinate(range(self.h_dim, self.g.dim), self.g.dim)

    def embed_h(self, x: Sequence) -> Vector:
        return tuple(x) + zero_vector(self.k_dim)

    def embed_k(self, v: Sequence) -> Vector:
        return zero_vector(self.h_dim) + tuple(v)

    def proj_h(self, X: Sequence) -> Vector:
        return tuple(X[: self.h_dim])

    def proj_k(self, X: Sequence) -> Vector:
        return tuple(X[self.h_dim:])

    def __repr__(self) -> str:
        return f"SplitAlgebra(h_dim={self.h_dim}, k_dim={self.k_dim}, g={self.g!r})"


def semidirect_product(h: LieAlgebra, k: LieAlgebra, pi: Representation,
                       labels: Sequence[str] | None = None) -> SplitAlgebra:
    """``h (+)_pi k`` with brackets [x,y]_h, [x,v] = pi(x)v and [u,v]_k."""
    if pi.domain.dim != h.dim or pi.domain.constants != h.constants:
        raise NotRepresentation("pi is not defined on h")
    if pi.target_dim != k.dim:
        raise DimensionMismatch(f"pi acts on dimension {pi.target_dim}, k has dimension {k.dim}")
    bad = pi.homomorphism_defect()
    if bad:
        raise NotRepresentation("pi is not a Lie algebra homomorphism", witness=bad)
    for i, M in enumerate(pi.matrices):
        defect = derivation_defect(k, M)
        if defect:
            raise NotDerivation(f"pi({h.labels[i]}) is not a derivation of k", witness=(i, defect))
    n, m = h.dim, k.dim
    dim = n + m
    constants: dict[tuple[int, int], Vector] = {}
    for (i, j), v in h.constants.items():
        constants[(i, j)] = tuple(v) + zero_vector(m)
    for i in range(n):
        for b in range(m):
            col = pi.matrices[i].col(b)
            if any(col):
                constants[(i, n + b)] = zero_vector(n) + col
    for (a, b), v in k.constants.items():
        constants[(n + a, n + b)] = zero_vector(n) + tuple(v)
    if labels is None:
        labels = tuple(h.labels) + tuple(k.labels)
        if len(set(labels)) != dim:
            labels = default_labels(n, "e") + default_labels(m, "v")
    g = LieAlgebra(dim, constants, labels)  # Jacobi revalidated here
    return SplitAlgebra(g, n, h, k, pi)


def _copy_labels(h: LieAlgebra) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if h.labels == default_labels(h.dim):
        return h.labels, default_labels(h.dim, "v")
    return h.labels, tuple(f"{name}'" for name in h.labels)


def tangent_algebra(h: LieAlgebra) -> SplitAlgebra:
    """``h (+)_ad h`` with the second copy abelian."""
    hl, vl = _copy_labels(h)
    k = LieAlgebra.abelian(h.dim, vl)
    return semidirect_product(h, k, adjoint_representation(h), hl + vl)


def cotangent_algebra(h: LieAlgebra) -> SplitAlgebra:
    """``h (+)_{ad*} h*`` with h* abelian, in the dual basis."""
    hl, vl = _copy_labels(h)
    k = LieAlgebra.abelian(h.dim, vl)
    return semidirect_product(h, k, coadjoint_representation(h), hl + vl)
