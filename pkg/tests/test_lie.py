from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semidirect.errors import JacobiViolation, NotDerivation, NotRepresentation, NotSplit
from semidirect.lie import (
    LieAlgebra,
    Representation,
    SplitAlgebra,
    Subspace,
    adjoint_representation,
    check_jacobi,
    cotangent_algebra,
    is_derivation,
    is_ideal,
    is_subalgebra,
    jacobi_violations,
    semidirect_product,
    solvability_class,
    tangent_algebra,
)
from semidirect.linalg import Matrix

import instances
import oracles

H1 = LieAlgebra.from_labels(("e1", "e2", "e3"), {("e1", "e2"): {"e3": 1}})
SL2 = LieAlgebra.from_labels(("H", "X", "Y"), {("H", "X"): {"X": 2}, ("H", "Y"): {"Y": -2}, ("X", "Y"): {"H": 1}})


def r3(lam):
    return LieAlgebra.from_labels(("e1", "e2", "e3"), {("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": lam}})


def test_bracket_is_antisymmetric_and_bilinear():
    x, y = H1.vec({"e1": 2, "e2": 1}), H1.vec({"e2": 3, "e3": 5})
    assert H1.bracket(x, y) == H1.vec({"e3": 6})
    assert H1.bracket(y, x) == H1.vec({"e3": -6})
    assert H1.bracket(x, x) == (0, 0, 0)


def test_jacobi_violation_is_reported_with_triple():
    # [a,b] = b, [b,c] = c: the cyclic sum on (a,b,c) is c
    with pytest.raises(JacobiViolation) as err:
        check_jacobi(3, {(0, 1): (0, 1, 0), (1, 2): (0, 0, 1)}, ("a", "b", "c"))
    (triple, vec), = err.value.witness
    assert triple == (0, 1, 2)
    assert vec == (0, 0, 1)


def test_sl2_is_a_lie_algebra_and_not_solvable():
    assert not jacobi_violations(SL2)
    assert solvability_class(SL2).kind == "non_solvable"


@pytest.mark.parametrize("algebra,kind", [
    (LieAlgebra.abelian(3), "abelian"),
    (H1, "nilpotent"),
    (r3(-1), "solvable"),
    (r3(Fraction(1, 2)), "solvable"),
    (SL2, "non_solvable"),
])
def test_solvability_classes(algebra, kind):
    assert solvability_class(algebra).kind == kind


def test_heisenberg_nilpotency_step():
    s = solvability_class(H1)
    assert s.step == 2 and s.lower_central_dims == (3, 1, 0)


def test_ad_is_derivation_and_homomorphism():
    for g in (H1, SL2, r3(2)):
        for i in range(g.dim):
            assert is_derivation(g, g.ad_basis(i))
        assert not adjoint_representation(g).homomorphism_defect()


def test_non_derivation_rejected_by_semidirect():
    k = H1
    h = LieAlgebra.abelian(1, ["t"])
    with pytest.raises(NotDerivation):
        semidirect_product(h, LieAlgebra(3, k.constants, ["v1", "v2", "v3"]),
                           Representation(h, [Matrix.diag([1, 1, 1])], 3))
    # diag(1, 1, 2) is a derivation of h1
    split = semidirect_product(h, LieAlgebra(3, k.constants, ["v1", "v2", "v3"]),
                               Representation(h, [Matrix.diag([1, 1, 2])], 3))
    assert split.g.bracket(split.g.vec({"t": 1}), split.g.vec({"v3": 1})) == split.g.vec({"v3": 2})


def test_representation_homomorphism_checked():
    with pytest.raises(NotRepresentation):
        Representation(H1, [Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]]), Matrix.zeros(2)], 2)


def test_tangent_and_cotangent_brackets():
    T = tangent_algebra(H1)
    assert T.g.bracket_table() == {("e1", "e2"): "e3", ("e1", "v2"): "v3", ("e2", "v1"): "-v3"}
    C = cotangent_algebra(H1)
    assert C.g.bracket_table() == {("e1", "e2"): "e3", ("e1", "v3"): "-v2", ("e2", "v3"): "v1"}


def test_change_basis_and_subspaces():
    P = Matrix.from_columns([(0, 1, 0), (1, 0, 0), (0, 0, 1)])
    swapped = H1.change_basis(P, ["a", "b", "c"])
    assert swapped.bracket_table() == {("a", "b"): "-c"}
    assert is_subalgebra(H1, Subspace.coordinate([0, 2], 3))
    assert is_ideal(H1, Subspace.coordinate([1, 2], 3))
    assert not is_ideal(r3(1), Subspace.coordinate([0], 3))


def test_from_algebra_requires_split():
    with pytest.raises(NotSplit):
        SplitAlgebra.from_algebra(SL2, 1)
    s = SplitAlgebra.from_algebra(r3(1), 1)
    assert s.pi.matrices[0] == Matrix.identity(2)


@given(st.integers(0, 10_000))
def test_semidirect_matches_dense_oracle(seed):
    import random
    inst = instances.random_instance(random.Random(seed))
    c = oracles.semidirect_tensor(inst.ch, inst.ck, inst.pis)
    g = inst.split.g
    n = g.dim
    for i in range(n):
        for j in range(n):
            assert list(g.bracket_basis(i, j)) == c[i][j]
    assert not oracles.jacobi_fails(c)
    assert is_ideal(g, inst.split.k_block()) and is_subalgebra(g, inst.split.h_block())


@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_random_constants_jacobi_agrees_with_oracle(values):
    constants = {(0, 1): tuple(values[0:3]), (0, 2): tuple(values[3:6]), (1, 2): tuple(values[6:9])}
    dense = oracles.tensor_from_pairs(3, constants)
    g = LieAlgebra(3, constants, validate=False)
    assert bool(jacobi_violations(g)) == oracles.jacobi_fails(dense)
