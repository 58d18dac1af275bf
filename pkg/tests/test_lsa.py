
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semidirect.errors import NotClosed, NotFlat, NotIntegrable, NotLeftSymmetric, NotTorsionFree, SingularTheta
from semidirect.connections import Connection, is_flat, is_torsion_free
from semidirect.geometry import BilinearForm
from semidirect.lie import LieAlgebra, tangent_algebra
from semidirect.linalg import Matrix
from semidirect.lsa import (
    LSAProduct,
    affine_correspondence_roundtrip,
    affine_from_lsa,
    alpha_homomorphism_check,
    associator,
    chu_connection,
    commutative_associative_check,
    commutator_algebra,
    is_compatible,
    is_left_symmetric,
    left_mult_checks,
    left_symmetry_witnesses,
    lsa_from_affine,
    lsa_from_totally_real,
    semidirect_from_lsa,
)
from semidirect.structures import integrability_report

import instances
import oracles

AFF = LieAlgebra.from_labels(("e1", "e2"), {("e1", "e2"): {"e2": 1}})


def dense(A: LSAProduct):
    return [[list(v) for v in row] for row in A.a]


@given(st.integers(0, 10_000))
def test_left_symmetry_matches_oracle(seed):
    for A, _ in instances.random_products(2, seed=seed):
        assert is_left_symmetric(A) == oracles.left_symmetric(dense(A))


def test_triple_agreement_on_products():
    for A, kind in instances.random_products(40, seed=11):
        ls = is_left_symmetric(A)
        assert ls == left_mult_checks(A).holds == alpha_homomorphism_check(A)
        if kind == "valid":
            assert ls


def test_associator_witness_on_non_lsa():
    B = instances.known_lsa(3).perturbed(1, 1, 1, 1)
    assert not is_left_symmetric(B)
    (i, j, k), v = left_symmetry_witnesses(B)[0]
    e = B.basis
    assert v == tuple(a - b for a, b in zip(associator(B, e(i), e(j), e(k)), associator(B, e(j), e(i), e(k))))
    with pytest.raises(NotLeftSymmetric):
        LSAProduct(B.dim, B.a)


def test_compatibility_reports_mismatch():
    A = instances.known_lsa(2)
    assert is_compatible(A, commutator_algebra(A))
    swapped = LieAlgebra.from_labels(("e1", "e2"), {("e1", "e2"): {"e2": -1}})
    result = is_compatible(A, swapped)
    assert not result and result.mismatches[0][0] == ("e1", "e2")


@pytest.mark.parametrize("index", range(len(instances.KNOWN_LSAS)))
def test_affine_correspondence(index):
    A = instances.known_lsa(index)
    g = commutator_algebra(A)
    nabla = affine_from_lsa(A)
    assert is_torsion_free(g, nabla) and is_flat(g, nabla)
    assert lsa_from_affine(nabla, g) == A
    built = semidirect_from_lsa(A)
    assert integrability_report(built.split, built.theta).integrable
    assert lsa_from_totally_real(built.split, built.theta) == A
    ca = commutative_associative_check(A)
    assert ca.abelian == (ca.commutative and ca.associative)


def test_affine_rejects_torsion_and_curvature():
    with pytest.raises(NotTorsionFree):
        lsa_from_affine(Connection.zero(2), AFF)
    # nabla_{e1} e2 = e1 + e2, nabla_{e2} e1 = e1: torsion-free, R(e1, e2) e1 = -e1
    curved = Connection.from_operators([Matrix([[0, 1], [0, 1]]), Matrix([[1, 0], [0, 0]])])
    assert is_torsion_free(AFF, curved) and not is_flat(AFF, curved)
    with pytest.raises(NotFlat):
        lsa_from_affine(curved, AFF)


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_semidirect_with_theta(values):
    theta = Matrix([values[:2], values[2:]])
    A = instances.known_lsa(3)
    if theta.det() == 0:
        with pytest.raises(SingularTheta):
            semidirect_from_lsa(A, theta)
        return
    built = semidirect_from_lsa(A, theta)
    assert lsa_from_totally_real(built.split, theta) == A


def test_lsa_from_non_integrable_pair_raises():
    H1 = LieAlgebra.from_labels(("e1", "e2", "e3"), {("e1", "e2"): {"e3": 1}})
    split = tangent_algebra(H1)
    with pytest.raises(NotIntegrable):
        lsa_from_totally_real(split, Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


def test_chu_connection_on_aff():
    omega = BilinearForm(Matrix([[0, 1], [-1, 0]]))
    nabla = chu_connection(AFF, omega)
    e1, e2 = AFF.basis(0), AFF.basis(1)
    assert nabla(e1, e1) == (-1, 0)
    assert nabla(e2, e1) == (0, -1)
    assert nabla(e1, e2) == (0, 0) and nabla(e2, e2) == (0, 0)
    # the opposite sign convention is not torsion-free
    flipped = Connection.from_operators([-nabla.operator_basis(i) for i in range(2)])
    assert not is_torsion_free(AFF, flipped)


def test_chu_rejects_non_closed():
    g = LieAlgebra.from_labels(("e1", "e2", "e3", "e4"), {("e1", "e2"): {"e3": 1}})
    # e12 + e34 on h1 x R: d omega(e1, e2, e4) = omega(e3, e4) = 1
    omega = BilinearForm(Matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]))
    with pytest.raises(NotClosed):
        chu_connection(g, omega)


def test_round_trip_on_random_integrable_instances():
    count = 0
    for inst in instances.random_instances(80, seed=21):
        if not integrability_report(inst.split, inst.j).integrable:
            continue
        report = affine_correspondence_roundtrip(inst.split, inst.j)
        assert report.holds
        assert oracles.left_symmetric(dense(report.lsa))
        count += 1
    assert count >= 5


def test_commutative_associative_on_abelian():
    A = LSAProduct.from_labels(("e1", "e2"), {("e1", "e1"): {"e1": 1}, ("e1", "e2"): {"e2": 1},
                                              ("e2", "e1"): {"e2": 1}})
    report = commutative_associative_check(A)
    assert report.abelian and report.commutative and report.associative
    assert A.L((1, 0)) == Matrix.identity(2)
    assert not commutative_associative_check(instances.known_lsa(2)).abelian
