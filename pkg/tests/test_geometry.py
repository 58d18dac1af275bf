import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semidirect.catalog import aff_r, r3_prime_0
from semidirect.errors import NotAntisymmetric, NotPositiveDefinite, NotSymplectic, PreconditionFailed, \
    StructureError
from semidirect.geometry import (
    ANTISYM,
    SYM,
    BilinearForm,
    d2,
    extend_metric,
    fundamental_forms,
    hermitian_cotangent_from_symplectic,
    is_closed,
    is_symplectic,
    kahler_check,
    kahler_closedness_report,
    lift_complex_structure,
    standard_inner,
    standard_symplectic,
    symplectic_to_cocycle,
)
from semidirect.lie import LieAlgebra, Representation, coadjoint_representation, semidirect_product, tangent_algebra
from semidirect.linalg import Matrix
from semidirect.structures import integrability_report, is_one_cocycle

import instances
import oracles

H1 = LieAlgebra.from_labels(("e1", "e2", "e3"), {("e1", "e2"): {"e3": 1}})
H1xR = LieAlgebra.from_labels(("e1", "e2", "e3", "e4"), {("e1", "e2"): {"e3": 1}})


def antisym(values, n):
    W = [[0] * n for _ in range(n)]
    it = iter(values)
    for r in range(n):
        for s in range(r + 1, n):
            W[r][s] = next(it)
            W[s][r] = -W[r][s]
    return W


def rows(M: Matrix):
    return [list(M.row(i)) for i in range(M.rows)]


def test_form_symmetry_detection():
    assert BilinearForm([[1, 2], [2, 1]]).symmetry == SYM
    assert BilinearForm([[0, 2], [-2, 0]]).symmetry == ANTISYM
    with pytest.raises(StructureError):
        BilinearForm([[0, 1], [0, 0]])
    with pytest.raises(NotAntisymmetric):
        BilinearForm([[1, 0], [0, 1]], ANTISYM)
    assert not BilinearForm([[1, 0], [0, -1]]).is_positive_definite()
    assert BilinearForm([[2, 1], [1, 2]]).is_positive_definite()


@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_d2_matches_oracle_on_h1_times_r(values):
    W = antisym(values, 4)
    omega = BilinearForm(W, ANTISYM)
    c = [[list(H1xR.bracket_basis(i, j)) for j in range(4)] for i in range(4)]
    assert is_closed(H1xR, omega) == oracles.cyclic_d(c, W)
    # closed 2-forms are exactly the coadjoint cocycles through the flat map
    assert is_one_cocycle(H1xR, coadjoint_representation(H1xR), omega.flat()) == is_closed(H1xR, omega)
    assert symplectic_to_cocycle(H1xR, omega) == omega.flat()


def test_d2_witness_values():
    omega = BilinearForm(antisym([1, 0, 0, 0, 0, 1], 4), ANTISYM)
    witnesses = {t: v for t, v in d2(H1xR, omega).items() if v}
    assert witnesses == {(0, 1, 3): 1}
    assert not is_symplectic(H1xR, omega)
    with pytest.raises(NotSymplectic):
        hermitian_cotangent_from_symplectic(H1xR, omega)


@given(st.integers(0, 50_000))
def test_fundamental_forms_identity_and_closedness(seed):
    inst = instances.random_instance(random.Random(seed))
    inner = standard_inner(inst.split.h_dim)
    forms = fundamental_forms(inst.split, inst.j, inner)
    assert forms.omega_J.B == -forms.omega_E.B == forms.omega_F.B
    c = oracles.semidirect_tensor(inst.ch, inst.ck, inst.pis)
    report = kahler_closedness_report(inst.split, inst.j, inner)
    assert report.agree
    assert report.omega_J_closed == oracles.cyclic_d(c, rows(forms.omega_J.B))


def test_metric_compatibility():
    split = tangent_algebra(H1)
    j = Matrix.diag([1, 2, 1])
    inner = BilinearForm([[2, 1, 0], [1, 2, 0], [0, 0, 1]])
    g = extend_metric(split, j, inner, "g")
    assert g.is_positive_definite()
    assert not extend_metric(split, j, inner, "g_bar").is_positive_definite()
    with pytest.raises(NotPositiveDefinite):
        extend_metric(split, j, BilinearForm([[1, 0, 0], [0, -1, 0], [0, 0, 1]]))


def test_e2_is_kahler():
    h = r3_prime_0()
    pi = Representation(h, [h.ad_basis(0), Matrix.zeros(3), Matrix.zeros(3)], 3)
    split = semidirect_product(h, LieAlgebra.abelian(3, ["v1", "v2", "v3"]), pi)
    report = kahler_check(split, Matrix.identity(3), standard_inner(3))
    assert report.almost_kahler and report.kahler
    assert integrability_report(split, Matrix.identity(3)).integrable


def test_kahler_precondition():
    with pytest.raises(PreconditionFailed):
        kahler_check(tangent_algebra(H1), Matrix.identity(3), standard_inner(3))


def test_hermitian_cotangent_of_aff():
    h = aff_r()
    omega = standard_symplectic(2)
    assert is_symplectic(h, omega)
    split, J, report = hermitian_cotangent_from_symplectic(h, omega)
    assert report.hermitian
    assert J.S @ J.S == -Matrix.identity(4)
    _, lifted, lifted_report = lift_complex_structure(h, Matrix([[0, -1], [1, 0]]))
    assert lifted_report.condition_i and lifted_report.condition_ii
    assert lifted_report.neutral_isometry
