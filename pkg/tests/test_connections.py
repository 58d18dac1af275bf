import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semidirect.connections import (
    Connection,
    assemble_product_connection,
    canonical_connection,
    curvature,
    induced_product,
    is_flat,
    is_parallel,
    is_torsion_free,
    parallel_connection_report,
    parallel_system,
    torsion,
)
from semidirect.errors import FactorNotTorsionFree, NotIntegrable
from semidirect.lie import LieAlgebra, adjoint_representation, semidirect_product, tangent_algebra
from semidirect.linalg import Matrix
from semidirect.structures import integrability_report, make_E, make_F, make_J

import instances
import oracles

H1 = LieAlgebra.from_labels(("e1", "e2", "e3"), {("e1", "e2"): {"e3": 1}})


def dense(nabla: Connection):
    return [[list(v) for v in row] for row in nabla.gamma]


def rows(M: Matrix):
    return [list(M.row(i)) for i in range(M.rows)]


@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.integers(-2, 2), min_size=n ** 3, max_size=n ** 3)))
def test_flat_round_trip(values):
    n = round(len(values) ** (1 / 3))
    nabla = Connection.from_flat(n, values)
    assert nabla.flat() == tuple(Fraction(v) for v in values)
    assert Connection.from_flat(n, nabla.flat()) == nabla


def test_torsion_and_curvature_definitions():
    g = H1
    zero = Connection.zero(3)
    x, y = g.basis(0), g.basis(1)
    assert torsion(g, zero, x, y) == tuple(-c for c in g.bracket(x, y))
    assert not any(curvature(g, zero, x, y, g.basis(2)))
    # nabla_x y = 1/2 [x, y]: torsion-free, and flat on a 2-step nilpotent algebra
    half = Connection.from_operators([g.ad_basis(i) * Fraction(1, 2) for i in range(3)])
    assert is_torsion_free(g, half) and is_flat(g, half)
    sl2 = LieAlgebra.from_labels(("H", "X", "Y"), {("H", "X"): {"X": 2}, ("H", "Y"): {"Y": -2}, ("X", "Y"): {"H": 1}})
    half_sl2 = Connection.from_operators([sl2.ad_basis(i) * Fraction(1, 2) for i in range(3)])
    assert is_torsion_free(sl2, half_sl2) and not is_flat(sl2, half_sl2)


@given(st.integers(0, 50_000))
def test_canonical_connection_against_oracles(seed):
    inst = instances.random_instance(random.Random(seed))
    split, j = inst.split, inst.j
    if not integrability_report(split, j).integrable:
        with pytest.raises(NotIntegrable):
            canonical_connection(split, j)
        return
    nabla = canonical_connection(split, j)
    c = oracles.semidirect_tensor(inst.ch, inst.ck, inst.pis)
    G = dense(nabla)
    assert oracles.torsion_zero(c, G) and oracles.curvature_zero(c, G)
    for kind in ("F", "J", "E"):
        assert oracles.parallel(G, oracles.split_structure(inst.jrows, kind))


def test_parallel_system_decides_integrability():
    picked = {True: 0, False: 0}
    for inst in instances.random_instances(60, seed=3):
        if picked[integrability_report(inst.split, inst.j).integrable] >= 4 or inst.split.dim > 6:
            continue
        report = parallel_connection_report(inst.split, inst.j)
        integrable = integrability_report(inst.split, inst.j).integrable
        picked[integrable] += 1
        assert report.agree and report.FJ_exists == integrable
        if integrable:
            assert all(report.unique.values())
            assert report.solution == canonical_connection(inst.split, inst.j)
    assert picked[True] and picked[False]


def test_parallel_system_rank_on_heisenberg_tangent():
    split = tangent_algebra(H1)
    j = Matrix.diag([1, 1, 2])
    g = split.g
    system = parallel_system(g, make_F(split).S, make_J(split, j).S)
    assert system.rank == 216 and system.unique
    sol = Connection.from_flat(6, system.particular_solution())
    assert sol == canonical_connection(split, j)


def test_parallel_system_infeasible_for_non_abelian_k():
    k = LieAlgebra(3, H1.constants, ["v1", "v2", "v3"])
    split = semidirect_product(H1, k, adjoint_representation(H1))
    j = Matrix.diag([1, 1, 2])
    report = parallel_connection_report(split, j)
    assert report.statements == (False,) * 5
    system = parallel_system(split.g, make_F(split).S, make_J(split, j).S)
    assert not system.feasible and system.witness is not None


def test_product_connection():
    k = LieAlgebra(3, H1.constants, ["v1", "v2", "v3"])
    split = semidirect_product(H1, k, adjoint_representation(H1))
    j = Matrix.diag([1, 1, 2])
    nabla1 = Connection.from_operators(induced_product(split, j))
    nabla2 = Connection.from_operators([k.ad_basis(i) * Fraction(1, 2) for i in range(3)])
    nabla = assemble_product_connection(split, nabla1, nabla2)
    c = [[list(split.g.bracket_basis(a, b)) for b in range(6)] for a in range(6)]
    assert oracles.torsion_zero(c, dense(nabla))
    assert oracles.parallel(dense(nabla), rows(make_F(split).S))
    assert is_parallel(split.g, nabla, make_F(split))
    assert not is_parallel(split.g, nabla, make_E(split, j))
    with pytest.raises(FactorNotTorsionFree):
        assemble_product_connection(split, Connection.zero(3), nabla2)


def test_canonical_restricted_to_h_is_induced_product():
    split = tangent_algebra(H1)
    j = Matrix.diag([1, 1, 2])
    nabla = canonical_connection(split, j)
    assert nabla.restrict(range(3)) == Connection.from_operators(induced_product(split, j))
    assert is_parallel(split.g, nabla, make_J(split, j))
