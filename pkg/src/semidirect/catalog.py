"""Named examples with their expected outcomes, and a one-shot verification run.

Every entry is built from parameters, then checked by a runner that records
:class:`Check` results and :class:`Diagnostic` records.  ``as_printed`` entries carry data
exactly as displayed in the source, including the parts that do not hold; their runner is
expected to emit a specific set of diagnostics.  An entry passes when every check passes
and the emitted diagnostic codes equal the expected ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from typing import Callable

from .connections import (
    Connection,
    assemble_product_connection,
    canonical_connection,
    induced_product,
    is_flat,
    is_parallel,
    is_torsion_free,
    parallel_connection_report,
    torsion_witnesses,
)
from .errors import JacobiViolation, ParamOutOfRange, StructureError
from .geometry import (
    BilinearForm,
    hermitian_cotangent_from_symplectic,
    is_symplectic,
    kahler_check,
    kahler_closedness_report,
    lift_complex_structure,
    standard_inner,
    symplectic_to_cocycle,
)
from .lie import (
    LieAlgebra,
    Representation,
    SplitAlgebra,
    Subspace,
    adjoint_representation,
    check_jacobi,
    is_derivation,
    cotangent_algebra,
    is_subalgebra,
    semidirect_product,
    solvability_class,
    tangent_algebra,
)
from .linalg import Matrix, parse_rational
from .lsa import (
    LSAProduct,
    affine_correspondence_roundtrip,
    affine_from_lsa,
    alpha_homomorphism_check,
    chu_connection,
    is_compatible,
    is_left_symmetric,
    left_mult_checks,
    lsa_from_totally_real,
    semidirect_from_lsa,
)
from .refs import REFS
from .structures import (
    SplitEndo,
    classify_special,
    cocycle_space,
    integrability_report,
    is_integrable,
    make_E,
    make_F,
    make_J,
    nijenhuis_witnesses,
)

AS_PRINTED, CORRECTED = "as_printed", "corrected"


@dataclass
class Check:
    name: str
    paper_ref: str
    passed: bool
    witnesses: list = field(default_factory=list)
    detail: str = ""


@dataclass
class Diagnostic:
    entry: str
    code: str
    message: str
    witnesses: list = field(default_factory=list)


@dataclass
class CatalogEntry:
    name: str
    params: dict
    provenance: str
    summary: str
    algebra: LieAlgebra
    split: SplitAlgebra | None = None
    j: Matrix | None = None
    structure: SplitEndo | None = None
    lsa: LSAProduct | None = None
    lsa_algebra: LieAlgebra | None = None
    inner: BilinearForm | None = None
    omega: BilinearForm | None = None
    printed: dict = field(default_factory=dict)
    expected_diagnostics: frozenset = frozenset()
    notes: list = field(default_factory=list)
    runner: Callable[["CatalogEntry", "_Recorder"], None] | None = None


@dataclass
class EntryResult:
    name: str
    params: dict
    provenance: str
    checks: list
    diagnostics: list
    expected_diagnostics: frozenset
    notes: list

    @property
    def missing_diagnostics(self) -> set:
        return set(self.expected_diagnostics) - {d.code for d in self.diagnostics}

    @property
    def unexpected_diagnostics(self) -> set:
        return {d.code for d in self.diagnostics} - set(self.expected_diagnostics)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks) and not self.missing_diagnostics \
            and not self.unexpected_diagnostics


@dataclass
class AggregateReport:
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def diagnostics(self) -> list:
        return [d for r in self.results for d in r.diagnostics]

    @property
    def checks(self) -> list:
        return [c for r in self.results for c in r.checks]


class _Recorder:
    def __init__(self, entry: CatalogEntry):
        self.entry = entry
        self.checks: list[Check] = []
        self.diagnostics: list[Diagnostic] = []

    def check(self, name: str, passed: bool, witnesses=(), ref: str | None = None, detail: str = "") -> bool:
        key = name.split(":")[0]
        self.checks.append(Check(name, ref or REFS.get(key, key), bool(passed), list(witnesses), detail))
        return bool(passed)

    def diagnose(self, code: str, message: str, witnesses=()) -> None:
        self.diagnostics.append(Diagnostic(self.entry.name, code, message, list(witnesses)))


# -- parameters ------------------------------------------------------------------------

def _q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value.strip())
    raise ParamOutOfRange(f"expected an exact rational, got {value!r}")


def _int(value) -> int:
    q = _q(value)
    if q.denominator != 1:
        raise ParamOutOfRange(f"expected an integer, got {value!r}")
    return int(q)


def _qlist(value) -> tuple[Fraction, ...]:
    if isinstance(value, str):
        return tuple(_q(part) for part in value.split(",") if part.strip())
    return tuple(_q(v) for v in value)


# -- building blocks ------------------------------------------------------------------

def _lsa(labels, products, validate=True) -> LSAProduct:
    return LSAProduct.from_labels(labels, products, validate=validate)


def _table_mismatches(labels, computed: dict, printed: dict, listed_only: bool = False):
    """Compare ``{(a, b): vector}`` tables; absent keys are zero unless ``listed_only``."""
    keys = set(printed) if listed_only else set(computed) | set(printed)
    zero = tuple(Fraction(0) for _ in labels)
    out = []
    for key in sorted(keys):
        mine, theirs = computed.get(key, zero), printed.get(key, zero)
        if tuple(mine) != tuple(theirs):
            out.append((key, mine, theirs))
    return out


def _vec(labels, terms: dict) -> tuple:
    idx = {name: i for i, name in enumerate(labels)}
    v = [Fraction(0)] * len(labels)
    for name, c in terms.items():
        v[idx[name]] += _q(c) if not isinstance(c, Fraction) else c
    return tuple(v)


def _printed_table(labels, entries: dict) -> dict:
    return {pair: _vec(labels, terms) for pair, terms in entries.items()}


def _bracket_dict(g: LieAlgebra) -> dict:
    out = {}
    for (i, j), v in g.constants.items():
        out[(g.labels[i], g.labels[j])] = tuple(v)
    return out


def _normalize_pairs(g: LieAlgebra, table: dict) -> dict:
    """Rewrite printed brackets so that keys follow the basis order (``[b,a] = -[a,b]``)."""
    out = {}
    for (a, b), v in table.items():
        if g.index(a) > g.index(b):
            out[(b, a)] = tuple(-c for c in v)
        else:
            out[(a, b)] = tuple(v)
    return out


def _j_from_images(split: SplitAlgebra, images: list[dict]) -> Matrix:
    cols = [split.proj_k(split.g.vec(img)) for img in images]
    return Matrix.from_columns(cols, split.k_dim)


def _structure_checks(rec: _Recorder, split: SplitAlgebra, j: Matrix, expect_integrable: bool = True) -> bool:
    report = integrability_report(split, j)
    rec.check("integrability", report.integrable == expect_integrable,
              report.J_witnesses[:3] + report.cocycle_witnesses[:3],
              detail=f"J={report.J_integrable} E={report.E_integrable} k_abelian={report.k_abelian} "
                     f"cocycle={report.j_cocycle}")
    if not report.integrable:
        return False
    g = split.g
    nabla = canonical_connection(split, j)
    structures = (make_F(split), make_J(split, j), make_E(split, j))
    rec.check("canonical_connection",
              is_torsion_free(g, nabla) and is_flat(g, nabla) and all(is_parallel(g, nabla, S) for S in structures))
    par = parallel_connection_report(split, j)
    rec.check("parallel_connection", par.agree and par.matches_canonical is True,
              detail=f"ranks={par.ranks}")
    return True


def _lsa_checks(rec: _Recorder, A: LSAProduct, h: LieAlgebra) -> None:
    comp = is_compatible(A, h)
    rec.check("lsa_compatible", comp.compatible, comp.mismatches)
    direct = is_left_symmetric(A)
    lm = left_mult_checks(A, h)
    alpha = alpha_homomorphism_check(A, h)
    rec.check("lsa_axioms", direct and lm.holds and alpha)
    sol = solvability_class(h)
    rec.check("solvability", sol.is_solvable, detail=str(sol))


def _compare_lsa(rec: _Recorder, A: LSAProduct, printed: dict, name: str = "lsa_table") -> list:
    mism = _table_mismatches(A.labels, A.table(), printed)
    rec.check(name, not mism, mism)
    return mism


def _compare_brackets(rec: _Recorder, g: LieAlgebra, printed: dict, listed_only: bool = False,
                      name: str = "brackets") -> list:
    mism = _table_mismatches(g.labels, _bracket_dict(g), _normalize_pairs(g, printed), listed_only)
    rec.check(name, not mism, mism)
    return mism


def _omitted(g: LieAlgebra, printed: dict) -> list:
    listed = set(_normalize_pairs(g, printed))
    return [f"[{a},{b}] = {g.format_vector(v)}" for (a, b), v in _bracket_dict(g).items() if (a, b) not in listed]


# -- entries ---------------------------------------------------------------------------

H1_LABELS = ("e1", "e2", "e3")


def heisenberg(n: int = 1) -> LieAlgebra:
    if n == 1:
        return LieAlgebra.from_labels(H1_LABELS, {("e1", "e2"): {"e3": 1}})
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    return LieAlgebra.from_labels(xs + ys + ["z"], {(x, y): {"z": 1} for x, y in zip(xs, ys)})


def r3(lam) -> LieAlgebra:
    return LieAlgebra.from_labels(H1_LABELS, {("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": lam}})


def r3_prime_0() -> LieAlgebra:
    return LieAlgebra.from_labels(H1_LABELS, {("e1", "e2"): {"e3": -1}, ("e1", "e3"): {"e2": 1}})


def aff_r() -> LieAlgebra:
    return LieAlgebra.from_labels(("e1", "e2"), {("e1", "e2"): {"e2": 1}})


def _abelian(params):
    n = _int(params.get("n", 2))
    if n < 2 or n % 2:
        raise ParamOutOfRange("n must be even and at least 2")
    m = n // 2
    h = LieAlgebra.abelian(m)
    k = LieAlgebra.abelian(m, [f"v{i}" for i in range(1, m + 1)])
    split = semidirect_product(h, k, Representation(h, [Matrix.zeros(m)] * m, m))
    j = Matrix.identity(m)

    def run(entry, rec):
        _structure_checks(rec, split, j)
        rec.check("kahler", kahler_check(split, j, standard_inner(m)).kahler)
        sc = classify_special(split.g, make_J(split, j), split, j)
        rec.check("special_classes", sc.bi_invariant and sc.abelian)
        _lsa_checks(rec, lsa_from_totally_real(split, j), h)

    return CatalogEntry("abelian", {"n": n}, CORRECTED, "abelian R^n with the classical complex structure",
                        split.g, split, j, inner=standard_inner(m), runner=run)


def _aff_r(params):
    h = LieAlgebra.abelian(1, ["e1"])
    k = LieAlgebra.abelian(1, ["e2"])
    split = semidirect_product(h, k, Representation(h, [Matrix([[1]])], 1))
    j = Matrix([[1]])

    def run(entry, rec):
        g = split.g
        rec.check("jacobi", g == aff_r())
        J = make_J(split, j)
        rec.check("structure", J.S @ g.vec({"e1": 1}) == g.vec({"e2": 1}) and is_integrable(g, J))
        _structure_checks(rec, split, j)
        A = lsa_from_totally_real(split, j)
        rec.check("lsa_table", A.table() == {("e1", "e1"): (Fraction(1),)})

    return CatalogEntry("aff_R", {}, CORRECTED, "aff(R) with Jx = y, totally real for R x + R y",
                        split.g, split, j, runner=run)


def _aff_r_symplectic(params):
    h = aff_r()
    omega = BilinearForm([[0, 1], [-1, 0]])

    def run(entry, rec):
        rec.check("symplectic", is_symplectic(h, omega))
        theta = symplectic_to_cocycle(h, omega)
        rec.check("symplectic:nonsingular_cocycle", theta.det() != 0)
        nabla = chu_connection(h, omega)
        rec.check("chu", is_torsion_free(h, nabla) and is_flat(h, nabla))
        A = LSAProduct(2, nabla.gamma, h.labels)
        rec.check("lsa_compatible", bool(is_compatible(A, h)))
        split, J, report = hermitian_cotangent_from_symplectic(h, omega)
        rec.check("hermitian", report.hermitian, detail=str(report))
        I = Matrix([[0, -1], [1, 0]])
        _, _, lifted = lift_complex_structure(h, I)
        rec.check("hermitian:lifted_complex_structure", lifted.condition_i and lifted.condition_ii)

    return CatalogEntry("aff_R_symplectic", {}, CORRECTED, "symplectic aff(R): Chu connection and Hermitian J",
                        h, omega=omega, runner=run)


def _chu_printed_sign(params):
    h = aff_r()
    omega = BilinearForm([[0, 1], [-1, 0]])

    def run(entry, rec):
        W = omega.B
        Winv = W.inverse()
        # omega(nabla_x y, z) = +omega(y, [x, z]), solved literally
        literal = Connection.from_operators([Winv @ h.ad_basis(i).T @ W for i in range(h.dim)])
        bad = torsion_witnesses(h, literal)
        rec.check("chu:signed_connection", is_torsion_free(h, chu_connection(h, omega)))
        if bad:
            rec.diagnose("chu_sign", "connection defined with omega(nabla_x y, z) = omega(y, [x, z]) has torsion; "
                         "the affine structure needs the opposite sign", bad)

    return CatalogEntry("chu_printed_sign", {}, AS_PRINTED, "symplectic connection with the displayed sign",
                        h, omega=omega, expected_diagnostics=frozenset({"chu_sign"}), runner=run)


def _cotangent_aff(labels=("e1", "e2", "e3", "e4")) -> LieAlgebra:
    s = cotangent_algebra(aff_r())
    return LieAlgebra(4, s.g.constants, labels)


def _tstar_aff_printed(params):
    g = _cotangent_aff()
    printed = {("e1", "e2"): {"e2": 1}, ("e1", "e4"): {"e4": -1}, ("e2", "e4"): {"e4": 1}}

    def run(entry, rec):
        constants = {(g.index(a), g.index(b)): g.vec(t) for (a, b), t in printed.items()}
        try:
            check_jacobi(4, constants, g.labels)
            rec.check("jacobi", True)
        except JacobiViolation as err:
            rec.diagnose("printed_bracket", "[e2,e4] = e4 as displayed violates the Jacobi identity; "
                         "the coadjoint action gives [e2,e4] = e3", err.witness)
        J = SplitEndo(Matrix.from_columns([g.vec({"e2": 1}), g.vec({"e1": -1}),
                                           g.vec({"e4": -1}), g.vec({"e3": 1})]), -1, "J")
        bad = nijenhuis_witnesses(g, J)
        h_sub = Subspace.coordinate([0, 2], 4)
        k_sub = Subspace.coordinate([1, 3], 4)
        split_ok = is_subalgebra(g, h_sub) and is_subalgebra(g, k_sub)
        if bad or not split_ok:
            rec.diagnose("printed_structure", "Je1 = e2, Je3 = -e4 is not integrable and span{e2,e4} is not "
                         "a subalgebra", bad[:2])

    return CatalogEntry("T*aff_R_printed", {}, AS_PRINTED, "T*aff(R) with the displayed bracket and J",
                        g, printed={"brackets": printed},
                        expected_diagnostics=frozenset({"printed_bracket", "printed_structure"}), runner=run)


def _tstar_aff(params):
    g = _cotangent_aff()
    # Je1 = e2, Je3 = e4
    J = SplitEndo(Matrix.from_columns([g.vec({"e2": 1}), g.vec({"e1": -1}),
                                       g.vec({"e4": 1}), g.vec({"e3": -1})]), -1, "J")
    order = ["e1", "e4", "e2", "e3"]
    P = Matrix.from_columns([g.vec({name: 1}) for name in order])
    split = SplitAlgebra.from_algebra(g.change_basis(P, order), 2)
    j = _j_from_images(split, [{"e2": 1}, {"e3": -1}])

    def run(entry, rec):
        _compare_brackets(rec, g, _printed_table(g.labels, {("e1", "e2"): {"e2": 1}, ("e1", "e4"): {"e4": -1},
                                                            ("e2", "e4"): {"e3": 1}}))
        rec.check("structure", is_integrable(g, J))
        # not totally real for aff(R) (+) aff(R)*: J maps e1 into aff(R)
        rec.check("totally_real:cotangent_split_fails", J.S @ g.vec({"e1": 1}) == g.vec({"e2": 1}))
        rec.check("totally_real", make_J(split, j).S == P.inverse() @ J.S @ P)
        _structure_checks(rec, split, j)

    return CatalogEntry("T*aff_R", {}, CORRECTED, "T*aff(R), J totally real for span{e1,e4} + span{e2,e3}",
                        g, split, j, structure=J, runner=run)


def _heisenberg_x_r(params):
    g = LieAlgebra.from_labels(("x1", "y1", "z", "e0"), {("x1", "y1"): {"z": 1}})
    J = SplitEndo(Matrix.from_columns([g.vec({"y1": 1}), g.vec({"x1": -1}), g.vec({"e0": 1}), g.vec({"z": -1})]),
                  -1, "J")

    def run(entry, rec):
        rec.check("structure", is_integrable(g, J))
        rec.check("special_classes", classify_special(g, J).abelian)
        a1 = Subspace.span([g.vec({"x1": 1}), g.vec({"z": 1})], 4)
        a2 = Subspace.span([g.vec({"y1": 1}), g.vec({"e0": 1})], 4)
        abelian = all(not any(g.bracket(u, v)) for sub in (a1, a2) for u in sub.basis for v in sub.basis)
        swapped = all(a2.contains(J.S @ u) for u in a1.basis) and all(a1.contains(J.S @ u) for u in a2.basis)
        rec.check("totally_real", abelian and swapped)

    return CatalogEntry("heisenberg_x_R", {}, CORRECTED, "h1 x R with an abelian complex structure",
                        g, structure=J, runner=run)


def _lsa_semidirect_run(A: LSAProduct, h: LieAlgebra, printed: dict, listed_only: bool):
    def run(entry, rec):
        _lsa_checks(rec, A, h)
        built = semidirect_from_lsa(A)
        g = built.split.g
        _compare_brackets(rec, g, printed, listed_only, name="semidirect_table")
        n = h.dim
        images = all(built.J.S @ g.basis(i) == g.basis(n + i) for i in range(n))
        rec.check("semidirect_table:J_e_i_is_v_i", images)
        rec.check("roundtrip", lsa_from_totally_real(built.split, built.theta) == A
                  and affine_correspondence_roundtrip(built.split, built.theta).holds)
    return run


def _r3_lambda(params):
    lam = _q(params.get("lambda", Fraction(1, 2)))
    if lam == 0 or not -1 < lam < 1:
        raise ParamOutOfRange("lambda must satisfy lambda != 0 and -1 < lambda < 1")
    h = r3(lam)
    A = _lsa(H1_LABELS, {("e1", "e1"): {"e1": lam + 1}, ("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": lam},
                         ("e2", "e3"): {"e1": 1}, ("e3", "e2"): {"e1": 1}})
    labels = H1_LABELS + ("v1", "v2", "v3")
    printed = {("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": lam}, ("e1", "v1"): {"v1": lam + 1},
               ("e1", "v2"): {"v2": 1}, ("e1", "v3"): {"v3": lam}, ("e2", "v3"): {"v1": 1},
               ("e3", "v2"): {"v1": 1}}
    return CatalogEntry("r3_lambda", {"lambda": lam}, CORRECTED, "r3,lambda with its LSA and semidirect product",
                        h, lsa=A, lsa_algebra=h, printed={"semidirect": _printed_table(labels, printed)},
                        runner=_lsa_semidirect_run(A, h, _printed_table(labels, printed), False))


def _r3_half_common():
    h = r3(Fraction(1, 2))
    A = _lsa(H1_LABELS, {("e1", "e1"): {"e1": Fraction(3, 2)}, ("e1", "e2"): {"e2": 1},
                         ("e1", "e3"): {"e3": Fraction(1, 2)}, ("e2", "e3"): {"e1": 1}, ("e3", "e2"): {"e1": 1},
                         ("e3", "e3"): {"e2": -1}})
    printed = {("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": Fraction(1, 2)}, ("e1", "v1"): {"v1": Fraction(3, 2)},
               ("e1", "v2"): {"v2": 1}, ("e1", "v3"): {"v3": Fraction(1, 2)}, ("e2", "v3"): {"v3": 1},
               ("e3", "v2"): {"v1": 1}, ("e3", "v3"): {"v2": -1}}
    return h, A, printed


def _r3_half_lsa2_printed(params):
    h, A, printed = _r3_half_common()
    labels = H1_LABELS + ("v1", "v2", "v3")
    table = _printed_table(labels, printed)

    def run(entry, rec):
        _lsa_checks(rec, A, h)
        g = semidirect_from_lsa(A).split.g
        mism = _table_mismatches(labels, _bracket_dict(g), table)
        if mism:
            rec.diagnose("bracket_e2_v3", "displayed [e2,v3] = v3 disagrees with e2.e3 = e1, which forces "
                         "[e2,v3] = v1", mism)
        try:
            constants = {(labels.index(a), labels.index(b)): v for (a, b), v in table.items()}
            check_jacobi(6, constants, labels)
            rec.check("jacobi:printed_table", True, detail="displayed table is a Lie algebra")
        except JacobiViolation as err:
            rec.check("jacobi:printed_table", True, err.witness, detail="displayed table violates Jacobi")

    return CatalogEntry("r3_half_lsa2_printed", {}, AS_PRINTED, "r3,1/2 second LSA, bracket table as displayed",
                        h, lsa=A, lsa_algebra=h, printed={"semidirect": table},
                        expected_diagnostics=frozenset({"bracket_e2_v3"}), runner=run)


def _r3_half_lsa2(params):
    h, A, printed = _r3_half_common()
    printed = dict(printed)
    printed[("e2", "v3")] = {"v1": 1}
    labels = H1_LABELS + ("v1", "v2", "v3")
    table = _printed_table(labels, printed)
    return CatalogEntry("r3_half_lsa2", {}, CORRECTED, "r3,1/2 second LSA with [e2,v3] = v1",
                        h, lsa=A, lsa_algebra=h, printed={"semidirect": table},
                        runner=_lsa_semidirect_run(A, h, table, False))


def _i_n(params):
    n = _int(params.get("n", 3))
    if n < 2:
        raise ParamOutOfRange("n must be at least 2")
    labels = tuple(f"e{i}" for i in range(1, n + 1))
    h = LieAlgebra.from_labels(labels, {("e1", f"e{k}"): {f"e{k}": 1} for k in range(2, n + 1)})
    products = {("e1", "e1"): {"e1": 2}}
    for k in range(2, n + 1):
        products[("e1", f"e{k}")] = {f"e{k}": 1}
        products[(f"e{k}", f"e{k}")] = {"e1": 1}
    A = _lsa(labels, products)
    vl = tuple(f"v{i}" for i in range(1, n + 1))
    printed = {("e1", "v1"): {"v1": 2}}
    for k in range(2, n + 1):
        printed[("e1", f"e{k}")] = {f"e{k}": 1}
        printed[(f"e{k}", f"v{k}")] = {"v1": 1}
    table = _printed_table(labels + vl, printed)
    entry = CatalogEntry("I_n", {"n": n}, CORRECTED, "I_n with its LSA and semidirect product",
                         h, lsa=A, lsa_algebra=h, printed={"semidirect": table},
                         runner=_lsa_semidirect_run(A, h, table, True))
    entry.notes.append("displayed bracket list omits " + ", ".join(
        _omitted(semidirect_from_lsa(A).split.g, table)))
    return entry


def _alpha(params):
    alpha = _qlist(params.get("alpha", "1,2,1/2,-1"))
    n = _int(params.get("n", len(alpha)))
    if n != len(alpha) or n < 2:
        raise ParamOutOfRange("alpha must list n >= 2 values")
    if any(a == 0 for a in alpha):
        raise ParamOutOfRange("alpha_i must be nonzero")
    for k in range(2, n + 1):
        if alpha[n + 2 - k - 1] != alpha[0] - alpha[k - 1]:
            raise ParamOutOfRange(f"alpha_{n + 2 - k} must equal alpha_1 - alpha_{k}")
    return n, alpha


def _a_n_common(params, printed_product: bool):
    n, alpha = _alpha(params)
    labels = tuple(f"e{i}" for i in range(1, n + 1))
    h = LieAlgebra.from_labels(labels, {("e1", f"e{k}"): {f"e{k}": alpha[k - 1]} for k in range(2, n + 1)})
    products = {}
    for i in range(1, n + 1):
        target = "e1" if printed_product else f"e{i}"
        products[("e1", f"e{i}")] = {target: alpha[i - 1]}
    for k in range(2, n + 1):
        key = (f"e{k}", f"e{n + 2 - k}")
        products.setdefault(key, {})
        products[key]["e1"] = products[key].get("e1", 0) + 1
    return n, alpha, labels, h, products


def _a_n_printed(params):
    n, alpha, labels, h, products = _a_n_common(params, True)
    A = _lsa(labels, products, validate=False)

    def run(entry, rec):
        comp = is_compatible(A, h)
        rec.check("lsa_compatible:expected_false", not comp.compatible, comp.mismatches)
        if not comp.compatible:
            rec.diagnose("product_e1_ei", "displayed e1.e_i = alpha_i e1 is not compatible with [e1,e_k] = "
                         "alpha_k e_k; e1.e_i = alpha_i e_i is", comp.mismatches)

    return CatalogEntry("A_n_printed", {"n": n, "alpha": alpha}, AS_PRINTED, "A_n with the LSA as displayed",
                        h, lsa=A, lsa_algebra=h, expected_diagnostics=frozenset({"product_e1_ei"}), runner=run)


def _a_n(params):
    n, alpha, labels, h, products = _a_n_common(params, False)
    A = _lsa(labels, products)
    vl = tuple(f"v{i}" for i in range(1, n + 1))
    printed = {}
    for k in range(2, n + 1):
        printed[("e1", f"e{k}")] = {f"e{k}": alpha[k - 1]}
        printed[("e1", f"v{k}")] = {f"v{k}": alpha[k - 1]}
        printed[(f"e{k}", f"v{n + 2 - k}")] = {"v1": 1}
    table = _printed_table(labels + vl, printed)
    entry = CatalogEntry("A_n", {"n": n, "alpha": alpha}, CORRECTED, "A_n with e1.e_i = alpha_i e_i",
                         h, lsa=A, lsa_algebra=h, printed={"semidirect": table},
                         runner=_lsa_semidirect_run(A, h, table, True))
    entry.notes.append("displayed bracket list omits " + ", ".join(
        _omitted(semidirect_from_lsa(A).split.g, table)))
    return entry


def _tangent_run(split: SplitAlgebra, j: Matrix, printed_lsa: dict | None, printed_brackets: dict | None):
    def run(entry, rec):
        if printed_brackets is not None:
            _compare_brackets(rec, split.g, printed_brackets)
        if not _structure_checks(rec, split, j):
            return
        h = split.h
        A = lsa_from_totally_real(split, j)
        if printed_lsa is not None:
            _compare_lsa(rec, A, printed_lsa)
        _lsa_checks(rec, A, h)
        rec.check("roundtrip", affine_correspondence_roundtrip(split, j).holds)
        # k abelian: the product connection with trivial second factor is the canonical one
        assembled = assemble_product_connection(split, affine_from_lsa(A), Connection.zero(split.k_dim))
        rec.check("product_connection", assembled == canonical_connection(split, j))
        if split.pi == adjoint_representation(h):
            sol = solvability_class(h)
            rec.check("nilpotent_base", is_derivation(h, j) and j.det() != 0 and sol.is_nilpotent, detail=str(sol))
        closed = kahler_closedness_report(split, j, standard_inner(h.dim))
        rec.check("closedness", closed.agree, closed.equation_witnesses[:3],
                  detail=f"closed={closed.omega_J_closed}")
    return run


def _heisenberg_tangent(params):
    s = _int(params.get("s", 0))
    if s not in (0, 1):
        raise ParamOutOfRange("s must be 0 or 1")
    split = tangent_algebra(heisenberg(1))
    j = _j_from_images(split, [{"v1": 1}, {"v1": -s, "v2": 1}, {"v3": 2}])
    printed_lsa = _printed_table(H1_LABELS, {("e1", "e2"): {"e3": Fraction(1, 2)},
                                             ("e2", "e1"): {"e3": Fraction(-1, 2)},
                                             ("e2", "e2"): {"e3": Fraction(s, 2)}})
    brackets = {("e1", "e2"): {"e3": 1}, ("e1", "v2"): {"v3": 1}, ("e2", "v1"): {"v3": -1}}
    labels = split.labels
    return CatalogEntry("heisenberg_tangent", {"s": s}, CORRECTED, "T h1 with J_s and its LSA",
                        split.g, split, j, printed={"lsa": printed_lsa},
                        runner=_tangent_run(split, j, printed_lsa, _printed_table(labels, brackets)))


def _heisenberg_n_tangent(params):
    n = _int(params.get("n", 2))
    if n < 1:
        raise ParamOutOfRange("n must be at least 1")
    h = heisenberg(n) if n > 1 else LieAlgebra.from_labels(("x1", "y1", "z"), {("x1", "y1"): {"z": 1}})
    split = tangent_algebra(h)
    j = Matrix.diag([1] * (2 * n) + [2])
    printed = {(f"x{i}", f"y{i}"): {"z": Fraction(1, 2)} for i in range(1, n + 1)}
    # compatibility forces y_i . x_i = -1/2 z as well; the display lists the x.y products only
    table = _printed_table(h.labels, printed)
    full = dict(table)
    for i in range(1, n + 1):
        full[(f"y{i}", f"x{i}")] = _vec(h.labels, {"z": Fraction(-1, 2)})

    def run(entry, rec):
        A = lsa_from_totally_real(split, j)
        listed = _table_mismatches(h.labels, A.table(), table, listed_only=True)
        rec.check("lsa_table", not listed, listed)
        _tangent_run(split, j, full, None)(entry, rec)

    return CatalogEntry("heisenberg_n_tangent", {"n": n}, CORRECTED, "T h_n with the diagonal derivation",
                        split.g, split, j, printed={"lsa": table}, runner=run)


def _cotangent_entry(name, h, images, brackets, lsa, params=None, provenance=CORRECTED,
                     expected=frozenset(), summary=""):
    split = cotangent_algebra(h)
    j = _j_from_images(split, images)
    printed_lsa = _printed_table(h.labels, lsa)
    table = _printed_table(split.labels, brackets)
    return CatalogEntry(name, params or {}, provenance, summary, split.g, split, j,
                        printed={"lsa": printed_lsa, "brackets": table}, expected_diagnostics=expected,
                        runner=_tangent_run(split, j, printed_lsa, table))


def _tstar_h1(params):
    return _cotangent_entry(
        "T*h1", heisenberg(1), [{"v1": 1}, {"v3": 1}, {"v2": -1}],
        {("e1", "e2"): {"e3": 1}, ("e1", "v3"): {"v2": -1}, ("e2", "v3"): {"v1": 1}},
        {("e1", "e2"): {"e3": 1}, ("e2", "e2"): {"e1": 1}}, summary="T*h1 with Je1=v1, Je2=v3, Je3=-v2")


def rm1_table(a, b, c, d) -> dict:
    """The displayed LSA on r3,-1 in terms of j's parameters."""
    ad = a * d
    w = {"e1": d, "e2": -c, "e3": b}
    return {
        ("e1", "e1"): {"e3": b / d},
        ("e1", "e2"): {"e1": -b * d / ad, "e2": (ad + b * c) / ad, "e3": -b * b / ad},
        ("e1", "e3"): {"e1": c * d / ad, "e2": -c * c / ad, "e3": -(ad - b * c) / ad},
        ("e2", "e1"): {k: -b / ad * v for k, v in w.items()},
        ("e2", "e3"): {k: v / a for k, v in w.items()},
        ("e3", "e1"): {k: c / ad * v for k, v in w.items()},
        ("e3", "e2"): {k: v / a for k, v in w.items()},
    }


def rm1_e1e1(a, b, c, d) -> dict:
    """``e1.e1`` computed from ``j^-1 ad*(e1) j e1``."""
    ad = a * d
    return {"e1": -2 * b * c / ad, "e2": c * (ad + 2 * b * c) / (ad * d), "e3": b * (ad - 2 * b * c) / (ad * d)}


def _tstar_r3_m1(params):
    a, b, c, d = (_q(params.get(k, v)) for k, v in zip("abcd", (1, 0, 0, 1)))
    if a * d == 0:
        raise ParamOutOfRange("the family needs a*d != 0")
    h = r3(-1)
    split = cotangent_algebra(h)
    j = Matrix([[a, b, c], [-b, 0, d], [-c, -d, 0]])
    printed = _printed_table(H1_LABELS, rm1_table(a, b, c, d))
    brackets = _printed_table(split.labels, {
        ("e1", "e2"): {"e2": 1}, ("e1", "e3"): {"e3": -1}, ("e1", "v2"): {"v2": -1}, ("e1", "v3"): {"v3": 1},
        ("e2", "v2"): {"v1": 1}, ("e3", "v3"): {"v1": -1}})
    expected = frozenset({"printed_e1e1"}) if c != 0 else frozenset()

    def run(entry, rec):
        _compare_brackets(rec, split.g, brackets)
        if not _structure_checks(rec, split, j):
            return
        A = lsa_from_totally_real(split, j)
        mism = _table_mismatches(H1_LABELS, A.table(), printed)
        rec.check("lsa_table:except_e1e1", all(key == ("e1", "e1") for key, _, _ in mism), mism)
        rec.check("lsa_table:e1e1_closed_form", A.a[0][0] == _vec(H1_LABELS, rm1_e1e1(a, b, c, d)))
        if mism:
            rec.diagnose("printed_e1e1", "displayed e1.e1 = (b/d) e3 holds only when c = 0", mism)
        _lsa_checks(rec, A, h)
        rec.check("roundtrip", affine_correspondence_roundtrip(split, j).holds)

    return CatalogEntry("T*r3_-1", {"a": a, "b": b, "c": c, "d": d}, AS_PRINTED,
                        "T*r3,-1 with the four-parameter family of j", split.g, split, j,
                        printed={"lsa": printed}, expected_diagnostics=expected, runner=run)


R30_BRACKETS = {("e1", "e2"): {"e2": 1}, ("e1", "v2"): {"v2": -1}, ("e2", "v2"): {"v1": 1}}
R30_LSA = {("e1", "e1"): {"e1": -1}, ("e2", "e1"): {"e2": -1}}


def _tstar_r3_0_printed(params):
    split = cotangent_algebra(r3(0))
    displayed = {"e1": "v2", "e2": "-v1", "e3": "v6"}

    def run(entry, rec):
        _compare_brackets(rec, split.g, _printed_table(split.labels, R30_BRACKETS))
        missing = [(x, img) for x, img in displayed.items() if img.lstrip("-") not in split.labels]
        if missing:
            rec.diagnose("J_e3_v6", "displayed J e3 = v6 names no basis vector of the 6-dimensional algebra; "
                         "the reading J e3 = v3 gives a totally real complex structure", missing)

    return CatalogEntry("T*r3_0_printed", {}, AS_PRINTED, "T*r3,0 with J as displayed", split.g, split,
                        printed={"J": displayed}, expected_diagnostics=frozenset({"J_e3_v6"}), runner=run)


def _tstar_r3_0(params):
    entry = _cotangent_entry("T*r3_0", r3(0), [{"v2": 1}, {"v1": -1}, {"v3": 1}], R30_BRACKETS, R30_LSA,
                             summary="T*r3,0 with Je1=v2, Je2=-v1, Je3=v3")
    base = entry.runner
    j = entry.j

    def run(e, rec):
        # shape of the displayed family: [[a,b,c],[-b,0,0],[d,0,e]]
        shape = j[1, 0] == -j[0, 1] and j[1, 1] == j[1, 2] == 0 and j[2, 1] == 0
        rec.check("structure:family_shape", shape)
        base(e, rec)

    entry.runner = run
    return entry


RP30_BRACKETS = {("e1", "e2"): {"e3": -1}, ("e1", "e3"): {"e2": 1}, ("e1", "v2"): {"v3": -1},
                 ("e1", "v3"): {"v2": 1}, ("e2", "v3"): {"v1": -1}, ("e3", "v2"): {"v1": 1}}


def _eps(params) -> int:
    eps = _int(params.get("eps", 1))
    if eps not in (1, -1):
        raise ParamOutOfRange("eps must be 1 or -1")
    return eps


def _tstar_rp3_0(params):
    eps = _eps(params)
    return _cotangent_entry(
        "T*r3'_0", r3_prime_0(), [{"v1": eps}, {"v3": 1}, {"v2": -1}], RP30_BRACKETS,
        {("e1", "e2"): {"e3": -1}, ("e1", "e3"): {"e2": 1}, ("e2", "e2"): {"e1": -eps}, ("e3", "e3"): {"e1": -eps}},
        params={"eps": eps}, summary="T*r'3,0 with Je1 = eps v1, Je2 = v3, Je3 = -v2")


def _tstar_rp3_0_printed(params):
    split = cotangent_algebra(r3_prime_0())
    printed = dict(RP30_BRACKETS)
    printed[("e1", "v3")] = {"v2": -1}
    table = _printed_table(split.labels, printed)

    def run(entry, rec):
        mism = _table_mismatches(split.labels, _bracket_dict(split.g), table)
        constants = {(split.labels.index(a), split.labels.index(b)): v for (a, b), v in table.items()}
        witness = []
        try:
            check_jacobi(6, constants, split.labels)
        except JacobiViolation as err:
            witness = err.witness
        if mism:
            rec.diagnose("bracket_e1_v3", "displayed [e1,v3] = -v2 violates the Jacobi identity; the coadjoint "
                         "action gives [e1,v3] = v2", mism + list(witness))

    return CatalogEntry("T*r3'_0_printed", {}, AS_PRINTED, "T*r'3,0 bracket table as displayed", split.g, split,
                        printed={"brackets": table}, expected_diagnostics=frozenset({"bracket_e1_v3"}), runner=run)


def _tangent_r3_m1(params):
    bound = _int(params.get("bound", 3))
    h = r3(-1)
    split = tangent_algebra(h)

    def run(entry, rec):
        space = cocycle_space(h, adjoint_representation(h), nonsingular=True, bound=bound)
        sol = solvability_class(h)
        rec.check("cocycles", space.nonsingular is None, detail=f"dim={space.dim} tried={space.candidates_tried}")
        rec.check("nilpotent_base", not sol.is_nilpotent, detail=str(sol))

    return CatalogEntry("tangent_r3_-1", {"bound": bound}, CORRECTED,
                        "T r3,-1 has no totally real complex structure", split.g, split, runner=run)


def _e2_kahler(params):
    h = r3_prime_0()
    pi = Representation(h, [h.ad_basis(0), Matrix.zeros(3), Matrix.zeros(3)], 3)
    split = semidirect_product(h, LieAlgebra.abelian(3, ["v1", "v2", "v3"]), pi)
    j = Matrix.identity(3)

    def run(entry, rec):
        rep = kahler_check(split, j, standard_inner(3))
        rec.check("kahler", rep.kahler, detail=str(rep))
        closed = kahler_closedness_report(split, j, standard_inner(3))
        rec.check("closedness", closed.agree and closed.omega_J_closed)
        _structure_checks(rec, split, j)

    return CatalogEntry("e2_kahler", {}, CORRECTED, "e(2) with a skew induced representation: Kähler",
                        split.g, split, j, inner=standard_inner(3), runner=run)


def _h1_ad_h1(params):
    h = heisenberg(1)
    k = LieAlgebra(3, h.constants, ["v1", "v2", "v3"])
    split = semidirect_product(h, k, adjoint_representation(h))
    j = Matrix.diag([1, 1, 2])

    def run(entry, rec):
        nabla1 = Connection.from_operators(induced_product(split, j))
        nabla2 = Connection.from_operators([k.ad_basis(i) * Fraction(1, 2) for i in range(3)])
        nabla = assemble_product_connection(split, nabla1, nabla2)
        rec.check("product_connection", is_torsion_free(split.g, nabla) and is_parallel(split.g, nabla, make_F(split)))
        _structure_checks(rec, split, j, expect_integrable=False)

    return CatalogEntry("h1_ad_h1", {}, CORRECTED, "h1 acting on a non-abelian copy of itself",
                        split.g, split, j, runner=run)


def _f_bi_invariant_printed(params):
    T = tangent_algebra(heisenberg(1))
    h = heisenberg(1)
    direct = semidirect_product(h, LieAlgebra.abelian(3, ["v1", "v2", "v3"]),
                                Representation(h, [Matrix.zeros(3)] * 3, 3))

    def run(entry, rec):
        on_direct = classify_special(direct.g, make_F(direct)).bi_invariant
        rec.check("special_classes:F_direct_product", on_direct)
        on_tangent = classify_special(T.g, make_F(T)).bi_invariant
        if not on_tangent:
            witness = [(a, b) for a in range(6) for b in range(6)
                       if make_F(T).S @ T.g.bracket_basis(a, b) != T.g.bracket(T.g.basis(a), make_F(T).S @ T.g.basis(b))]
            rec.diagnose("F_bi_invariant", "F(x,v) = (x,-v) is bi-invariant only when pi = 0", witness[:4])

    return CatalogEntry("F_bi_invariant_printed", {}, AS_PRINTED, "bi-invariance of the product structure F",
                        T.g, T, expected_diagnostics=frozenset({"F_bi_invariant"}), runner=run)


def _e_abelian_sign_printed(params):
    h = LieAlgebra.abelian(2)
    pi = Representation(h, [Matrix([[0, 0], [1, 0]]), Matrix.zeros(2)], 2)
    split = semidirect_product(h, LieAlgebra.abelian(2, ["v1", "v2"]), pi)
    j = Matrix.identity(2)

    def run(entry, rec):
        sc = classify_special(split.g, make_E(split, j), split, j)
        rec.check("special_classes:E_abelian", sc.abelian and sc.predicted_abelian)
        if sc.printed_abelian_condition != sc.abelian:
            rec.diagnose("E_abelian_sign", "E is abelian iff h, k abelian and pi(x)jy = pi(y)jx; the displayed "
                         "minus sign gives the wrong answer here", [("direct", sc.abelian),
                                                                     ("displayed", sc.printed_abelian_condition)])

    return CatalogEntry("E_abelian_sign_printed", {}, AS_PRINTED, "abelian paracomplex E, sign of the criterion",
                        split.g, split, j, expected_diagnostics=frozenset({"E_abelian_sign"}), runner=run)


# -- registry --------------------------------------------------------------------------

@dataclass
class _Spec:
    builder: Callable[[dict], CatalogEntry]
    keys: tuple = ()
    samples: tuple = ({},)


REGISTRY: dict[str, _Spec] = {
    "abelian": _Spec(_abelian, ("n",), ({"n": 2}, {"n": 4})),
    "aff_R": _Spec(_aff_r),
    "aff_R_symplectic": _Spec(_aff_r_symplectic),
    "chu_printed_sign": _Spec(_chu_printed_sign),
    "T*aff_R_printed": _Spec(_tstar_aff_printed),
    "T*aff_R": _Spec(_tstar_aff),
    "heisenberg_x_R": _Spec(_heisenberg_x_r),
    "r3_lambda": _Spec(_r3_lambda, ("lambda",), ({"lambda": "1/2"}, {"lambda": "-1/3"})),
    "r3_half_lsa2_printed": _Spec(_r3_half_lsa2_printed),
    "r3_half_lsa2": _Spec(_r3_half_lsa2),
    "I_n": _Spec(_i_n, ("n",), ({"n": 3}, {"n": 4})),
    "A_n_printed": _Spec(_a_n_printed, ("n", "alpha")),
    "A_n": _Spec(_a_n, ("n", "alpha"), ({}, {"alpha": "2,3,-1"})),
    "heisenberg_tangent": _Spec(_heisenberg_tangent, ("s",), ({"s": 0}, {"s": 1})),
    "heisenberg_n_tangent": _Spec(_heisenberg_n_tangent, ("n",), ({"n": 1}, {"n": 2})),
    "T*h1": _Spec(_tstar_h1),
    "T*r3_-1": _Spec(_tstar_r3_m1, ("a", "b", "c", "d"),
                     ({"a": 1, "b": 0, "c": 0, "d": 1}, {"a": 2, "b": 1, "c": 1, "d": 1},
                      {"a": 1, "b": 2, "c": 3, "d": 1})),
    "T*r3_0_printed": _Spec(_tstar_r3_0_printed),
    "T*r3_0": _Spec(_tstar_r3_0),
    "T*r3'_0_printed": _Spec(_tstar_rp3_0_printed),
    "T*r3'_0": _Spec(_tstar_rp3_0, ("eps",), ({"eps": 1}, {"eps": -1})),
    "tangent_r3_-1": _Spec(_tangent_r3_m1, ("bound",)),
    "e2_kahler": _Spec(_e2_kahler),
    "h1_ad_h1": _Spec(_h1_ad_h1),
    "F_bi_invariant_printed": _Spec(_f_bi_invariant_printed),
    "E_abelian_sign_printed": _Spec(_e_abelian_sign_printed),
}

NAMES = tuple(REGISTRY)


def build(name: str, params: dict | None = None) -> CatalogEntry:
    spec = REGISTRY.get(name)
    if spec is None:
        raise KeyError(f"unknown catalog entry {name!r}")
    params = dict(params or {})
    unknown = set(params) - set(spec.keys)
    if unknown:
        raise ParamOutOfRange(f"{name} does not take parameters {sorted(unknown)}")
    try:
        return spec.builder(params)
    except (ZeroDivisionError, ValueError) as err:
        if isinstance(err, ParamOutOfRange):
            raise
        raise ParamOutOfRange(f"{name}: {err}") from err


def verify(entry: CatalogEntry) -> EntryResult:
    rec = _Recorder(entry)
    try:
        if entry.runner is not None:
            entry.runner(entry, rec)
    except (StructureError, AssertionError) as err:
        rec.check("exception", False, [repr(err)], detail=type(err).__name__)
    return EntryResult(entry.name, entry.params, entry.provenance, rec.checks, rec.diagnostics,
                       entry.expected_diagnostics, entry.notes)


def verify_all(pattern: str = "*", params: dict | None = None) -> AggregateReport:
    """Verify every entry whose name matches ``pattern``.

    Entries taking any of the supplied parameters are run once with those bindings; the
    rest run over their default samples.
    """
    params = dict(params or {})
    results = []
    for name, spec in REGISTRY.items():
        if not fnmatchcase(name, pattern):
            continue
        mine = {k: v for k, v in params.items() if k in spec.keys}
        samples = [mine] if mine else list(spec.samples)
        for sample in samples:
            results.append(verify(build(name, sample)))
    return AggregateReport(results)
