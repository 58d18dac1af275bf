"""Command dispatcher and report emitter for the ``semidirect`` executable.

Exit codes: 0 when every check passes, 1 when a verified property fails, 2 for parse,
validation or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from pathlib import Path

from .. import catalog
from ..connections import (
    canonical_connection,
    curvature_witnesses,
    is_parallel,
    parallel_connection_report,
    torsion_witnesses,
)
from ..errors import InternalEquivalenceViolation, NotIntegrable, StructureError
from ..geometry import is_symplectic, kahler_check, kahler_closedness_report
from ..lie import jacobi_violations, semidirect_product
from ..linalg import LinAlgError, Matrix, format_rational
from ..lsa import (
    alpha_homomorphism_check,
    chu_connection,
    is_compatible,
    left_mult_checks,
    left_symmetry_witnesses,
    lsa_from_totally_real,
    semidirect_from_lsa,
)
from ..refs import REFS
from ..structures import cocycle_space, integrability_report, make_E, make_F, make_J
from . import language
from .language import DefinitionError, Workspace

SCHEMA_VERSION = 1
FORMAT_ENV = "SEMIDIRECT_FORMAT"
EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UnknownCommand(Exception):
    pass


class UsageError(Exception):
    pass


def jsonable(obj):
    """Exact, JSON-ready rendering: rationals become strings such as ``"-1/2"``."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Matrix):
        return [[format_rational(c) for c in obj.row(i)] for i in range(obj.rows)]
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, jsonable(k))) if isinstance(k, tuple) else str(k)):
                jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    if is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj)}
    return repr(obj)


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    error: dict | None = None

    def check(self, name: str, passed: bool, witnesses=(), ref: str | None = None, **extra) -> bool:
        entry = {"name": name, "paper_ref": ref or REFS.get(name.split(":")[0], name), "pass": bool(passed),
                 "witnesses": jsonable(list(witnesses))}
        entry.update(jsonable(extra))
        self.checks.append(entry)
        return bool(passed)

    @property
    def passed(self) -> bool:
        return self.error is None and all(c["pass"] for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_ERROR
        return EXIT_PASS if self.passed else EXIT_FAIL

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "command": self.command, "inputs": jsonable(self.inputs),
               "checks": self.checks, "diagnostics": jsonable(self.diagnostics)}
        if self.result:
            out["result"] = jsonable(self.result)
        if self.error is not None:
            out["error"] = self.error
        out["exit_code"] = self.exit_code
        return out

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.inputs.items():
            lines.append(f"  {key}: {jsonable(value)}")
        for c in self.checks:
            lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}  ({c['paper_ref']})")
            for w in c["witnesses"][:5]:
                lines.append(f"    witness: {json.dumps(w)}")
        for d in self.diagnostics:
            d = jsonable(d)
            lines.append(f"DIAGNOSTIC  {d.get('entry', '')} {d['code']}: {d['message']}")
        for key, value in self.result.items():
            if isinstance(value, str) and "\n" in value.strip():
                lines.append(f"{key}:")
                lines.extend("    " + line for line in value.strip().splitlines())
                continue
            rendered = value if isinstance(value, str) else json.dumps(jsonable(value))
            lines.append(f"{key}: {rendered}")
        if self.error is not None:
            loc = ""
            if self.error.get("line") is not None:
                loc = f" (line {self.error['line']}, column {self.error.get('column')})"
            lines.append(f"ERROR  {self.error['type']}: {self.error['message']}{loc}")
        lines.append(f"exit: {self.exit_code}")
        return "\n".join(lines) + "\n"


# -- helpers ---------------------------------------------------------------------------

def _load(path: str) -> Workspace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from err
    return Workspace(language.parse(text))


def _table(g) -> dict:
    return g.bracket_table()


def _lsa_table(A) -> dict:
    return {f"{a}*{b}": language.format_terms(language._terms_of(A.labels, v)) for (a, b), v in A.table().items()}


def _connection_table(g, nabla) -> dict:
    out = {}
    for i in range(g.dim):
        for j in range(g.dim):
            v = nabla(g.basis(i), g.basis(j))
            if any(v):
                out[f"nabla_{g.labels[i]} {g.labels[j]}"] = g.format_vector(v)
    return out


def _split_and_j(ws: Workspace, split_name: str, j_name: str):
    decl = ws.split_decl(split_name)
    split = ws.split(split_name)
    j = ws.map(j_name, decl.h, decl.k)
    return split, j


# -- commands --------------------------------------------------------------------------

def cmd_check_jacobi(args, report: Report) -> None:
    g = _load(args.file).algebra(args.name, validate=False)
    bad = jacobi_violations(g)
    report.check("jacobi", not bad, [([g.labels[t] for t in triple], g.format_vector(v)) for triple, v in bad])


def cmd_build_semidirect(args, report: Report) -> None:
    ws = _load(args.file)
    h, k = ws.algebra(args.h), ws.algebra(args.k)
    pi = ws.rep(args.rep, args.h, args.k)
    try:
        split = semidirect_product(h, k, pi, tuple(h.labels) + tuple(k.labels)
                                   if not set(h.labels) & set(k.labels) else None)
    except StructureError as err:
        report.check("semidirect", False, [str(err), err.witness])
        return
    report.check("semidirect", True)
    report.result["brackets"] = _table(split.g)
    report.result["definition"] = language.serialize(language.Document([language.algebra_decl("g", split.g)]))


def _integrability(report: Report, split, j):
    rep = integrability_report(split, j)
    report.check("integrability", rep.integrable, detail=f"equivalence_holds={rep.equivalence_holds}")
    labels_k = split.k.labels
    report.check("integrability:J_integrable", rep.J_integrable, rep.J_witnesses[:5])
    report.check("integrability:E_integrable", rep.E_integrable, rep.E_witnesses[:5])
    report.check("integrability:k_abelian", rep.k_abelian,
                 [{"pair": list(pair), "jx": split.k.format_vector(jx), "jy": split.k.format_vector(jy),
                   "bracket": split.k.format_vector(br)} for pair, jx, jy, br in rep.k_witnesses[:5]]
                 or ([] if rep.k_abelian else [list(labels_k)]))
    report.check("integrability:j_cocycle", rep.j_cocycle, rep.cocycle_witnesses[:5])
    return rep


def cmd_check_integrable(args, report: Report) -> None:
    split, j = _split_and_j(_load(args.file), args.split, args.j)
    _integrability(report, split, j)


def cmd_connection_canonical(args, report: Report) -> None:
    split, j = _split_and_j(_load(args.file), args.split, args.j)
    try:
        nabla = canonical_connection(split, j)
    except NotIntegrable as err:
        report.check("canonical_connection", False, [str(err)])
        _integrability(report, split, j)
        return
    g = split.g
    report.check("canonical_connection:torsion_free", not torsion_witnesses(g, nabla), torsion_witnesses(g, nabla))
    report.check("canonical_connection:flat", not curvature_witnesses(g, nabla), curvature_witnesses(g, nabla)[:5])
    for S in (make_F(split), make_J(split, j), make_E(split, j)):
        report.check(f"canonical_connection:{S.name}_parallel", is_parallel(g, nabla, S))
    report.result["connection"] = _connection_table(g, nabla)


def cmd_report_parallel(args, report: Report) -> None:
    split, j = _split_and_j(_load(args.file), args.split, args.j)
    rep = parallel_connection_report(split, j)
    report.check("parallel_connection", rep.agree, detail=dict(zip(
        ("FJ_exists", "FE_exists", "EJ_exists", "J_integrable", "E_integrable"), rep.statements)))
    report.check("parallel_connection:J_integrable", rep.J_integrable)
    if rep.J_integrable:
        report.check("parallel_connection:unique_and_canonical", all(rep.unique.values()) and rep.matches_canonical)
    report.result["ranks"] = rep.ranks
    report.result["unique"] = rep.unique


def cmd_lsa_from_j(args, report: Report) -> None:
    split, j = _split_and_j(_load(args.file), args.split, args.j)
    rep = _integrability(report, split, j)
    if not rep.integrable:
        return
    A = lsa_from_totally_real(split, j)
    comp = is_compatible(A, split.h)
    report.check("lsa_compatible", comp.compatible, comp.mismatches)
    report.check("lsa_axioms", not left_symmetry_witnesses(A) and left_mult_checks(A, split.h).holds
                 and alpha_homomorphism_check(A, split.h))
    report.result["products"] = _lsa_table(A)
    report.result["definition"] = language.serialize(language.Document([language.lsa_decl("A", A)]))


def cmd_semidirect_from_lsa(args, report: Report) -> None:
    ws = _load(args.file)
    A = ws.lsa(args.lsa, validate=False)
    bad = left_symmetry_witnesses(A)
    report.check("lsa_axioms", not bad, bad[:5])
    if bad:
        return
    theta = ws.map(args.theta, args.lsa, None) if args.theta else None
    if theta is not None and theta.shape != (A.dim, A.dim):
        raise UsageError("theta must be a square map on the LSA")
    built = semidirect_from_lsa(A, theta)
    report.check("semidirect_table", True)
    _integrability(report, built.split, built.theta)
    report.result["brackets"] = _table(built.split.g)


def cmd_cocycles(args, report: Report) -> None:
    ws = _load(args.file)
    h = ws.algebra(args.h)
    pi = ws.rep(args.rep, args.h)
    space = cocycle_space(h, pi, nonsingular=args.nonsingular, bound=args.bound)
    report.result["dimension"] = space.dim
    report.result["basis"] = space.basis
    if args.nonsingular:
        found = space.nonsingular is not None
        report.check("cocycles:nonsingular", found, [] if found else [f"none within bound {args.bound}"],
                     tried=space.candidates_tried)
        if found:
            report.result["nonsingular"] = space.nonsingular
    else:
        report.check("cocycles", True)


def cmd_check_kahler(args, report: Report) -> None:
    ws = _load(args.file)
    split, j = _split_and_j(ws, args.split, args.j)
    inner = ws.form(args.inner, ws.split_decl(args.split).h)
    closed = kahler_closedness_report(split, j, inner)
    report.check("closedness", closed.agree and closed.omega_J_closed, closed.equation_witnesses[:5],
                 detail=dict(zip(("omega_J", "omega_E", "omega_F", "algebraic"), closed.statements)))
    rep = kahler_check(split, j, inner)
    report.check("kahler", rep.kahler, detail=rep)


def cmd_chu(args, report: Report) -> None:
    ws = _load(args.file)
    h = ws.algebra(args.h)
    omega = ws.form(args.form, args.h)
    if not report.check("symplectic", is_symplectic(h, omega)):
        return
    nabla = chu_connection(h, omega)
    report.check("chu:torsion_free", not torsion_witnesses(h, nabla), torsion_witnesses(h, nabla))
    report.check("chu:flat", not curvature_witnesses(h, nabla), curvature_witnesses(h, nabla)[:5])
    report.result["connection"] = _connection_table(h, nabla)


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def cmd_catalog_verify(args, report: Report) -> None:
    params = _parse_params(args.param)
    report.inputs["params"] = params
    agg = catalog.verify_all(args.filter, params)
    if not agg.results:
        raise UsageError(f"no catalog entry matches {args.filter!r}")
    for res in agg.results:
        label = res.name + "".join(f"[{k}={jsonable(v)}]" for k, v in res.params.items())
        for c in res.checks:
            report.check(c.name, c.passed, c.witnesses, ref=c.paper_ref, entry=label, detail=c.detail)
        for code in sorted(res.missing_diagnostics):
            report.check("diagnostic_expected", False, [code], ref="expected misprint diagnostic", entry=label)
        for code in sorted(res.unexpected_diagnostics):
            report.check("diagnostic_unexpected", False, [code], ref="unexpected diagnostic", entry=label)
        for d in res.diagnostics:
            report.diagnostics.append({"entry": label, "code": d.code, "message": d.message,
                                       "witnesses": jsonable(d.witnesses)})
    report.result["entries"] = {r.name + "".join(f"[{k}={jsonable(v)}]" for k, v in r.params.items()):
                                ("ok" if r.ok else "FAILED") for r in agg.results}


def cmd_catalog_list(args, report: Report) -> None:
    report.result["entries"] = {name: catalog.build(name).summary for name in catalog.NAMES}


def cmd_catalog_export(args, report: Report) -> None:
    entry = catalog.build(args.name, _parse_params(args.param))
    report.result["definition"] = language.serialize(language.document_from_entry(entry))


COMMANDS = {
    ("check", "jacobi"): cmd_check_jacobi,
    ("check", "integrable"): cmd_check_integrable,
    ("check", "kahler"): cmd_check_kahler,
    ("build", "semidirect"): cmd_build_semidirect,
    ("connection", "canonical"): cmd_connection_canonical,
    ("report", "parallel-connection"): cmd_report_parallel,
    ("lsa", "from-j"): cmd_lsa_from_j,
    ("semidirect", "from-lsa"): cmd_semidirect_from_lsa,
    ("cocycles",): cmd_cocycles,
    ("chu",): cmd_chu,
    ("catalog", "verify"): cmd_catalog_verify,
    ("catalog", "list"): cmd_catalog_list,
    ("catalog", "export"): cmd_catalog_export,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message:
            raise UnknownCommand(message)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semidirect", description="Exact checks for complex and paracomplex structures on "
                                                    "semidirect products, LSAs and affine connections.")
    parser.add_argument("--format", choices=("text", "json"), default=None,
                        help=f"output format (default: ${FORMAT_ENV} or text)")
    groups = parser.add_subparsers(dest="group", parser_class=_Parser)

    def sub(group_parser, name, *positionals, help=None):
        p = group_parser.add_parser(name, help=help)
        for pos in positionals:
            p.add_argument(pos)
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return p

    check = groups.add_parser("check").add_subparsers(dest="action", parser_class=_Parser)
    sub(check, "jacobi", "file", "name", help="Jacobi identity of a declared algebra")
    sub(check, "integrable", "file", "split", "j", help="integrability of J and E versus the cocycle criterion")
    sub(check, "kahler", "file", "split", "j", "inner", help="closedness of the fundamental forms and Kähler test")
    build = groups.add_parser("build").add_subparsers(dest="action", parser_class=_Parser)
    sub(build, "semidirect", "file", "h", "k", "rep")
    conn = groups.add_parser("connection").add_subparsers(dest="action", parser_class=_Parser)
    sub(conn, "canonical", "file", "split", "j")
    rep = groups.add_parser("report").add_subparsers(dest="action", parser_class=_Parser)
    sub(rep, "parallel-connection", "file", "split", "j")
    lsa = groups.add_parser("lsa").add_subparsers(dest="action", parser_class=_Parser)
    sub(lsa, "from-j", "file", "split", "j")
    sd = groups.add_parser("semidirect").add_subparsers(dest="action", parser_class=_Parser)
    p = sub(sd, "from-lsa", "file", "lsa")
    p.add_argument("--theta", default=None)
    p = sub(groups, "cocycles", "file", "h", "rep")
    p.add_argument("--nonsingular", action="store_true")
    p.add_argument("--bound", type=int, default=2)
    sub(groups, "chu", "file", "h", "form")
    cat = groups.add_parser("catalog").add_subparsers(dest="action", parser_class=_Parser)
    p = sub(cat, "verify")
    p.add_argument("--filter", default="*")
    p.add_argument("--param", action="append", default=[])
    sub(cat, "list")
    p = sub(cat, "export", "name")
    p.add_argument("--param", action="append", default=[])
    return parser


def dispatch(argv: list[str]) -> Report:
    """Run one command and return its report; never raises for user errors."""
    report = Report(" ".join(a for a in argv[:2] if not a.startswith("-")) or "(none)")
    try:
        args = build_parser().parse_args(argv)
        key = tuple(k for k in (args.group, getattr(args, "action", None)) if k)
        handler = COMMANDS.get(key)
        if handler is None:
            raise UnknownCommand(f"unknown command {' '.join(key) or '(none)'!r}")
        report.command = " ".join(key)
        report.inputs = {k: v for k, v in vars(args).items() if k not in ("group", "action", "format", "param")}
        report.format = args.format
        handler(args, report)
    except DefinitionError as err:
        report.error = {"type": type(err).__name__, "message": err.message, "line": err.line, "column": err.column}
    except (UsageError, UnknownCommand, KeyError) as err:
        message = err.args[0] if isinstance(err, KeyError) and err.args else str(err)
        report.error = {"type": type(err).__name__, "message": str(message)}
    except InternalEquivalenceViolation:
        raise
    except (StructureError, LinAlgError) as err:
        report.error = {"type": type(err).__name__, "message": str(err), "witness": jsonable(err.__dict__.get("witness"))}
    return report


def _scan_format(argv: list[str]) -> str | None:
    # the report of a failed parse still honours --format
    for i, arg in enumerate(argv):
        if arg.startswith("--format="):
            return arg.split("=", 1)[1]
        if arg == "--format" and i + 1 < len(argv):
            return argv[i + 1]
    return None


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report = dispatch(argv)
    fmt = getattr(report, "format", None) or _scan_format(argv) or os.environ.get(FORMAT_ENV, "text")
    if fmt not in ("text", "json"):
        fmt = "text"
    if fmt == "json":
        out = json.dumps(report.to_json(), indent=2) + "\n"
    elif report.command == "catalog export" and report.error is None:
        # bare definition text, ready to be passed back as <file>
        out = report.result["definition"]
    else:
        out = report.to_text()
    sys.stdout.write(out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
