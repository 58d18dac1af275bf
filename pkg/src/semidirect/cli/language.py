"""Line-oriented definition language for algebras, representations, maps, LSAs and forms.

One declaration per line; ``#`` starts a comment.  ``bracket`` and ``product`` lines attach
to an earlier ``algebra`` / ``lsa`` declaration.  Every coefficient is an exact rational
(``3``, ``-1/2``); decimal literals are rejected.

::

    algebra h dim 3 basis e1 e2 e3
    bracket h [e1,e2] = e2
    bracket h [e1,e3] = -1 e3
    algebra k dim 3 basis v1 v2 v3
    rep pi : h on k matrices [[[0,0,0],[0,1,0],[0,0,-1]];[[0,0,0],[0,0,0],[0,0,0]];[[0,0,0],[0,0,0],[0,0,0]]]
    split s : h k by pi
    map j : h -> k matrix [[1,0,0],[0,1,0],[0,0,1]]
    form inner on h sym matrix [[1,0,0],[0,1,0],[0,0,1]]
    lsa A dim 2 basis e1 e2
    product A e1*e2 = e2
    param lam = 1/2
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..geometry import BilinearForm
from ..lie import LieAlgebra, Representation, SplitAlgebra, adjoint_representation, coadjoint_representation, \
    semidirect_product
from ..linalg import Matrix, format_rational
from ..lsa import LSAProduct


class DefinitionError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


class ParseError(DefinitionError):
    pass


class DuplicateName(DefinitionError):
    pass


class UnresolvedReference(DefinitionError):
    pass


class NonRational(DefinitionError):
    pass


# -- declarations ----------------------------------------------------------------------

Terms = tuple  # ((basis_id, Fraction), ...)


@dataclass
class AlgebraDecl:
    name: str
    basis: tuple
    brackets: dict = field(default_factory=dict)   # (a, b) -> Terms
    line: int = field(default=0, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class LSADecl:
    name: str
    basis: tuple
    products: dict = field(default_factory=dict)   # (a, b) -> Terms
    line: int = field(default=0, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class MapDecl:
    name: str
    source: str
    target: str
    matrix: tuple
    line: int = field(default=0, compare=False)


@dataclass
class RepDecl:
    name: str
    algebra: str
    space: str
    matrices: tuple
    line: int = field(default=0, compare=False)


@dataclass
class FormDecl:
    name: str
    algebra: str
    symmetry: str
    matrix: tuple
    line: int = field(default=0, compare=False)


@dataclass
class SplitDecl:
    name: str
    h: str
    k: str
    rep: str
    line: int = field(default=0, compare=False)


@dataclass
class ParamDecl:
    name: str
    value: Fraction
    line: int = field(default=0, compare=False)


KINDS = {AlgebraDecl: "algebra", LSADecl: "lsa", MapDecl: "map", RepDecl: "rep", FormDecl: "form",
         SplitDecl: "split", ParamDecl: "param"}

# representations available on any algebra without a declaration
BUILTIN_REPS = ("ad", "coad")


@dataclass
class Document:
    declarations: list = field(default_factory=list)

    def names(self) -> dict:
        return {d.name: d for d in self.declarations}

    def get(self, name: str, kind: type | None = None):
        decl = self.names().get(name)
        if decl is None:
            raise UnresolvedReference(f"no declaration named {name!r}")
        if kind is not None and not isinstance(decl, kind):
            raise UnresolvedReference(f"{name!r} is a {KINDS[type(decl)]}, expected a {KINDS[kind]}", decl.line)
        return decl


# -- tokenizer -------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<decimal>\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<arrow>->)
  | (?P<punct>[\[\],=+\-*:;])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind == "decimal":
            raise NonRational(f"decimal literal {m.group()!r}; write an exact fraction such as 1/2", line, pos + 1)
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token], line: int, width: int):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.width = width

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def column(self) -> int:
        tok = self.peek()
        return tok.column if tok else self.width + 1

    def fail(self, message: str, cls=ParseError):
        raise cls(message, self.line, self.column())

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail(f"expected {what}, found end of line")
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text if tok else 'end of line'!r}")
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False

    def ident(self, what: str = "a name") -> Token:
        tok = self.next(what)
        if tok.kind != "ident":
            self.i -= 1
            self.fail(f"expected {what}, found {tok.text!r}")
        return tok

    def integer(self, what: str) -> int:
        tok = self.next(what)
        if tok.kind != "number" or "/" in tok.text:
            self.i -= 1
            self.fail(f"expected {what}, found {tok.text!r}")
        return int(tok.text)

    def rational(self) -> Fraction:
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        tok = self.next("a rational number")
        if tok.kind != "number":
            self.i -= 1
            self.fail(f"expected a rational number, found {tok.text!r}", NonRational)
        num, _, den = tok.text.partition("/")
        if den and int(den) == 0:
            self.i -= 1
            self.fail("zero denominator", NonRational)
        return sign * Fraction(int(num), int(den or 1))

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            self.fail(f"unexpected {tok.text!r} at end of declaration")


# -- grammar pieces --------------------------------------------------------------------

def _terms(cur: _Cursor, basis: tuple) -> Terms:
    """``term ((+|-) term)*`` with ``term = [rational] id``, or the literal ``0``."""
    tok = cur.peek()
    if tok is not None and tok.text == "0" and cur.i + 1 == len(cur.tokens):
        cur.i += 1
        return ()
    coeffs: dict[str, Fraction] = {}
    sign = 1
    if cur.accept("-"):
        sign = -1
    while True:
        tok = cur.peek()
        coeff = Fraction(sign)
        if tok is not None and tok.kind == "number":
            coeff *= cur.rational()
        elif tok is not None and tok.text == "-":
            cur.i += 1
            coeff = -coeff
            if cur.peek() is not None and cur.peek().kind == "number":
                coeff *= cur.rational()
        name = cur.ident("a basis element")
        if name.text not in basis:
            raise UnresolvedReference(f"{name.text!r} is not a basis element", cur.line, name.column)
        coeffs[name.text] = coeffs.get(name.text, Fraction(0)) + coeff
        if cur.accept("+"):
            sign = 1
        elif cur.accept("-"):
            sign = -1
        else:
            break
    return tuple((b, coeffs[b]) for b in basis if coeffs.get(b, 0) != 0)


def _matrix(cur: _Cursor) -> tuple:
    cur.expect("[")
    rows = []
    while True:
        cur.expect("[")
        row = [cur.rational()]
        while cur.accept(","):
            row.append(cur.rational())
        cur.expect("]")
        rows.append(tuple(row))
        if not cur.accept(","):
            break
    cur.expect("]")
    if len({len(r) for r in rows}) != 1:
        cur.fail("matrix rows have different lengths")
    return tuple(rows)


def _basis(cur: _Cursor, n: int) -> tuple:
    cur.expect("basis")
    names = []
    while cur.peek() is not None:
        tok = cur.ident("a basis element")
        if tok.text in names:
            raise DuplicateName(f"basis element {tok.text!r} repeated", cur.line, tok.column)
        names.append(tok.text)
    if len(names) != n:
        raise ParseError(f"dim {n} but {len(names)} basis elements", cur.line, cur.column())
    return tuple(names)


def _pair(cur: _Cursor, basis: tuple, open_: str, sep: str, close: str) -> tuple[str, str]:
    if open_:
        cur.expect(open_)
    a = cur.ident("a basis element")
    cur.expect(sep)
    b = cur.ident("a basis element")
    if close:
        cur.expect(close)
    for tok in (a, b):
        if tok.text not in basis:
            raise UnresolvedReference(f"{tok.text!r} is not a basis element", cur.line, tok.column)
    return a.text, b.text


def _parse_line(cur: _Cursor, doc: Document, names: dict) -> None:
    line = cur.line
    head = cur.ident("a declaration keyword")

    def declare(decl):
        if decl.name in names:
            raise DuplicateName(f"{decl.name!r} already declared on line {names[decl.name].line}", line,
                                cur.tokens[1].column)
        names[decl.name] = decl
        doc.declarations.append(decl)

    def owner(kind):
        tok = cur.ident("a name")
        decl = names.get(tok.text)
        if not isinstance(decl, kind):
            raise UnresolvedReference(f"no {KINDS[kind]} named {tok.text!r} declared above", line, tok.column)
        return decl

    keyword = head.text
    if keyword in ("algebra", "lsa"):
        name = cur.ident().text
        cur.expect("dim")
        n = cur.integer("a dimension")
        basis = _basis(cur, n)
        declare((AlgebraDecl if keyword == "algebra" else LSADecl)(name, basis, {}, line))
    elif keyword == "bracket":
        decl = owner(AlgebraDecl)
        col = cur.column()
        a, b = _pair(cur, decl.basis, "[", ",", "]")
        if a == b:
            raise ParseError(f"bracket of {a!r} with itself is zero by antisymmetry", line, col)
        if (a, b) in decl.brackets or (b, a) in decl.brackets:
            raise DuplicateName(f"bracket [{a},{b}] given twice", line, col)
        cur.expect("=")
        decl.brackets[(a, b)] = _terms(cur, decl.basis)
    elif keyword == "product":
        decl = owner(LSADecl)
        col = cur.column()
        a, b = _pair(cur, decl.basis, "", "*", "")
        if (a, b) in decl.products:
            raise DuplicateName(f"product {a}*{b} given twice", line, col)
        cur.expect("=")
        decl.products[(a, b)] = _terms(cur, decl.basis)
    elif keyword == "map":
        name = cur.ident().text
        cur.expect(":")
        src = cur.ident("a source algebra").text
        cur.expect("->")
        dst = cur.ident("a target algebra").text
        cur.expect("matrix")
        declare(MapDecl(name, src, dst, _matrix(cur), line))
    elif keyword == "rep":
        name = cur.ident().text
        cur.expect(":")
        alg = cur.ident("an algebra").text
        cur.expect("on")
        space = cur.ident("an algebra").text
        cur.expect("matrices")
        cur.expect("[")
        mats = [_matrix(cur)]
        while cur.accept(";"):
            mats.append(_matrix(cur))
        cur.expect("]")
        declare(RepDecl(name, alg, space, tuple(mats), line))
    elif keyword == "form":
        name = cur.ident().text
        cur.expect("on")
        alg = cur.ident("an algebra").text
        sym = cur.ident("sym or antisym")
        if sym.text not in ("sym", "antisym"):
            raise ParseError("expected sym or antisym", line, sym.column)
        cur.expect("matrix")
        declare(FormDecl(name, alg, sym.text, _matrix(cur), line))
    elif keyword == "split":
        name = cur.ident().text
        cur.expect(":")
        h = cur.ident("an algebra").text
        k = cur.ident("an algebra").text
        cur.expect("by")
        rep = cur.ident("a representation").text
        declare(SplitDecl(name, h, k, rep, line))
    elif keyword == "param":
        name = cur.ident().text
        cur.expect("=")
        declare(ParamDecl(name, cur.rational(), line))
    else:
        raise ParseError(f"unknown declaration {keyword!r}", line, head.column)
    cur.done()


def _check_references(doc: Document) -> None:
    names = doc.names()

    def need(name, kinds, line, builtin=()):
        if name in builtin and name not in names:
            return
        decl = names.get(name)
        if decl is None:
            raise UnresolvedReference(f"{name!r} is not declared", line)
        if not isinstance(decl, kinds):
            raise UnresolvedReference(f"{name!r} is a {KINDS[type(decl)]}", line)

    algebraic = (AlgebraDecl, LSADecl)
    for d in doc.declarations:
        if isinstance(d, MapDecl):
            need(d.source, algebraic, d.line)
            need(d.target, algebraic, d.line)
        elif isinstance(d, RepDecl):
            need(d.algebra, algebraic, d.line)
            need(d.space, algebraic, d.line)
        elif isinstance(d, FormDecl):
            need(d.algebra, algebraic, d.line)
        elif isinstance(d, SplitDecl):
            need(d.h, AlgebraDecl, d.line)
            need(d.k, AlgebraDecl, d.line)
            need(d.rep, RepDecl, d.line, BUILTIN_REPS)


def parse(text: str) -> Document:
    doc = Document()
    names: dict = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        tokens = tokenize(body, number)
        if tokens:
            _parse_line(_Cursor(tokens, number, len(body)), doc, names)
    _check_references(doc)
    return doc


# -- serializer ------------------------------------------------------------------------

def format_terms(terms: Terms) -> str:
    if not terms:
        return "0"
    parts = []
    for k, (name, c) in enumerate(terms):
        mag = abs(c)
        body = name if mag == 1 else f"{format_rational(mag)} {name}"
        if k == 0:
            parts.append(body if c > 0 else f"-1 {name}" if mag == 1 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def format_matrix(rows) -> str:
    return "[" + ",".join("[" + ",".join(format_rational(c) for c in row) + "]" for row in rows) + "]"


def _lines(decl) -> Iterator[str]:
    if isinstance(decl, (AlgebraDecl, LSADecl)):
        kw = "algebra" if isinstance(decl, AlgebraDecl) else "lsa"
        yield f"{kw} {decl.name} dim {decl.dim} basis {' '.join(decl.basis)}"
        if isinstance(decl, AlgebraDecl):
            for (a, b), t in decl.brackets.items():
                yield f"bracket {decl.name} [{a},{b}] = {format_terms(t)}"
        else:
            for (a, b), t in decl.products.items():
                yield f"product {decl.name} {a}*{b} = {format_terms(t)}"
    elif isinstance(decl, MapDecl):
        yield f"map {decl.name} : {decl.source} -> {decl.target} matrix {format_matrix(decl.matrix)}"
    elif isinstance(decl, RepDecl):
        mats = ";".join(format_matrix(m) for m in decl.matrices)
        yield f"rep {decl.name} : {decl.algebra} on {decl.space} matrices [{mats}]"
    elif isinstance(decl, FormDecl):
        yield f"form {decl.name} on {decl.algebra} {decl.symmetry} matrix {format_matrix(decl.matrix)}"
    elif isinstance(decl, SplitDecl):
        yield f"split {decl.name} : {decl.h} {decl.k} by {decl.rep}"
    elif isinstance(decl, ParamDecl):
        yield f"param {decl.name} = {format_rational(decl.value)}"


def serialize(doc: Document) -> str:
    return "".join(line + "\n" for decl in doc.declarations for line in _lines(decl))


# -- conversion from package objects ---------------------------------------------------

def _terms_of(labels, v) -> Terms:
    return tuple((name, Fraction(c)) for name, c in zip(labels, v) if c != 0)


def algebra_decl(name: str, g: LieAlgebra) -> AlgebraDecl:
    return AlgebraDecl(name, tuple(g.labels),
                       {(g.labels[i], g.labels[j]): _terms_of(g.labels, v) for (i, j), v in sorted(g.constants.items())})


def lsa_decl(name: str, A: LSAProduct) -> LSADecl:
    products = {pair: _terms_of(A.labels, v) for pair, v in A.table().items()}
    return LSADecl(name, tuple(A.labels), products)


def _rows(M: Matrix) -> tuple:
    return tuple(tuple(M.row(i)) for i in range(M.rows))


def map_decl(name: str, source: str, target: str, M: Matrix) -> MapDecl:
    return MapDecl(name, source, target, _rows(M))


def rep_decl(name: str, algebra: str, space: str, pi: Representation) -> RepDecl:
    return RepDecl(name, algebra, space, tuple(_rows(M) for M in pi.matrices))


def form_decl(name: str, algebra: str, form: BilinearForm) -> FormDecl:
    return FormDecl(name, algebra, form.symmetry, _rows(form.B))


# -- resolution to package objects -----------------------------------------------------

def _matrix_of(rows) -> Matrix:
    return Matrix([list(r) for r in rows])


def _vector(basis, terms: Terms) -> tuple:
    index = {b: i for i, b in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for name, c in terms:
        v[index[name]] += c
    return tuple(v)


class Workspace:
    """Builds package objects from a parsed document on demand."""

    def __init__(self, doc: Document):
        self.doc = doc
        self.names = doc.names()

    def _decl(self, name: str, kind: type):
        decl = self.names.get(name)
        if decl is None:
            raise UnresolvedReference(f"no declaration named {name!r}")
        if not isinstance(decl, kind):
            raise UnresolvedReference(f"{name!r} is a {KINDS[type(decl)]}, expected a {KINDS[kind]}", decl.line)
        return decl

    def algebra(self, name: str, validate: bool = True) -> LieAlgebra:
        d = self._decl(name, AlgebraDecl)
        constants = {(d.basis.index(a), d.basis.index(b)): _vector(d.basis, t) for (a, b), t in d.brackets.items()}
        # normalize reversed pairs to i < j
        fixed = {}
        for (i, j), v in constants.items():
            fixed[(i, j) if i < j else (j, i)] = v if i < j else tuple(-c for c in v)
        return LieAlgebra(d.dim, fixed, d.basis, validate=validate)

    def lsa(self, name: str, validate: bool = True) -> LSAProduct:
        d = self._decl(name, LSADecl)
        products = {pair: dict(t) for pair, t in d.products.items()}
        return LSAProduct.from_labels(d.basis, products, validate=validate)

    def dim_of(self, name: str) -> int:
        decl = self.names.get(name)
        if isinstance(decl, (AlgebraDecl, LSADecl)):
            return decl.dim
        raise UnresolvedReference(f"{name!r} is not an algebra")

    def map(self, name: str, source: str | None = None, target: str | None = None) -> Matrix:
        d = self._decl(name, MapDecl)
        M = _matrix_of(d.matrix)
        if M.shape != (self.dim_of(d.target), self.dim_of(d.source)):
            raise ParseError(f"map {name!r} needs shape {self.dim_of(d.target)}x{self.dim_of(d.source)}, "
                             f"got {M.rows}x{M.cols}", d.line)
        for want, have, role in ((source, d.source, "source"), (target, d.target, "target")):
            if want is not None and want != have:
                raise UnresolvedReference(f"map {name!r} has {role} {have!r}, expected {want!r}", d.line)
        return M

    def rep(self, name: str, algebra: str, space: str | None = None) -> Representation:
        h = self.algebra(algebra)
        if name not in self.names and name in BUILTIN_REPS:
            return adjoint_representation(h) if name == "ad" else coadjoint_representation(h)
        d = self._decl(name, RepDecl)
        if d.algebra != algebra or (space is not None and d.space != space):
            raise UnresolvedReference(f"rep {name!r} is declared on {d.algebra} acting on {d.space}", d.line)
        mats = [_matrix_of(m) for m in d.matrices]
        m = self.dim_of(d.space)
        if any(M.shape != (m, m) for M in mats) or len(mats) != h.dim:
            raise ParseError(f"rep {name!r} needs {h.dim} matrices of size {m}x{m}", d.line)
        return Representation(h, mats, m)

    def form(self, name: str, algebra: str | None = None) -> BilinearForm:
        d = self._decl(name, FormDecl)
        if algebra is not None and d.algebra != algebra:
            raise UnresolvedReference(f"form {name!r} lives on {d.algebra!r}, expected {algebra!r}", d.line)
        M = _matrix_of(d.matrix)
        n = self.dim_of(d.algebra)
        if M.shape != (n, n):
            raise ParseError(f"form {name!r} needs shape {n}x{n}", d.line)
        return BilinearForm(M, d.symmetry)

    def split_decl(self, name: str) -> SplitDecl:
        return self._decl(name, SplitDecl)

    def split(self, name: str) -> SplitAlgebra:
        d = self._decl(name, SplitDecl)
        h, k = self.algebra(d.h), self.algebra(d.k)
        pi = self.rep(d.rep, d.h, d.k)
        if d.rep in BUILTIN_REPS and d.rep not in self.names and k.dim != h.dim:
            raise ParseError(f"builtin rep {d.rep!r} needs k of dimension {h.dim}", d.line)
        return semidirect_product(h, k, pi, tuple(h.labels) + tuple(k.labels)
                                  if not set(h.labels) & set(k.labels) else None)

    def param(self, name: str) -> Fraction:
        return self._decl(name, ParamDecl).value


def document_from_entry(entry) -> Document:
    """Declarations for everything a catalog entry carries."""
    decls: list = []
    for key, value in entry.params.items():
        values = value if isinstance(value, tuple) else (value,)
        for i, v in enumerate(values, start=1):
            decls.append(ParamDecl(key if len(values) == 1 else f"{key}_{i}", Fraction(v)))
    if entry.split is not None:
        split = entry.split
        decls.append(algebra_decl("h", split.h))
        decls.append(algebra_decl("k", split.k))
        decls.append(rep_decl("pi", "h", "k", split.pi))
        decls.append(SplitDecl("hk", "h", "k", "pi"))
        if entry.j is not None:
            decls.append(map_decl("j", "h", "k", entry.j))
    decls.append(algebra_decl("g", entry.algebra))
    if entry.lsa is not None:
        decls.append(lsa_decl("A", entry.lsa))
    if entry.inner is not None:
        decls.append(form_decl("inner", "h" if entry.split is not None else "g", entry.inner))
    if entry.omega is not None:
        decls.append(form_decl("omega", "g", entry.omega))
    return Document(decls)
