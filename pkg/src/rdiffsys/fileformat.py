"""Text format for systems, candidates and hints.

A file is a list of ``;``-terminated statements; ``#`` starts a comment::

    kind = total;            # total | pde | rlinear
    m = 1;
    n = 2;
    X1[1][1] = w1^2 + w2*~w2;        # dw_xi = X1[xi][j] dz_j + X2[xi][j] d~z_j
    X2[2][1] = ~w1*(w2 + ~w2);
    op[1] += z1*~z2 * d(z1);         # pde: coefficient of a partial, summed
    A[1][2] = (0, 1, 0, 0);          # rlinear: row 2 of matrix 1
    A[1][3][4] = 1;                  # rlinear: single entry
    point z1 = 0;
    point w1 = 1;
    candidate F { role = first; profile = z1, ~w2; expr = z1*~w1 + ~w2^2; }
    hint H[1] = (w1 + ~w2)*(w1 + w2);
    hint eigenvalue[1] = 1;
    hint chain = (-1, 1, -1, 0), (1, 0, -1, -1);
    hint zeta = 1;
    hint deg_bound = 2;
    hint order = 8;
    hint profile = w1, ~w2;
    hint role = partial;

Expressions use ``z<k>``, ``w<k>``, the prefix ``~`` for conjugates, ``i``,
integers, ``+ - * / ^`` and parentheses.  ``^`` takes an integer or a
parenthesized constant (rational or complex), the latter giving a power
product; ``exp(R)`` is allowed in candidate expressions.  ``~(...)``
conjugates a whole subexpression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .darboux import DarbouxExpr
from .errors import ParseError, ScopeError
from .numbers import GaussianRational, I, as_gaussian
from .operators import DiffOperator
from .poly import RPoly, RRational, as_rational, var
from .systems import PdeSystem, RLinearPdeSystem, TotalSystem

__all__ = ["SystemFile", "CandidateSpec", "Hints", "parse_system_file", "parse_hints", "parse_expr", "render", "load"]

KINDS = ("total", "pde", "rlinear")
ROLES = ("first", "partial", "multiplier")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<var>~?[zw][0-9]+)
  | (?P<num>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\+=|[-+*/^()\[\]{}=;,~])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = mt.lastgroup
        if kind == "nl":
            line += 1
            start = mt.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, mt.group(), line, pos - start + 1))
        pos = mt.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------- data


@dataclass
class CandidateSpec:
    name: str
    role: str
    profile: tuple  # RVariables, sorted
    expr: object  # RPoly | RRational | DarbouxExpr


@dataclass
class Hints:
    H: dict = field(default_factory=dict)  # 1-based operator index -> expr
    eigenvalues: dict = field(default_factory=dict)  # 1-based matrix index -> list
    chains: list = field(default_factory=list)  # each a list of vectors
    zeta: int | None = None  # 1-based
    deg_bound: int | None = None
    order: int | None = None
    profile: tuple | None = None
    role: str | None = None

    def merge(self, other: "Hints") -> "Hints":
        """Values from ``other`` take precedence; lists are concatenated."""
        out = Hints(dict(self.H), {k: list(v) for k, v in self.eigenvalues.items()}, list(self.chains))
        out.H.update(other.H)
        for k, v in other.eigenvalues.items():
            out.eigenvalues.setdefault(k, []).extend(v)
        out.chains += other.chains
        for name in ("zeta", "deg_bound", "order", "profile", "role"):
            val = getattr(other, name)
            setattr(out, name, val if val is not None else getattr(self, name))
        return out


@dataclass
class SystemFile:
    kind: str = ""
    m: int | None = None
    n: int | None = None
    X1: dict = field(default_factory=dict)  # (xi, j) 1-based -> expr
    X2: dict = field(default_factory=dict)
    ops: dict = field(default_factory=dict)  # j -> {var: expr}
    matrices: dict = field(default_factory=dict)  # j -> {(l, k): value}
    point: dict = field(default_factory=dict)
    candidates: list = field(default_factory=list)
    hints: Hints = field(default_factory=Hints)

    @property
    def num_operators(self) -> int:
        if self.kind == "pde":
            return self.m if self.m is not None else max(self.ops, default=0)
        if self.kind == "rlinear":
            return self.m if self.m is not None else max(self.matrices, default=0)
        return 2 * (self.m or 0)

    def system(self):
        if self.kind == "total":
            zero = RPoly()
            X1 = [[self.X1.get((xi, j), zero) for j in range(1, self.m + 1)] for xi in range(1, self.n + 1)]
            X2 = [[self.X2.get((xi, j), zero) for j in range(1, self.m + 1)] for xi in range(1, self.n + 1)]
            return TotalSystem(self.m, self.n, X1, X2)
        if self.kind == "pde":
            ops = [DiffOperator(self.ops.get(j, {})) for j in range(1, self.num_operators + 1)]
            return PdeSystem(self.n, ops)
        size = 2 * self.n
        mats = []
        for j in range(1, self.num_operators + 1):
            entries = self.matrices.get(j, {})
            mats.append([[entries.get((l, k), 0) for k in range(1, size + 1)] for l in range(1, size + 1)])
        return RLinearPdeSystem(self.n, mats)

    def candidate(self, name: str | None = None) -> CandidateSpec:
        if not self.candidates:
            raise ParseError("file has no candidate block")
        if name is None:
            return self.candidates[0]
        for c in self.candidates:
            if c.name == name:
                return c
        raise ParseError(f"no candidate named {name!r}")


# ---------------------------------------------------------------- expressions


def _is_const(x) -> bool:
    if isinstance(x, GaussianRational):
        return True
    if isinstance(x, RPoly):
        return x.is_constant()
    if isinstance(x, RRational):
        return x.is_constant()
    return False


def _const(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, RPoly):
        return x.constant_term()
    return x.constant_value()


def _darboux(x) -> DarbouxExpr:
    if isinstance(x, DarbouxExpr):
        return x
    return DarbouxExpr.from_rational(as_rational(x))


def _simplify(x):
    if isinstance(x, DarbouxExpr):
        if x.is_rational():
            return _simplify(x.to_rational())
        return x
    if isinstance(x, RRational) and x.is_polynomial():
        return x.num
    if isinstance(x, GaussianRational):
        return RPoly(x)
    return x


class _ExprParser:
    def __init__(self, tokens: list[Token], pos: int = 0, allow_darboux: bool = True):
        self.toks = tokens
        self.pos = pos
        self.allow_darboux = allow_darboux

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg, tok: Token | None = None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.cur.text != text or self.cur.kind == "eof":
            self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        t = self.cur
        self.pos += 1
        return t

    def parse(self):
        return _simplify(self.sum())

    def sum(self):
        tok = self.cur
        acc = self.product()
        while self.cur.text in ("+", "-"):
            op = self.cur
            self.pos += 1
            rhs = self.product()
            acc = self._add(acc, rhs if op.text == "+" else self._neg(rhs), tok)
        return acc

    def _neg(self, x):
        return x * -1 if not isinstance(x, DarbouxExpr) else self._add(RPoly(), x, self.cur, negate=True)

    def _add(self, a, b, tok, negate=False):
        if isinstance(a, DarbouxExpr) or isinstance(b, DarbouxExpr):
            da, db = _simplify(a), _simplify(b)
            if isinstance(da, DarbouxExpr) or isinstance(db, DarbouxExpr):
                self.error("sums of power products or exponentials are not supported", tok)
            a, b = da, db
        return a - b if negate else a + b

    def product(self):
        acc = self.unary()
        while self.cur.text in ("*", "/"):
            op = self.cur
            self.pos += 1
            rhs = self.unary()
            if op.text == "*":
                acc = self._mul(acc, rhs)
            else:
                if _is_const(rhs) and not _const(rhs):
                    self.error("division by zero", op)
                acc = self._div(acc, rhs)
        return acc

    def _mul(self, a, b):
        if isinstance(a, DarbouxExpr) or isinstance(b, DarbouxExpr):
            return _darboux(a) * _darboux(b)
        return a * b

    def _div(self, a, b):
        if isinstance(a, DarbouxExpr) or isinstance(b, DarbouxExpr):
            return _darboux(a) / _darboux(b)
        if _is_const(b):
            return a * _const(b).inverse()
        return as_rational(a) / as_rational(b)

    def unary(self):
        if self.cur.text == "-":
            self.pos += 1
            x = self.unary()
            return self._mul(x, RPoly(-1))
        if self.cur.text == "+":
            self.pos += 1
            return self.unary()
        if self.cur.text == "~":
            self.pos += 1
            return self.unary().conjugate()
        return self.power()

    def power(self):
        base = self.atom()
        if self.cur.text != "^":
            return base
        op = self.cur
        self.pos += 1
        if self.cur.text == "(":
            self.pos += 1
            e = self.sum()
            self.expect(")")
        elif self.cur.text == "-":
            self.pos += 1
            e = RPoly(-1) * RPoly(int(self.expect_num().text))
        else:
            e = RPoly(int(self.expect_num().text))
        if not _is_const(e):
            self.error("exponent must be a constant", op)
        e = _const(e)
        if e.is_integer() and isinstance(base, (RPoly, RRational)):
            k = int(e.re)
            if self.allow_darboux and isinstance(base, RPoly) and not base.is_constant() and k:
                # stays factored; a purely rational result is expanded at the end
                return DarbouxExpr([(base, k)])
            if k >= 0:
                return base**k
            if _is_const(base) and not _const(base):
                self.error("zero to a negative power", op)
            return as_rational(base) ** k
        if not self.allow_darboux:
            self.error("non-integer exponent is not allowed here", op)
        return _darboux(base) ** e

    def expect_num(self) -> Token:
        if self.cur.kind != "num":
            self.error(f"expected a number, found {self.cur.text or 'end of input'!r}")
        t = self.cur
        self.pos += 1
        return t

    def atom(self):
        t = self.cur
        if t.kind == "num":
            self.pos += 1
            return RPoly(int(t.text))
        if t.kind == "var":
            self.pos += 1
            v = var(t.text)
            if v.index < 1:
                self.error(f"bad variable {t.text}", t)
            return RPoly.variable(v)
        if t.kind == "name" and t.text == "i":
            self.pos += 1
            return RPoly(I)
        if t.kind == "name" and t.text == "exp":
            self.pos += 1
            self.expect("(")
            arg = _simplify(self.sum())
            self.expect(")")
            if isinstance(arg, DarbouxExpr):
                self.error("exp argument must be a rational function", t)
            if not self.allow_darboux:
                self.error("exp is not allowed here", t)
            return DarbouxExpr([], as_rational(arg))
        if t.text == "(":
            self.pos += 1
            x = self.sum()
            self.expect(")")
            return x
        self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def parse_expr(text: str, allow_darboux: bool = True):
    """Parse a standalone expression into RPoly, RRational or DarbouxExpr."""
    toks = tokenize(text)
    p = _ExprParser(toks, 0, allow_darboux)
    x = p.parse()
    if p.cur.kind != "eof":
        p.error(f"unexpected {p.cur.text!r}")
    return x


# ---------------------------------------------------------------- statements


class _FileParser(_ExprParser):
    def __init__(self, text: str):
        super().__init__(tokenize(text))
        self.sf = SystemFile()
        self.where: dict = {}  # statement locations for scope errors

    def int_(self) -> int:
        neg = False
        if self.cur.text == "-":
            neg = True
            self.pos += 1
        v = int(self.expect_num().text)
        return -v if neg else v

    def index(self) -> int:
        self.expect("[")
        t = self.cur
        k = self.int_()
        if k < 1:
            self.error("indices start at 1", t)
        self.expect("]")
        return k

    def name(self) -> Token:
        if self.cur.kind != "name":
            self.error(f"expected a name, found {self.cur.text or 'end of input'!r}")
        t = self.cur
        self.pos += 1
        return t

    def expr_until(self, allow_darboux=False):
        self.allow_darboux = allow_darboux
        tok = self.cur
        if self.cur.text == ";":
            self.error("empty expression")
        x = self.parse()
        return x, tok

    def constant(self):
        tok = self.cur
        x = self.parse()
        if not _is_const(x):
            self.error("expected a constant", tok)
        return _const(x)

    def vector(self) -> tuple:
        self.expect("(")
        vals = [self.constant()]
        while self.cur.text == ",":
            self.pos += 1
            vals.append(self.constant())
        self.expect(")")
        return tuple(vals)

    def var_list(self) -> tuple:
        vs = []
        while True:
            t = self.cur
            if t.kind != "var":
                self.error(f"expected a variable, found {t.text or 'end of input'!r}")
            self.pos += 1
            vs.append(var(t.text))
            if self.cur.text != ",":
                break
            self.pos += 1
        return tuple(sorted(set(vs)))

    def run(self) -> SystemFile:
        while self.cur.kind != "eof":
            self.statement()
        self.finish()
        return self.sf

    def statement(self):
        t = self.cur
        sf = self.sf
        if t.kind == "name" and t.text in ("kind", "m", "n"):
            self.pos += 1
            self.expect("=")
            if t.text == "kind":
                k = self.name()
                if k.text not in KINDS:
                    self.error(f"unknown kind {k.text!r}", k)
                sf.kind = k.text
            else:
                v = self.int_()
                if v < 1:
                    self.error(f"{t.text} must be positive", t)
                setattr(sf, t.text, v)
        elif t.kind == "name" and t.text in ("X1", "X2"):
            self.pos += 1
            xi, j = self.index(), self.index()
            self.expect("=")
            x, tok = self.expr_until()
            getattr(sf, t.text)[(xi, j)] = x
            self.where[(t.text, xi, j)] = tok
        elif t.kind == "name" and t.text == "op":
            self.pos += 1
            j = self.index()
            self.expect("+=")
            self.op_term(j)
        elif t.kind == "name" and t.text == "A":
            self.pos += 1
            j, l = self.index(), self.index()
            entries = sf.matrices.setdefault(j, {})
            if self.cur.text == "[":
                k = self.index()
                self.expect("=")
                entries[(l, k)] = self.constant()
            else:
                self.expect("=")
                for k, v in enumerate(self.vector(), start=1):
                    entries[(l, k)] = v
        elif t.kind == "name" and t.text == "point":
            self.pos += 1
            v = self.cur
            if v.kind != "var" or v.text.startswith("~"):
                self.error("point assigns z<k> or w<k>")
            self.pos += 1
            self.expect("=")
            sf.point[var(v.text)] = self.constant()
        elif t.kind == "name" and t.text == "candidate":
            self.pos += 1
            self.candidate()
            return
        elif t.kind == "name" and t.text == "hint":
            self.pos += 1
            self.hint()
        else:
            self.error(f"unexpected {t.text or 'end of input'!r}")
        self.expect(";")

    def op_term(self, j: int):
        # the statement ends with "* d(var)"; everything before it is the coefficient
        end = self.pos
        depth = 0
        while self.toks[end].text != ";" or depth:
            if self.toks[end].kind == "eof":
                self.error("missing ';'")
            depth += {"(": 1, ")": -1}.get(self.toks[end].text, 0)
            end += 1
        tail = self.toks[end - 5 : end]
        if len(tail) < 5 or [x.text for x in tail[:3]] != ["*", "d", "("] or tail[3].kind != "var" or tail[4].text != ")":
            self.error("expected 'expr * d(var)'")
        if end - 5 == self.pos:
            self.error("empty expression")
        sub = _ExprParser(self.toks[: end - 5] + [Token("eof", "", tail[0].line, tail[0].col)], self.pos, False)
        coef = sub.parse()
        if sub.cur.kind != "eof":
            sub.error(f"unexpected {sub.cur.text!r}")
        v = var(tail[3].text)
        terms = self.sf.ops.setdefault(j, {})
        terms[v] = terms[v] + coef if v in terms else coef
        self.where[("op", j, v)] = self.toks[self.pos]
        self.pos = end

    def candidate(self):
        name = self.name().text
        self.expect("{")
        role, profile, expr, tok = None, None, None, self.cur
        while self.cur.text != "}":
            key = self.name()
            self.expect("=")
            if key.text == "role":
                r = self.name()
                if r.text not in ROLES:
                    self.error(f"unknown role {r.text!r}", r)
                role = r.text
            elif key.text == "profile":
                profile = self.var_list()
            elif key.text == "expr":
                expr, tok = self.expr_until(allow_darboux=True)
            else:
                self.error(f"unknown candidate field {key.text!r}", key)
            self.expect(";")
        self.expect("}")
        if role is None or expr is None:
            self.error(f"candidate {name} needs role and expr", tok)
        self.sf.candidates.append(CandidateSpec(name, role, profile, expr))
        self.where[("candidate", name)] = tok

    def hint(self):
        h = self.sf.hints
        key = self.name()
        if key.text == "H":
            l = self.index()
            self.expect("=")
            h.H[l], tok = self.expr_until()
            self.where[("H", l)] = tok
        elif key.text == "eigenvalue":
            j = self.index()
            self.expect("=")
            h.eigenvalues.setdefault(j, []).append(self.constant())
        elif key.text == "chain":
            self.expect("=")
            vs = [self.vector()]
            while self.cur.text == ",":
                self.pos += 1
                vs.append(self.vector())
            h.chains.append(vs)
        elif key.text in ("zeta", "deg_bound", "order"):
            self.expect("=")
            setattr(h, key.text, self.int_())
        elif key.text == "profile":
            self.expect("=")
            h.profile = self.var_list()
        elif key.text == "role":
            self.expect("=")
            r = self.name()
            if r.text not in ROLES:
                self.error(f"unknown role {r.text!r}", r)
            h.role = r.text
        else:
            self.error(f"unknown hint {key.text!r}", key)

    # ----- whole-file checks

    def finish(self):
        sf = self.sf
        end = self.cur
        if not sf.kind:
            raise ParseError("missing 'kind = ...;'", end.line, end.col)
        if sf.n is None:
            raise ParseError("missing 'n = ...;'", end.line, end.col)
        if sf.kind == "total" and sf.m is None:
            raise ParseError("missing 'm = ...;'", end.line, end.col)
        if sf.kind != "total" and (sf.X1 or sf.X2):
            raise ScopeError("X1/X2 entries need kind = total")
        if sf.kind != "pde" and sf.ops:
            raise ScopeError("op entries need kind = pde")
        if sf.kind != "rlinear" and sf.matrices:
            raise ScopeError("A entries need kind = rlinear")
        if sf.kind == "total":
            for key in list(sf.X1) + list(sf.X2):
                if key[0] > sf.n or key[1] > sf.m:
                    raise ScopeError(f"X[{key[0]}][{key[1]}] outside n = {sf.n}, m = {sf.m}")
        if sf.kind == "pde" and sf.m is not None and any(j > sf.m for j in sf.ops):
            raise ScopeError(f"operator index beyond m = {sf.m}")
        if sf.kind == "rlinear":
            size = 2 * sf.n
            for j, entries in sf.matrices.items():
                if sf.m is not None and j > sf.m:
                    raise ScopeError(f"matrix index beyond m = {sf.m}")
                for l, k in entries:
                    if l > size or k > size:
                        raise ScopeError(f"A[{j}][{l}][{k}] outside {size} x {size}")
        exprs = list(sf.X1.values()) + list(sf.X2.values()) + list(sf.hints.H.values())
        exprs += [c for t in sf.ops.values() for c in t.values()]
        exprs += [c.expr for c in sf.candidates]
        for x in exprs:
            self.scope(x.variables())
        self.scope(list(sf.point))
        for v in [v for t in sf.ops.values() for v in t]:
            self.scope([v])
        for c in sf.candidates:
            if c.profile is not None:
                self.scope(c.profile)
                stray = [v for v in c.expr.variables() if v not in c.profile]
                if stray:
                    raise ScopeError(
                        f"candidate {c.name} uses {', '.join(map(str, stray))} outside its profile"
                    )
        if sf.hints.profile is not None:
            self.scope(sf.hints.profile)

    def scope(self, vs):
        sf = self.sf
        for v in vs:
            if sf.kind == "total":
                limit = sf.n if v.dependent else sf.m
            else:
                limit = 0 if v.dependent else sf.n
            if v.index > limit:
                raise ScopeError(f"variable {v} is outside the declared ranges")


def parse_system_file(text: str) -> SystemFile:
    return _FileParser(text).run()


def parse_hints(text: str) -> Hints:
    """Parse a file holding only ``hint ...;`` statements."""
    p = _FileParser(text)
    while p.cur.kind != "eof":
        if p.cur.text != "hint":
            p.error("a hints file may contain only hint statements")
        p.statement()
    return p.sf.hints


def load(path) -> SystemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_system_file(fh.read())


# ---------------------------------------------------------------- rendering


def _vec_str(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _const_str(c) -> str:
    return str(as_gaussian(c))


def render(sf: SystemFile) -> str:
    """Canonical text; ``parse_system_file(render(sf))`` renders identically."""
    out = [f"kind = {sf.kind};"]
    if sf.m is not None:
        out.append(f"m = {sf.m};")
    out.append(f"n = {sf.n};")
    for name in ("X1", "X2"):
        for (xi, j), x in sorted(getattr(sf, name).items()):
            if x:
                out.append(f"{name}[{xi}][{j}] = {x};")
    for j in sorted(sf.ops):
        for v, c in sorted(sf.ops[j].items()):
            if c:
                out.append(f"op[{j}] += ({c}) * d({v});")
    for j in sorted(sf.matrices):
        entries = sf.matrices[j]
        for (l, k), c in sorted(entries.items()):
            if c:
                out.append(f"A[{j}][{l}][{k}] = {_const_str(c)};")
    for v, c in sorted(sf.point.items()):
        out.append(f"point {v} = {_const_str(c)};")
    for c in sf.candidates:
        fields = [f"role = {c.role};"]
        if c.profile is not None:
            fields.append(f"profile = {', '.join(map(str, c.profile))};")
        fields.append(f"expr = {c.expr};")
        out.append(f"candidate {c.name} {{ " + " ".join(fields) + " }")
    h = sf.hints
    for l, x in sorted(h.H.items()):
        out.append(f"hint H[{l}] = {x};")
    for j, vals in sorted(h.eigenvalues.items()):
        for x in vals:
            out.append(f"hint eigenvalue[{j}] = {_const_str(x)};")
    for ch in h.chains:
        out.append("hint chain = " + ", ".join(_vec_str(v) for v in ch) + ";")
    for name in ("zeta", "deg_bound", "order"):
        if getattr(h, name) is not None:
            out.append(f"hint {name} = {getattr(h, name)};")
    if h.profile is not None:
        out.append(f"hint profile = {', '.join(map(str, h.profile))};")
    if h.role is not None:
        out.append(f"hint role = {h.role};")
    return "\n".join(out) + "\n"

