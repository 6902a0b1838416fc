"""Problem files: a small header followed by homogeneous generators.

::

    # comments run to the end of the line
    p 2
    vars x y z
    w 1 2 3
    tiebreak grevlex          # or lex; default grevlex
    degree macaulay           # or an integer; default macaulay
    mode exact                # or: mode capped 30
    gens
    x^4 + x^2*y + 2*y^4 + 2^-8*z^4
    (3 + O(2^10))*x*y*z + O(2^5)*z^3

Coefficients are rationals built from integer literals with ``+ - * /``
and integer powers; ``O(p^m)`` denotes an unknown element of ``p^m Z_p``.
Variables only take non-negative integer exponents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from .poly import HomogeneousPoly, TropicalOrder, format_monomial
from .scalars import INF, CappedScalar, ExactScalar, rational_valuation


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


# A coefficient while parsing: (value, precision) standing for value + O(p^prec).
# Exact literals have precision INF.

def _cval(x, p):
    return rational_valuation(x, p) if x != 0 else INF


def _cadd(a, b):
    return (a[0] + b[0], min(a[1], b[1]))


def _cmul(a, b, p):
    va, vb = _cval(a[0], p), _cval(b[0], p)
    prec = min(a[1] + vb, b[1] + va, a[1] + b[1])
    return (a[0] * b[0], prec)


def _cdiv(a, b, p):
    if b[1] != INF:
        raise ValueError("division by an inexact coefficient")
    if b[0] == 0:
        raise ValueError("division by zero")
    vb = _cval(b[0], p)
    return (a[0] / b[0], a[1] - vb)


def _cpow(a, k, p):
    if a[1] != INF:
        raise ValueError("powers of inexact coefficients are not supported")
    if a[0] == 0 and k < 0:
        raise ValueError("division by zero")
    return (a[0] ** k, INF)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass
class _Tok:
    kind: str  # int, name, op, end
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(_Tok("int", m.group(1), col0 + start))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), col0 + start))
        elif m.group(3):
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}", line, col0 + start + 1)
            toks.append(_Tok("op", m.group(3), col0 + start))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text.rstrip())))
    return toks


class _PolyParser:
    """Recursive descent over ``sum := ['+'|'-'] product (('+'|'-') product)*``."""

    def __init__(self, text, line, col0, p, names):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.p = p
        self.names = {v: k for k, v in enumerate(names)}
        self.n = len(names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok.col + 1)

    def expect(self, text):
        t = self.peek()
        if t.text != text or t.kind not in ("op", "name"):
            self.fail(f"expected {text!r}, found {t.text or 'end of line'!r}")
        return self.take()

    def parse(self) -> dict:
        poly = self.sum()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return poly

    # polynomials are dicts monomial -> (value, prec)
    def _padd(self, a, b):
        out = dict(a)
        for m, c in b.items():
            out[m] = _cadd(out[m], c) if m in out else c
        return out

    def _pmul(self, a, b):
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                c = _cmul(ca, cb, self.p)
                out[m] = _cadd(out[m], c) if m in out else c
        return out

    def _const(self, c):
        return {(0,) * self.n: c}

    def _as_const(self, poly, tok):
        if not poly:
            return (mpq(0), INF)
        if set(poly) != {(0,) * self.n}:
            self.fail("only constant expressions may be divided by or raised to a negative power", tok)
        return poly[(0,) * self.n]

    def sum(self):
        sign = 1
        t = self.peek()
        if t.text in "+-" and t.kind == "op":
            self.take()
            sign = -1 if t.text == "-" else 1
        acc = self.product()
        if sign < 0:
            acc = self._pmul(acc, self._const((mpq(-1), INF)))
        while self.peek().kind == "op" and self.peek().text in "+-":
            neg = self.take().text == "-"
            nxt = self.product()
            if neg:
                nxt = self._pmul(nxt, self._const((mpq(-1), INF)))
            acc = self._padd(acc, nxt)
        return acc

    def product(self):
        acc = self.power()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take()
            rhs = self.power()
            if op.text == "*":
                acc = self._pmul(acc, rhs)
            else:
                c = self._as_const(rhs, op)
                try:
                    acc = {m: _cdiv(v, c, self.p) for m, v in acc.items()}
                except ValueError as exc:
                    self.fail(str(exc), op)
        return acc

    def _exponent(self):
        neg = False
        paren = self.peek().text == "(" and self.peek().kind == "op"
        if paren:
            self.take()
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            neg = True
        t = self.take()
        if t.kind != "int":
            self.fail("malformed exponent", t)
        if paren:
            self.expect(")")
        return -int(t.text) if neg else int(t.text)

    def power(self):
        base_tok = self.peek()
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            hat = self.take()
            k = self._exponent()
            if k < 0:
                if any(sum(m) for m in base):
                    self.fail("variables take non-negative exponents", hat)
                c = self._as_const(base, base_tok)
                try:
                    return self._const(_cpow(c, k, self.p))
                except ValueError as exc:
                    self.fail(str(exc), hat)
            out = self._const((mpq(1), INF))
            for _ in range(k):
                out = self._pmul(out, base)
            return out
        return base

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return self._const((mpq(int(t.text)), INF))
        if t.kind == "name":
            if t.text == "O" and self.peek().text == "(":
                return self._big_o(t)
            if t.text not in self.names:
                self.fail(f"unknown variable {t.text!r}", t)
            m = [0] * self.n
            m[self.names[t.text]] = 1
            return {tuple(m): (mpq(1), INF)}
        if t.kind == "op" and t.text == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        self.fail(f"unexpected {t.text or 'end of line'!r}", t)

    def _big_o(self, tok):
        self.expect("(")
        pt = self.take()
        if pt.kind != "int":
            self.fail("malformed O(p^m) literal", pt)
        if int(pt.text) != self.p:
            self.fail(f"O(...) must use the prime {self.p}", pt)
        self.expect("^")
        m = self._exponent()
        self.expect(")")
        return self._const((mpq(0), m))


def parse_polynomial(text: str, p: int, names, line: int = 1, column: int = 0) -> dict:
    """Parse one polynomial into ``{monomial: (value, precision)}``."""
    poly = _PolyParser(text, line, column, p, names).parse()
    # drop exact zeros produced by cancellation
    return {m: c for m, c in poly.items() if not (c[0] == 0 and c[1] == INF)}


@dataclass
class ProblemFile:
    prime: int
    names: list
    weight: list
    tiebreak: str = "grevlex"
    degree_bound: object = "macaulay"  # int or "macaulay"
    mode: tuple = ("exact", None)  # ("exact", None) or ("capped", L)
    generators: list = field(default_factory=list)  # dicts monomial -> (value, prec)

    @property
    def n(self) -> int:
        return len(self.names)

    def order(self) -> TropicalOrder:
        return TropicalOrder(tuple(self.weight), self.tiebreak)

    def degrees(self) -> list:
        return [sum(next(iter(g))) for g in self.generators]

    def resolve_degree_bound(self, override=None) -> int:
        bound = self.degree_bound if override is None else override
        if bound == "macaulay":
            if len(self.generators) != self.n:
                raise ValueError(
                    "the Macaulay bound needs as many generators as variables; give 'degree D'"
                )
            return sum(d - 1 for d in self.degrees()) + 1
        return int(bound)

    def has_inexact_literals(self) -> bool:
        return any(c[1] != INF for g in self.generators for c in g.values())

    def system(self, mode=None) -> list:
        """Generators as polynomials over the exact or capped backend.

        In capped mode every present coefficient is known to ``O(p^L)`` (or
        its own ``O(p^m)`` when smaller); absent monomials stay exact zeros.
        """
        kind, L = mode or self.mode
        p = self.prime
        out = []
        for g in self.generators:
            terms = {}
            for m, (v, prec) in g.items():
                if kind == "exact":
                    if prec != INF:
                        raise ValueError("an O(p^m) literal needs capped mode")
                    terms[m] = ExactScalar(v, p)
                else:
                    terms[m] = CappedScalar.from_rational(v, p, min(prec, L))
            out.append(HomogeneousPoly(self.n, sum(next(iter(g))), terms))
        return out


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


_HEADER_KEYS = ("p", "vars", "w", "tiebreak", "degree", "mode")


def parse_problem(text: str) -> ProblemFile:
    header = {}
    gens = []  # (line number, column, text)
    in_gens = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if in_gens:
            gens.append((lineno, len(line) - len(line.lstrip()), line.strip()))
            continue
        parts = line.split()
        key = parts[0]
        if key == "gens":
            if len(parts) > 1:
                raise ParseError("'gens' takes no arguments", lineno)
            in_gens = True
            continue
        if key not in _HEADER_KEYS:
            raise ParseError(f"unknown header field {key!r}", lineno, raw.find(key) + 1)
        if key in header:
            raise ParseError(f"duplicate header field {key!r}", lineno)
        header[key] = (lineno, parts[1:])

    def need(key):
        if key not in header:
            raise ParseError(f"missing header field {key!r}")
        return header[key]

    def ints(key, values, lineno):
        try:
            return [int(v) for v in values]
        except ValueError:
            raise ParseError(f"{key}: expected integers, got {' '.join(values)!r}", lineno) from None

    ln, vals = need("p")
    if len(vals) != 1:
        raise ParseError("p: expected one integer", ln)
    (p,) = ints("p", vals, ln)
    if p < 2 or not gmpy2.is_prime(p):
        raise ParseError(f"p: {p} is not prime", ln)

    ln, names = need("vars")
    if not names:
        raise ParseError("vars: no variables", ln)
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) or v == "O":
            raise ParseError(f"vars: invalid variable name {v!r}", ln)
    if len(set(names)) != len(names):
        raise ParseError("vars: repeated variable name", ln)

    if "w" in header:
        ln, vals = header["w"]
        weight = ints("w", vals, ln)
        if len(weight) != len(names):
            raise ParseError(
                f"w has {len(weight)} entries but there are {len(names)} variables", ln
            )
    else:
        weight = [0] * len(names)

    tiebreak = "grevlex"
    if "tiebreak" in header:
        ln, vals = header["tiebreak"]
        if vals not in (["grevlex"], ["lex"]):
            raise ParseError("tiebreak: expected 'grevlex' or 'lex'", ln)
        tiebreak = vals[0]

    degree = "macaulay"
    if "degree" in header:
        ln, vals = header["degree"]
        if vals == ["macaulay"]:
            degree = "macaulay"
        else:
            if len(vals) != 1:
                raise ParseError("degree: expected an integer or 'macaulay'", ln)
            (degree,) = ints("degree", vals, ln)
            if degree < 0:
                raise ParseError("degree: must be non-negative", ln)

    mode = ("exact", None)
    if "mode" in header:
        ln, vals = header["mode"]
        if vals == ["exact"]:
            pass
        elif len(vals) == 2 and vals[0] == "capped":
            (L,) = ints("mode", vals[1:], ln)
            if L < 1:
                raise ParseError("mode: capped precision must be positive", ln)
            mode = ("capped", L)
        else:
            raise ParseError("mode: expected 'exact' or 'capped L'", ln)

    if not gens:
        raise ParseError("empty generator list")
    generators = []
    for lineno, col, body in gens:
        g = parse_polynomial(body, p, names, lineno, col)
        if not g:
            raise ParseError("generator is zero", lineno, col + 1)
        degs = {sum(m) for m in g}
        if len(degs) > 1:
            raise ParseError(
                f"generator is not homogeneous (degrees {sorted(degs)})", lineno, col + 1
            )
        if mode[0] == "exact" and any(c[1] != INF for c in g.values()):
            raise ParseError("O(p^m) literal in exact mode", lineno, col + 1)
        generators.append(canonical_generator(g, p))
    return ProblemFile(p, list(names), weight, tiebreak, degree, mode, generators)


def _format_coeff(value, prec, p) -> str:
    if prec == INF:
        return str(value)
    if value == 0:
        return f"O({p}^{prec})"
    return f"({value} + O({p}^{prec}))"


def format_polynomial(g: dict, p: int, names, order: TropicalOrder | None = None) -> str:
    """Canonical text of a parsed generator (terms by decreasing column position)."""
    if order is not None:
        items = sorted(g.items(), key=lambda mc: order.monomial_key(mc[0]), reverse=True)
    else:
        items = sorted(g.items(), reverse=True)
    parts = []
    for m, (v, prec) in items:
        if prec != INF:
            # canonical representative of the known digits
            c = CappedScalar.from_rational(v, p, prec)
            v = c.lift()
        mon = format_monomial(m, names)
        neg = prec == INF and v < 0
        mag = -v if neg else v
        coeff = _format_coeff(mag, prec, p)
        if mon == "1":
            body = coeff
        elif prec == INF and mag == 1:
            body = mon
        else:
            body = f"{coeff}*{mon}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"


def canonical_generator(g: dict, p: int) -> dict:
    """Reduce O-terms to their canonical representative modulo p^prec."""
    out = {}
    for m, (v, prec) in g.items():
        if prec != INF:
            v = CappedScalar.from_rational(v, p, prec).lift()
        out[m] = (mpq(v), prec)
    return out


def format_problem(pf: ProblemFile) -> str:
    lines = [
        f"p {pf.prime}",
        "vars " + " ".join(pf.names),
        "w " + " ".join(map(str, pf.weight)),
        f"tiebreak {pf.tiebreak}",
        f"degree {pf.degree_bound}",
        "mode exact" if pf.mode[0] == "exact" else f"mode capped {pf.mode[1]}",
        "gens",
    ]
    order = pf.order()
    lines += [format_polynomial(g, pf.prime, pf.names, order) for g in pf.generators]
    return "\n".join(lines) + "\n"


def problem_from_system(F, p: int, order: TropicalOrder, names=None, degree_bound="macaulay",
                        mode=("exact", None)) -> ProblemFile:
    """Problem file for an exact system (used to export random test systems)."""
    n = order.n
    names = list(names or [f"x{k + 1}" for k in range(n)])
    gens = [{m: (mpq(c.value), INF) for m, c in f.terms.items()} for f in F]
    return ProblemFile(p, names, list(order.weight), order.tiebreak, degree_bound, mode, gens)
