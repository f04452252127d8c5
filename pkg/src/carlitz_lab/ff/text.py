"""ASCII text forms of field elements and theta-polynomials.

Grammar: ``T`` is theta, ``t1``/``t2`` the t-indeterminates, operators
``+ - * / ^`` and parentheses.  Coefficients are integers (reduced mod p)
or codes ``gN`` of the constant field F.  Division is accepted only by
theta-free nonzero expressions.  Printing is canonical: terms descend
in degree (graded-lex with t1 < t2 inside t-polynomials).
"""

from __future__ import annotations

import re

import numpy as np

from . import dense
from .kfield import FieldSpec, KElem


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the offending character index."""

    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


# -- printing -------------------------------------------------------------

def format_code(spec: FieldSpec, c: int) -> str:
    if c < spec.p:
        return str(c)
    return f"g{c}"


def _monomial(exps) -> str:
    parts = []
    for i, k in enumerate(exps, start=1):
        if k == 1:
            parts.append(f"t{i}")
        elif k > 1:
            parts.append(f"t{i}^{k}")
    return "*".join(parts)


def _tpoly_terms(spec: FieldSpec, a: np.ndarray):
    codes = dense.codes(spec.F, a)
    if spec.s == 0:
        c = int(codes)
        return [((), c)] if c else []
    terms = [(tuple(int(x) for x in idx), int(codes[idx])) for idx in zip(*np.nonzero(codes))]
    terms.sort(key=lambda t: (sum(t[0]), t[0][::-1]), reverse=True)
    return terms


def format_tpoly(spec: FieldSpec, a: np.ndarray) -> str:
    terms = _tpoly_terms(spec, a)
    if not terms:
        return "0"
    out = []
    for exps, c in terms:
        mono = _monomial(exps)
        if not mono:
            out.append(format_code(spec, c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{format_code(spec, c)}*{mono}")
    return "+".join(out)


def _wrap(s: str) -> str:
    return f"({s})" if ("+" in s or "/" in s) else s


def format_kelem(x: KElem) -> str:
    num = format_tpoly(x.spec, x.num)
    if x.is_polynomial():
        return num
    return f"{_wrap(num)}/{_wrap(format_tpoly(x.spec, x.den))}"


def _theta_power(k: int) -> str:
    return "" if k == 0 else ("T" if k == 1 else f"T^{k}")


def format_theta_terms(spec: FieldSpec, terms) -> str:
    """Join ``(exponent, KElem)`` terms given in descending exponent order."""
    out = []
    for k, c in terms:
        if c.is_zero():
            continue
        tp = _theta_power(k) if k >= 0 else f"T^({k})"
        cs = format_kelem(c)
        if not tp:
            out.append(cs)
        elif cs == "1":
            out.append(tp)
        else:
            out.append(f"{_wrap(cs)}*{tp}")
    return "+".join(out) if out else "0"


def format_theta(f) -> str:
    terms = [(k, f.coeff(k)) for k in range(f.num.shape[1] - 1, -1, -1)]
    return format_theta_terms(f.spec, terms)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(g\d+)|(\d+)|(T)|(t\d+)|([-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), m.lastindex, start))
        pos = m.end()
    out.append(("", 0, len(text)))
    return out


class _Parser:
    def __init__(self, spec: FieldSpec, text: str):
        from .thetapoly import ThetaPoly
        self.TP = ThetaPoly
        self.spec = spec
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self):
        if self.peek()[1] == 0:
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[1] != 0:
            self.fail("unexpected token")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.degree > 0 or w.is_zero():
                    raise ParseError("division by a non-constant or zero", self.text, pos)
                v = v * w.to_kelem().inverse()
        return v

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok, kind, pos = self.take()
            if kind != 2:
                raise ParseError("exponent must be a nonnegative integer", self.text, pos)
            return base ** int(tok)
        return base

    def atom(self):
        tok, kind, pos = self.take()
        spec, TP = self.spec, self.TP
        if kind == 1:
            code = int(tok[1:])
            if code >= spec.F.order:
                raise ParseError(f"code {code} outside GF({spec.F.order})", self.text, pos)
            return TP.constant(spec, KElem.from_code(spec, code))
        if kind == 2:
            return TP.constant(spec, int(tok))
        if kind == 3:
            return TP.theta(spec)
        if kind == 4:
            i = int(tok[1:])
            if not 1 <= i <= spec.s:
                raise ParseError(f"unknown variable {tok}", self.text, pos)
            return TP.constant(spec, KElem.t(spec, i))
        if tok == "(":
            v = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return v
        raise ParseError("unexpected token", self.text, pos)


def parse_theta(spec: FieldSpec, text: str):
    """Parse a polynomial in T over k."""
    return _Parser(spec, text).parse()


def parse_kelem(spec: FieldSpec, text: str) -> KElem:
    f = parse_theta(spec, text)
    if f.degree > 0:
        raise ParseError("theta not allowed in a coefficient", text, text.find("T"))
    return f.to_kelem()
