"""Canonical text form of jet polynomials.

Grammar::

    expr      := "0" | rational | factor | "(+ " expr+ ")" | "(* " rational? factor+ ")"
    factor    := token | token "^-" k | "(D" l " " token ")"
    rational  := n | n "/" d            (lowest terms)

Powers are written as repeated factors, Laurent powers as ``e^-k``.
"""

from __future__ import annotations

import re

from .jet_algebra import JetAlgebraError, JetPolynomial, ModelAlgebra, Q, code_component, code_jet

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class ParseError(JetAlgebraError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def token_of(model: ModelAlgebra, code: int) -> str:
    """Name of the 0-jet generator underlying ``code``."""
    f = model.fields[code >> 13]
    comp = code_component(code)
    if f.labels is not None:
        label = f.labels[comp]
    elif f.components == 1:
        return f.name
    else:
        label = str(comp)
    sep = f.index_style or "."
    return f"{f.name}{sep}{label}"


def _rational(c) -> str:
    c = Q(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _factors(model: ModelAlgebra, m: tuple) -> list[str]:
    out = []
    i = 0
    n = len(m)
    while i < n:
        c = m[i]
        if c & 1:
            j = i
            while j < n and m[j] == c:
                j += 1
            out.append(f"{token_of(model, c)}^-{j - i}")
            i = j
            continue
        jet = code_jet(c)
        tok = token_of(model, c)
        out.append(f"(D{jet} {tok})" if jet else tok)
        i += 1
    return out


def serialize_monomial(model: ModelAlgebra, m: tuple, coeff) -> str:
    facs = _factors(model, m)
    coeff = Q(coeff)
    if not facs:
        return _rational(coeff)
    if coeff == 1 and len(facs) == 1:
        return facs[0]
    head = [] if coeff == 1 else [_rational(coeff)]
    return "(* " + " ".join(head + facs) + ")"


def serialize(f: JetPolynomial) -> str:
    if not f.terms:
        return "0"
    parts = [serialize_monomial(f.model, m, c) for m, c in sorted(f.terms.items())]
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


# --------------------------------------------------------------------------


def _token_table(model: ModelAlgebra) -> dict[str, int]:
    if model._tokens is None:
        table = {}
        for fi, f in enumerate(model.fields):
            for comp in range(f.components):
                code = model.code(f.name, comp)
                table[token_of(model, code)] = code
        model._tokens = table
    return model._tokens


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            toks.append((ch, i))
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            toks.append((text[i:j], i))
            i = j
    return toks


class _Parser:
    def __init__(self, model: ModelAlgebra, text: str):
        self.model = model
        self.toks = _tokenize(text)
        self.i = 0
        self.table = _token_table(model)
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("", self.end)

    def take(self):
        t = self.peek()
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input", self.end)
        self.i += 1
        return t

    def expect(self, s: str):
        t, p = self.take()
        if t != s:
            raise ParseError(f"expected {s!r}, found {t!r}", p)

    def atom(self, tok: str, pos: int) -> JetPolynomial:
        if "^-" in tok:
            name, _, k = tok.partition("^-")
            if not k.isdigit() or name not in self.table:
                raise ParseError(f"bad Laurent factor {tok!r}", pos)
            try:
                return self.model.from_code(self.table[name], -int(k))
            except JetAlgebraError as exc:
                raise ParseError(str(exc), pos) from None
        if tok in self.table:
            return self.model.from_code(self.table[tok])
        raise ParseError(f"unknown generator {tok!r}", pos)

    def factor(self) -> JetPolynomial:
        t, p = self.peek()
        if t == "(":
            self.take()
            head, hp = self.take()
            if not (head.startswith("D") and head[1:].isdigit()):
                raise ParseError(f"expected jet marker, found {head!r}", hp)
            jet = int(head[1:])
            name, np_ = self.take()
            if name not in self.table:
                raise ParseError(f"unknown generator {name!r}", np_)
            self.expect(")")
            code = self.table[name]
            try:
                code = self.model.code(self.model.fields[code >> 13].name, code_component(code), jet)
            except JetAlgebraError as exc:
                raise ParseError(str(exc), hp) from None
            return self.model.from_code(code)
        self.take()
        return self.atom(t, p)

    def expr(self) -> JetPolynomial:
        t, p = self.peek()
        if t == "(":
            nxt = self.toks[self.i + 1][0] if self.i + 1 < len(self.toks) else ""
            if nxt == "+":
                self.take()
                self.take()
                acc = self.model.zero()
                count = 0
                while self.peek()[0] != ")":
                    if self.i >= len(self.toks):
                        raise ParseError("unterminated sum", self.end)
                    acc = acc + self.expr()
                    count += 1
                if not count:
                    raise ParseError("empty sum", p)
                self.take()
                return acc
            if nxt == "*":
                self.take()
                self.take()
                coeff = Q(1)
                t2, p2 = self.peek()
                if _RATIONAL.match(t2):
                    self.take()
                    coeff = _parse_rational(t2, p2)
                acc = self.model.const(coeff)
                count = 0
                while self.peek()[0] != ")":
                    if self.i >= len(self.toks):
                        raise ParseError("unterminated product", self.end)
                    acc = acc * self.factor()
                    count += 1
                if not count:
                    raise ParseError("product without factors", p)
                self.take()
                return acc
            return self.factor()
        if _RATIONAL.match(t):
            self.take()
            return self.model.const(_parse_rational(t, p))
        if not t:
            raise ParseError("unexpected end of input", p)
        return self.factor()


def _parse_rational(tok: str, pos: int):
    try:
        num, _, den = tok.partition("/")
        if den and int(den) == 0:
            raise ParseError("zero denominator", pos)
        return Q(int(num), int(den)) if den else Q(int(num))
    except ValueError:
        raise ParseError(f"bad rational {tok!r}", pos) from None


def parse(model: ModelAlgebra, text: str) -> JetPolynomial:
    p = _Parser(model, text)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input {p.toks[p.i][0]!r}", p.toks[p.i][1])
    return out


def dumps_generator(model: ModelAlgebra, code: int) -> str:
    return serialize(model.from_code(code))


__all__ = ["ParseError", "parse", "serialize", "serialize_monomial", "token_of"]
