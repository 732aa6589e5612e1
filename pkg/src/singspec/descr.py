"""Descriptor mini-language for singular functions.

    expr    := factor ('*' factor)*
    factor  := alg | logf | smooth
    alg     := '(1-x)^' num | '(1+x)^' num | '|x-' num '|^' num
    logf    := 'log' ('^' int)? ( '(1-x)' | '(1+x)' | '|x-' num '|' | '(1-x^2)' )
    smooth  := 'sin(x)' | 'cos(x)' | 'exp(x)' | 'poly(' num (',' num)* ')'

Whitespace between symbols is ignored; ``log`` is the natural logarithm.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ParseError
from .expand import SingularFactor, SingularFunction, SmoothFactor

__all__ = ["Descriptor", "parse", "parse_descriptor", "format_function"]

_NUM = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")
_FACTOR_START = frozenset({"(1-x)^", "(1+x)^", "|x-", "log", "sin(x)", "cos(x)", "exp(x)", "poly("})


@dataclass(frozen=True)
class Descriptor:
    source: str
    ast: SingularFunction


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def error(self, what: str, expected) -> ParseError:
        return ParseError(what, min(self.pos, len(self.src)), set(expected))

    def lit(self, text: str, expected=None):
        """Match ``text`` symbol by symbol, skipping whitespace before each."""
        for ch in text:
            if self.peek() != ch:
                raise self.error(f"unexpected {self.peek()!r}" if self.peek() else "unexpected end of input", expected or {text})
            self.pos += 1

    def accept(self, text: str) -> bool:
        save = self.pos
        try:
            self.lit(text)
            return True
        except ParseError:
            self.pos = save
            return False

    def num(self) -> float:
        self.ws()
        m = _NUM.match(self.src, self.pos)
        if not m:
            raise self.error("expected a number", {"number"})
        v = float(m.group())
        if not math.isfinite(v):
            raise self.error("number out of range", {"finite number"})
        self.pos = m.end()
        return v

    def integer(self) -> int:
        self.ws()
        m = _INT.match(self.src, self.pos)
        if not m:
            raise self.error("expected an integer", {"integer"})
        self.pos = m.end()
        return int(m.group())

    def interior_site(self) -> float:
        self.ws()
        at = self.pos
        z = self.num()
        if not -1.0 < z < 1.0:
            raise ParseError(f"interior point {z} must lie strictly inside (-1,1); use (1-x) or (1+x) at endpoints", at, {"number in (-1,1)"})
        return z

    def factor(self, out: dict):
        c = self.peek()
        if c == "(":
            self.lit("(1")
            sign = self.peek()
            if sign not in "+-" or not sign:
                raise self.error("expected '-' or '+'", {"(1-x)^", "(1+x)^"})
            self.pos += 1
            self.lit("x)^")
            e = self.num()
            out["factors"].append(SingularFactor("right" if sign == "-" else "left", e, 0))
        elif c == "|":
            self.lit("|x-")
            z = self.interior_site()
            self.lit("|^")
            e = self.num()
            out["factors"].append(SingularFactor(z, e, 0))
        elif c == "l":
            self.lit("log", _FACTOR_START)
            k = 1
            if self.accept("^"):
                k = self.integer()
            if self.peek() == "|":
                self.lit("|x-")
                z = self.interior_site()
                self.lit("|")
                out["factors"].append(SingularFactor(z, 0.0, k))
                return
            self.lit("(1", {"(1-x)", "(1+x)", "(1-x^2)", "|x-"})
            sign = self.peek()
            if sign not in "+-" or not sign:
                raise self.error("expected '-' or '+'", {"(1-x)", "(1+x)", "(1-x^2)"})
            self.pos += 1
            self.lit("x")
            if sign == "-" and self.accept("^"):
                self.lit("2)")
                out["joint"] += k
                return
            self.lit(")")
            out["factors"].append(SingularFactor("right" if sign == "-" else "left", 0.0, k))
        elif c == "s":
            self.lit("sin(x)", _FACTOR_START)
            out["smooth"].append(SmoothFactor("sin"))
        elif c == "c":
            self.lit("cos(x)", _FACTOR_START)
            out["smooth"].append(SmoothFactor("cos"))
        elif c == "e":
            self.lit("exp(x)", _FACTOR_START)
            out["smooth"].append(SmoothFactor("exp"))
        elif c == "p":
            self.lit("poly(", _FACTOR_START)
            coeffs = [self.num()]
            while self.accept(","):
                coeffs.append(self.num())
            self.lit(")", {",", ")"})
            out["smooth"].append(SmoothFactor("poly", tuple(coeffs)))
        else:
            raise self.error(f"unexpected {c!r}" if c else "unexpected end of input", _FACTOR_START)

    def expr(self) -> SingularFunction:
        out = {"factors": [], "smooth": [], "joint": 0}
        self.factor(out)
        while self.peek() == "*":
            self.pos += 1
            self.factor(out)
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}", {"*", "end of input"})
        return SingularFunction(tuple(out["factors"]), tuple(out["smooth"]), None, out["joint"])


def parse(source: str) -> SingularFunction:
    """Parse a descriptor string into a SingularFunction."""
    if not isinstance(source, str):
        raise ParseError("descriptor must be a string", 0, {"string"})
    return _Parser(source).expr()


def parse_descriptor(source: str) -> Descriptor:
    return Descriptor(source, parse(source))


def _n(v: float) -> str:
    return repr(float(v))


def _log(k: int, arg: str) -> str:
    return f"log{'' if k == 1 else f'^{k}'}{arg}"


def format_function(f: SingularFunction) -> str:
    """Canonical descriptor text; parse(format_function(f)) == f."""
    if f.closure is not None:
        raise DomainError("functions with a caller closure have no descriptor form")
    parts = []
    for fac in f.factors:
        if fac.kind == "interior":
            site = f"|x-{_n(fac.location)}|"
            alg = f"{site}^{_n(fac.exponent)}"
        else:
            site = "(1-x)" if fac.kind == "right" else "(1+x)"
            alg = f"{site}^{_n(fac.exponent)}"
        if fac.exponent != 0 or fac.log_power == 0:
            parts.append(alg)
        if fac.log_power:
            parts.append(_log(fac.log_power, site))
    if f.joint_log:
        parts.append(_log(f.joint_log, "(1-x^2)"))
    for s in f.smooth:
        parts.append(f"poly({','.join(_n(c) for c in s.coeffs)})" if s.name == "poly" else f"{s.name}(x)")
    return "*".join(parts) if parts else "poly(1.0)"
