"""Exact Laurent polynomials and rational functions in t = q^{1/2}.

Exponents are integers counting half-powers of q, so ``t**3`` renders as
``q^{3/2}``.  Coefficients are Python ints (arbitrary precision).
"""
from __future__ import annotations

import re
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping


class DivisionByZero(ZeroDivisionError):
    pass


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dense helpers: a polynomial is a list of ints, index = exponent, no trailing 0


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(p: list[int]) -> list[int]:
    c = _content(p)
    if c in (0, 1):
        return p
    return [x // c for x in p]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    # lc(b)^k * a mod b, keeping everything integral
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        g = gcd(la, lb)
        ma, mb = lb // g, la // g
        if ma != 1:
            a = [x * ma for x in a]
        for i, bc in enumerate(b):
            a[shift + i] -= mb * bc
        a.pop()
        _trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two integer polynomials with nonzero constant terms."""
    if not a:
        return _primitive(list(b))
    if not b:
        return _primitive(list(a))
    a = _primitive(list(a))
    b = _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    if a[-1] < 0:
        a = [-x for x in a]
    return a


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    """Quotient a / b, assuming b divides a over Z[t]."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c, r = divmod(a[-1], lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
        _trim(a)
    if a:
        raise ArithmeticError("inexact polynomial division")
    return q


def _mul_dense(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Integer Laurent polynomial in t; immutable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c: dict[int, int] = {e: c for e, c in (coeffs or {}).items() if c}
        self._hash: int | None = None

    @classmethod
    def _raw(cls, d: dict[int, int]) -> LaurentPoly:
        p = object.__new__(cls)
        p._c = d
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls.monomial(0, c)

    @classmethod
    def _from_dense(cls, shift: int, p: Iterable[int]) -> LaurentPoly:
        return cls._raw({shift + i: c for i, c in enumerate(p) if c})

    def _to_dense(self) -> tuple[int, list[int]]:
        lo = min(self._c)
        p = [0] * (max(self._c) - lo + 1)
        for e, c in self._c.items():
            p[e - lo] = c
        return lo, p

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def leading(self) -> int:
        return self._c[max(self._c)]

    def shift(self, k: int) -> LaurentPoly:
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._c.items()})

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        out = dict(self._c)
        for e, c in other._c.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: int) -> LaurentPoly:
        return LaurentPoly.constant(other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({e: c * other for e, c in self._c.items()})
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self) -> str:
        return format_laurent(self)


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


T = LaurentPoly.monomial(1)
ONE_LP = LaurentPoly.constant(1)


class RatFunc:
    """Rational function num/den in t, always stored in canonical form.

    Canonical: num and den coprime, den has lowest exponent 0 and a
    positive leading coefficient, and the integer contents of num and den
    share no factor.  Two RatFuncs are equal iff their fields are.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int, den: LaurentPoly | int = 1):
        if isinstance(num, int):
            num = LaurentPoly.constant(num)
        if isinstance(den, int):
            den = LaurentPoly.constant(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        n, d = _canonical(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> RatFunc:
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> RatFunc:
        return cls._raw(p, ONE_LP)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self) -> RatFunc:
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other: RatFunc | LaurentPoly | int) -> RatFunc:
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if self.den.is_one():
            return RatFunc._raw(self.num * other.den + other.num, other.den)
        if other.den.is_one():
            return RatFunc._raw(other.num * self.den + self.num, self.den)
        g = _lp_gcd(self.den, other.den)
        d1 = _lp_div(self.den, g)
        d2 = _lp_div(other.den, g)
        num = self.num * d2 + other.num * d1
        return RatFunc(num, d1 * other.den)

    __radd__ = __add__

    def __sub__(self, other: RatFunc | LaurentPoly | int) -> RatFunc:
        return self + (-_coerce(other))

    def __rsub__(self, other: LaurentPoly | int) -> RatFunc:
        return _coerce(other) - self

    def __mul__(self, other: RatFunc | LaurentPoly | int) -> RatFunc:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num * other.num, ONE_LP)
        # cross-cancel before multiplying keeps degrees small
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other: RatFunc | LaurentPoly | int) -> RatFunc:
        other = _coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero function")
        return self * RatFunc(other.den, other.num)

    def __rtruediv__(self, other: LaurentPoly | int) -> RatFunc:
        return _coerce(other) / self

    def times_monomial(self, exp: int, sign: int = 1) -> RatFunc:
        """Multiply by sign * t**exp without renormalizing."""
        if exp == 0 and sign == 1:
            return self
        num = self.num.shift(exp)
        if sign < 0:
            num = -num
        return RatFunc._raw(num, self.den)

    def __repr__(self) -> str:
        return f"RatFunc({format_ratfunc(self)!r})"

    def __str__(self) -> str:
        return format_ratfunc(self)


def _coerce(x: RatFunc | LaurentPoly | int) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        x = LaurentPoly.constant(x)
    return RatFunc._raw(x, ONE_LP)


def _lp_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    # gcd up to a unit, with lowest exponent 0
    _, da = a._to_dense()
    _, db = b._to_dense()
    return LaurentPoly._from_dense(0, _poly_gcd(da, db))


def _lp_div(a: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    if g.is_one():
        return a
    sa, da = a._to_dense()
    sg, dg = g._to_dense()
    return LaurentPoly._from_dense(sa - sg, _exact_div(da, dg))


def _cancel(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if a.is_zero() or b.is_one():
        return a, b
    g = _lp_gcd(a, b)
    if len(g._c) == 1:
        return a, b
    return _lp_div(a, g), _lp_div(b, g)


def _canonical(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return LaurentPoly(), ONE_LP
    num, den = _cancel(num, den)
    shift = -den.min_exp()
    num, den = num.shift(shift), den.shift(shift)
    c = gcd(_content(list(num._c.values())), _content(list(den._c.values())))
    if den.leading() < 0:
        c = -c
    if c != 1:
        num = LaurentPoly._raw({e: v // c for e, v in num._c.items()})
        den = LaurentPoly._raw({e: v // c for e, v in den._c.items()})
    return num, den


ZERO = RatFunc._raw(LaurentPoly(), ONE_LP)
ONE = RatFunc._raw(ONE_LP, ONE_LP)


def rf_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


@lru_cache(maxsize=None)
def qpochhammer_denominator(j: int) -> LaurentPoly:
    """Product of (t^i - t^-i) for i = 1..j; the empty product is 1."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    out = ONE_LP
    for i in range(1, j + 1):
        out = out * LaurentPoly({i: 1, -i: -1})
    return out


# ---------------------------------------------------------------------------
# text format
#
#   poly  := "0" | term (("+" | "-") term)*
#   term  := [int] "q^{" exp "}" | int
#   exp   := int | odd_int "/2"
#
# Terms are written by descending exponent; a unit coefficient is omitted
# except on the constant term.  A RatFunc is "(poly)/(poly)", or just the
# numerator when the denominator is 1.


def _format_exp(e: int) -> str:
    if e % 2:
        return f"{e}/2"
    return str(e // 2)


def format_laurent(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p._c, reverse=True):
        c = p._c[e]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + "q^{" + _format_exp(e) + "}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_ratfunc(r: RatFunc) -> str:
    if r.den.is_one():
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.den)})"


_TERM = re.compile(r"\s*([+-])?\s*(\d*)\s*(q\^\{\s*(-?\d+)(?:\s*/\s*(2))?\s*\})?")


def parse_laurent(s: str) -> LaurentPoly:
    s = s.strip()
    if not s:
        raise ParseError("empty polynomial")
    if s == "0":
        return LaurentPoly()
    pos = 0
    out = LaurentPoly()
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected text at {pos}: {s[pos:]!r}")
        sign, digits, qpart, num, half = m.groups()
        if not first and sign is None:
            raise ParseError(f"missing operator at {pos}")
        if not digits and not qpart:
            raise ParseError(f"empty term at {pos}")
        coeff = int(digits) if digits else 1
        if sign == "-":
            coeff = -coeff
        if qpart:
            e = int(num)
            if half:
                if e % 2 == 0:
                    raise ParseError(f"non-reduced half exponent {num}/2")
            else:
                e *= 2
        else:
            e = 0
        out = out + LaurentPoly.monomial(e, coeff)
        pos = m.end()
        first = False
    return out


def parse_ratfunc(s: str) -> RatFunc:
    s = s.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
    if m:
        return RatFunc(parse_laurent(m.group(1)), parse_laurent(m.group(2)))
    return RatFunc(parse_laurent(s))
