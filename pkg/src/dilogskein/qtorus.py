"""Truncated series in the quantum torus of the linear A_n quiver.

Monomials x_a, a in N^n, multiply as x_a x_b = t^(2<a,b>) x_(a+b) with
<e_i, e_(i+1)> = 1/2.  Series are truncated at total degree D.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .conventions import DEFAULTS
from .qring import ONE, ZERO, RatFunc, format_ratfunc, qpochhammer_denominator
from .quiver import Interval, dimension_vector, is_admissible_order, num_intervals
from .report import FAIL, PASS, Report, stopwatch

ExpVec = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class NegativeClass(ValueError):
    pass


def qform_halves(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """2<alpha, beta> for the linear quiver, i.e. the t-exponent of x_a x_b."""
    if len(alpha) != len(beta):
        raise DimensionMismatch(f"{len(alpha)} != {len(beta)}")
    return sum(alpha[i] * beta[i + 1] - alpha[i + 1] * beta[i] for i in range(len(alpha) - 1))


def qform(n: int, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    if len(alpha) != n or len(beta) != n:
        raise DimensionMismatch(f"expected vectors of length {n}")
    return Fraction(qform_halves(alpha, beta), 2)


def _check_vec(n: int, v: Sequence[int]) -> ExpVec:
    v = tuple(int(x) for x in v)
    if len(v) != n:
        raise DimensionMismatch(f"exponent {v} has length != {n}")
    if any(x < 0 for x in v):
        raise ValueError(f"exponent {v} has a negative entry")
    return v


class TorusSeries:
    """Immutable truncated series; keys are exponent vectors of degree <= D."""

    __slots__ = ("n", "D", "terms")

    def __init__(self, n: int, D: int, terms: Mapping[Sequence[int], RatFunc] | None = None):
        if n < 1 or D < 0:
            raise ValueError("need n >= 1 and D >= 0")
        self.n = n
        self.D = D
        clean: dict[ExpVec, RatFunc] = {}
        for k, v in (terms or {}).items():
            k = _check_vec(n, k)
            if sum(k) <= D and not v.is_zero():
                clean[k] = v
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, D: int, terms: dict[ExpVec, RatFunc]) -> TorusSeries:
        s = object.__new__(cls)
        s.n, s.D, s.terms = n, D, terms
        return s

    @classmethod
    def unit(cls, n: int, D: int) -> TorusSeries:
        return cls._raw(n, D, {(0,) * n: ONE})

    @classmethod
    def monomial(cls, exp: Sequence[int], D: int, coeff: RatFunc = ONE) -> TorusSeries:
        return cls(len(exp), D, {tuple(exp): coeff})

    def coeff(self, exp: Sequence[int]) -> RatFunc:
        return self.terms.get(tuple(exp), ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusSeries):
            return NotImplemented
        return self.n == other.n and self.D == other.D and self.terms == other.terms

    def __mul__(self, other: TorusSeries) -> TorusSeries:
        return series_mul(self, other)

    def __repr__(self) -> str:
        return f"TorusSeries(n={self.n}, D={self.D}, {len(self.terms)} terms)"


def series_mul(a: TorusSeries, b: TorusSeries) -> TorusSeries:
    if a.n != b.n:
        raise DimensionMismatch(f"n={a.n} vs n={b.n}")
    if a.D != b.D:
        raise DimensionMismatch(f"D={a.D} vs D={b.D}")
    D = a.D
    # collect all contributions per key, then sum once
    buckets: dict[ExpVec, list[RatFunc]] = {}
    a_items = sorted(a.terms.items(), key=lambda kv: sum(kv[0]))
    b_items = sorted(b.terms.items(), key=lambda kv: sum(kv[0]))
    swap = len(a_items) > len(b_items)
    outer, inner = (b_items, a_items) if swap else (a_items, b_items)
    for ko, co in outer:
        do = sum(ko)
        for ki, ci in inner:
            if do + sum(ki) > D:
                break
            ka, ca, kb, cb = (ki, ci, ko, co) if swap else (ko, co, ki, ci)
            key = tuple(x + y for x, y in zip(ka, kb))
            c = (ca * cb).times_monomial(qform_halves(ka, kb))
            buckets.setdefault(key, []).append(c)
    terms: dict[ExpVec, RatFunc] = {}
    for key, cs in buckets.items():
        total = _sum(cs)
        if not total.is_zero():
            terms[key] = total
    return TorusSeries._raw(a.n, D, terms)


def _sum(cs: list[RatFunc]) -> RatFunc:
    # group equal denominators so each distinct one is combined once
    groups: dict = {}
    for c in cs:
        groups.setdefault(c.den, []).append(c.num)
    total = None
    for den, nums in groups.items():
        num = nums[0]
        for x in nums[1:]:
            num = num + x
        part = RatFunc(num, den)
        total = part if total is None else total + part
    return total


def product(factors: Iterable[TorusSeries], n: int, D: int) -> TorusSeries:
    out = TorusSeries.unit(n, D)
    for f in factors:
        out = series_mul(out, f)
    return out


def dilog_coefficient(j: int, quadratic: int | None = None, linear: int = 0) -> RatFunc:
    """Coefficient of x^j in E(t^linear x): t^(quadratic j(j-1)/2 + linear j) / prod(t^i - t^-i)."""
    if quadratic is None:
        quadratic = DEFAULTS.dilog_quadratic_shift
    return RatFunc(1, qpochhammer_denominator(j)).times_monomial(
        quadratic * j * (j - 1) // 2 + linear * j
    )


def qdilog(alpha: Sequence[int], D: int, *, quadratic: int | None = None, linear: int = 0) -> TorusSeries:
    """Truncated E(t^linear x_alpha); powers of x_alpha come from series_mul."""
    alpha = tuple(alpha)
    n = len(alpha)
    _check_vec(n, alpha)
    deg = sum(alpha)
    if deg == 0:
        raise ZeroVector("qdilog needs a nonzero exponent")
    x = TorusSeries.monomial(alpha, D)
    power = TorusSeries.unit(n, D)
    terms: dict[ExpVec, RatFunc] = {}
    j = 0
    while j * deg <= D:
        for k, c in power.terms.items():
            terms[k] = c * dilog_coefficient(j, quadratic, linear)
        power = series_mul(power, x)
        j += 1
    return TorusSeries._raw(n, D, terms)


def _exp_order(k: ExpVec) -> tuple:
    return (sum(k), k)


def first_discrepancy(lhs: TorusSeries, rhs: TorusSeries) -> dict | None:
    keys = sorted(set(lhs.terms) | set(rhs.terms), key=_exp_order)
    for k in keys:
        l, r = lhs.terms.get(k, ZERO), rhs.terms.get(k, ZERO)
        if l != r:
            return {"exponent": list(k), "lhs": format_ratfunc(l), "rhs": format_ratfunc(r)}
    return None


def _middle_linear(middle_power: Fraction | int | str) -> int:
    c = Fraction(middle_power)
    if (2 * c).denominator != 1:
        raise ValueError("middle power must be a half-integer")
    return int(2 * c)


def pentagon_sides(D: int, middle_power: Fraction | int | str | None = None, quadratic: int | None = None) -> tuple[TorusSeries, TorusSeries]:
    """E(x_1)E(x_2) and E(x_2)E(q^c x_(1,1))E(x_1)."""
    if middle_power is None:
        middle_power = DEFAULTS.pentagon_middle_power
    lin = _middle_linear(middle_power)
    e1 = qdilog((1, 0), D, quadratic=quadratic)
    e2 = qdilog((0, 1), D, quadratic=quadratic)
    mid = qdilog((1, 1), D, quadratic=quadratic, linear=lin)
    return series_mul(e1, e2), series_mul(series_mul(e2, mid), e1)


def verify_pentagon(D: int, middle_power: Fraction | int | str | None = None, quadratic: int | None = None) -> Report:
    if middle_power is None:
        middle_power = DEFAULTS.pentagon_middle_power
    if quadratic is None:
        quadratic = DEFAULTS.dilog_quadratic_shift
    params = {"n": 2, "D": D, "middle_power": str(Fraction(middle_power)), "quadratic_shift": quadratic}
    with stopwatch() as sw:
        lhs, rhs = pentagon_sides(D, middle_power, quadratic)
        diff = first_discrepancy(lhs, rhs)
    return Report("pentagon", params, PASS if diff is None else FAIL, diff, sw.ms)


def reineke_sides(order: Sequence[Interval], D: int, quadratic: int | None = None, check: bool = True) -> tuple[TorusSeries, TorusSeries]:
    n = max(iv.hi for iv in order)
    if check and not is_admissible_order(order):
        raise NotAdmissible("order is not admissible")
    unit_vecs = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    lhs = product((qdilog(e, D, quadratic=quadratic) for e in unit_vecs), n, D)
    rhs = product((qdilog(dimension_vector(iv, n), D, quadratic=quadratic) for iv in reversed(order)), n, D)
    return lhs, rhs


def verify_reineke(order: Sequence[Interval], D: int, quadratic: int | None = None, *, require_admissible: bool = True) -> Report:
    """E(x_e1)...E(x_en) against the product over the order, last interval first.

    With ``require_admissible=False`` the comparison runs for any permutation,
    which is how negative controls are produced.
    """
    if quadratic is None:
        quadratic = DEFAULTS.dilog_quadratic_shift
    order = tuple(order)
    n = max(iv.hi for iv in order)
    if len(order) != num_intervals(n):
        raise NotAdmissible("order does not list every interval")
    params = {
        "n": n,
        "D": D,
        "order": [iv.to_json() for iv in order],
        "quadratic_shift": quadratic,
    }
    with stopwatch() as sw:
        lhs, rhs = reineke_sides(order, D, quadratic, check=require_admissible)
        diff = first_discrepancy(lhs, rhs)
    return Report("reineke", params, PASS if diff is None else FAIL, diff, sw.ms)


def reflect(iv: Interval, n: int) -> Interval:
    return Interval(n - iv.hi + 1, n - iv.lo + 1)


def skein_to_torus(word: Sequence, n: int, D: int, *, chain_power: int | None = None, quadratic: int | None = None) -> TorusSeries:
    """Image of a product of chain-curve dilogarithms E(L[i,j]) in the quantum torus.

    L[i,j] goes to t^(chain_power*(j-i)) x_d with d the dimension vector of
    [n-j+1, n-i+1], and the multiplication order is reversed.
    """
    if chain_power is None:
        chain_power = DEFAULTS.skein_chain_power
    factors = []
    for c in reversed(list(word)):
        if c.sign < 0:
            raise NegativeClass(f"{c} is negatively oriented")
        iv = c.interval
        iv.check(n)
        d = dimension_vector(reflect(iv, n), n)
        factors.append(qdilog(d, D, quadratic=quadratic, linear=chain_power * (iv.hi - iv.lo)))
    return product(factors, n, D)


def verify_skein_shadow(order: Sequence[Interval], D: int, *, chain_power: int | None = None, quadratic: int | None = None) -> Report:
    """Compare the torus images of both sides of the chain-curve identity.

    The short side is E(L_1)...E(L_n); the long side is the product over
    the order with the last interval first.  Both images are also checked
    against the Reineke sides of the reflected, reversed order.
    """
    from .curves import CurveClass

    if chain_power is None:
        chain_power = DEFAULTS.skein_chain_power
    order = tuple(order)
    n = max(iv.hi for iv in order)
    params = {"n": n, "D": D, "order": [iv.to_json() for iv in order], "chain_power": chain_power}
    with stopwatch() as sw:
        short_word = [CurveClass(1, Interval(k, k)) for k in range(1, n + 1)]
        long_word = [CurveClass(1, iv) for iv in reversed(order)]
        s = skein_to_torus(short_word, n, D, chain_power=chain_power, quadratic=quadratic)
        l = skein_to_torus(long_word, n, D, chain_power=chain_power, quadratic=quadratic)
        mirrored = tuple(reflect(iv, n) for iv in reversed(order))
        lhs, rhs = reineke_sides(mirrored, D, quadratic)
        diff = first_discrepancy(s, l)
        if diff is None:
            diff = first_discrepancy(s, lhs) or first_discrepancy(l, rhs)
    return Report("skein_shadow", params, PASS if diff is None else FAIL, diff, sw.ms)
