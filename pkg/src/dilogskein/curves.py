"""Signed interval curves on the chain L_1..L_n and their Dehn-twist rewrites.

L[i,j] is the curve obtained from L_i by twisting successively along
L_(i+1), ..., L_j; homologically it is [L_i] + ... + [L_j].  A sign flips the
orientation.  Twists follow the oriented-smoothing convention: twisting x
along a curve meeting it once yields the class x + c.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .quiver import Interval
from .report import FAIL, PASS, Report, stopwatch

HomologyVec = tuple[int, ...]


class UnsupportedTwistCase(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CurveClass:
    sign: int
    interval: Interval

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @classmethod
    def of(cls, sign: int, lo: int, hi: int | None = None) -> CurveClass:
        return cls(sign, Interval(lo, lo if hi is None else hi))

    @property
    def lo(self) -> int:
        return self.interval.lo

    @property
    def hi(self) -> int:
        return self.interval.hi

    def __neg__(self) -> CurveClass:
        return CurveClass(-self.sign, self.interval)

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}L[{self.lo},{self.hi}]"

    def to_json(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, s: str) -> CurveClass:
        s = s.strip()
        sign = -1 if s.startswith("-") else 1
        body = s.lstrip("+-")
        if not (body.startswith("L[") and body.endswith("]")):
            raise ValueError(f"bad curve {s!r}")
        lo, hi = body[2:-1].split(",")
        return cls(sign, Interval(int(lo), int(hi)))


def L(lo: int, hi: int | None = None, sign: int = 1) -> CurveClass:
    return CurveClass.of(sign, lo, hi)


def _span(lo: int, hi: int) -> CurveClass:
    return CurveClass(1, Interval(lo, hi))


def _twist_positive_target(c: CurveClass, x: Interval) -> CurveClass:
    a, b = c.lo, c.hi
    i, j = x.lo, x.hi
    if (a, b) == (i, j) or b + 1 < i or j + 1 < a:
        return CurveClass(1, x)
    if c.sign > 0:
        # adjacent chains concatenate
        if b + 1 == i or j + 1 == a:
            return _span(min(a, i), max(b, j))
        raise UnsupportedTwistCase(f"twist along {c} of {CurveClass(1, x)}")
    inner = i <= a and b <= j
    outer = a <= i and j <= b
    if inner and (a == i or b == j):
        # twister is a proper prefix or suffix of the target
        return _span(b + 1, j) if a == i else _span(i, a - 1)
    if outer and (a == i or b == j):
        rest = (j + 1, b) if a == i else (a, i - 1)
        return CurveClass(-1, Interval(*rest))
    raise UnsupportedTwistCase(f"twist along {c} of {CurveClass(1, x)}")


def dehn_twist(twister: CurveClass, target: CurveClass) -> CurveClass:
    """Rewrite the target under the twist along ``twister``.

    Supported: equal or non-adjacent disjoint supports (identity), positive
    twist along an adjacent chain (concatenation), negative twist along a
    prefix/suffix of the target (removal), and negative twist along a chain
    having the target as prefix/suffix (negated complement).  Negative
    targets use tau_c(x) = -tau_(-c)(-x).  Anything else raises.
    """
    if target.sign > 0:
        return _twist_positive_target(twister, target.interval)
    return -_twist_positive_target(-twister, target.interval)


def is_supported(twister: CurveClass, target: CurveClass) -> bool:
    try:
        dehn_twist(twister, target)
    except UnsupportedTwistCase:
        return False
    return True


def reduce_word(word: Sequence[CurveClass]) -> tuple[CurveClass, ...]:
    """Cancel adjacent twist/inverse-twist pairs (tau_c followed by tau_-c)."""
    out: list[CurveClass] = []
    for c in word:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


# ---------------------------------------------------------------------------
# homology oracle


def homology_class(c: CurveClass, n: int) -> HomologyVec:
    c.interval.check(n)
    return tuple(c.sign if c.lo <= k <= c.hi else 0 for k in range(1, n + 1))


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    """Algebraic intersection with <e_i, e_(i+1)> = +1."""
    return sum(x[i] * y[i + 1] - x[i + 1] * y[i] for i in range(len(x) - 1))


def homology_twist(twister: Sequence[int], target: Sequence[int], mode: str = "smoothing") -> HomologyVec:
    """Homology image of a twist.

    ``smoothing`` (the convention used throughout) adds |<x,c>| copies of c;
    ``transvection+``/``transvection-`` are the classical x +- <x,c> c, kept
    for the consistency scan.
    """
    p = pairing(target, twister)
    if mode == "smoothing":
        k = abs(p)
    elif mode == "transvection+":
        k = p
    elif mode == "transvection-":
        k = -p
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return tuple(x + k * c for x, c in zip(target, twister))


def all_curves(n: int) -> list[CurveClass]:
    return [CurveClass(s, Interval(i, j)) for i in range(1, n + 1) for j in range(i, n + 1) for s in (1, -1)]


@dataclass(frozen=True)
class IdentityInstance:
    name: str
    twister: CurveClass
    target: CurveClass
    expected: CurveClass


def identity_instances(n: int) -> Iterator[IdentityInstance]:
    """The five chain identities at every base offset that fits in n."""
    for a in range(1, n + 1):
        for k in range(2, n - a + 2):
            top = a + k - 1
            # tau_(g1) g[2,k] = g[1,k]
            yield IdentityInstance("prepend", _span(a, a), _span(a + 1, top), _span(a, top))
            # tau_(gk) g[1,k-1] = g[1,k]
            yield IdentityInstance("append", _span(top, top), _span(a, top - 1), _span(a, top))
            # tau_(-g[2,k]) g[1,k] = g1
            yield IdentityInstance("keep_head", -_span(a + 1, top), _span(a, top), _span(a, a))
            for j in range(2, k + 1):
                # tau_(-g[j,k]) g[1,k] = g[1,j-1]
                yield IdentityInstance(
                    "drop_suffix", -_span(a + j - 1, top), _span(a, top), _span(a, a + j - 2)
                )
            for j in range(1, k):
                # tau_(-g[1,k]) g[1,j] = -g[j+1,k]
                yield IdentityInstance(
                    "complement", -_span(a, top), _span(a, a + j - 1), -_span(a + j, top)
                )


def check_twist_consistency(n: int, mode: str = "smoothing") -> Report:
    """Every supported rewrite agrees with the homology oracle."""
    if not 1 <= n <= 8:
        raise ValueError("n must be in 1..8")
    violations = []
    supported = 0
    with stopwatch() as sw:
        curves = all_curves(n)
        for c in curves:
            for x in curves:
                try:
                    y = dehn_twist(c, x)
                except UnsupportedTwistCase:
                    continue
                supported += 1
                got = homology_class(y, n)
                want = homology_twist(homology_class(c, n), homology_class(x, n), mode)
                if got != want:
                    violations.append({"twister": str(c), "target": str(x), "rewrite": str(y), "homology": list(want)})
        for inst in identity_instances(n):
            y = dehn_twist(inst.twister, inst.target)
            if y != inst.expected:
                violations.append({"identity": inst.name, "twister": str(inst.twister), "target": str(inst.target), "rewrite": str(y), "expected": str(inst.expected)})
    diff = violations[0] if violations else None
    return Report(
        "twists",
        {"n": n, "mode": mode},
        PASS if not violations else FAIL,
        diff,
        sw.ms,
        {"supported_pairs": supported, "violations": len(violations)},
    )
