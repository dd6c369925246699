"""Intervals of the linear A_n quiver, admissible orders and tuple sequences."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

DEFAULT_ORDER_CAP = 5


class LimitExceeded(ValueError):
    pass


class NotAPermutation(ValueError):
    pass


class InvalidTupleSeq(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo},{self.hi}]")

    def check(self, n: int) -> None:
        if self.hi > n:
            raise ValueError(f"interval {self} exceeds n={n}")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"

    def to_json(self) -> list[int]:
        return [self.lo, self.hi]

    @classmethod
    def from_json(cls, data: Sequence[int]) -> Interval:
        lo, hi = data
        return cls(int(lo), int(hi))


def num_intervals(n: int) -> int:
    return n * (n + 1) // 2


def enumerate_intervals(n: int) -> list[Interval]:
    if n < 1:
        raise ValueError("n must be positive")
    return [Interval(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def hom_nonzero(a: Interval, b: Interval) -> bool:
    """Hom(V_a, V_b) != 0 for interval representations of the linear quiver."""
    overlap = a.lo <= b.hi and b.lo <= a.hi
    return overlap and a.lo >= b.lo and a.hi >= b.hi


def _infer_n(seq: Sequence[Interval]) -> int:
    if not seq:
        raise NotAPermutation("empty sequence")
    n = max(iv.hi for iv in seq)
    if len(seq) != num_intervals(n) or set(seq) != set(enumerate_intervals(n)):
        raise NotAPermutation("sequence is not a permutation of all intervals")
    return n


def is_admissible_order(seq: Sequence[Interval]) -> bool:
    """True iff [i,j] precedes [i,j+1] and [i+1,j] whenever they exist."""
    n = _infer_n(seq)
    pos = {iv: k for k, iv in enumerate(seq)}
    for iv in seq:
        i, j = iv.lo, iv.hi
        if j < n and pos[iv] > pos[Interval(i, j + 1)]:
            return False
        if i < j and pos[iv] > pos[Interval(i + 1, j)]:
            return False
    return True


def is_hom_ordered(seq: Sequence[Interval]) -> bool:
    """Hom form of admissibility: b precedes a whenever Hom(V_a, V_b) != 0."""
    _infer_n(seq)
    pos = {iv: k for k, iv in enumerate(seq)}
    return all(
        pos[b] < pos[a] for a in seq for b in seq if a != b and hom_nonzero(a, b)
    )


def enumerate_admissible_orders(n: int, cap: int = DEFAULT_ORDER_CAP) -> list[tuple[Interval, ...]]:
    """All linear extensions, in lexicographic order of interval sequences."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise LimitExceeded(f"n={n} exceeds the order cap {cap}")
    remaining = set(enumerate_intervals(n))
    out: list[tuple[Interval, ...]] = []
    seq: list[Interval] = []

    def ready(iv: Interval) -> bool:
        i, j = iv.lo, iv.hi
        if j > i and Interval(i, j - 1) in remaining:
            return False
        if i > 1 and Interval(i - 1, j) in remaining:
            return False
        return True

    def walk() -> None:
        if not remaining:
            out.append(tuple(seq))
            return
        for iv in sorted(remaining):
            if not ready(iv):
                continue
            remaining.remove(iv)
            seq.append(iv)
            walk()
            seq.pop()
            remaining.add(iv)

    walk()
    return out


def admissible_orders_by_filter(n: int) -> list[tuple[Interval, ...]]:
    """Exhaustive permutation filter; only sensible for n <= 3."""
    ivs = enumerate_intervals(n)
    return sorted(p for p in permutations(ivs) if is_admissible_order(p))


def order_to_tuple_sequence(order: Sequence[Interval]) -> list[tuple[int, ...]]:
    n = _infer_n(order)
    cur = [0] * n
    out = [tuple(cur)]
    for iv in order:
        # entry j is the largest i with [i,j] already placed
        cur[iv.hi - 1] = max(cur[iv.hi - 1], iv.lo)
        out.append(tuple(cur))
    return out


def prefix_length(a: Sequence[int]) -> int:
    """Largest M with a[:M] == (1, ..., M)."""
    m = 0
    while m < len(a) and a[m] == m + 1:
        m += 1
    return m


@dataclass(frozen=True)
class Validation:
    ok: bool
    property: int | None = None
    index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _non_increasing(xs: Sequence[int]) -> bool:
    return all(x >= y for x, y in zip(xs, xs[1:]))


def _successors(a: Sequence[int]) -> set[tuple[int, ...]]:
    # raise the first entry of a maximal constant run in the tail after the prefix
    n = len(a)
    m = prefix_length(a)
    out = set()
    for p in range(m, n):
        if p == m or a[p] != a[p - 1]:
            b = list(a)
            b[p] += 1
            out.add(tuple(b))
    return out


def validate_tuple_sequence(ts: Sequence[Sequence[int]]) -> Validation:
    """Check the four defining properties of a tuple sequence.

    (1) entry j of every tuple is at most j; (2) the first tuple is zero;
    (3) after dropping the first M-1 entries each tuple is non-increasing,
    where M is the length of its (1, 2, ...) prefix; (4) each step raises the
    first entry of a maximal constant run past the prefix by one.
    """
    if not ts:
        return Validation(False, 2, 0, "empty sequence")
    n = len(ts[0])
    tuples = [tuple(int(x) for x in a) for a in ts]
    for k, a in enumerate(tuples):
        if len(a) != n:
            return Validation(False, 1, k, f"tuple {k} has length {len(a)} != {n}")
        for j, x in enumerate(a, start=1):
            if x < 0 or x > j:
                return Validation(False, 1, k, f"tuple {k} entry {j} is {x}")
    if any(tuples[0]):
        return Validation(False, 2, 0, "first tuple is not zero")
    for k, a in enumerate(tuples):
        m = prefix_length(a)
        if not _non_increasing(a[max(m - 1, 0):]):
            return Validation(False, 3, k, f"tuple {k} {a} rises after its prefix")
    for k in range(1, len(tuples)):
        if tuples[k] not in _successors(tuples[k - 1]):
            return Validation(
                False, 4, k, f"tuple {k} {tuples[k]} is not a step from {tuples[k - 1]}"
            )
    return Validation(True)


def tuple_sequence_to_order(ts: Sequence[Sequence[int]]) -> tuple[Interval, ...]:
    v = validate_tuple_sequence(ts)
    if not v:
        raise InvalidTupleSeq(f"property ({v.property}): {v.message}")
    n = len(ts[0])
    if len(ts) != num_intervals(n) + 1:
        raise InvalidTupleSeq(f"incomplete sequence: {len(ts)} tuples, need {num_intervals(n) + 1}")
    out = []
    for prev, cur in zip(ts, ts[1:]):
        j = next(p for p in range(n) if prev[p] != cur[p])
        out.append(Interval(cur[j], j + 1))
    return tuple(out)


def dimension_vector(iv: Interval, n: int) -> tuple[int, ...]:
    iv.check(n)
    return tuple(1 if iv.lo <= k <= iv.hi else 0 for k in range(1, n + 1))


def order_to_json(order: Iterable[Interval]) -> list[list[int]]:
    return [iv.to_json() for iv in order]


def order_from_json(data: Iterable[Sequence[int]]) -> tuple[Interval, ...]:
    return tuple(Interval.from_json(x) for x in data)
