"""Homology-level face operators in the quantum torus of a surface.

Classes live in H_1 with basis L_1..L_n, M_1..M_n.  Monomials multiply as
[x][y] = t^<x,y> [x+y], with the pairing supplied by a PairingConfig, and
each monomial also carries a power of the framing variable a.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import ceil
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .curves import pairing as chain_pairing
from .qring import ONE, ZERO, RatFunc, format_ratfunc
from .qtorus import dilog_coefficient
from .report import FAIL, PASS, Report, stopwatch

SurfaceClass = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class MissingUnknotTerm(ValueError):
    pass


class ZeroClass(ValueError):
    pass


class ConfigError(ValueError):
    pass


def basis_index(n: int, name: str) -> int:
    m = re.fullmatch(r"([LM])(\d+)", name.strip())
    if not m or not 1 <= int(m.group(2)) <= n:
        raise ConfigError(f"bad basis name {name!r} for n={n}")
    k = int(m.group(2)) - 1
    return k if m.group(1) == "L" else n + k


_CLASS_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*([LM]\d+)")


def parse_class(n: int, text: str) -> SurfaceClass:
    """Parse a class such as "-L1-M1+2M2"; "0" is the zero class."""
    out = [0] * (2 * n)
    s = text.strip()
    if s == "0":
        return tuple(out)
    pos = 0
    while pos < len(s):
        m = _CLASS_TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"cannot parse class {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        k = int(m.group(2)) if m.group(2) else 1
        out[basis_index(n, m.group(3))] += sign * k
        pos = m.end()
    return tuple(out)


def format_class(cls: Sequence[int]) -> str:
    n = len(cls) // 2
    parts = []
    for k, c in enumerate(cls):
        if not c:
            continue
        name = f"L{k + 1}" if k < n else f"M{k - n + 1}"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(("-" if c < 0 else "+") + mag + name)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class PairingConfig:
    n: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        size = 2 * self.n
        if len(self.matrix) != size or any(len(r) != size for r in self.matrix):
            raise ConfigError("pairing matrix has the wrong shape")
        for i in range(size):
            for j in range(size):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise ConfigError("pairing matrix is not antisymmetric")
        # the L-block is the chain pairing <L_i, L_(i+1)> = 1
        for i in range(self.n):
            for j in range(self.n):
                want = 1 if j == i + 1 else -1 if i == j + 1 else 0
                if self.matrix[i][j] != want:
                    raise ConfigError(f"pairing of L{i + 1}, L{j + 1} must be {want}")

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[str, int]) -> PairingConfig:
        size = 2 * n
        m = [[0] * size for _ in range(size)]
        for i in range(n - 1):
            m[i][i + 1], m[i + 1][i] = 1, -1
        for key, val in entries.items():
            a, b = (basis_index(n, s) for s in key.split(","))
            if a == b and val:
                raise ConfigError(f"self-pairing of {key} must be 0")
            m[a][b], m[b][a] = int(val), -int(val)
        return cls(n, tuple(tuple(r) for r in m))

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        if len(x) != 2 * self.n or len(y) != 2 * self.n:
            raise DimensionMismatch("class dimension does not match the pairing")
        return sum(
            x[i] * self.matrix[i][j] * y[j]
            for i in range(2 * self.n)
            if x[i]
            for j in range(2 * self.n)
            if y[j]
        )


Term = tuple[int, SurfaceClass, RatFunc]


def surface_mul(x: Term, y: Term, cfg: PairingConfig) -> Term:
    ax, cx, fx = x
    ay, cy, fy = y
    if len(cx) != len(cy):
        raise DimensionMismatch(f"{len(cx)} != {len(cy)}")
    p = cfg.pair(cx, cy)
    return (ax + ay, tuple(a + b for a, b in zip(cx, cy)), (fx * fy).times_monomial(p))


@dataclass(frozen=True)
class FaceTerm:
    a_power: int
    cls: SurfaceClass
    unknot: bool = False

    def coefficient(self) -> RatFunc:
        # loop terms come as (-a)^gamma [l]; the unknot term as a^-1 [O]
        if self.unknot:
            return ONE
        return ONE if self.a_power % 2 == 0 else -ONE


@dataclass(frozen=True)
class FaceOperator:
    terms: tuple[FaceTerm, ...]

    def elements(self) -> list[Term]:
        return [(t.a_power, t.cls, t.coefficient()) for t in self.terms]


def face_operator(terms: Iterable[FaceTerm | tuple]) -> FaceOperator:
    """Build an operator from (a_power, class) loop terms plus one unknot term.

    The unknot term is a FaceTerm with unknot=True, or a tuple
    (a_power, class, "unknot"); it must have a-power -1 and the zero class.
    """
    out = []
    for t in terms:
        if isinstance(t, FaceTerm):
            out.append(t)
        elif len(t) == 3 and t[2] == "unknot":
            out.append(FaceTerm(int(t[0]), tuple(t[1]), True))
        else:
            out.append(FaceTerm(int(t[0]), tuple(t[1])))
    unknots = [t for t in out if t.unknot]
    if len(unknots) != 1:
        raise MissingUnknotTerm(f"expected exactly one unknot term, found {len(unknots)}")
    u = unknots[0]
    if u.a_power != -1 or any(u.cls):
        raise MissingUnknotTerm("the unknot term must be a^-1 times the zero class")
    dims = {len(t.cls) for t in out}
    if len(dims) != 1:
        raise DimensionMismatch("face terms have differing dimensions")
    return FaceOperator(tuple(out))


def _accumulate(acc: dict, key: tuple, val: RatFunc) -> None:
    cur = acc.get(key, ZERO) + val
    if cur.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = cur


def verify_conjugation(
    before: FaceOperator,
    after: FaceOperator,
    E: Sequence[int],
    D: int,
    cfg: PairingConfig,
    *,
    quadratic: int | None = None,
    specialize_a: bool = False,
) -> Report:
    """Check after * E(x_E) = E(x_E) * before up to E-degree D.

    With ``specialize_a`` the framing variable is set to t before comparing,
    as in the linking quotient; otherwise a-powers are compared separately.
    """
    E = tuple(E)
    if not any(E):
        raise ZeroClass("E must be nonzero")
    # grade classes by their coordinate along E, measured from the lowest term
    p = next(i for i, e in enumerate(E) if e)
    terms_b, terms_a = before.elements(), after.elements()
    grades = [Fraction(c[p], E[p]) for _, c, _ in terms_b + terms_a]
    base = min(grades)
    top = D + ceil(max(grades) - base)

    def degree(c: SurfaceClass) -> Fraction:
        return Fraction(c[p], E[p]) - base

    with stopwatch() as sw:
        dilog = [(0, tuple(j * e for e in E), dilog_coefficient(j, quadratic)) for j in range(top + 1)]
        lhs: dict = {}
        rhs: dict = {}
        for left, right, acc in ((terms_a, dilog, lhs), (dilog, terms_b, rhs)):
            for x in left:
                for y in right:
                    a, c, f = surface_mul(x, y, cfg)
                    if degree(c) > D:
                        continue
                    if specialize_a:
                        f, a = f.times_monomial(a), 0
                    _accumulate(acc, (degree(c), a, c), f)
        diff = None
        for k in sorted(set(lhs) | set(rhs)):
            l, r = lhs.get(k, ZERO), rhs.get(k, ZERO)
            if l != r:
                diff = {
                    "degree": str(k[0]),
                    "a_power": k[1],
                    "class": format_class(k[2]),
                    "lhs": format_ratfunc(l),
                    "rhs": format_ratfunc(r),
                }
                break
    return Report(
        "conjugation",
        {"n": cfg.n, "D": D, "E": format_class(E), "specialize_a": specialize_a},
        PASS if diff is None else FAIL,
        diff,
        sw.ms,
    )


# ---------------------------------------------------------------------------
# configuration files


@dataclass(frozen=True)
class ConjugationCase:
    name: str
    E: SurfaceClass
    before: FaceOperator
    after: FaceOperator


@dataclass(frozen=True)
class SkeinConfig:
    n: int
    pairing: PairingConfig
    cases: tuple[ConjugationCase, ...]
    faces: dict[str, tuple[SurfaceClass, ...]]

    def case(self, name: str) -> ConjugationCase:
        for c in self.cases:
            if c.name == name:
                return c
        raise KeyError(name)


def _operator_from_json(n: int, data: Sequence[Mapping[str, Any]]) -> FaceOperator:
    terms = []
    for t in data:
        if t.get("unknot"):
            terms.append(FaceTerm(-1, (0,) * (2 * n), True))
        else:
            terms.append(FaceTerm(int(t["a_power"]), parse_class(n, t["class"])))
    return face_operator(terms)


def parse_config(data: Mapping[str, Any]) -> SkeinConfig:
    try:
        if int(data["version"]) != 1:
            raise ConfigError(f"unsupported config version {data['version']}")
        n = int(data["n"])
        cfg = PairingConfig.from_entries(n, data["pairing"])
        cases = tuple(
            ConjugationCase(
                c["name"],
                parse_class(n, c["E"]),
                _operator_from_json(n, c["before"]),
                _operator_from_json(n, c["after"]),
            )
            for c in data["cases"]
        )
        faces = {
            name: tuple(parse_class(n, s) for s in labels)
            for name, labels in data.get("faces", {}).items()
        }
    except (KeyError, TypeError) as e:
        raise ConfigError(f"malformed skein config: {e}") from None
    return SkeinConfig(n, cfg, cases, faces)


def load_config(path: str | Path | None = None) -> SkeinConfig:
    """Load a skein config from a file, or by name from the packaged data."""
    data_dir = resources.files("dilogskein.data")
    if path is None:
        text = data_dir.joinpath("linkskein_n2.json").read_text()
    elif Path(path).is_file():
        text = Path(path).read_text()
    elif data_dir.joinpath(str(path)).is_file():
        text = data_dir.joinpath(str(path)).read_text()
    else:
        raise ConfigError(f"no skein config at {path}")
    try:
        return parse_config(json.loads(text))
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}") from None


def face_sums(config: SkeinConfig) -> dict[str, SurfaceClass]:
    """Sum of the edge classes around each face; all should vanish."""
    out = {}
    for name, labels in config.faces.items():
        total = [0] * (2 * config.n)
        for c in labels:
            total = [a + b for a, b in zip(total, c)]
        out[name] = tuple(total)
    return out


def edge_face_incidence(config: SkeinConfig) -> dict[SurfaceClass, int]:
    counts: dict[SurfaceClass, int] = {}
    for labels in config.faces.values():
        for c in labels:
            counts[c] = counts.get(c, 0) + 1
    return counts


def chain_block_matches(cfg: PairingConfig) -> bool:
    """The L-block of the pairing agrees with the chain-curve pairing."""
    n = cfg.n
    basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    return all(cfg.matrix[i][j] == chain_pairing(basis[i], basis[j]) for i in range(n) for j in range(n))


def check_face_labels(config: SkeinConfig) -> Report:
    """Each face's edge classes sum to zero and each edge borders two faces."""
    with stopwatch() as sw:
        bad = {name: format_class(s) for name, s in face_sums(config).items() if any(s)}
        lonely = {format_class(c): k for c, k in edge_face_incidence(config).items() if k != 2}
    diff = None
    if bad:
        diff = {"nonzero_faces": bad}
    elif lonely:
        diff = {"edge_face_counts": lonely}
    return Report(
        "face_labels",
        {"n": config.n, "faces": len(config.faces)},
        PASS if diff is None else FAIL,
        diff,
        sw.ms,
    )
