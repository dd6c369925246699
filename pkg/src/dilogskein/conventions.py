"""Versioned convention constants, loaded from a JSON defaults file."""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

SUPPORTED_VERSION = 1


class ConventionError(ValueError):
    pass


@dataclass(frozen=True)
class Conventions:
    version: int
    # coefficient j of the dilogarithm carries t^(shift * j(j-1)/2)
    dilog_quadratic_shift: int
    # pentagon middle factor is E(q^c x_(1,1)); c is a half-integer
    pentagon_middle_power: Fraction
    # chain curve L[i,j] maps to t^(power * (j-i)) x_d
    skein_chain_power: int
    linkskein_config: str
    order_cap: int
    equivalence_cap: int

    def with_overrides(self, **kw: Any) -> Conventions:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _parse(data: dict[str, Any], source: str) -> Conventions:
    unknown = sorted(set(data) - {f.name for f in fields(Conventions)})
    if unknown:
        raise ConventionError(f"{source}: unknown keys {unknown}")
    try:
        version = int(data["version"])
        if version != SUPPORTED_VERSION:
            raise ConventionError(f"{source}: unsupported conventions version {version}")
        mid = Fraction(str(data["pentagon_middle_power"]))
        if (2 * mid).denominator != 1:
            raise ConventionError(f"{source}: pentagon_middle_power must be a half-integer")
        conv = Conventions(
            version=version,
            dilog_quadratic_shift=int(data["dilog_quadratic_shift"]),
            pentagon_middle_power=mid,
            skein_chain_power=int(data["skein_chain_power"]),
            linkskein_config=str(data["linkskein_config"]),
            order_cap=int(data["order_cap"]),
            equivalence_cap=int(data["equivalence_cap"]),
        )
    except KeyError as e:
        raise ConventionError(f"{source}: missing key {e.args[0]!r}") from None
    except (TypeError, ValueError, ZeroDivisionError) as e:
        if isinstance(e, ConventionError):
            raise
        raise ConventionError(f"{source}: {e}") from None
    if conv.order_cap < 1 or conv.equivalence_cap < 1:
        raise ConventionError(f"{source}: caps must be positive")
    return conv


def default_conventions() -> Conventions:
    text = resources.files("dilogskein.data").joinpath("conventions.json").read_text()
    return _parse(json.loads(text), "conventions.json")


def load_conventions(path: str | Path | None = None) -> Conventions:
    if path is None:
        return default_conventions()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConventionError(f"cannot read {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConventionError(f"{path}: expected a JSON object")
    # a partial file overrides only the keys it names
    base = json.loads(resources.files("dilogskein.data").joinpath("conventions.json").read_text())
    base.update(data)
    return _parse(base, str(path))


DEFAULTS = default_conventions()
