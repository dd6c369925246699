"""Command line entry point.  JSON goes to stdout (or --out), a summary to stderr.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import permutations
from pathlib import Path
from typing import Any, Callable, Sequence

from . import curves, graphs, linkskein, qtorus, quiver
from .conventions import ConventionError, Conventions, load_conventions
from .report import FAIL, PASS, Report, stopwatch

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigInvalid(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int | None
    degree: int | None
    order: str | None
    out: Path | None
    conventions: Conventions
    jobs: int
    timing: bool
    skein_config: str | None
    negative_control: bool = False


def _select_orders(n: int, selector: str | None, cap: int) -> list[tuple[quiver.Interval, ...]]:
    if selector is None or selector == "all":
        return quiver.enumerate_admissible_orders(n, cap=cap)
    if selector.lstrip("-").isdigit():
        orders = quiver.enumerate_admissible_orders(n, cap=cap)
        k = int(selector)
        if not 0 <= k < len(orders):
            raise ConfigInvalid(f"order index {k} out of range 0..{len(orders) - 1}")
        return [orders[k]]
    try:
        order = quiver.order_from_json(json.loads(selector))
    except (json.JSONDecodeError, TypeError, ValueError) as e:
        raise ConfigInvalid(f"cannot read order {selector!r}: {e}") from None
    try:
        ok = quiver.is_admissible_order(order)
    except quiver.NotAPermutation as e:
        raise ConfigInvalid(str(e)) from None
    if not ok:
        raise ConfigInvalid("order is not admissible")
    if max(iv.hi for iv in order) != n:
        raise ConfigInvalid(f"order is for n={max(iv.hi for iv in order)}, not {n}")
    return [order]


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _need(value: Any, flag: str) -> Any:
    if value is None:
        raise ConfigInvalid(f"{flag} is required")
    return value


def _status(reports: Sequence[Report]) -> int:
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _summary(reports: Sequence[Report]) -> str:
    lines = []
    for r in reports:
        extra = ""
        if r.first_discrepancy is not None:
            extra = " first discrepancy: " + json.dumps(r.first_discrepancy, sort_keys=True)
        lines.append(f"{r.identity}: {r.status}{extra}")
    return "\n".join(lines)


def _census(m: int, cap: int) -> dict[str, Any]:
    orders = quiver.enumerate_admissible_orders(m, cap=cap)
    seqs = [quiver.order_to_tuple_sequence(o) for o in orders]
    entry: dict[str, Any] = {
        "n": m,
        "count": len(orders),
        "round_trip": all(quiver.tuple_sequence_to_order(ts) == o for ts, o in zip(seqs, orders)),
        "endpoints": all(
            ts[0] == (0,) * m and ts[-1] == tuple(range(1, m + 1)) for ts in seqs
        ),
    }
    if m <= 3:
        entry["matches_permutation_filter"] = quiver.admissible_orders_by_filter(m) == orders
    return entry


def cmd_orders(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    cap = cfg.conventions.order_cap
    orders = quiver.enumerate_admissible_orders(n, cap=cap)
    census = [_census(m, cap) for m in range(1, n + 1)]
    ok = all(all(v for k, v in c.items() if isinstance(v, bool)) for c in census)
    payload = {
        "n": n,
        "count": len(orders),
        "orders": [quiver.order_to_json(o) for o in orders],
        "tuple_sequences": [[list(a) for a in quiver.order_to_tuple_sequence(o)] for o in orders],
        "census": census,
    }
    counts = ", ".join(f"n={c['n']}: {c['count']}" for c in census)
    return payload, EXIT_OK if ok else EXIT_FAIL, f"admissible orders {counts}; census checks {'pass' if ok else 'fail'}"


def cmd_pentagon(cfg: RunConfig) -> tuple[Any, int, str]:
    D = _need(cfg.degree, "--degree")
    c = cfg.conventions
    r = qtorus.verify_pentagon(D, c.pentagon_middle_power, c.dilog_quadratic_shift)
    return r.to_dict(cfg.timing), _status([r]), _summary([r])


def _negative_control(n: int, D: int, quadratic: int) -> Report:
    # every non-admissible permutation must break the identity by degree D
    if n > 3:
        raise ConfigInvalid("the negative control enumerates permutations; use n <= 3")
    survivors = []
    total = 0
    with stopwatch() as sw:
        for perm in permutations(quiver.enumerate_intervals(n)):
            if quiver.is_admissible_order(perm):
                continue
            total += 1
            r = qtorus.verify_reineke(perm, D, quadratic, require_admissible=False)
            if r.passed:
                survivors.append(quiver.order_to_json(perm))
    diff = {"passing_permutations": survivors} if survivors else None
    return Report(
        "reineke_negative_control",
        {"n": n, "D": D},
        PASS if diff is None else FAIL,
        diff,
        sw.ms,
        {"non_admissible": total, "failed_identity": total - len(survivors)},
    )


def cmd_reineke(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    D = _need(cfg.degree, "--degree")
    if cfg.negative_control:
        r = _negative_control(n, D, cfg.conventions.dilog_quadratic_shift)
        return r.to_dict(cfg.timing), _status([r]), _summary([r])
    orders = _select_orders(n, cfg.order, cfg.conventions.order_cap)
    fn = partial(qtorus.verify_reineke, D=D, quadratic=cfg.conventions.dilog_quadratic_shift)
    reports = _map(fn, orders, cfg.jobs)
    return [r.to_dict(cfg.timing) for r in reports], _status(reports), _summary(reports)


def cmd_shadow(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    D = _need(cfg.degree, "--degree")
    c = cfg.conventions
    orders = _select_orders(n, cfg.order, c.order_cap)
    fn = partial(
        qtorus.verify_skein_shadow,
        D=D,
        chain_power=c.skein_chain_power,
        quadratic=c.dilog_quadratic_shift,
    )
    reports = _map(fn, orders, cfg.jobs)
    return [r.to_dict(cfg.timing) for r in reports], _status(reports), _summary(reports)


def cmd_mutate(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    if n < 2:
        raise ConfigInvalid("mutation sequences need n >= 2")
    if cfg.order is None:
        trace = graphs.short_sequence(n)
        ok = bool(graphs.graphs_equal(trace.final, graphs.canoe_graph(n)))
        payload = {"n": n, "kind": "short", "trace": trace.to_json(), "ends_at_canoe": ok}
        return payload, EXIT_OK if ok else EXIT_FAIL, f"short sequence, n={n}: ends at canoe = {ok}"
    orders = _select_orders(n, cfg.order, cfg.conventions.order_cap)
    out = []
    all_ok = True
    for o in orders:
        trace = graphs.long_sequence(o)
        ok = bool(graphs.graphs_equal(trace.final, graphs.canoe_graph(n)))
        all_ok &= ok
        out.append({"order": quiver.order_to_json(o), "trace": trace.to_json(), "ends_at_canoe": ok})
    payload = {"n": n, "kind": "long", "traces": out}
    return payload, EXIT_OK if all_ok else EXIT_FAIL, f"{len(out)} long sequences, n={n}: all end at canoe = {all_ok}"


def cmd_equivalence(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    if n < 2:
        raise ConfigInvalid("mutation sequences need n >= 2")
    cap = cfg.conventions.equivalence_cap
    if n > cap:
        raise ConfigInvalid(f"n={n} exceeds the equivalence cap {cap}")
    r = graphs.verify_mutation_equivalence(n, cap=cap, jobs=cfg.jobs)
    return r.to_dict(cfg.timing), _status([r]), _summary([r])


def cmd_twists(cfg: RunConfig) -> tuple[Any, int, str]:
    n = _need(cfg.n, "--n")
    if not 1 <= n <= 8:
        raise ConfigInvalid("--n must be in 1..8")
    r = curves.check_twist_consistency(n)
    return r.to_dict(cfg.timing), _status([r]), _summary([r])


def cmd_conjugation(cfg: RunConfig) -> tuple[Any, int, str]:
    D = cfg.degree if cfg.degree is not None else 4
    path = cfg.skein_config or cfg.conventions.linkskein_config
    try:
        sk = linkskein.load_config(path)
    except linkskein.ConfigError as e:
        raise ConfigInvalid(str(e)) from None
    reports = []
    for case in sk.cases:
        r = linkskein.verify_conjugation(
            case.before, case.after, case.E, D, sk.pairing,
            quadratic=cfg.conventions.dilog_quadratic_shift,
        )
        r.params["case"] = case.name
        reports.append(r)
    if sk.faces:
        reports.append(linkskein.check_face_labels(sk))
    return [r.to_dict(cfg.timing) for r in reports], _status(reports), _summary(reports)


COMMANDS: dict[str, Callable[[RunConfig], tuple[Any, int, str]]] = {
    "orders": cmd_orders,
    "pentagon": cmd_pentagon,
    "reineke": cmd_reineke,
    "shadow": cmd_shadow,
    "mutate": cmd_mutate,
    "equivalence": cmd_equivalence,
    "twists": cmd_twists,
    "conjugation": cmd_conjugation,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of quiver vertices / chain curves")
    common.add_argument("--degree", type=int, help="truncation degree D")
    common.add_argument("--order", help='"all", an index into the order list, or a JSON interval list')
    common.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    common.add_argument("--convention-file", help="JSON file overriding the convention defaults")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    common.add_argument("--no-timing", action="store_true", help="emit runtime_ms as null")
    common.add_argument("--middle-power", help="override the pentagon middle q-power (half-integer)")
    common.add_argument("--chain-power", type=int, help="override the chain-curve t-power")
    common.add_argument("--quadratic-shift", type=int, help="override the dilogarithm quadratic t-power")
    common.add_argument("--config", help="skein configuration JSON (conjugation)")
    common.add_argument(
        "--negative-control",
        action="store_true",
        help="reineke: require every non-admissible permutation to fail",
    )

    parser = argparse.ArgumentParser(prog="dilogskein", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "orders": "enumerate admissible interval orders",
        "pentagon": "check the pentagon identity",
        "reineke": "check the product identity for admissible orders",
        "shadow": "check the chain-curve identity through the torus identification",
        "mutate": "emit the short trace, or long traces with --order",
        "equivalence": "check short and long mutation sequences agree",
        "twists": "check the Dehn-twist rewrites against homology",
        "conjugation": "check the face-operator conjugation witness",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    conv = load_conventions(args.convention_file)
    mid = None
    if args.middle_power is not None:
        try:
            mid = Fraction(args.middle_power)
        except (ValueError, ZeroDivisionError):
            raise ConfigInvalid(f"bad --middle-power {args.middle_power!r}") from None
        if (2 * mid).denominator != 1:
            raise ConfigInvalid("--middle-power must be a half-integer")
    conv = conv.with_overrides(
        pentagon_middle_power=mid,
        skein_chain_power=args.chain_power,
        dilog_quadratic_shift=args.quadratic_shift,
    )
    if args.n is not None and args.n < 1:
        raise ConfigInvalid("--n must be at least 1")
    if args.degree is not None and args.degree < 0:
        raise ConfigInvalid("--degree must be nonnegative")
    if args.jobs < 1:
        raise ConfigInvalid("--jobs must be positive")
    return RunConfig(
        subcommand=args.subcommand,
        n=args.n,
        degree=args.degree,
        order=args.order,
        out=args.out,
        conventions=conv,
        jobs=args.jobs,
        timing=not args.no_timing,
        skein_config=args.config,
        negative_control=args.negative_control,
    )


def run(cfg: RunConfig) -> int:
    payload, code, summary = COMMANDS[cfg.subcommand](cfg)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        return run(cfg)
    except (ConfigInvalid, ConventionError, quiver.LimitExceeded, linkskein.ConfigError) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
