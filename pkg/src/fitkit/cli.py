"""Command line interface: ``fitkit compute``, ``fitkit verify`` and ``fitkit enumerate``.

Every command writes one JSON report (schema ``fitkit-report/1``) to ``--out``
or stdout.  ``verify`` and ``enumerate`` exit with status 0 iff no check failed.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import config as config_io
from .characters import (
    criterion_check,
    curated_criterion_data,
    faithful_character,
    prime_to_p_group,
    verify_chi_equality,
    verify_p_group_comparisons,
)
from .fitting import seed_from_env
from .groups import GroupInputError, InertiaConfig, prime_factors
from .ideals import FractionalIdeal
from .lattice import Lattice, quotient_structure
from .report import CheckRecord, build_report, dumps, exit_status, skipped
from .shifted import (
    J_i_ideal,
    J_ideal,
    Z_ideal,
    fitt_sh1,
    fitt_shm1,
    shift_rhs,
    verify_augmentation_fitting,
    verify_J_identities,
    verify_J_independence,
    verify_lift_invariance,
    verify_N_fitting,
    verify_shift_equality,
    verify_shift_inclusion,
    verify_shift_minus_one,
)
from .sweep import ORDER_CAP, sweep_configs
from .wmodule import build_W_for, f_map

TARGETS = ("fitt1", "fittm1", "J", "Zi", "Ji", "W", "theorem2-rhs")
SUITES = ("theorem2", "prop-N", "prop-Ji", "cor42", "J-independence", "lemma-Av", "lemma-51", "lemma-52", "theorem3")

# relation modules with s >= 4 generators are large; prop-Ji stops there
PROP_JI_MAX_S = 3


# compute ------------------------------------------------------------------


def compute_target(target: str, cfg: InertiaConfig, index: int | None = None) -> dict:
    """The requested object as JSON: an ideal (basis and denominator) or the lattice W."""
    if target in ("Zi", "Ji"):
        i = cfg.s if index is None else index
        if not 0 <= i <= cfg.s:
            raise config_io.ConfigError("--index", f"index must lie in 0..{cfg.s}")
        ideal = Z_ideal(cfg, i) if target == "Zi" else J_i_ideal(cfg, i)
        return {"index": i, "ideal": ideal.to_dict()}
    if target == "W":
        W = build_W_for(cfg)
        image = Lattice(W.x_dim, f_map(W))
        full = Lattice(W.x_dim, [[int(i == j) for j in range(W.x_dim)] for i in range(W.x_dim)])
        inv, free = quotient_structure(full, image)
        return {
            "D": list(W.D.factors),
            "I": [list(x) for x in W.I.generators],
            "phi": list(W.phi),
            "basis": [list(b) for b in W.basis],
            "f_matrix": [list(r) for r in f_map(W)],
            "cokernel_invariants": list(inv),
            "cokernel_free_rank": free,
        }
    compute: dict[str, Callable[[InertiaConfig], FractionalIdeal]] = {
        "fitt1": fitt_sh1,
        "fittm1": fitt_shm1,
        "J": J_ideal,
        "theorem2-rhs": shift_rhs,
    }
    return {"ideal": compute[target](cfg).to_dict()}


# verify -------------------------------------------------------------------


def _timed(records: Iterable[CheckRecord], t0: float) -> list[CheckRecord]:
    records = list(records)
    dt = (time.perf_counter() - t0) / max(1, len(records))
    for r in records:
        if r.duration is None:
            r.duration = dt
    return records


def _primes_for(cfg: InertiaConfig, primes: Sequence[int] | None) -> list[int]:
    if primes:
        return list(primes)
    return [p for p in prime_factors(cfg.G.order) if p != 2]


def run_suite(suite: str, cfg: InertiaConfig, primes: Sequence[int] | None = None, seed: int = 0,
              chi=None, places: Sequence[InertiaConfig] | None = None) -> list[CheckRecord]:
    """Records of one suite on one config (``places`` only matters for theorem3)."""
    t0 = time.perf_counter()
    if suite == "theorem2":
        return _timed([verify_shift_equality(cfg).record(), *verify_J_identities(cfg)], t0)
    if suite == "prop-N":
        orders = [n for n in cfg.decomposition.orders if n > 1]
        if not orders:
            return [skipped("prop-N", "i=0", "Fitt_i(N_s) closed form", cfg.label(), "I is trivial")]
        return _timed(verify_N_fitting(orders), t0)
    if suite == "prop-Ji":
        if cfg.s > PROP_JI_MAX_S:
            return [skipped("prop-Ji", "i=0", "Fitt_i(I_I) = J_i", cfg.label(), f"s > {PROP_JI_MAX_S}")]
        return _timed(verify_augmentation_fitting(cfg), t0)
    if suite == "cor42":
        return _timed([*verify_shift_minus_one(cfg), *verify_shift_inclusion(cfg)], t0)
    if suite == "J-independence":
        return _timed([verify_J_independence(cfg, seed=seed), verify_lift_invariance(cfg)], t0)
    if suite == "lemma-Av":
        from .wmodule import verify_W_cokernel

        return _timed(verify_W_cokernel(cfg), t0)
    if suite == "lemma-51":
        return _timed([verify_chi_equality(cfg, p, chi) for p in _primes_for(cfg, primes)], t0)
    if suite == "lemma-52":
        return _timed([r for p in _primes_for(cfg, primes) for r in verify_p_group_comparisons(cfg, p)], t0)
    if suite == "theorem3":
        out = []
        for p in _primes_for(cfg, primes):
            c = chi or faithful_character(prime_to_p_group(cfg.G, p))
            if c is None or not c.is_faithful():
                out.append(skipped("theorem3", "criterion-equivalence", "criterion equivalence",
                                   f"{cfg.label()} p[{p}]", "no faithful character of G'"))
                continue
            out.append(criterion_check(cfg.G, p, c, list(places or [cfg])))
        return _timed(out, t0)
    raise ValueError(f"unknown suite {suite!r}")


def _suites(name: str) -> tuple[str, ...]:
    return SUITES if name == "all" else (name,)


def _config_task(args) -> list[CheckRecord]:
    """Worker entry point: rebuild the config from plain data and run the suites."""
    factors, data, suites, primes, seed = args
    cfg = config_io.parse_config({"group": list(factors), **data}).config
    out = []
    for suite in suites:
        out.extend(run_suite(suite, cfg, primes, seed))
    return out


def sweep_records(max_order: int, suites: Sequence[str], primes: Sequence[int] | None, jobs: int = 1,
                  seed: int = 0) -> list[CheckRecord]:
    configs = sweep_configs(max_order)
    tasks = [(cfg.G.factors, cfg.as_dict(), tuple(suites), tuple(primes or ()), seed) for cfg in configs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_config_task, tasks, chunksize=4))
    else:
        chunks = [_config_task(t) for t in tasks]
    return _dedupe(r for chunk in chunks for r in chunk)


def _dedupe(records: Iterable[CheckRecord]) -> list[CheckRecord]:
    """Drop repeats of the same (suite, config, name), e.g. prop-N over equal part orders."""
    seen = {}
    for r in records:
        seen.setdefault(r.sort_key(), r)
    return list(seen.values())


def config_records(cf: config_io.ConfigFile, suites: Sequence[str], primes: Sequence[int] | None,
                   seed: int) -> list[CheckRecord]:
    primes = primes or ([cf.prime] if cf.prime else None)
    out = []
    for suite in suites:
        if suite == "theorem3":
            out.extend(run_suite(suite, cf.config, primes, seed, cf.chi, cf.all_places()))
            continue
        chi = cf.chi if suite == "lemma-51" else None
        for cfg in cf.all_places():
            out.extend(run_suite(suite, cfg, primes, seed, chi))
    return _dedupe(out)


# entry point --------------------------------------------------------------


def _write(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fitkit", description="Exact shifted Fitting ideal computations and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute one ideal or the module W for a config")
    c.add_argument("target", choices=TARGETS)
    c.add_argument("--config", required=True)
    c.add_argument("--index", type=int, help="i for Zi and Ji (default s)")
    c.add_argument("--out")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--config")
    src.add_argument("--sweep", type=int, metavar="MAX_ORDER")
    v.add_argument("--p", type=int, action="append", help="prime (repeatable)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out")
    v.add_argument("--timings", action="store_true", help="include per-record durations")

    e = sub.add_parser("enumerate", help="sweep all odd-order groups and run every suite")
    e.add_argument("--max-order", type=int, required=True)
    e.add_argument("--p", type=int, action="append", help="prime (repeatable)")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out")
    e.add_argument("--timings", action="store_true", help="include per-record durations")

    cu = sub.add_parser("curated", help="run the criterion on the built-in curated data")
    cu.add_argument("--out")
    return ap


def _check_primes(primes) -> None:
    for p in primes or ():
        if p == 2 or p < 2 or prime_factors(p) != [p]:
            raise config_io.ConfigError("--p", f"{p} is not an odd prime")


def _check_cap(n: int) -> None:
    if n > ORDER_CAP:
        raise config_io.ConfigError("--max-order", f"{n} exceeds the safety cap {ORDER_CAP}")


def run(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    seed = seed_from_env()
    try:
        if args.command == "compute":
            cf = config_io.load(args.config)
            result = compute_target(args.target, cf.config, args.index)
            inputs = {"config": cf.raw, "target": args.target, "index": args.index}
            report = build_report("compute", inputs, [], seed,
                                  extra={"target": args.target, "config": cf.config.as_dict(), "result": result})
            _write(report, args.out)
            return 0
        if args.command == "verify":
            _check_primes(args.p)
            suites = _suites(args.suite)
            if args.sweep is not None:
                _check_cap(args.sweep)
                records = sweep_records(args.sweep, suites, args.p, args.jobs, seed)
                inputs = {"sweep": args.sweep, "suite": args.suite, "p": args.p}
            else:
                cf = config_io.load(args.config)
                records = config_records(cf, suites, args.p, seed)
                inputs = {"config": cf.raw, "suite": args.suite, "p": args.p}
            report = build_report(f"verify {args.suite}", inputs, records, seed, args.timings)
            _write(report, args.out)
            return exit_status(report)
        if args.command == "enumerate":
            _check_primes(args.p)
            _check_cap(args.max_order)
            records = sweep_records(args.max_order, SUITES, args.p, args.jobs, seed)
            n_configs = len(sweep_configs(args.max_order))
            inputs = {"max_order": args.max_order, "p": args.p}
            report = build_report("enumerate", inputs, records, seed, args.timings,
                                  extra={"configs": n_configs, "max_order": args.max_order})
            _write(report, args.out)
            return exit_status(report)
        if args.command == "curated":
            records = [criterion_check(G, p, chi, places, name) for name, G, p, chi, places in curated_criterion_data()]
            report = build_report("curated", {"curated": True}, records, seed)
            _write(report, args.out)
            return exit_status(report)
    except (config_io.ConfigError, GroupInputError, OSError) as exc:
        print(f"fitkit: error: {exc}", file=sys.stderr)
        return 2
    return 2  # pragma: no cover


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
