"""Command-line orchestration of the verification suites.

Exit codes: 0 when every check passes, 1 when any identity fails, 2 for
usage or configuration errors.  Reports are JSON with deterministic check
ordering; ``QAFFINE_JOBS`` sets the default worker count for ``run-all``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .embedding import EmbeddingSpec, identity_realization, realization
from .report import SuiteReport, checked
from .tensormod import ModuleContext, WindowError, relation_suite

SUITES = (
    "chevalley-sanity", "phi-relations", "serre-free", "lemma-s", "intertwine",
    "coproduct", "gl-variant", "schur-compat", "classical-oracle",
    "parser-roundtrip",
)


class ConfigError(ValueError):
    pass


def _window(text):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise ConfigError(f"window must look like LO:HI, got {text!r}") from exc


def _spec(config: dict) -> EmbeddingSpec:
    try:
        return EmbeddingSpec(config["n"], config["r"], config["eps"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid embedding parameters: {exc}") from exc


def run_suite(config: dict) -> SuiteReport:
    """Execute one suite described by a plain configuration mapping."""
    suite = config.get("suite")
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    window = config.get("window", (-8, 8))
    mutate = config.get("mutate")
    started = time.perf_counter()
    params = {k: v for k, v in config.items() if k != "suite" and v is not None}
    report = SuiteReport(suite, params)

    if suite == "chevalley-sanity":
        n, d = _require(config, "n"), _require(config, "d")
        if n < 2 or d < 1:
            raise ConfigError("chevalley-sanity needs n >= 2 and d >= 1")
        ctx = ModuleContext(n, d, window)
        report.extend(relation_suite(ctx, n, identity_realization(n)))
    elif suite == "phi-relations":
        spec = _spec(config)
        d = _require(config, "d")
        ctx = ModuleContext(spec.n + 1, d, window)
        report.extend(relation_suite(ctx, spec.n, realization(spec, mutate=mutate)))
    elif suite == "serre-free":
        from .positive import verify_serre_for_images
        spec = _spec(config)
        report.extend(verify_serre_for_images(spec.n, spec.r, spec.eps,
                                              mutate=mutate))
    elif suite == "lemma-s":
        from .positive import verify_lemma_formulas
        report.extend(verify_lemma_formulas(config.get("pmax") or 4))
    elif suite == "intertwine":
        from .embedding import verify_intertwining
        spec = _spec(config)
        report.extend(verify_intertwining(spec, _require(config, "d"),
                                          window, mutate=mutate))
    elif suite == "coproduct":
        from .embedding import verify_coproduct_identity
        report.extend(verify_coproduct_identity(_spec(config), window))
    elif suite == "gl-variant":
        from .embedding import verify_gl_suite
        report.extend(verify_gl_suite(_spec(config), _require(config, "d"), window))
    elif suite == "schur-compat":
        from .schur import (pairing_adjointness_check, roundtrip_checks,
                            verify_schur_compatibility)
        spec = _spec(config)
        report.extend(verify_schur_compatibility(spec, _require(config, "d"), window))
        report.extend(pairing_adjointness_check(spec.n, spec.r))
        report.extend(roundtrip_checks(spec.n, spec.r))
    elif suite == "classical-oracle":
        from .embedding import verify_classical_bracket
        n = _require(config, "n")
        if n < 2:
            raise ConfigError("classical-oracle needs n >= 2")
        trials = config.get("trials") or 100
        seed = config.get("seed") or 0
        for r in range(n + 1):
            for variant in ("sl", "gl"):
                report.extend(verify_classical_bracket(n, r, variant, trials, seed))
    elif suite == "parser-roundtrip":
        report.extend(_parser_roundtrip(config.get("count") or 1000,
                                        config.get("seed") or 0))
    report.wallclock = time.perf_counter() - started
    return report


def _require(config: dict, key: str):
    value = config.get(key)
    if value is None:
        raise ConfigError(f"suite {config.get('suite')!r} needs --{key}")
    return value


def _parser_roundtrip(count: int, seed: int) -> list:
    from .expr import format_expression, parse_expression, random_expression
    rng = random.Random(seed or 64417)
    bad = 0
    witness = None
    for t in range(count):
        m = rng.choice((2, 3, 4))
        x = random_expression(rng, m)
        back = parse_expression(format_expression(x), m)
        if back != x:
            bad += 1
            if witness is None:
                witness = f"case {t}: {format_expression(x)!r}"
    return [checked("parse-format-identity", bad == 0, witness=witness,
                    cases=count, failures=bad)]


# ---------------------------------------------------------------------------
# the default verification matrix (one entry per acceptance criterion)
# ---------------------------------------------------------------------------

def default_matrix(mutate: str | None = None) -> list:
    configs = []
    for n in (2, 3, 4):
        for d in (1, 2, 3):
            configs.append({"suite": "chevalley-sanity", "n": n, "d": d})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                for d in (1, 2):
                    configs.append({"suite": "phi-relations", "n": n, "r": r,
                                    "eps": eps, "d": d, "mutate": mutate})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                configs.append({"suite": "serre-free", "n": n, "r": r,
                                "eps": eps, "mutate": mutate})
    configs.append({"suite": "lemma-s", "pmax": 4})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                for d in (1, 2, 3):
                    configs.append({"suite": "intertwine", "n": n, "r": r,
                                    "eps": eps, "d": d, "mutate": mutate})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                configs.append({"suite": "coproduct", "n": n, "r": r, "eps": eps})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                for d in (1, 2):
                    configs.append({"suite": "gl-variant", "n": n, "r": r,
                                    "eps": eps, "d": d})
    for n in (2, 3):
        for r in range(n):
            for eps in (1, -1):
                for d in (1, 2, 3):
                    configs.append({"suite": "schur-compat", "n": n, "r": r,
                                    "eps": eps, "d": d})
    for r in range(4):
        configs.append({"suite": "schur-compat", "n": 4, "r": r, "eps": -1, "d": 1})
    for n in (2, 3, 4):
        configs.append({"suite": "classical-oracle", "n": n, "trials": 100})
    configs.append({"suite": "parser-roundtrip", "count": 1000})
    return configs


def run_matrix(configs: list, jobs: int = 1) -> dict:
    """Run a list of suite configs, optionally on a process pool; the report
    order always follows the config order."""
    started = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dicts = list(pool.map(_run_suite_dict, configs))
    else:
        dicts = [_run_suite_dict(c) for c in configs]
    counts = {"passed": 0, "failed": 0}
    for rep in dicts:
        counts["passed"] += rep["counts"]["passed"]
        counts["failed"] += rep["counts"]["failed"]
    return {"suites": dicts, "counts": counts,
            "wallclock": time.perf_counter() - started}


def _run_suite_dict(config: dict) -> dict:
    return run_suite(config).to_dict()


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qaffine",
        description="exact verification of rank-raising quantum affine embeddings")
    sub = top.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run one verification suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--n", type=int)
    ver.add_argument("--r", type=int)
    ver.add_argument("--eps", type=str, choices=("+1", "-1", "1"))
    ver.add_argument("--d", type=int)
    ver.add_argument("--window", type=str, default="-8:8", metavar="LO:HI")
    ver.add_argument("--pmax", type=int)
    ver.add_argument("--trials", type=int)
    ver.add_argument("--count", type=int)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--mutate", type=str, choices=("sign-eps",))
    ver.add_argument("--out", type=str, help="write the JSON report here")
    ver.add_argument("--quiet", action="store_true")

    allp = sub.add_parser("run-all", help="run the whole verification matrix")
    allp.add_argument("--config", type=str,
                      help="JSON file with a list of suite configs")
    allp.add_argument("--out", type=str)
    allp.add_argument("--jobs", type=int,
                      default=int(os.environ.get("QAFFINE_JOBS", "1")))
    allp.add_argument("--mutate", type=str, choices=("sign-eps",))

    evp = sub.add_parser("eval", help="act an expression on a tensor vector")
    evp.add_argument("--n", type=int, required=True)
    evp.add_argument("--d", type=int, required=True)
    evp.add_argument("--expr", type=str, required=True)
    evp.add_argument("--vec", type=str, required=True)
    evp.add_argument("--window", type=str, default="-8:8", metavar="LO:HI")

    rep = sub.add_parser("report", help="pretty-print a JSON report")
    rep.add_argument("path", type=str)
    rep.add_argument("--pretty", action="store_true", default=True)
    return top


def _cmd_verify(args) -> int:
    config = {"suite": args.suite, "n": args.n, "r": args.r,
              "eps": int(args.eps) if args.eps else None,
              "d": args.d, "window": _window(args.window), "pmax": args.pmax,
              "trials": args.trials, "count": args.count, "seed": args.seed,
              "mutate": args.mutate}
    report = run_suite(config)
    if not args.quiet:
        for line in report.summary_lines():
            print(line)
    counts = report.counts
    print(f"{report.suite}: {counts['passed']} passed, {counts['failed']} failed "
          f"in {report.wallclock:.2f}s")
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(report.to_json(pretty=True) + "\n")
    return 0 if report.passed else 1


def _cmd_run_all(args) -> int:
    if args.config:
        with open(args.config) as handle:
            configs = json.load(handle)
        if not isinstance(configs, list) or not configs:
            raise ConfigError("config file must hold a non-empty list of suites")
        for entry in configs:
            if "window" in entry:
                entry["window"] = tuple(entry["window"])
    else:
        configs = default_matrix(mutate=args.mutate)
    aggregate = run_matrix(configs, jobs=max(1, args.jobs))
    for rep in aggregate["suites"]:
        c = rep["counts"]
        status = "PASS" if c["failed"] == 0 else "FAIL"
        ptxt = " ".join(f"{k}={v}" for k, v in rep["params"].items()
                        if k not in ("window",) and v is not None)
        print(f"[{status}] {rep['suite']:16} {ptxt:34} "
              f"{c['passed']:4} passed {c['failed']:3} failed "
              f"({rep['wallclock']:.2f}s)")
    counts = aggregate["counts"]
    print(f"total: {counts['passed']} passed, {counts['failed']} failed "
          f"in {aggregate['wallclock']:.1f}s")
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(aggregate, handle, indent=2)
            handle.write("\n")
    return 0 if counts["failed"] == 0 else 1


def _cmd_eval(args) -> int:
    from .expr import parse_expression
    from .tensormod import act_expression, format_vector, parse_vector

    ctx = ModuleContext(args.n, args.d, _window(args.window))
    x = parse_expression(args.expr, args.n)
    vec = parse_vector(args.vec, ctx)
    print(format_vector(act_expression(ctx, x, vec)))
    return 0


def _cmd_report(args) -> int:
    with open(args.path) as handle:
        data = json.load(handle)
    suites = data["suites"] if "suites" in data else [data]
    failed = 0
    for rep in suites:
        print(f"suite {rep['suite']}  params {json.dumps(rep['params'])}  "
              f"wallclock {rep['wallclock']:.2f}s")
        for check in rep["checks"]:
            mark = "ok  " if check["status"] == "pass" else "FAIL"
            failed += check["status"] != "pass"
            ptxt = " ".join(f"{k}={v}" for k, v in check["params"].items())
            line = f"  [{mark}] {check['tag']} {ptxt}"
            if check.get("witness"):
                line += f"  witness: {check['witness']}"
            print(line)
    print(f"{failed} failing checks" if failed else "all checks pass")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "run-all":
            return _cmd_run_all(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_report(args)
    except (ConfigError, WindowError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
