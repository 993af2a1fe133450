"""Command-line front end: counting, series expansion, verification.

Exit codes are CI-grade: 0 when every requested check passes, 1 when a
mathematical mismatch or nonzero residual is found, 2 on invalid input.
JSON output is canonical (sorted keys, exponent-sorted terms, counts and
coefficients as strings) so byte equality is a meaningful comparison.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

from .alpha_system import InvalidSystem, build_system
from .enumeration import count_F, count_G
from .recurrence_engine import (
    ChainBroken,
    g_series,
    limit_u,
    run_recurrence,
    verify_chain,
    verify_eq_357,
    verify_key_lemma,
    verify_lemma1,
    verify_lemma2,
    verify_Tmj,
)
from .series_ring import DPoly, product_F

#: Built-in verification battery used by ``verify --battery``.
BATTERY = ((3, (1, 2)), (7, (1, 2, 4)), (9, (1, 3, 5)), (15, (1, 2, 4, 8)))

ALL_CHECKS = ("lemma1", "lemma2", "eq357", "key", "rec", "tmj", "chain",
              "theorem")


@dataclass
class RunConfig:
    """Parsed invocation: one command plus every numeric knob it needs."""

    command: str
    side: str = "all"
    N: int = 0
    a: tuple = ()
    n_max: int = 40
    trunc: int = 40
    x_trunc: int = 6
    ell_max: int = None
    checks: tuple = ("theorem",)
    output: str = "table"
    battery: bool = False
    what: str = "product"
    m: int = None


def _emit_json(obj):
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _series_entries(series):
    return {(deg, e): c for e, deg, c in series.terms()}


def _table_entries(table):
    return {kn: c for kn, c in table.entries.items() if c}


def _print_count_table(table, label):
    width = table.max_k()
    head = " ".join(f"k={k}" for k in range(width + 1))
    print(f"{label}  n | {head}")
    for n in range(table.n_max + 1):
        row = " ".join(str(c) for c in table.row(n, width))
        print(f"{label} {n:3d} | {row}")


def _write_count_csv(tables):
    writer = csv.writer(sys.stdout)
    width = max(t.max_k() for _, t in tables)
    multi = len(tables) > 1
    head = ["n"] + [f"k{k}" for k in range(width + 1)]
    writer.writerow((["side"] if multi else []) + head)
    for side, table in tables:
        for n in range(table.n_max + 1):
            row = [n] + table.row(n, width)
            writer.writerow(([side] if multi else []) + row)


def cmd_count(cfg):
    """Emit the congruence-side and/or gap-side count tables."""
    sys_ = build_system(cfg.a, cfg.N)
    tables = []
    if cfg.side in ("F", "all"):
        tables.append(("F", count_F(sys_, cfg.n_max)))
    if cfg.side in ("G", "all"):
        tables.append(("G", count_G(sys_, cfg.n_max)))
    verdict = None
    mismatch = None
    if cfg.side == "all":
        mismatch = tables[0][1].first_mismatch(tables[1][1])
        verdict = "pass" if mismatch is None else "fail"

    if cfg.output == "json":
        obj = {side: t.to_json_obj(sys_, side) for side, t in tables}
        if verdict is not None:
            obj["verdict"] = verdict
            obj["first_mismatch"] = (
                None if mismatch is None
                else {"k": mismatch[0], "n": mismatch[1],
                      "F": str(mismatch[2]), "G": str(mismatch[3])})
        _emit_json(obj)
    elif cfg.output == "csv":
        _write_count_csv(tables)
        if verdict is not None:
            print(f"# verdict: {verdict}", file=sys.stderr)
    else:
        for side, t in tables:
            _print_count_table(t, side)
        if verdict is not None:
            print(f"verdict: {verdict}")
    return 0 if verdict in (None, "pass") else 1


def cmd_expand(cfg):
    """Emit a series: the infinite product, the recurrence limit, or g_m."""
    sys_ = build_system(cfg.a, cfg.N)
    if cfg.what == "product":
        series = product_F(sys_, cfg.trunc)
    elif cfg.what == "limit":
        series = limit_u(sys_, cfg.trunc)
    elif cfg.what == "gm":
        if cfg.m is None:
            raise ValueError("--what gm needs --m")
        series = g_series(sys_, cfg.m, cfg.trunc)
    else:
        raise ValueError(f"unknown series {cfg.what!r}")
    if cfg.output == "json":
        _emit_json(series.to_json_obj())
    else:
        print(f"# {cfg.what} for N={sys_.N}, a={list(sys_.a)}, "
              f"trunc={cfg.trunc}")
        by_exp = {}
        for e, deg, c in series.terms():
            by_exp.setdefault(e, {})[deg] = c
        for e in sorted(by_exp):
            print(f"q^{e}: {DPoly(by_exp[e])}")
    return 0


def _sweep(cases):
    """Run (label, zero_test) pairs; report count, failures, first failure."""
    total = 0
    failures = 0
    first = None
    for label, ok in cases:
        total += 1
        if not ok:
            failures += 1
            if first is None:
                first = label
    return {"cases": total, "failures": failures, "first_failure": first}


def _run_checks(sys_, cfg):
    results = []
    trunc = cfg.trunc
    j_hi = trunc // sys_.N + 1
    n_alpha = len(sys_.alpha)

    for name in cfg.checks:
        if name == "lemma1":
            cases = ((f"j={j},m={m}",
                      not verify_lemma1(sys_, j, m, trunc))
                     for j in range(1, j_hi + 1)
                     for m in range(1, n_alpha + 1))
            res = _sweep(cases)
        elif name == "lemma2":
            cases = ((f"j={j},m={m}",
                      verify_lemma2(sys_, j, m, trunc).is_zero())
                     for j in range(1, j_hi + 1)
                     for m in range(1, n_alpha + 1))
            res = _sweep(cases)
        elif name == "eq357":
            cases = []
            for j in range(1, j_hi + 1):
                for k in range(1, sys_.r + 2):
                    r35, r37 = verify_eq_357(sys_, j, k, trunc)
                    cases.append((f"sum j={j},k={k}", r35.is_zero()))
                    if r37 is not None:
                        cases.append((f"contraction j={j},k={k}",
                                      r37.is_zero()))
            res = _sweep(cases)
        elif name == "key":
            cases = ((f"k={k},ell={ell}",
                      verify_key_lemma(sys_, k, ell, trunc).is_zero())
                     for ell in range(1, j_hi + 1)
                     for k in range(1, sys_.r + 2))
            res = _sweep(cases)
        elif name == "rec":
            ell_hi = (trunc + sys_.a[0]) // sys_.N
            us = run_recurrence(sys_, ell_hi, trunc)
            cases = ((f"ell={ell}",
                      us[ell] == g_series(sys_, ell * sys_.N - sys_.a[0],
                                          trunc))
                     for ell in range(ell_hi + 1))
            res = _sweep(cases)
        elif name == "tmj":
            cases = ((f"m={m},j={j}", verify_Tmj(sys_, m, j))
                     for m in range(1, sys_.r + 1)
                     for j in range(1, sys_.r + 1))
            res = _sweep(cases)
        elif name == "chain":
            ell_max = cfg.ell_max if cfg.ell_max is not None else cfg.x_trunc
            try:
                verify_chain(sys_, ell_max, cfg.x_trunc, trunc)
                res = {"cases": 1, "failures": 0, "first_failure": None}
            except ChainBroken as exc:
                res = {"cases": 1, "failures": 1,
                       "first_failure": f"stage {exc.stage}"}
            res["x_trunc"] = cfg.x_trunc
            res["ell_max"] = ell_max
        elif name == "theorem":
            f_tab = _table_entries(count_F(sys_, trunc))
            g_tab = _table_entries(count_G(sys_, trunc))
            prod = _series_entries(product_F(sys_, trunc))
            lim = _series_entries(limit_u(sys_, trunc))
            cases = [
                ("count_F == count_G", f_tab == g_tab),
                ("count_F == product", f_tab == prod),
                ("product == limit", prod == lim),
            ]
            res = _sweep(cases)
        else:
            raise ValueError(f"unknown check {name!r}")
        res["name"] = name
        results.append(res)
    return results


def cmd_verify(cfg):
    """Run the selected checks on one system or the whole battery."""
    systems = (BATTERY if cfg.battery else ((cfg.N, cfg.a),))
    overall = []
    for N, a in systems:
        sys_ = build_system(a, N)
        checks = _run_checks(sys_, cfg)
        verdict = ("pass" if all(c["failures"] == 0 for c in checks)
                   else "fail")
        overall.append({
            "system": {"N": sys_.N, "a": list(sys_.a)},
            "trunc": cfg.trunc,
            "checks": checks,
            "verdict": verdict,
        })
    passed = all(entry["verdict"] == "pass" for entry in overall)
    if cfg.output == "json":
        _emit_json({"systems": overall,
                    "verdict": "pass" if passed else "fail"})
    else:
        for entry in overall:
            head = (f"N={entry['system']['N']} "
                    f"a={entry['system']['a']} trunc={entry['trunc']}")
            print(head)
            for c in entry["checks"]:
                status = "pass" if c["failures"] == 0 else "FAIL"
                extra = ("" if c["first_failure"] is None
                         else f"  first failure: {c['first_failure']}")
                print(f"  {c['name']:<8} {status}  "
                      f"({c['cases']} cases){extra}")
            print(f"  verdict: {entry['verdict']}")
        print(f"overall: {'pass' if passed else 'fail'}")
    return 0 if passed else 1


def _parse_a(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="overpart",
        description="Exact verification of the overpartition identity "
                    "between congruence-restricted and gap-condition "
                    "overpartition counts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_system(p, required=True):
        p.add_argument("--N", type=int, required=required, help="modulus")
        p.add_argument("--a", type=_parse_a, required=required,
                       help="comma-separated generators, e.g. 1,2,4")

    p_count = sub.add_parser("count", help="emit count tables")
    add_system(p_count)
    p_count.add_argument("--n-max", type=int, default=40)
    p_count.add_argument("--side", choices=("F", "G", "all"), default="all")
    p_count.add_argument("--output", choices=("json", "csv", "table"),
                         default="table")

    p_expand = sub.add_parser("expand", help="emit a series expansion")
    add_system(p_expand)
    p_expand.add_argument("--what", choices=("product", "limit", "gm"),
                          default="product")
    p_expand.add_argument("--m", type=int, default=None,
                          help="largest-part bound for --what gm")
    p_expand.add_argument("--trunc", type=int, default=40)
    p_expand.add_argument("--output", choices=("json", "table"),
                          default="table")

    p_verify = sub.add_parser("verify", help="run verification checks")
    add_system(p_verify, required=False)
    p_verify.add_argument("--battery", action="store_true",
                          help="run the built-in system battery")
    p_verify.add_argument("--trunc", type=int, default=40)
    p_verify.add_argument("--x-trunc", type=int, default=6)
    p_verify.add_argument("--ell-max", type=int, default=None)
    p_verify.add_argument("--checks", default="theorem",
                          help="comma-separated subset of: "
                               + ",".join(ALL_CHECKS))
    p_verify.add_argument("--output", choices=("json", "table"),
                          default="table")
    return parser


def config_from_args(args):
    cfg = RunConfig(command=args.command)
    for name in ("side", "N", "a", "n_max", "trunc", "x_trunc", "ell_max",
                 "output", "battery", "what", "m"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if args.command == "verify":
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        for c in checks:
            if c not in ALL_CHECKS:
                raise ValueError(f"unknown check {c!r}; "
                                 f"choose from {','.join(ALL_CHECKS)}")
        cfg.checks = checks
        if not cfg.battery and not cfg.a:
            raise ValueError("either --battery or --N/--a is required")
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "count":
            return cmd_count(cfg)
        if cfg.command == "expand":
            return cmd_expand(cfg)
        return cmd_verify(cfg)
    except (InvalidSystem, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
