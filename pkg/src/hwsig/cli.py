"""Command line interface.

Subcommands:
  kl         table of the classical polynomials for a Weyl group
  skl        signed table for a context file
  char-m     ordinary Verma character
  char-l     ordinary irreducible character
  sig-m      signature character of a Verma module
  sig-l      signature character of an irreducible quotient
  jantzen    filtration layer dimensions and signatures per weight
  det-check  determinant proportionality sweep
  oracle     brute-force verification suites

Exit codes: 0 success, 1 configuration error, 2 computation error,
3 verification failure.

Config file (JSON): {"type": "C2", "marking": ["compact","noncompact"],
"lambda": ["-2", "-3/2"], "chamber": [1, 2], "cutoff": 6, "x": [1]}
with weights in the simple-root basis as exact "p/q" strings and
reduced words 1-based.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as Q

from . import characters as chars
from . import oracle as orc
from .enveloping import HERMITIAN, det_product_formula, shapovalov_determinant
from .errors import HwsigError
from .jantzen import jantzen_layers
from .kl import KLTable
from .polys import IntPoly
from .roots import (
    build_root_datum,
    integral_weyl_group,
    parse_cartan_type,
    root_lattice_points,
    vec,
    vscale,
    vsub,
)
from .serialize import (
    character_to_json,
    pairs_to_json,
    parse_rat,
    rat_str,
    weight_to_json,
)
from .signedkl import SignedKLTable, make_context


class ConfigError(Exception):
    pass


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    for key in ("type", "marking", "lambda"):
        if key not in cfg:
            raise ConfigError(f"config is missing {key!r}")
    return cfg


def datum_of(cfg: dict):
    try:
        return build_root_datum(cfg["type"], cfg["marking"])
    except HwsigError as exc:
        raise ConfigError(str(exc))


def lam_of(cfg: dict):
    try:
        return vec([parse_rat(c) for c in cfg["lambda"]])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad lambda: {exc}")


def word_of(data, what: str):
    try:
        return tuple(int(i) - 1 for i in data)
    except (TypeError, ValueError):
        raise ConfigError(f"bad reduced word for {what}")


def emit(args, payload: dict, human: str) -> None:
    print(human)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def character_text(ch) -> str:
    lines = [f"anchor: ({', '.join(rat_str(c) for c in ch.anchor)})"]
    for mu, c in ch.items():
        lines.append(f"  e[anchor - {list(mu)}]  {c:+d}")
    if not ch.coeffs:
        lines.append("  (zero)")
    return "\n".join(lines)


def cmd_kl(args) -> int:
    datum = build_root_datum(
        args.type, ["compact"] * sum(n for _, n in parse_cartan_type(args.type))
    )
    group = datum.weyl_group()
    table = KLTable(group)
    entries = []
    lines = []
    for x in group.elements():
        for y in group.elements():
            if not group.bruhat_leq(y, x):
                continue
            poly = table.kl(x, y)
            gap = x.length - y.length
            entries.append((x.word, y.word, gap, poly))
            lines.append(f"P[{x} ; {y}] = {poly}")
    emit(args, pairs_to_json(entries), "\n".join(lines))
    return 0


def _context_from_config(cfg: dict):
    datum = datum_of(cfg)
    lam = lam_of(cfg)
    chamber = word_of(cfg.get("chamber", []), "chamber")
    return datum, lam, make_context(datum, lam, chamber)


def cmd_skl(args) -> int:
    cfg = load_config(args.config)
    datum, lam, ctx = _context_from_config(cfg)
    cache_dir = os.environ.get("SKL_CACHE_DIR")
    cache_file = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        key = hashlib.sha256(
            json.dumps(
                {
                    "type": datum.type_str,
                    "marking": list(datum.marking),
                    "lambda": weight_to_json(lam),
                    "chamber": list(ctx.w.word),
                },
                sort_keys=True,
            ).encode()
        ).hexdigest()
        cache_file = os.path.join(cache_dir, f"skl-{key}.json")
        if os.path.exists(cache_file):
            with open(cache_file) as fh:
                stored = json.load(fh)
            for p in stored["pairs"]:
                x = ctx.group.from_word(tuple(i - 1 for i in p["x"]))
                y = ctx.group.from_word(tuple(i - 1 for i in p["y"]))
                gap = x.length - y.length
                terms = {
                    (gap - int(j)) // 2: c
                    for j, c in p["coeffs_by_level"].items()
                }
                ctx._memo[(x.matrix, y.matrix)] = IntPoly(terms)
    table = SignedKLTable(ctx)
    entries = []
    lines = []
    for (x, y), poly in sorted(
        table.pairs.items(), key=lambda kv: (kv[0][0].length, kv[0][0].word, kv[0][1].word)
    ):
        gap = x.length - y.length
        entries.append((x.word, y.word, gap, poly))
        lines.append(f"P[{x} ; {y}] = {poly}")
    payload = pairs_to_json(entries)
    if cache_file:
        with open(cache_file, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    emit(args, payload, "\n".join(lines))
    return 0


def _resolve_x(cfg, args, group):
    word = args.x if args.x is not None else cfg.get("x", [])
    return group.from_word(word_of(word, "x"))


def cmd_character(args, kind: str) -> int:
    cfg = load_config(args.config)
    datum = datum_of(cfg)
    lam = lam_of(cfg)
    cutoff = args.cutoff if args.cutoff is not None else int(cfg.get("cutoff", 6))
    if kind in ("char-m", "sig-m"):
        group = integral_weyl_group(datum, lam)
        x = _resolve_x(cfg, args, group)
        xlam = x.act(lam)
        if kind == "char-m":
            ch = chars.ch_verma(datum, xlam, cutoff)
        else:
            a = chars.alcove_of(datum, xlam)
            ch = chars.R_alcove(datum, a, xlam, cutoff)
    elif kind == "char-l":
        group = integral_weyl_group(datum, lam)
        x = _resolve_x(cfg, args, group)
        ch = chars.ch_irreducible(datum, lam, x, cutoff, group=group)
    else:  # sig-l
        ctx = make_context(datum, lam, word_of(cfg.get("chamber", []), "chamber"))
        x = _resolve_x(cfg, args, ctx.group)
        ch = chars.ch_s_irreducible(ctx, x, cutoff)
    emit(args, character_to_json(ch), character_text(ch))
    return 0


def cmd_jantzen(args) -> int:
    cfg = load_config(args.config)
    datum = datum_of(cfg)
    lam = lam_of(cfg)
    cutoff = args.cutoff if args.cutoff is not None else int(cfg.get("cutoff", 6))
    group = integral_weyl_group(datum, lam)
    x = _resolve_x(cfg, args, group)
    chamber = word_of(args.delta, "delta") if args.delta else ()
    w = datum.weyl_group().from_word(chamber)
    delta = w.act(vscale(-1, datum.rho))
    layers = jantzen_layers(datum, x.act(lam), delta, cutoff)
    weights = []
    lines = []
    for mu in sorted(layers.layers, key=lambda m: (sum(m), m)):
        entry = layers.layers[mu]
        if not entry:
            continue
        weights.append(
            {
                "mu": list(mu),
                "layers": [
                    {"level": j, "dim": d, "p": p, "q": q}
                    for j, d, p, q in entry
                ],
            }
        )
        desc = ", ".join(f"level {j}: dim {d} sig ({p},{q})" for j, d, p, q in entry)
        lines.append(f"mu={list(mu)}  {desc}")
    payload = {
        "lambda0": weight_to_json(x.act(lam)),
        "delta": weight_to_json(delta),
        "weights": weights,
    }
    emit(args, payload, "\n".join(lines))
    return 0


def cmd_det_check(args) -> int:
    import random

    rng = random.Random(args.seed)
    report = {"checks": []}
    ok_all = True
    for type_str in args.types.split(","):
        n = sum(k for _, k in parse_cartan_type(type_str))
        datum = build_root_datum(type_str, ["compact"] * n)
        for mu in root_lattice_points(datum, args.height):
            if sum(mu) == 0:
                continue
            ratios = set()
            for _ in range(3):
                lam = orc.random_regular_weight(datum, rng, 3)
                pf = det_product_formula(datum, lam, mu)
                ratios.add(shapovalov_determinant(datum, lam, mu) / pf)
            passed = len(ratios) == 1
            ok_all = ok_all and passed
            report["checks"].append(
                {"type": type_str, "mu": list(mu), "pass": passed}
            )
            print(f"{type_str} mu={list(mu)}: {'ok' if passed else 'FAIL'}")
    report["pass"] = ok_all
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if ok_all else 3


def _oracle_contexts(suite: str):
    import random

    rng = random.Random(11)
    jobs = []
    d_c = build_root_datum("A1", ["compact"])
    d_n = build_root_datum("A1", ["noncompact"])
    quick_lams = [vec((Q(2 * n + 1, 4),)) for n in range(3)] + [vec((Q(-3, 4),))]
    jobs.append(orc.OracleContext(d_c, quick_lams, 6))
    jobs.append(orc.OracleContext(d_n, quick_lams, 6))
    if suite == "full":
        for typ, marking in [
            ("C2", ["compact", "noncompact"]),
            ("C2", ["noncompact", "compact"]),
            ("A2", ["compact", "compact"]),
        ]:
            d = build_root_datum(typ, marking)
            lams = [orc.random_regular_weight(d, rng, 2) for _ in range(5)]
            jobs.append(orc.OracleContext(d, lams, 5))
    return jobs


def cmd_oracle(args) -> int:
    jobs = _oracle_contexts(args.suite)

    def run(ctx):
        return ctx, orc.compare_all(ctx)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(ctx) for ctx in jobs]
    ok_all = True
    report = {"suite": args.suite, "contexts": []}
    for ctx, rep in results:
        ok_all = ok_all and rep["pass"]
        report["contexts"].append(
            {
                "type": ctx.datum.type_str,
                "marking": list(ctx.datum.marking),
                "checks": rep["checks"],
                "pass": rep["pass"],
            }
        )
        for check in rep["checks"]:
            status = "ok" if check["pass"] else "FAIL"
            print(f"{ctx.datum.type_str} {list(ctx.datum.marking)} {check['name']}: {status}")
    report["pass"] = ok_all
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if ok_all else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hwsig",
        description="Exact signature characters of highest weight modules",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kl", help="classical polynomial table")
    p.add_argument("--type", required=True)
    p.add_argument("--json")

    p = sub.add_parser("skl", help="signed polynomial table")
    p.add_argument("--config", required=True)
    p.add_argument("--json")

    for name in ("char-m", "char-l", "sig-m", "sig-l"):
        p = sub.add_parser(name, help=f"{name} character")
        p.add_argument("--config", required=True)
        p.add_argument("--x", nargs="*", type=int, default=None)
        p.add_argument("--cutoff", type=int, default=None)
        p.add_argument("--json")

    p = sub.add_parser("jantzen", help="filtration layers per weight")
    p.add_argument("--config", required=True)
    p.add_argument("--x", nargs="*", type=int, default=None)
    p.add_argument("--delta", nargs="*", type=int, default=None,
                   help="chamber reduced word for the direction")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--json")

    p = sub.add_parser("det-check", help="determinant proportionality sweep")
    p.add_argument("--types", default="A1,A2,C2")
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--seed", type=int, default=5)
    p.add_argument("--json")

    p = sub.add_parser("oracle", help="brute-force verification suite")
    p.add_argument("--suite", choices=["quick", "full"], default="quick")
    p.add_argument("--json")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "kl":
            return cmd_kl(args)
        if args.command == "skl":
            return cmd_skl(args)
        if args.command in ("char-m", "char-l", "sig-m", "sig-l"):
            return cmd_character(args, args.command)
        if args.command == "jantzen":
            return cmd_jantzen(args)
        if args.command == "det-check":
            return cmd_det_check(args)
        if args.command == "oracle":
            return cmd_oracle(args)
        raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except HwsigError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
