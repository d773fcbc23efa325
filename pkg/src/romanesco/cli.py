"""Command line front end: ``romanesco <subcommand> ...``.

Every subcommand prints one JSON object on stdout.  Failures print
``{"error": ..., "message": ...}`` and exit with status 1.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    DEFAULT_GRID,
    BudgetExceeded,
    code_distance,
    exact_distance_low_weight,
    logical_basis,
    sample_logicals,
    v_infinity,
)
from .automaton import CARule, ClassicalCode, classical_params
from .codes import sector_parity, validate
from .decoders import DECODERS, make_decoder
from .io import build_from_spec, code_spec, config_hash, write_alist, write_dense
from .noise import NoiseModel, parse_eta
from .search import SearchConfig, run_search, select_best
from .sim import run_memory_experiment, write_results_csv

log = logging.getLogger("romanesco")


class CliError(Exception):
    pass


def parse_rule(text: str) -> CARule:
    """JSON {"m":3,"cells":[[1,0],...]} or the short form '3:1,0;1,1;2,1;0,2'."""
    text = text.strip()
    if text.startswith("{"):
        return CARule.from_json(text)
    m, _, cells = text.partition(":")
    if not cells:
        raise CliError(f"cannot parse rule {text!r}")
    return CARule(int(m), tuple(tuple(int(v) for v in c.split(",")) for c in cells.split(";")))


def parse_lattice(text: str) -> tuple[int, int]:
    try:
        H, L = text.lower().split("x")
        return int(H), int(L)
    except ValueError:
        raise CliError(f"lattice must look like 12x12, got {text!r}") from None


def spec_from_args(args) -> dict:
    if getattr(args, "spec", None):
        return json.loads(Path(args.spec).read_text())
    if not args.rules:
        raise CliError("give --spec or --rules")
    r1 = parse_rule(args.rules[0])
    spec = {"rule1": r1.to_dict(), "boundary": args.boundary, "deformed": args.deform}
    if len(args.rules) > 1:
        spec["rule2"] = parse_rule(args.rules[1]).to_dict()
    if args.boundary == "plane":
        spec["d"] = args.d if args.d else parse_lattice(args.lattice)[0]
    else:
        if not args.lattice:
            raise CliError("give --lattice HxL")
        spec["H"], spec["L"] = parse_lattice(args.lattice)
    return spec


def _run_config(args) -> dict:
    # output locations and verbosity do not change results
    return {k: v for k, v in vars(args).items() if k not in ("func", "config", "out", "verbose")}


def _meta(args) -> dict:
    return {"config_hash": config_hash(_run_config(args)), "seed": args.seed}


def _classical_distance(code, seed) -> ClassicalCode:
    cc = ClassicalCode(parity=sector_parity(code, "black"), rule=code.rules[0])
    classical_params(cc, seed=seed)
    return cc


def cmd_build(args) -> dict:
    spec = spec_from_args(args)
    code = build_from_spec(spec)
    out = {"code_id": code.code_id, "n": code.n, "k": code.k, **_meta(args)}
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        write_alist(code.h_x, d / "hx.alist")
        write_alist(code.h_z, d / "hz.alist")
        (d / "code.json").write_text(json.dumps({**code_spec(code), **_meta(args)}, indent=2) + "\n")
        out["files"] = sorted(str(p) for p in d.iterdir())
    return out


def cmd_validate(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    rep = validate(code)
    return {
        "code_id": code.code_id,
        "commutes": rep.commutes,
        "weight2_ok": rep.weight2_ok,
        "k": rep.k,
        "failures": rep.failures,
        **_meta(args),
    }


def _quantum_distance(code, seed):
    d, _ = code_distance(code.h_x, code.h_z, seed=seed)
    exact = False
    if d <= 6:
        ex = exact_distance_low_weight(code, d)
        d, exact = ex.value, ex.exact
    return d, exact


def cmd_params(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    d, exact = _quantum_distance(code, args.seed)
    cc = _classical_distance(code, args.seed)
    v = v_infinity(code.k, cc.d, code.n)
    return {
        "code_id": code.code_id,
        "n": code.n,
        "k": code.k,
        "d": d,
        "d_exact": exact,
        "n_c": cc.n,
        "k_c": cc.k,
        "d_c": cc.d,
        "d_c_exact": cc.d_exact,
        "v_inf": round(float(v), 2),
        "v_inf_fraction": f"{v.numerator}/{v.denominator}",
        **_meta(args),
    }


def cmd_distance(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    if args.mode == "exact":
        w_max = args.wmax
        if w_max is None:
            w_max, _ = code_distance(code.h_x, code.h_z, seed=args.seed)
        ex = exact_distance_low_weight(code, w_max)
        return {"code_id": code.code_id, "d": str(ex), "exact": ex.exact, **_meta(args)}
    d, witness = code_distance(code.h_x, code.h_z, seed=args.seed)
    return {
        "code_id": code.code_id,
        "d": d,
        "exact": False,
        "witness": np.flatnonzero(witness).tolist(),
        **_meta(args),
    }


def _grid(args):
    if not args.p and not args.eta:
        return list(DEFAULT_GRID)
    ps = args.p or [p for p, _ in DEFAULT_GRID]
    etas = [parse_eta(e) for e in args.eta] if args.eta else sorted({e for _, e in DEFAULT_GRID})
    return [(p, e) for p in dict.fromkeys(ps) for e in dict.fromkeys(etas)]


def cmd_logicals(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    prof = sample_logicals(code, _grid(args), combos_per_point=args.combos, seed=args.seed)
    if args.out:
        prof.write_csv(args.out, code.code_id)
    return {"code_id": code.code_id, "profile": {str(s): L for s, L in sorted(prof.entries.items())}, **_meta(args)}


def cmd_search(args) -> dict:
    lattices = [parse_lattice(x) for x in args.lattice_list] if args.lattice_list else None
    kw = {"m_range": tuple(args.m), "w_range": tuple(args.w), "seed": args.seed, "threads": args.threads}
    if lattices:
        kw["lattices"] = tuple(lattices)
    cfg = SearchConfig(**kw)
    ledger = args.resume or args.out
    res = run_search(cfg, ledger=ledger, resume=bool(args.resume), header=_meta(args))
    best = select_best(res.records)
    return {
        "evaluated": res.evaluated,
        "survivors": len(res.records),
        "partial": res.partial,
        "selected": [json.loads(r.to_json()) for r in best],
        "ledger": ledger,
        **_meta(args),
    }


def cmd_simulate(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    if not args.p:
        raise CliError("give at least one --p")
    etas = [parse_eta(e) for e in (args.eta or ["1"])]
    basis = logical_basis(code, seed=args.seed)
    results = []
    for p in args.p:
        for eta in etas:
            noise = NoiseModel(p, eta, rotated=code.deformed)
            dec = make_decoder(args.decoder, code, noise, bp_iters=args.bp_iters, osd_order=args.osd_order)
            r = run_memory_experiment(code, noise, basis, dec, args.shots, seed=args.seed, min_failures=args.min_failures)
            log.info("%s p=%g eta=%s p_L=%.3g", code.code_id, p, noise.label(), r.p_l)
            results.append(r)
    meta = _meta(args)
    if args.out:
        write_results_csv(args.out, results, [f"config_hash={meta['config_hash']} seed={meta['seed']}"])
    return {
        "code_id": code.code_id,
        "results": [dict(zip(("p_z", "eta", "shots", "x_fails", "z_fails", "p_l"), r.row()[2:8])) for r in results],
        "out": args.out,
        **meta,
    }


def cmd_export(args) -> dict:
    code = build_from_spec(spec_from_args(args))
    if not args.out:
        raise CliError("export needs --out PREFIX")
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    meta = _meta(args)
    files = []
    if args.format == "json":
        p = prefix.with_suffix(".json")
        p.write_text(json.dumps({**code_spec(code), **meta}, indent=2) + "\n")
        files.append(p)
    else:
        write = write_alist if args.format == "alist" else write_dense
        ext = ".alist" if args.format == "alist" else ".txt"
        for tag, mat in (("hx", code.h_x), ("hz", code.h_z)):
            p = Path(f"{prefix}_{tag}{ext}")
            write(mat, p)
            files.append(p)
        sidecar = Path(f"{prefix}_meta.json")
        sidecar.write_text(json.dumps({**code_spec(code), **meta}, indent=2) + "\n")
        files.append(sidecar)
    return {"code_id": code.code_id, "files": [str(f) for f in files], **meta}


def _add_code_args(p):
    p.add_argument("--spec", help="code spec JSON file")
    p.add_argument("--rules", action="append", help="rule as JSON or 'm:c,r;c,r;...' (repeat for the second rule)")
    p.add_argument("--lattice", help="HxL")
    p.add_argument("--d", type=int, help="plane code size")
    p.add_argument("--boundary", default="torus", choices=["torus", "cylinder", "plane"])
    p.add_argument("--deform", action=argparse.BooleanOptionalAction, default=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="romanesco", description="Romanesco code toolkit")
    ap.add_argument("--config", help="JSON file whose keys override command line flags")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, code=True, help=""):
        p = sub.add_parser(name, help=help)
        if code:
            _add_code_args(p)
        p.add_argument("--out")
        p.set_defaults(func=func)
        return p

    add("build", cmd_build, help="build a code and write its check matrices")
    add("validate", cmd_validate, help="check commutation, weight-2 filter and k")
    add("params", cmd_params, help="n, k, d, d_c and v_inf")
    p = add("distance", cmd_distance, help="quantum distance")
    p.add_argument("--mode", choices=["search", "exact"], default="search")
    p.add_argument("--wmax", type=int)
    p = add("logicals", cmd_logicals, help="mixed logical weight profile")
    p.add_argument("--p", type=float, action="append")
    p.add_argument("--eta", action="append")
    p.add_argument("--combos", type=int, default=128)
    p = add("search", cmd_search, code=False, help="rule search and selection")
    p.add_argument("--m", type=int, action="append", default=None)
    p.add_argument("--w", type=int, action="append", default=None)
    p.add_argument("--lattice", dest="lattice_list", action="append")
    p.add_argument("--resume", help="JSONL ledger to resume from and append to")
    p = add("simulate", cmd_simulate, help="memory experiment")
    p.add_argument("--p", type=float, action="append")
    p.add_argument("--eta", action="append")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--decoder", default="hybrid", choices=list(DECODERS))
    p.add_argument("--bp-iters", type=int, default=1000)
    p.add_argument("--osd-order", type=int, default=50)
    p.add_argument("--min-failures", type=int, default=None)
    p = add("export", cmd_export, help="write check matrices as alist, dense text or JSON")
    p.add_argument("--format", choices=["alist", "dense", "json"], default="alist")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        for k, v in json.loads(Path(args.config).read_text()).items():
            setattr(args, k.replace("-", "_"), v)
    if args.command == "search":
        args.m = args.m or [2, 3]
        args.w = args.w or [3, 4]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        out = args.func(args)
    except (CliError, ValueError, RuntimeError, BudgetExceeded, OSError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    print(json.dumps(out, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
