"""
Command-line front end.

    gnat verify {connection,ricci,lie,identities,all} [flags]
    gnat classify --n 3 --a 1 --c 0 --d 1 [--kappa K]
    gnat sweep --n 2,3 --a 0.5:2:4 --c 0 --d -1:1:5 [--workers 4]
    gnat soliton-check --bundle T1M --n 3 --kappa 0 --a 1 --field dilation --lam 1

Every command also reads ``--config FILE`` (a JSON object whose keys are the
flag names with underscores); flags given on the command line win.  The seed
falls back to the ``GNAT_SEED`` environment variable and then to 42.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import numpy as np

from .base_manifolds import NamedField, SpaceForm, skew_basis
from .errors import GeometryError, InvalidSpec
from .soliton import (SolitonCandidate, classify_complete_lift, classify_fiber_preserving,
                      complete_lift_candidate, discriminant, eq1_residual, soliton_residual)
from .tangent_bundle import ABCSpec, HomotheticDataTM, build_homothetic_TM
from .unit_tangent import KKSpec
from .verify import SUITES, run_suite

DEFAULT_SEED = 42
DEFAULTS = {"n": 3, "kappa": 0.0, "a": 1.0, "b": 0.0, "c": 0.0, "d": 0.0, "samples": 30,
            "bundle": "T1M", "field": "zero", "lam": 0.0, "workers": 1, "format": None}


class ConfigError(Exception):
    """Bad command-line or config-file input (exit code 2)."""


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags (in increasing priority)."""
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(args.config))
    for key, val in vars(args).items():
        if key not in ("config", "command", "func") and val is not None:
            cfg[key] = val
    if cfg.get("seed") is None:
        env = os.environ.get("GNAT_SEED")
        try:
            cfg["seed"] = int(env) if env else DEFAULT_SEED
        except ValueError as exc:
            raise ConfigError(f"GNAT_SEED must be an integer, got {env!r}") from exc
    return cfg


def _num(cfg, key, kind=float):
    try:
        return kind(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be a number, got {cfg[key]!r}") from exc


def _space(cfg) -> SpaceForm:
    n = _num(cfg, "n", int)
    if n < 2:
        raise ConfigError("n must be at least 2")
    return SpaceForm(n, _num(cfg, "kappa"))


def _kk(cfg) -> KKSpec:
    return KKSpec(_num(cfg, "a"), _num(cfg, "b"), _num(cfg, "c"), _num(cfg, "d"))


def _emit(text: str, cfg: dict):
    out = cfg.get("out")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _params(cfg: dict, keys) -> dict:
    return {k: cfg[k] for k in keys if k in cfg}


# ---------------------------------------------------------------------------
# verify


def cmd_verify(cfg: dict) -> int:
    target = cfg["target"]
    names = SUITES if target == "all" else (target,)
    sf, kk = _space(cfg), _kk(cfg)
    kk.require_kk()
    samples, seed = _num(cfg, "samples", int), _num(cfg, "seed", int)
    reports = [run_suite(name, sf, kk, samples, seed).to_dict() for name in names]
    ok = all(r["verdict"] == "pass" for r in reports)
    _emit(_dump({"command": "verify", "params": _params(cfg, ("n", "kappa", "a", "b", "c", "d", "samples", "seed")),
                 "suites": reports, "verdict": "pass" if ok else "fail"}), cfg)
    if not ok:
        bad = ", ".join(f"{r['suite']} (max deviation {r['max_deviation']:.3g} >= {r['tol']:g})"
                        for r in reports if r["verdict"] != "pass")
        print(f"verification failed: {bad}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# classify and sweep


def cmd_classify(cfg: dict) -> int:
    n, kk = _num(cfg, "n", int), _kk(cfg)
    kappa = cfg.get("kappa_given")
    kappa = None if kappa is None else _num(cfg, "kappa_given")
    rows = [r.to_dict() for r in classify_complete_lift(n, kk, kappa)]
    report = {"command": "classify", "params": _params(cfg, ("n", "a", "b", "c", "d")), "kappa": kappa,
              "complete_lift": rows, "discriminant": discriminant(n, kk)}
    if kappa is not None:
        report["fiber_preserving"] = [r.to_dict() for r in classify_fiber_preserving(n, kk, kappa)]
    _emit(_dump(report), cfg)
    return 0


def parse_range(text, kind=float) -> list:
    """``v``, ``v1,v2,...`` or ``start:stop:count`` (inclusive linspace)."""
    if isinstance(text, (int, float)):
        return [kind(text)]
    if isinstance(text, list):
        return [kind(v) for v in text]
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError("count must be positive")
            vals = np.linspace(float(start), float(stop), count)
            return [kind(round(float(v), 12)) for v in vals]
        return [kind(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid range {text!r}: {exc}") from exc


SWEEP_COLUMNS = ("index", "n", "a", "c", "d", "status", "case", "kappa", "lambda", "lambda0",
                 "admissible", "sign", "discriminant", "eq1_residual")


def sweep_point(job) -> list[dict]:
    """Classification rows for one grid point (runs in a worker)."""
    index, n, a, c, d = job
    base = {"index": index, "n": n, "a": a, "c": c, "d": d}
    try:
        kk = KKSpec(a, 0.0, c, d)
    except GeometryError as exc:
        return [{**base, "status": f"invalid: {exc}"}]
    rows = []
    for r in classify_complete_lift(n, kk):
        row = {**base, "status": "ok", **{k: v for k, v in r.to_dict().items() if k != "constructible"},
               "discriminant": discriminant(n, kk) if n > 2 and d != 0 else None,
               "eq1_residual": eq1_residual(n, kk, r.kappa) if r.kappa is not None else None}
        rows.append(row)
    if not rows:
        rows.append({**base, "status": "none"})
    return rows


def cmd_sweep(cfg: dict) -> int:
    ns = parse_range(cfg.get("n"), int)
    grids = [parse_range(cfg.get(k)) for k in ("a", "c", "d")]
    if any(n < 2 for n in ns) or not ns or not all(grids):
        raise ConfigError("sweep needs n >= 2 and nonempty ranges for a, c and d")
    jobs = [(i, n, a, c, d) for i, (n, a, c, d) in enumerate(product(ns, *grids))]
    workers = _num(cfg, "workers", int)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [sweep_point(j) for j in jobs]
    rows = [row for chunk in chunks for row in chunk]
    if (cfg.get("format") or "csv") == "json":
        _emit(_dump({"command": "sweep", "rows": rows}), cfg)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in SWEEP_COLUMNS})
        _emit(buf.getvalue(), cfg)
    return 0


# ---------------------------------------------------------------------------
# soliton-check


def _affine(desc, n, name) -> NamedField:
    if not isinstance(desc, dict):
        raise ConfigError(f"{name} must be an object with B and/or b")
    B = np.asarray(desc.get("B", np.zeros((n, n))), dtype=float)
    b = np.asarray(desc.get("b", np.zeros(n)), dtype=float)
    if B.shape != (n, n) or b.shape != (n,):
        raise ConfigError(f"{name} has the wrong shape for n = {n}")
    return NamedField(B=B, b=b, label=name)


def _named_base_field(name: str, n: int) -> NamedField:
    if name == "dilation":
        return NamedField.linear(np.eye(n), label="dilation")
    if name == "rotation":
        return NamedField.linear(skew_basis(n)[0], label="rotation")
    if name == "translation":
        return NamedField.constant(np.eye(n)[0], label="translation")
    raise ConfigError(f"unknown field {name!r}; use zero, dilation, rotation, translation or a JSON object")


def build_candidate(cfg: dict) -> SolitonCandidate:
    sf = _space(cfg)
    n = sf.n
    lam = _num(cfg, "lam")
    bundle = cfg.get("bundle")
    desc = cfg.get("field")
    if isinstance(desc, str):
        desc = {"kind": "zero"} if desc == "zero" else {"kind": "named", "name": desc}
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError("field must be a name or an object with a 'kind'")
    kind = desc["kind"]

    def base_field():
        if kind == "named":
            return _named_base_field(desc["name"], n)
        return _affine(desc.get("xi", desc), n, "xi")

    if bundle == "T1M":
        kk = _kk(cfg)
        if kind == "zero":
            return SolitonCandidate("T1M", sf, kk, None, lam, "zero")
        P = desc.get("P")
        P = None if P is None else np.asarray(P, dtype=float)
        if P is not None and P.shape != (n, n):
            raise ConfigError(f"P must be {n}x{n}")
        xi = base_field()
        return complete_lift_candidate(sf, kk, xi, lam, P, label=f"complete lift of {xi.label}")
    if bundle == "TM":
        abc = ABCSpec(_num(cfg, "a"), _num(cfg, "b"), _num(cfg, "c"))
        if kind == "zero":
            return SolitonCandidate("TM", sf, abc, None, lam, "zero")
        if kind != "homothetic":
            raise ConfigError("TM candidates take field kind 'zero' or 'homothetic'")
        data = HomotheticDataTM(_affine(desc.get("zeta", {}), n, "zeta"),
                                np.asarray(desc.get("P", np.zeros((n, n))), dtype=float),
                                _affine(desc.get("xi", {}), n, "xi"), lam)
        return SolitonCandidate("TM", sf, abc, build_homothetic_TM(data, abc), lam, "homothetic")
    if bundle == "base":
        field = None if kind == "zero" else base_field()
        return SolitonCandidate("base", sf, None, field, lam, getattr(field, "label", "zero"))
    raise ConfigError(f"bundle must be T1M, TM or base, got {bundle!r}")


def cmd_soliton_check(cfg: dict) -> int:
    cand = build_candidate(cfg)
    samples = _num(cfg, "samples", int)
    if samples < 30:
        raise ConfigError("soliton-check needs at least 30 samples")
    rep = soliton_residual(cand, samples=samples, seed=_num(cfg, "seed", int))
    _emit(_dump({"command": "soliton-check",
                 "params": _params(cfg, ("bundle", "n", "kappa", "a", "b", "c", "d", "lam", "samples", "seed")),
                 "field": cfg.get("field"), "label": cand.label, "report": rep.to_dict()}), cfg)
    if not rep.verdict:
        worst = max(rep.blocks, key=rep.blocks.get)
        print(f"soliton check failed: block {worst} residual {rep.blocks[worst]:.3g} >= {rep.tol:g}",
              file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with parameters (flags override it)")
    common.add_argument("--seed", type=int, help="random seed (default: $GNAT_SEED or 42)")
    common.add_argument("--out", help="write the report here instead of stdout")

    metric = argparse.ArgumentParser(add_help=False)
    metric.add_argument("--n", type=int, help="base dimension")
    metric.add_argument("--kappa", type=float, help="base curvature")
    for k in "abcd":
        metric.add_argument(f"--{k}", type=float, help=f"metric constant {k}")
    metric.add_argument("--samples", type=int, help="number of sample points")

    ap = argparse.ArgumentParser(prog="gnat", description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common, metric], help="closed forms against the oracle on T1M")
    p.add_argument("target", choices=SUITES + ("all",))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", parents=[common], help="complete-lift soliton cases for (n, a, c, d)")
    p.add_argument("--n", type=int)
    for k in "acd":
        p.add_argument(f"--{k}", type=float)
    p.add_argument("--kappa", type=float, dest="kappa_given", help="restrict to this curvature")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", parents=[common], help="classification over a grid, as CSV")
    for k in ("n", "a", "c", "d"):
        p.add_argument(f"--{k}", help="value, comma list or start:stop:count")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("soliton-check", parents=[common, metric], help="Ricci soliton residual of a candidate")
    p.add_argument("--bundle", choices=("T1M", "TM", "base"))
    p.add_argument("--field", help="zero, dilation, rotation, translation (objects via --config)")
    p.add_argument("--lam", type=float, help="soliton constant lambda")
    p.set_defaults(func=cmd_soliton_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    func = args.func
    try:
        cfg = resolve(args)
        if args.command == "classify" and cfg.get("kappa_given") is None:
            cfg["kappa_given"] = _load_config(args.config).get("kappa")
        return func(cfg)
    except (ConfigError, InvalidSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        kind = type(exc).__name__
        config_kinds = ("DegenerateSpec", "NotKKType", "NotSpaceForm", "NotFlat", "InvariantViolation")
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return 2 if kind in config_kinds else 1


if __name__ == "__main__":
    raise SystemExit(main())
