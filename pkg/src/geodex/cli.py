"""Unified command-line front end.

Every subcommand emits a single JSON report with an embedded run manifest
(tool version, argv, input digests, arithmetic backend, result digest).
Exact values are serialized as strings, with float approximations only in
clearly marked sidecar fields.  Exit codes: 0 success, 2 not-found or
not-eliminated, 1 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from . import __version__
from ._kernels import backend_id
from .case_analyzer import EliminationOptions, SweepGrid, eliminate, sweep
from .exact_numbers import ParseError, parse_turn
from .index_iteration import GeodesicModel, index_profile
from .index_jump import find_jump, verify_jump
from .loop_homology import BettiTable, alternating_sum, betti
from .morse_engine import (
    DressedGeodesic,
    mean_index_identity,
    morse_count,
    morse_inequalities,
    validate_types,
)
from .normal_forms import Decomposition

SCHEMA = "geodex/1"


class CliError(Exception):
    pass


def _digest(obj) -> str:
    payload = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _emit(result: dict, argv, inputs: dict, out_path, started: float) -> None:
    result = {"schema": SCHEMA, **result}
    manifest = {
        "tool": f"geodex {__version__}",
        "command": list(argv),
        "inputs": {name: _file_digest(path) for name, path in inputs.items()},
        "backend": backend_id(),
        "result_digest": _digest(result),
        "wall_time_s": round(time.time() - started, 6),
    }
    report = {**result, "manifest": manifest}
    text = json.dumps(report, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and data.get("schema", SCHEMA) != SCHEMA:
        raise CliError(f"unsupported schema {data['schema']!r} in {path}")
    return data


def _load_model(path: str) -> GeodesicModel:
    return GeodesicModel.from_dict(_load_json(path))


def _load_config(path: str):
    data = _load_json(path)
    n = int(data.get("n", 3))
    dressed = []
    chi_overrides = {}
    for item in data.get("geodesics", []):
        model = GeodesicModel.from_dict(item)
        types = {int(k): tuple(v) for k, v in item.get("types", {}).items()}
        dressed.append(DressedGeodesic(model, types))
        if "chi_hat" in item:
            chi_overrides[model.label] = Fraction(item["chi_hat"])
    return n, dressed, chi_overrides


def _cmd_validate(args, argv, started) -> int:
    model_data = _load_json(args.model)
    dec = Decomposition.from_dict(model_data)
    violations = dec.validate()
    if "index" in model_data:
        from .index_iteration import parity_check

        g = GeodesicModel.from_dict(model_data)
        msg = parity_check(g)
        if msg:
            violations.append(msg)
    result = {"kind": "validate", "valid": not violations,
              "violations": violations}
    _emit(result, argv, {"model": args.model}, args.out, started)
    return 0 if not violations else 1


def _cmd_iterate(args, argv, started) -> int:
    g = _load_model(args.model)
    prof = index_profile(g, args.mmax)
    result = {"kind": "iterate", **prof.to_dict()}
    _emit(result, argv, {"model": args.model}, args.out, started)
    return 0


def _cmd_betti(args, argv, started) -> int:
    if args.alt:
        result = {"kind": "betti_alternating", "n": args.n, "q_max": args.qmax,
                  "alternating_sum": alternating_sum(args.n, args.qmax)}
    else:
        result = {"kind": "betti", **BettiTable(args.n, args.qmax).to_dict()}
    _emit(result, argv, {}, args.out, started)
    return 0


def _cmd_identity(args, argv, started) -> int:
    n, dressed, chi_overrides = _load_config(args.config)
    for dg in dressed:
        bad = validate_types(dg)
        if bad and dg.label not in chi_overrides:
            raise CliError(f"type numbers for {dg.label!r}: {bad}")
    rep = mean_index_identity(dressed, n, chi_hat_override=chi_overrides or None)
    result = {"kind": "identity", "n": n, **rep.to_dict()}
    _emit(result, argv, {"config": args.config}, args.out, started)
    return 0 if rep.holds else 2


def _cmd_morse(args, argv, started) -> int:
    n, dressed, _ = _load_config(args.config)
    windows = {k: (tuple(v) if isinstance(v, list) else int(v))
               for k, v in _load_json(args.window).items()}
    rep = morse_inequalities(dressed, n, args.qmax, windows)
    counts = {str(q): morse_count(dressed, q, windows)
              for q in range(args.qmax + 1)}
    result = {"kind": "morse", "n": n, "q_max": args.qmax,
              "counts": counts, **rep.to_dict()}
    _emit(result, argv, {"config": args.config, "window": args.window},
          args.out, started)
    return 0 if rep.ok else 2


def _cmd_jump(args, argv, started) -> int:
    n, dressed, chi_overrides = _load_config(args.config)
    if args.n:
        n = args.n
    models = [dg.model for dg in dressed]
    eps = Fraction(args.eps) if args.eps else None
    cert = find_jump(models, n, eps=eps, n_bound=args.nbound,
                     chi_hats=chi_overrides or None)
    if cert is None:
        result = {"kind": "jump", "n": n, "found": False,
                  "n_bound": args.nbound}
        _emit(result, argv, {"config": args.config}, args.out, started)
        return 2
    report = verify_jump(models, cert)
    result = {"kind": "jump", "n": n, "found": True,
              "certificate": cert.to_dict(), "verification": report}
    _emit(result, argv, {"config": args.config}, args.out, started)
    return 0 if report["ok"] else 1


def _cmd_eliminate(args, argv, started) -> int:
    c1 = _load_model(args.c1)
    c2 = _load_model(args.c2)
    opts = EliminationOptions(
        eps=Fraction(args.eps) if args.eps else Fraction(1, 8),
        n_bound=args.nbound)
    rep = eliminate(c1, c2, opts)
    result = {"kind": "eliminate", **rep.to_dict()}
    _emit(result, argv, {"c1": args.c1, "c2": args.c2}, args.out, started)
    return 0 if rep.eliminated else 2


def _cmd_sweep(args, argv, started) -> int:
    with open(args.grid, "rb") as fh:
        data = tomllib.load(fh)
    grid = SweepGrid.from_dict(data)
    if args.jobs:
        grid = SweepGrid(**{**grid.__dict__, "jobs": args.jobs})
    summary = sweep(grid)
    result = {"kind": "sweep", **summary.to_dict(include_reports=not args.summary_only)}
    _emit(result, argv, {"grid": args.grid}, args.out, started)
    return 0 if not summary.not_eliminated and not summary.errors else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="geodex",
        description="exact index iteration, Morse counts, and index jumps "
                    "for closed-geodesic configurations on spheres")
    ap.add_argument("--version", action="version",
                    version=f"geodex {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a decomposition or model file")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("iterate", help="tabulate iterated indices/nullities")
    p.add_argument("--model", required=True)
    p.add_argument("--mmax", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_iterate)

    p = sub.add_parser("betti", help="loop-space Betti numbers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--qmax", type=int, default=50)
    p.add_argument("--alt", action="store_true",
                   help="emit the alternating sum instead of the table")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_betti)

    p = sub.add_parser("identity", help="exact mean index identity check")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_identity)

    p = sub.add_parser("morse", help="Morse counts and inequalities")
    p.add_argument("--config", required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--window", required=True,
                   help="JSON file: label -> iterate bound or [lo, hi]")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_morse)

    p = sub.add_parser("jump", help="find and verify a common index jump")
    p.add_argument("--config", required=True)
    p.add_argument("--n", type=int, default=None,
                   help="sphere dimension (defaults to the config's)")
    p.add_argument("--eps")
    p.add_argument("--nbound", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_jump)

    p = sub.add_parser("eliminate", help="run the two-geodesic elimination")
    p.add_argument("--c1", required=True)
    p.add_argument("--c2", required=True)
    p.add_argument("--eps")
    p.add_argument("--nbound", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_eliminate)

    p = sub.add_parser("sweep", help="eliminate over a TOML grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--jobs", type=int, default=0)
    p.add_argument("--summary-only", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_sweep)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.time()
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, argv, started)
    except (CliError, ParseError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"geodex: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
