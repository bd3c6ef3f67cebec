"""Command-line front end: ``sphere-talbot <subcommand> ...``."""
from __future__ import annotations

import argparse
import ast
import json
import logging
import math
import operator
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import carpet as carpet_mod
from .diophantine import convergents, error_indicator
from .errors import TalbotError
from .evolution import RationalTime
from .gauss_sums import GaussTriple
from .rendering import plot_slice, read_grid_csv, render_pgm, write_csv, write_sidecar
from .singularity_atlas import blowup_indices, singular_points
from .valleys import scan_zeros, shadow_mask, v0_slices

log = logging.getLogger("sphere_talbot")

E_NOTE = "E is an ordering heuristic with all implied constants set to 1, not a certified bound"


@dataclass
class RunConfig:
    """Fully specified run: a subcommand and every numeric parameter it needs."""

    subcommand: str
    params: dict
    preset: str | None = None
    outputs: list = field(default_factory=list)


_FIG3 = {"r": 0.95, "L": 1000, "n_theta": 1024, "n_t": 1024}
_SLICE_N = 1024

PRESETS = {
    "fig1": RunConfig("optical", {
        "inv_lambda": 100, "w": 0.1, "n_x": 300, "n_y": 300,
        "x_range": [0.0, 200.0], "y_range": [-1.5, 1.5], "quantity": "amplitude",
    }),
    "fig3": RunConfig("carpet", dict(_FIG3)),
    "fig4a": RunConfig("slice", {"t": 2 * math.pi / math.sqrt(14), "r": 0.95, "L": 1000, "n_theta": _SLICE_N}),
    "fig4b": RunConfig("slice", {"a": 4, "q": 15, "r": 0.95, "n_theta": _SLICE_N}),
    "fig5a": RunConfig("slice", {"a": 27, "q": 101, "r": 0.95, "n_theta": _SLICE_N}),
    "fig5b": RunConfig("slice", {"a": 31, "q": 116, "r": 0.95, "n_theta": _SLICE_N}),
    "fig6a": RunConfig("mask", dict(_FIG3, fraction=0.05)),
    "fig6b": RunConfig("mask", dict(_FIG3, fraction=0.025)),
    "fig7a": RunConfig("slice", {"a": 2, "q": 7, "r": 0.9, "n_theta": _SLICE_N}),
    "fig7b": RunConfig("slice", {"a": 2, "q": 7, "r": 0.95, "n_theta": _SLICE_N}),
    "fig7c": RunConfig("slice", {"a": 7, "q": 15, "r": 0.97, "n_theta": _SLICE_N}),
    "fig8a": RunConfig("slice", {"a": 1, "q": 12, "r": 0.97, "n_theta": _SLICE_N}),
    "fig8b": RunConfig("slice", {"a": 3, "q": 14, "r": 0.97, "n_theta": _SLICE_N}),
    "fig8c": RunConfig("slice", {"a": 3, "q": 14, "r": 0.8, "n_theta": _SLICE_N}),
}
for _name, _cfg in PRESETS.items():
    _cfg.preset = _name


# -- argument helpers ---------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt, "log": math.log, "exp": math.exp}
_CONSTS = {"pi": math.pi, "e": math.e}


def parse_real(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``1/sqrt(14)`` or ``pi-3``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in _CONSTS:
            return _CONSTS[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression: {text!r}")

    try:
        return float(ev(ast.parse(text, mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_grid(text: str) -> tuple[int, int]:
    """``N`` or ``NxM``."""
    parts = text.lower().split("x")
    try:
        dims = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if len(dims) == 1:
        dims *= 2
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    return dims[0], dims[1]


def parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(",")
    return parse_real(lo), parse_real(hi)


def _emit(obj, as_json: bool):
    if as_json:
        print(json.dumps(obj, indent=2, default=_json_default))
    elif isinstance(obj, dict):
        for k, v in obj.items():
            print(f"{k}: {v}")
    else:
        for item in obj:
            print(item)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(type(o).__name__)


def _rt_from(args_a, args_q):
    return RationalTime(args_a, args_q)


# -- runners (shared by subcommands and presets) -----------------------------

def run_slice(p: dict, out: Path, stem: str, plot: bool = True) -> dict:
    if "t" in p:
        time_, label = float(p["t"]), f"t = {p['t']:.6g}"
        marks = ()
    else:
        time_ = RationalTime(p["a"], p["q"])
        label = f"t = 2 pi {time_.a}/{time_.q}"
        marks = [2 * math.pi * k / time_.q for k in blowup_indices(time_)]
    curve = carpet_mod.slice_profile(time_, p["r"], p.get("n_theta", _SLICE_N), p.get("L"))
    csv_path = out / f"{stem}.csv"
    write_csv(curve, csv_path)
    summary = {
        "kind": "slice",
        "params": {k: v for k, v in p.items()},
        "min": float(curve["density"].min()),
        "max": float(curve["density"].max()),
        "axes": {"x": {"name": "theta", "n": int(curve["theta"].size),
                       "min": float(curve["theta"][0]), "max": float(curve["theta"][-1])}},
    }
    files = [csv_path, write_sidecar(summary, out / f"{stem}.json")]
    if plot:
        files.append(plot_slice(curve, out / f"{stem}.png", title=f"{label}, r = {p['r']}", marks=marks))
    summary["files"] = [str(f) for f in files]
    return summary


def run_carpet(p: dict, out: Path, stem: str, threads=None, gamma=1.0, with_csv=False) -> tuple:
    grid = carpet_mod.quantum_carpet(p["r"], p["L"], p["n_theta"], p["n_t"], threads=threads)
    files = [render_pgm(grid, out / f"{stem}.pgm", gamma=gamma)]
    summary = grid.summary()
    summary["params"]["gamma"] = gamma
    files.append(write_sidecar(summary, out / f"{stem}.json"))
    if with_csv:
        files.append(write_csv(grid, out / f"{stem}.csv"))
    summary["files"] = [str(f) for f in files]
    return grid, summary


def run_optical(p: dict, out: Path, stem: str, gamma=1.0, with_csv=False) -> tuple:
    grid = carpet_mod.optical_carpet(
        p["inv_lambda"], p["w"], p["n_x"], p["n_y"],
        x_range=p.get("x_range"), y_range=p.get("y_range", (0.0, 1.0)),
        quantity=p.get("quantity", "intensity"),
    )
    files = [render_pgm(grid, out / f"{stem}.pgm", gamma=gamma)]
    summary = grid.summary()
    summary["params"]["gamma"] = gamma
    files.append(write_sidecar(summary, out / f"{stem}.json"))
    if with_csv:
        files.append(write_csv(grid, out / f"{stem}.csv"))
    summary["files"] = [str(f) for f in files]
    return grid, summary


def run_mask(grid, fraction: float, out: Path, stem: str) -> dict:
    mask = shadow_mask(grid, fraction)
    files = [render_pgm(mask, out / f"{stem}.pgm")]
    summary = {
        "kind": "mask",
        "params": dict(grid.meta.get("params", {}), fraction=fraction),
        "min": 0,
        "max": 1,
        "shadow_cells": int(mask.sum()),
        "axes": grid.summary()["axes"],
    }
    files.append(write_sidecar(summary, out / f"{stem}.json"))
    summary["files"] = [str(f) for f in files]
    return summary


def run_preset(name: str, out: Path, threads=None) -> dict:
    cfg = PRESETS[name]
    p = cfg.params
    if cfg.subcommand == "slice":
        return run_slice(p, out, name)
    if cfg.subcommand == "carpet":
        return run_carpet(p, out, name, threads=threads)[1]
    if cfg.subcommand == "optical":
        return run_optical(p, out, name)[1]
    if cfg.subcommand == "mask":
        grid = carpet_mod.quantum_carpet(p["r"], p["L"], p["n_theta"], p["n_t"], threads=threads)
        return run_mask(grid, p["fraction"], out, name)
    raise AssertionError(cfg.subcommand)


# -- subcommand handlers ------------------------------------------------------

def cmd_gauss(args):
    return GaussTriple(args.a, args.b, args.q).as_dict()


def cmd_slice(args):
    if args.t is not None:
        p = {"t": args.t, "r": args.r, "L": args.L, "n_theta": args.grid[0]}
    else:
        if args.a is None or args.q is None:
            raise argparse.ArgumentTypeError("slice needs --t or both --a and --q")
        p = {"a": args.a, "q": args.q, "r": args.r, "n_theta": args.grid[0]}
    out = Path(args.out)
    return run_slice(p, out.parent, out.stem, plot=args.plot)


def cmd_carpet(args):
    p = {"r": args.r, "L": args.L or 1000, "n_theta": args.grid[0], "n_t": args.grid[1]}
    out = Path(args.out)
    return run_carpet(p, out.parent, out.name, threads=args.threads, gamma=args.gamma, with_csv=args.csv)[1]


def cmd_optical(args):
    p = {
        "inv_lambda": args.inv_lambda, "w": args.w, "n_x": args.grid[0], "n_y": args.grid[1],
        "x_range": list(args.x_range) if args.x_range else None,
        "y_range": list(args.y_range), "quantity": "amplitude" if args.amplitude else "intensity",
    }
    out = Path(args.out)
    return run_optical(p, out.parent, out.name, gamma=args.gamma, with_csv=args.csv)[1]


def cmd_singularities(args):
    rt = _rt_from(args.a, args.q)
    return {"a": rt.a, "q": rt.q, "reports": [rep.as_dict() for rep in singular_points(rt)]}


def cmd_approx(args):
    rows = []
    for c in convergents(args.x, args.n):
        row = c.as_dict()
        row["E"] = error_indicator(c, args.r, args.theta)
        rows.append(row)
    return {"x": args.x, "r": args.r, "theta": args.theta, "note": E_NOTE, "convergents": rows}


def cmd_valleys(args):
    res = {"slices": [s.as_dict() for s in v0_slices(args.q_max)], "zeros": []}
    if args.a is not None and args.q is not None:
        rt = _rt_from(args.a, args.q)
        res["time"] = {"a": rt.a, "q": rt.q}
        res["zeros"] = [z.as_dict() for z in scan_zeros(rt, args.grid, args.rel_tol)]
    return res


def cmd_mask(args):
    grid = read_grid_csv(args.input, {"kind": "quantum"})
    out = Path(args.out)
    return run_mask(grid, args.fraction, out.parent, out.stem)


def cmd_reproduce(args):
    return run_preset(args.preset, Path(args.out), threads=args.threads)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphere-talbot", description="Quantum Talbot effect on the sphere.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, json_flag=True):
        if json_flag:
            sp.add_argument("--json", action="store_true", help="print results as JSON")
        return sp

    sp = common(sub.add_parser("gauss", help="evaluate G(a, b; q)"))
    sp.add_argument("-a", "--a", type=int, required=True)
    sp.add_argument("-b", "--b", type=int, required=True)
    sp.add_argument("-q", "--q", type=int, required=True)
    sp.set_defaults(func=cmd_gauss)

    sp = common(sub.add_parser("slice", help="|Psi|^2 sin(theta) along one time"))
    sp.add_argument("--a", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--t", type=parse_real, help="time in radians (series evaluation)")
    sp.add_argument("--r", type=float, default=0.95)
    sp.add_argument("--L", type=int, default=None)
    sp.add_argument("--grid", type=parse_grid, default=(_SLICE_N, 1))
    sp.add_argument("--out", default="slice.csv")
    sp.add_argument("--plot", action="store_true", help="also write a PNG line plot")
    sp.set_defaults(func=cmd_slice)

    sp = common(sub.add_parser("carpet", help="quantum Talbot carpet (PGM + JSON)"))
    sp.add_argument("--r", type=float, default=0.95)
    sp.add_argument("--L", type=int, default=1000)
    sp.add_argument("--grid", type=parse_grid, default=(1024, 1024), help="N_THETAxN_T")
    sp.add_argument("--out", default="carpet", help="output path stem")
    sp.add_argument("--threads", type=int, default=os.cpu_count())
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--csv", action="store_true", help="also write the grid as CSV")
    sp.set_defaults(func=cmd_carpet)

    sp = common(sub.add_parser("optical", help="optical Talbot carpet (PGM + JSON)"))
    sp.add_argument("--inv-lambda", type=int, default=100)
    sp.add_argument("--w", type=float, default=0.1)
    sp.add_argument("--grid", type=parse_grid, default=(300, 300), help="N_XxN_Y")
    sp.add_argument("--x-range", type=parse_range, default=None)
    sp.add_argument("--y-range", type=parse_range, default=(0.0, 1.0))
    sp.add_argument("--amplitude", action="store_true", help="store |u| instead of |u|^2")
    sp.add_argument("--out", default="optical")
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_optical)

    sp = common(sub.add_parser("singularities", help="classify theta = 2 pi k/q"))
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(func=cmd_singularities)

    sp = common(sub.add_parser("approx", help="continued-fraction convergents of t/(2 pi)"))
    sp.add_argument("--x", type=parse_real, required=True, help="e.g. 1/sqrt(14)")
    sp.add_argument("-n", type=int, default=6)
    sp.add_argument("--r", type=float, default=0.95)
    sp.add_argument("--theta", type=parse_real, default=1.0)
    sp.set_defaults(func=cmd_approx)

    sp = common(sub.add_parser("valleys", help="proven valley slices and numerical zeros"))
    sp.add_argument("--q-max", type=int, default=16)
    sp.add_argument("--a", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--grid", type=int, default=1024)
    sp.add_argument("--rel-tol", type=float, default=1e-4)
    sp.set_defaults(func=cmd_valleys)

    sp = common(sub.add_parser("mask", help="threshold a saved carpet CSV"))
    sp.add_argument("--input", required=True)
    sp.add_argument("--fraction", type=float, default=0.05)
    sp.add_argument("--out", default="mask.pgm")
    sp.set_defaults(func=cmd_mask)

    sp = common(sub.add_parser("reproduce", help="run a figure preset"))
    sp.add_argument("preset", choices=sorted(PRESETS))
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--threads", type=int, default=os.cpu_count())
    sp.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        result = args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"sphere-talbot: error: {exc}", file=sys.stderr)
        return 2
    except (TalbotError, OSError) as exc:
        print(f"sphere-talbot: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(result, args.json)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
