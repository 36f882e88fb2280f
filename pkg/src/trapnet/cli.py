"""Command-line interface.

Subcommands::

    sample     evaluate a field quantity on a grid (CSV or JSON)
    nulllines  extract the guide network as polylines (JSON)
    analyze    classify a point of the network (node or line report, JSON)
    verify     run the finite-difference oracle battery (JSON)
    catalog    list the built-in generators

Exit codes: 0 success, 2 generator/spec error, 3 I/O error, 4 analysis
precondition failure.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .analysis import (AnalysisError, NotALinePointError, PlanarJet, classify_node,
                       null_lines, transverse_confinement)
from .extension import Field, TrapParams, synthesize
from .generators import GeneratorError, GeneratorSpec, catalog, catalog_names, load_spec
from .verify import VerifyConfig, run_checks

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_IO = 3
EXIT_ANALYSIS = 4

QUANTITIES = ("phi", "upp", "grad_norm", "p")


@dataclass(frozen=True)
class GridSpec:
    """Axis ranges and sample counts for a grid evaluation."""

    window: tuple  # (x0, x1, y0, y1) or (x0, x1, y0, y1, z0, z1)
    counts: tuple  # one count per axis, each >= 2
    quantity: str = "upp"

    def __post_init__(self):
        if len(self.window) not in (4, 6) or len(self.window) != 2 * len(self.counts):
            raise ValueError("window and counts describe different dimensions")
        if any(c < 2 for c in self.counts):
            raise ValueError("grid counts must be at least 2")
        for lo, hi in zip(self.window[::2], self.window[1::2]):
            if not hi > lo:
                raise ValueError("grid ranges must be non-degenerate")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")

    @property
    def axes(self) -> list[np.ndarray]:
        return [np.linspace(self.window[2 * a], self.window[2 * a + 1], self.counts[a])
                for a in range(len(self.counts))]


def _parse_floats(text: str, counts: tuple[int, ...], what: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise GeneratorError(f"cannot parse {what} {text!r}") from None
    if len(values) not in counts:
        raise GeneratorError(
            f"{what} needs {' or '.join(map(str, counts))} comma-separated values")
    return values


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise GeneratorError(f"--param expects name=value, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise GeneratorError(f"parameter {name!r} has non-numeric value {value!r}") from None
    return out


def _load_generator_spec(ref: str) -> GeneratorSpec:
    if os.path.exists(ref):
        return load_spec(ref)
    if ref in catalog_names():
        return catalog(ref)
    raise GeneratorError(f"{ref!r} is neither a spec file nor a built-in generator")


def _trap_params(args) -> TrapParams:
    given = (args.charge, args.mass, args.omega)
    if all(v is None for v in given):
        return TrapParams.normalized()
    return TrapParams(charge=args.charge, mass=args.mass, omega=args.omega)


def _write_text(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_sample(args) -> int:
    spec = _load_generator_spec(args.spec).with_params(_parse_params(args.param))
    generator = spec.compile()
    window = _parse_floats(args.window, (4, 6), "--window")
    res = tuple(int(v) for v in _parse_floats(args.res, (1, 2, 3), "--res"))
    ndim = len(window) // 2
    counts = res * ndim if len(res) == 1 else res
    if len(counts) != ndim:
        raise GeneratorError(f"--res gives {len(counts)} counts for a {ndim}-D window")
    grid = GridSpec(window, counts, args.quantity)
    if grid.quantity == "p" and ndim == 3:
        raise GeneratorError("quantity 'p' is planar; use a 4-value window")

    axes = grid.axes
    if ndim == 2:
        coords = np.meshgrid(*axes, indexing="ij")
        zcoord = np.zeros_like(coords[0])
        header = "x,y,value"
    else:
        coords = np.meshgrid(*axes, indexing="ij")
        zcoord = coords[2]
        header = "x,y,z,value"

    if grid.quantity == "p":
        data = PlanarJet(generator).value(coords[0], coords[1])
    else:
        fld = synthesize(generator, _trap_params(args))
        if grid.quantity == "phi":
            data = fld.value(coords[0], coords[1], zcoord)
        elif grid.quantity == "upp":
            data = fld.pseudopotential(coords[0], coords[1], zcoord)
        else:
            comps = [fld.derivative(*d, coords[0], coords[1], zcoord)
                     for d in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
            data = np.sqrt(sum(np.asarray(c) ** 2 for c in comps))
    data = np.broadcast_to(np.asarray(data, dtype=float), coords[0].shape)

    if args.format == "json":
        payload = {
            "quantity": grid.quantity,
            "window": list(window),
            "counts": list(counts),
            "order": "x-major" + ("" if ndim == 2 else ", z fastest"),
            "values": [float(v) for v in data.ravel(order="C")],
        }
        _write_text(_json_dump(payload), args.out)
    else:
        lines = [header]
        it = np.nditer(data, flags=["multi_index"], order="C")
        for v in it:
            idx = it.multi_index
            point = [axes[a][idx[a]] for a in range(ndim)]
            lines.append(",".join(repr(float(c)) for c in point) + f",{float(v)!r}")
        _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_nulllines(args) -> int:
    spec = _load_generator_spec(args.spec).with_params(_parse_params(args.param))
    generator = spec.compile()
    window = _parse_floats(args.window, (4,), "--window")
    res = int(_parse_floats(args.res, (1,), "--res")[0])
    lines = null_lines(generator, window, res)
    payload = {
        "window": list(window),
        "resolution": res,
        "polylines": [
            {"closed": pl.closed, "points": [[px, py] for px, py in pl.points]}
            for pl in lines
        ],
    }
    _write_text(_json_dump(payload), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = _load_generator_spec(args.spec).with_params(_parse_params(args.param))
    generator = spec.compile()
    x, y = _parse_floats(args.point, (2,), "--point")
    fld = synthesize(generator, _trap_params(args))
    try:
        report = classify_node(generator, (x, y), field=fld)
    except AnalysisError:
        lam_n, lam_z = _line_report(fld, generator, (x, y))
        jet = PlanarJet(generator)
        grad = jet.grad(x, y)
        grad_sq = float(grad @ grad)
        payload = {
            "point": [x, y],
            "kind": "line",
            "lambda_normal": lam_n,
            "lambda_z": lam_z,
            "grad_norm": float(np.sqrt(grad_sq)),
            "expected_curvature": 2.0 * fld.kappa * grad_sq,
        }
    else:
        q2 = report.q2
        payload = {
            "point": [report.x, report.y],
            "kind": report.kind,
            "angle": report.angle,
            "p_value": report.value,
            "gradient": list(report.gradient),
            "q2": [[q2.xx, q2.xy], [q2.xy, q2.yy]],
            "eigenvalues": [float(v) for v in q2.eigenvalues()],
            "multipole_order": report.multipole_order,
        }
    _write_text(_json_dump(payload), args.out)
    return EXIT_OK


def _line_report(fld, generator, point):
    # NotALinePointError propagates to the exit-code handler (code 4)
    return transverse_confinement(fld, generator, point)


def cmd_verify(args) -> int:
    spec = _load_generator_spec(args.spec).with_params(_parse_params(args.param))
    generator = spec.compile()
    fld = synthesize(generator, _trap_params(args))
    window = _parse_floats(args.window, (6,), "--window") if args.window else \
        VerifyConfig().window
    config = VerifyConfig(samples=args.samples, seed=args.seed, h=args.h, window=window)
    report = run_checks(fld, generator, config)
    _write_text(_json_dump(report.to_dict()), args.out)
    return EXIT_OK


def cmd_catalog(args) -> int:
    entries = {name: catalog(name).to_dict() for name in catalog_names()}
    if args.format == "json":
        _write_text(_json_dump(entries), args.out)
    else:
        lines = []
        for name, entry in entries.items():
            params = ", ".join(f"{k}={v:g}" for k, v in sorted(entry["params"].items()))
            suffix = f" [{params}]" if params else ""
            periods = entry.get("periods")
            if periods:
                suffix += f" periods=({periods[0]:g}, {periods[1]:g})"
            lines.append(f"{name}: {entry['kind']}  {entry['expr']}{suffix}")
        _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing and dispatch
# ----------------------------------------------------------------------

def _add_generator_args(sub):
    sub.add_argument("spec", help="generator spec file (JSON) or built-in name")
    sub.add_argument("--param", action="append", metavar="NAME=VALUE",
                     help="override a generator parameter (repeatable)")
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def _add_trap_args(sub):
    sub.add_argument("--charge", type=float, default=None, help="charge [C]")
    sub.add_argument("--mass", type=float, default=None, help="mass [kg]")
    sub.add_argument("--omega", type=float, default=None,
                     help="RF angular frequency [rad/s]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapnet",
        description="Synthesize and analyze field-free RF guide networks.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sample", help="evaluate a quantity on a grid")
    _add_generator_args(p)
    _add_trap_args(p)
    p.add_argument("--quantity", choices=QUANTITIES, default="upp")
    p.add_argument("--window", required=True, metavar="x0,x1,y0,y1[,z0,z1]")
    p.add_argument("--res", default="64", metavar="N[,N,N]")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("nulllines", help="extract the guide network")
    _add_generator_args(p)
    p.add_argument("--window", required=True, metavar="x0,x1,y0,y1")
    p.add_argument("--res", default="256", metavar="N")
    p.set_defaults(func=cmd_nulllines)

    p = subs.add_parser("analyze", help="classify a network point")
    _add_generator_args(p)
    _add_trap_args(p)
    p.add_argument("--point", required=True, metavar="x,y")
    p.set_defaults(func=cmd_analyze)

    p = subs.add_parser("verify", help="finite-difference oracle checks")
    _add_generator_args(p)
    _add_trap_args(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=1e-4, help="stencil step")
    p.add_argument("--window", default=None, metavar="x0,x1,y0,y1,z0,z1")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("catalog", help="list built-in generators")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GeneratorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


def run():
    sys.exit(main())
