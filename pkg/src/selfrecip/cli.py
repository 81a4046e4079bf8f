"""Command line: ``selfrecip {eigenfun, decompose, verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 bad usage or
unparsable input, 3 a numerical contract was violated.  Every run writes
a JSON manifest listing its configuration, files and residuals.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cstransform import ResolutionError, TailError, TransformConfig, default_tol, eigen_residual
from .eigenchain import ChainCoordinate, GeneralizedEigenfunction, HypothesisError, chain_values, decompose
from .grid import (DEFAULT_GRID_SPEC, GridError, GridFunction, from_json, l2_norm, parse_grid_spec,
                   read_csv, write_csv)
from .special import StripError
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
_NUMERIC = (TailError, ResolutionError, HypothesisError, ArithmeticError, RuntimeError)


class UsageError(Exception):
    pass


def _grid_params(grid):
    return {"t_lo": grid.t_lo, "t_hi": grid.t_hi, "n": grid.n, "u_min": grid.u_min, "h": grid.h}


def _write_json(path, doc):
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _manifest(command, cfg, grid, inputs, outputs, residuals):
    return {
        "command": command,
        "version": __version__,
        "config": dataclasses.asdict(cfg) if cfg else None,
        "grid": _grid_params(grid) if grid else None,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "residuals": residuals,
    }


def _parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as a complex number") from exc


def cmd_eigenfun(args):
    grid = parse_grid_spec(args.grid)
    t = grid.t
    if args.a is not None:
        e = GeneralizedEigenfunction(args.family, args.sign, _parse_complex(args.a))
        vals = e(t)
        c1, c2 = e.coefficients
        target = 1.0 if args.sign == "plus" else -1.0
        residuals = {"coefficient_product": float(abs(c1 * c2 - target))}
    else:
        coord = ChainCoordinate(args.family, args.sign, float(args.tau))
        vals = chain_values(coord.family, coord.sign, t, coord.tau)
        excess = np.abs(vals) * np.sqrt(t * np.pi) - 1.0
        residuals = {"pointwise_bound_excess": float(max(excess.max(), 0.0))}
    out = write_csv(args.output, GridFunction(grid, vals))
    man = Path(args.manifest or f"{out}.manifest.json")
    _write_json(man, _manifest("eigenfun", None, grid, [], [out, man], residuals))
    return EXIT_OK


def _read_input(path):
    path = Path(path)
    if path.suffix.lower() == ".json":
        try:
            obj = from_json(path.read_text())
        except OSError as exc:
            raise GridError(str(exc)) from exc
        if not isinstance(obj, GridFunction):
            raise GridError("input JSON must describe a grid function")
        return obj
    return read_csv(path)


def _scaled_eigen_residual(part, family, sign, cfg, scale):
    """``||T p -+ p|| / ||x||``; for a negligible part the unitary bound ``2 ||p|| / ||x||``."""
    rel = l2_norm(part) / scale
    if rel < cfg.tol:
        return 2 * rel
    return eigen_residual(part, family, sign, cfg) * rel


def cmd_decompose(args):
    try:
        x = _read_input(args.input)
    except GridError as exc:
        raise UsageError(str(exc)) from exc
    cfg = TransformConfig(tol=default_tol())
    parts = decompose(x, args.family, cfg)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [
        write_csv(out / "x_plus.csv", parts.x_plus),
        write_csv(out / "x_minus.csv", parts.x_minus),
        write_csv(out / "phi_plus.csv", parts.phi_plus),
        write_csv(out / "phi_minus.csv", parts.phi_minus),
    ]
    nx = l2_norm(x)
    scale = nx if nx else 1.0
    residuals = {
        "orthogonality": abs(l2_norm(parts.x_plus) ** 2 + l2_norm(parts.x_minus) ** 2 - nx ** 2) / scale ** 2,
        "reconstruction": l2_norm(parts.x_plus + parts.x_minus - x) / scale,
        "eigen_residual_plus": _scaled_eigen_residual(parts.x_plus, args.family, "plus", cfg, scale),
        "eigen_residual_minus": _scaled_eigen_residual(parts.x_minus, args.family, "minus", cfg, scale),
        "x_plus_relative_norm": l2_norm(parts.x_plus) / scale,
        "x_minus_relative_norm": l2_norm(parts.x_minus) / scale,
    }
    residuals = {k: float(v) for k, v in residuals.items()}
    man = out / "manifest.json"
    files.append(man)
    _write_json(man, _manifest("decompose", cfg, x.grid, [args.input], files, residuals))
    checked = ("orthogonality", "reconstruction", "eigen_residual_plus", "eigen_residual_minus")
    return EXIT_OK if all(residuals[k] < cfg.tol for k in checked) else EXIT_FAIL


def cmd_verify(args):
    report = run_suite(args.suite)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = Path(args.output)
    out.write_text(text)
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']:<55} {c['residual']:.3e}  (tol {c['tol']:.1e})")
    man = Path(args.manifest or f"{out}.manifest.json")
    residuals = {c["name"]: c["residual"] for c in report["checks"]}
    _write_json(man, _manifest(f"verify --suite {args.suite}", TransformConfig(tol=default_tol()),
                               parse_grid_spec(DEFAULT_GRID_SPEC), [], [out, man], residuals))
    return EXIT_OK if all(c["pass"] for c in report["checks"]) else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="selfrecip", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eigenfun", help="sample a generalized eigenfunction or a chain function")
    e.add_argument("--family", required=True, choices=("cosine", "sine"))
    e.add_argument("--sign", required=True, choices=("plus", "minus"))
    which = e.add_mutually_exclusive_group(required=True)
    which.add_argument("--a", help="strip parameter, e.g. 0.3+0.1j")
    which.add_argument("--tau", type=float, help="critical-line coordinate tau > 0")
    e.add_argument("--grid", default=DEFAULT_GRID_SPEC, help="LO:HI:N (default %(default)s)")
    e.add_argument("--output", required=True, help="CSV file (t,re,im)")
    e.add_argument("--manifest", help="manifest path (default OUTPUT.manifest.json)")
    e.set_defaults(func=cmd_eigenfun)

    d = sub.add_parser("decompose", help="split a sampled function into eigen-components")
    d.add_argument("--input", required=True, help="CSV (t,re,im) or JSON grid function")
    d.add_argument("--family", required=True, choices=("cosine", "sine"))
    d.add_argument("--output-dir", required=True)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--output", default="verify-report.json")
    v.add_argument("--manifest", help="manifest path (default OUTPUT.manifest.json)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERIC as exc:
        print(f"selfrecip: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, GridError, StripError, ValueError) as exc:
        print(f"selfrecip: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
