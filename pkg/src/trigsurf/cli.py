"""Command-line entry point: ``trigsurf verify | mesh | obstruction``.

Exit codes: 0 success, 1 a verification item failed, 2 invalid arguments or
configuration.
"""
from __future__ import annotations

import argparse
import fnmatch
import json
import math
import sys
import warnings
from pathlib import Path

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def _cmd_verify(args) -> int:
    from .report import DEFAULT_CONFIG, SECTIONS, item_names, run_all
    config = dict(DEFAULT_CONFIG)
    config.update(_load_config(args.config))
    # flags override the config file
    for key in ("tol", "only", "jobs", "sections"):
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    if args.no_timing:
        config["timing"] = False
    out = args.out or config.pop("out", None) or "trigsurf-report.json"
    config.pop("out", None)

    tol = config.get("tol")
    if tol is not None and not (isinstance(tol, (int, float)) and tol > 0 and math.isfinite(tol)):
        raise ConfigError(f"--tol must be a positive number, got {tol!r}")
    jobs = config.get("jobs", 1)
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    unknown = [s for s in config.get("sections") or [] if s not in SECTIONS]
    if unknown:
        raise ConfigError(f"unknown sections {unknown}; choose from {list(SECTIONS)}")
    only = config.get("only")
    if only and not any(fnmatch.fnmatchcase(n, only) for n in item_names(config.get("sections"))):
        raise ConfigError(f"--only {only!r} matches no verification item")

    report = run_all(config)
    Path(out).write_text(report.to_json())
    for item in report.items:
        if item.exact:
            value = "exact" if item.exact_zero else "nonzero"
        else:
            value = "-" if item.residual is None else f"{item.residual:.3e}"
        print(f"{item.status.upper():4}  {item.name:34} {value:>10}  {item.detail}")
    passed = sum(i.passed for i in report.items)
    print(f"{passed}/{len(report.items)} items passed; report written to {out}")
    return EXIT_OK if report.all_passed else EXIT_FAIL


def _cmd_mesh(args) -> int:
    from .errors import DomainError
    from .mesh import build_mesh, export_obj, parse_projection
    try:
        projection = parse_projection(args.project)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    if args.radius <= 0:
        raise ConfigError("--radius must be positive")
    if args.refine < 0:
        raise ConfigError("--refine must be >= 0")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mesh = build_mesh(radius=args.radius, refinement=args.refine, theta=args.theta)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    obj, side = export_obj(mesh, args.out, projection)
    print(f"vertices {mesh.vertex_count}  triangles {mesh.triangle_count}")
    print(f"wrote {obj} and {side}")
    return EXIT_OK


def _cmd_obstruction(args) -> int:
    from .curve import trigonal_obstruction
    if args.genus < 0:
        raise ConfigError("--genus must be >= 0")
    print(trigonal_obstruction(args.genus))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigsurf",
        description="Verify the genus-10 trigonal minimal surface in a flat 4-torus and export meshes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite and write a JSON report")
    v.add_argument("--tol", type=float, default=None,
                   help="absolute and relative tolerance for every quadrature (default: per item)")
    v.add_argument("--out", default=None, help="report path (default trigsurf-report.json)")
    v.add_argument("--only", default=None, metavar="GLOB",
                   help="run only items whose name matches GLOB, e.g. 'lattice.*'")
    v.add_argument("--sections", nargs="+", default=None, metavar="SECTION",
                   help="sections to run (default: all)")
    v.add_argument("--jobs", type=int, default=None,
                   help="worker processes; 1 (default) gives bitwise-reproducible reports")
    v.add_argument("--config", default=None, help="JSON file with defaults; flags override it")
    v.add_argument("--no-timing", action="store_true",
                   help="omit runtimes so that reports are byte-for-byte reproducible")
    v.set_defaults(func=_cmd_verify)

    m = sub.add_parser("mesh", help="build the immersed mesh and export OBJ plus attributes")
    m.add_argument("--theta", type=float, default=0.0, help="associate angle in radians (default 0)")
    m.add_argument("--radius", type=float, default=1.5, help="radius of the z-disk (default 1.5)")
    m.add_argument("--refine", type=int, default=0, help="refinement level >= 0 (default 0)")
    m.add_argument("--project", default="123", metavar="IJK",
                   help="three distinct coordinates out of 1-4 written to the OBJ (default 123); "
                        "the fourth goes to the side-car file")
    m.add_argument("--out", default="trigsurf-mesh.obj", help="OBJ path (default trigsurf-mesh.obj)")
    m.set_defaults(func=_cmd_mesh)

    o = sub.add_parser("obstruction", help="genus obstruction for trigonal minimal surfaces")
    o.add_argument("--genus", type=int, required=True, help="genus G >= 0")
    o.set_defaults(func=_cmd_obstruction)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
