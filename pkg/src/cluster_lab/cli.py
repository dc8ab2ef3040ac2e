"""Command-line front door.

Subcommands: gen, perim, minimize, exponent, report, render.  Exit status
is 0 on success, 2 when a hypothesis or precondition is violated (bad
areas, divergent square-root series, insufficient depth, malformed specs)
and 1 on internal errors.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .annealing import AnnealConfig, competitor_bound, minimize_n_cluster
from .areaspec import parse_area_spec
from .cluster import Cluster, cluster_perimeter, measures
from .errors import (
    ClusterLabError,
    EmptyBoundaryError,
    HypothesisViolatedError,
    InsufficientDepthError,
    InvalidArgumentError,
    InvalidClusterError,
    InvalidRegionError,
    MalformedMeshError,
    NotFatError,
    UnsupportedRepresentationError,
)
from .functionals import (
    EuclideanNorm,
    ManhattanNorm,
    anisotropic_cluster_perimeter,
    fractional_cluster_perimeter,
)
from .packings import (
    build_cantor_cluster,
    build_square_gasket,
    estimate_packing_exponent,
    generate_apollonian,
)
from . import serialize
from .serialize import (
    REPORT_SCHEMA,
    RESULT_SCHEMA,
    RunManifest,
    file_digest,
    grid_to_obj,
    load_cluster,
    load_json,
    save_cluster,
    save_json,
    save_manifest,
)
from .svg import render_svg

#: precondition/hypothesis failures exit with this status
EXIT_HYPOTHESIS = 2
EXIT_INTERNAL = 1

_PRECONDITION_ERRORS = (
    HypothesisViolatedError,
    InvalidArgumentError,
    InvalidRegionError,
    InvalidClusterError,
    InsufficientDepthError,
    NotFatError,
    UnsupportedRepresentationError,
)


class _Recorder:
    """Tracks files read and written for the run manifest."""

    def __init__(self):
        self.inputs: list[str] = []
        self.outputs: list[str] = []

    def read(self, path: str) -> str:
        if path not in self.inputs:
            self.inputs.append(path)
        return path

    def wrote(self, path: str) -> str:
        if path not in self.outputs:
            self.outputs.append(path)
        return path


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed")
    common.add_argument("--out", help="output JSON path")
    common.add_argument("--svg", help="also render an SVG to this path")
    common.add_argument(
        "--manifest", help="write a replayable run manifest to this path"
    )

    p = argparse.ArgumentParser(prog="cluster-lab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an example cluster")
    g.add_argument("what", choices=["apollonian", "squares", "cantor"])
    g.add_argument("--min-radius", type=float, default=1e-3)
    g.add_argument("--areas", help="area spec or JSON file for squares")
    g.add_argument("--depth", type=int, default=6)

    q = sub.add_parser("perim", parents=[common], help="evaluate perimeters")
    q.add_argument("--in", dest="infile", required=True, help="cluster JSON")
    q.add_argument("--norm", choices=["euclidean", "manhattan"])
    q.add_argument("--fractional", type=float, help="fractional order s in (0, 2)")
    q.add_argument("--samples", type=int, default=200_000)

    m = sub.add_parser("minimize", parents=[common], help="anneal a minimal N-cluster")
    m.add_argument("--areas", required=True, help="area spec (see parse_area_spec)")
    m.add_argument("--n", type=int, required=True, help="number of chambers")
    m.add_argument("--grid", default="256x256", help="WxH cells")
    m.add_argument("--h", type=float, default=None, help="cell size (default 1/W)")
    m.add_argument("--sweeps", type=int, default=4)
    m.add_argument("--cool", type=float, default=0.93)
    m.add_argument("--temps", type=int, default=90)

    e = sub.add_parser("exponent", parents=[common], help="packing exponent bracket")
    e.add_argument("--min-radius", type=float, default=1e-4)
    e.add_argument("--tolerance", type=float, default=0.05)

    r = sub.add_parser("report", parents=[common], help="aggregate run outputs")
    r.add_argument("--in", dest="infiles", nargs="*", default=[], help="JSON outputs")

    v = sub.add_parser("render", parents=[common], help="render a cluster JSON to SVG")
    v.add_argument("--in", dest="infile", required=True, help="cluster JSON")
    return p


def _emit(obj, args, rec: _Recorder) -> None:
    if args.out:
        save_json(obj, args.out)
        rec.wrote(args.out)
    else:
        sys.stdout.write(serialize.dumps(obj) + "\n")


def _maybe_svg(cluster_or_grid, args, rec: _Recorder) -> None:
    if args.svg:
        render_svg(cluster_or_grid, args.svg)
        rec.wrote(args.svg)


def _cmd_gen(args, rec: _Recorder) -> int:
    if args.what == "apollonian":
        disks = generate_apollonian(min_radius=args.min_radius)
        cluster = Cluster(disks, validate=False)
    elif args.what == "squares":
        if not args.areas:
            raise InvalidArgumentError("gen squares requires --areas")
        from fractions import Fraction

        from .packings import square_gasket_areas

        if args.areas.startswith("depth:"):
            areas = square_gasket_areas(int(args.areas[6:]))
        else:
            areas = [
                Fraction(tok) for tok in rec_read_area_tokens(args.areas, rec)
            ]
        cluster = build_square_gasket(areas)
    else:
        cluster = build_cantor_cluster(args.depth).cluster
    obj = serialize.cluster_to_obj(cluster)
    _emit(obj, args, rec)
    _maybe_svg(cluster, args, rec)
    return 0


def rec_read_area_tokens(spec: str, rec: _Recorder) -> list[str]:
    """Area tokens from an inline comma list or a text file (one per line)."""
    import os

    if os.path.exists(spec):
        rec.read(spec)
        with open(spec, "r", encoding="utf-8") as f:
            return [line.strip() for line in f if line.strip()]
    return [tok for tok in spec.split(",") if tok]


def _cmd_perim(args, rec: _Recorder) -> int:
    rec.read(args.infile)
    cluster = load_cluster(args.infile, validate=False)
    out = {
        "schema": RESULT_SCHEMA,
        "kind": "perim",
        "areas": measures(cluster),
        "cluster_perimeter": cluster_perimeter(cluster),
    }
    if args.norm:
        phi = EuclideanNorm() if args.norm == "euclidean" else ManhattanNorm()
        out["anisotropic_perimeter"] = anisotropic_cluster_perimeter(cluster, phi)
        out["norm"] = args.norm
    if args.fractional is not None:
        est = fractional_cluster_perimeter(
            cluster, args.fractional, samples=args.samples, seed=args.seed
        )
        out["fractional"] = {
            "s": args.fractional,
            "value": est.value,
            "standard_error": est.standard_error,
            "tail_bound": est.tail_bound,
        }
    _emit(out, args, rec)
    return 0


def _cmd_minimize(args, rec: _Recorder) -> int:
    spec = parse_area_spec(args.areas, n_terms=max(args.n, 1))
    if len(spec.areas) < args.n:
        raise InvalidArgumentError(
            f"spec provides {len(spec.areas)} areas, need --n {args.n}"
        )
    areas = list(spec.areas[: args.n])
    try:
        w_str, h_str = args.grid.lower().split("x")
        width, height = int(w_str), int(h_str)
    except ValueError as exc:
        raise InvalidArgumentError(f"bad --grid {args.grid!r}") from exc
    cell = args.h if args.h is not None else 1.0 / width
    cfg = AnnealConfig(
        cooling=args.cool,
        sweeps=args.sweeps,
        n_temps=args.temps,
        seed=args.seed,
    )
    result = minimize_n_cluster(areas, (width, height, cell), cfg)
    pbar = competitor_bound(spec.sqrt_sum)
    out = {
        "schema": RESULT_SCHEMA,
        "kind": "minimize",
        "areas": areas,
        "p_estimate": result.p_estimate,
        "p_bar": pbar,
        "below_p_bar": bool(result.p_estimate <= pbar * 1.03),
        "area_errors": list(result.area_errors),
        "boundary_connected": result.boundary_connected,
        "triple_points": result.triple_points,
        "converged": result.converged,
        "energy": result.energy,
        "config": {
            "t0": cfg.t0,
            "cooling": cfg.cooling,
            "sweeps": cfg.sweeps,
            "area_weight": cfg.area_weight,
            "edge_weight": cfg.edge_weight,
            "n_temps": cfg.n_temps,
            "seed": cfg.seed,
            "grid": [width, height],
            "h": cell,
        },
        "grid": grid_to_obj(result.grid),
    }
    _emit(out, args, rec)
    _maybe_svg(result.grid, args, rec)
    return 0


def _cmd_exponent(args, rec: _Recorder) -> int:
    disks = generate_apollonian(min_radius=args.min_radius)
    est = estimate_packing_exponent(disks, tolerance=args.tolerance)
    out = {
        "schema": RESULT_SCHEMA,
        "kind": "exponent",
        "n_disks": len(disks),
        "alpha_hat": est.alpha_hat,
        "bracket": list(est.bracket),
        "cutoff": est.cutoff,
    }
    _emit(out, args, rec)
    return 0


def _cmd_report(args, rec: _Recorder) -> int:
    entries = []
    checks = []
    for path in args.infiles:
        rec.read(path)
        obj = load_json(path)
        entries.append({"path": path, "kind": obj.get("kind"), "data": obj})
        if obj.get("kind") == "minimize":
            checks.append(
                {
                    "path": path,
                    "check": "p_estimate <= p_bar + 3%",
                    "passed": bool(obj.get("below_p_bar", False)),
                }
            )
            checks.append(
                {
                    "path": path,
                    "check": "area constraint within 1%",
                    "passed": bool(obj.get("converged", False)),
                }
            )
        if obj.get("kind") == "exponent":
            lo, hi = obj["bracket"]
            checks.append(
                {
                    "path": path,
                    "check": "exponent bracket is ordered",
                    "passed": bool(lo <= obj["alpha_hat"] <= hi),
                }
            )
    out = {"schema": REPORT_SCHEMA, "entries": entries, "checks": checks}
    _emit(out, args, rec)
    return 0


def _cmd_render(args, rec: _Recorder) -> int:
    if not args.svg:
        raise InvalidArgumentError("render requires --svg <path>")
    rec.read(args.infile)
    cluster = load_cluster(args.infile, validate=False)
    render_svg(cluster, args.svg)
    rec.wrote(args.svg)
    return 0


_DISPATCH = {
    "gen": _cmd_gen,
    "perim": _cmd_perim,
    "minimize": _cmd_minimize,
    "exponent": _cmd_exponent,
    "report": _cmd_report,
    "render": _cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_HYPOTHESIS
    rec = _Recorder()
    try:
        rc = _DISPATCH[args.cmd](args, rec)
    except _PRECONDITION_ERRORS as exc:
        print(f"cluster-lab: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (MalformedMeshError, EmptyBoundaryError, ClusterLabError) as exc:
        print(f"cluster-lab: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"cluster-lab: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if rc == 0 and getattr(args, "manifest", None):
        # record the command without the manifest flag itself so a replay
        # does not clobber the manifest it is replaying
        cmd = _strip_manifest_flag(argv)
        manifest = RunManifest(
            command=tuple(cmd),
            seed=getattr(args, "seed", None),
            version=__version__,
            inputs={p: file_digest(p) for p in rec.inputs},
            outputs={p: file_digest(p) for p in rec.outputs},
        )
        save_manifest(manifest, args.manifest)
    return rc


def _strip_manifest_flag(argv: list[str]) -> list[str]:
    out = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--manifest":
            skip = True
            continue
        if tok.startswith("--manifest="):
            continue
        out.append(tok)
    return out


if __name__ == "__main__":
    sys.exit(main())
