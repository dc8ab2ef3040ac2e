"""Byte-stable JSON serialization for clusters and run manifests.

Floats are emitted with Python's shortest round-trip repr and keys are
sorted, so save -> load -> save is byte-identical and golden files are
stable across runs and platforms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .cluster import Cluster
from .errors import InvalidArgumentError
from .grid import GridCluster
from .regions import (
    ArcEdge,
    ArcPolygon,
    AxisRect,
    Disk,
    PixelMask,
    Region,
    SegmentEdge,
)

CLUSTER_SCHEMA = "cluster-lab/cluster/1"
MANIFEST_SCHEMA = "cluster-lab/manifest/1"
RESULT_SCHEMA = "cluster-lab/result/1"
REPORT_SCHEMA = "cluster-lab/report/1"


def region_to_obj(region: Region) -> dict:
    if isinstance(region, Disk):
        return {
            "type": "disk",
            "center": list(region.center),
            "radius": region.radius,
            "curvature": region.curvature,
        }
    if isinstance(region, AxisRect):
        return {"type": "rect", "lo": list(region.lo), "hi": list(region.hi)}
    if isinstance(region, ArcPolygon):
        edges = []
        for e in region.edges:
            if isinstance(e, SegmentEdge):
                edges.append(
                    {"type": "segment", "p0": list(e.p0), "p1": list(e.p1)}
                )
            else:
                edges.append(
                    {
                        "type": "arc",
                        "center": list(e.center),
                        "radius": e.radius,
                        "theta0": e.theta0,
                        "theta1": e.theta1,
                        "ccw": e.ccw,
                    }
                )
        return {"type": "arc_polygon", "edges": edges}
    if isinstance(region, PixelMask):
        return {
            "type": "pixel_mask",
            "h": region.h,
            "origin": list(region.origin),
            "mask": [[int(v) for v in row] for row in region.mask],
        }
    raise InvalidArgumentError(f"unknown region type {type(region)!r}")


def region_from_obj(obj: dict) -> Region:
    t = obj.get("type")
    if t == "disk":
        return Disk(tuple(obj["center"]), obj["radius"], obj.get("curvature"))
    if t == "rect":
        return AxisRect(tuple(obj["lo"]), tuple(obj["hi"]))
    if t == "arc_polygon":
        edges = []
        for e in obj["edges"]:
            if e["type"] == "segment":
                edges.append(SegmentEdge(tuple(e["p0"]), tuple(e["p1"])))
            elif e["type"] == "arc":
                edges.append(
                    ArcEdge(
                        tuple(e["center"]),
                        e["radius"],
                        e["theta0"],
                        e["theta1"],
                        e["ccw"],
                    )
                )
            else:
                raise InvalidArgumentError(f"unknown edge type {e['type']!r}")
        return ArcPolygon(tuple(edges))
    if t == "pixel_mask":
        return PixelMask(
            np.array(obj["mask"], dtype=bool), obj["h"], tuple(obj["origin"])
        )
    raise InvalidArgumentError(f"unknown region type tag {t!r}")


def cluster_to_obj(c: Cluster) -> dict:
    return {
        "schema": CLUSTER_SCHEMA,
        "regions": [region_to_obj(r) for r in c.regions],
    }


def cluster_from_obj(obj: dict, validate: bool = False) -> Cluster:
    if obj.get("schema") != CLUSTER_SCHEMA:
        raise InvalidArgumentError(
            f"expected schema {CLUSTER_SCHEMA!r}, got {obj.get('schema')!r}"
        )
    return Cluster(
        [region_from_obj(r) for r in obj["regions"]], validate=validate
    )


def grid_to_obj(g: GridCluster) -> dict:
    return {
        "schema": "cluster-lab/grid/1",
        "h": g.h,
        "targets": list(g.targets),
        "labels": [[int(v) for v in row] for row in g.labels],
    }


def grid_from_obj(obj: dict) -> GridCluster:
    return GridCluster(
        np.array(obj["labels"], dtype=np.int64),
        obj["h"],
        tuple(obj.get("targets", ())),
    )


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no whitespace drift."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def save_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(obj))
        f.write("\n")


def load_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_cluster(c: Cluster, path) -> None:
    save_json(cluster_to_obj(c), path)


def load_cluster(path, validate: bool = False) -> Cluster:
    return cluster_from_obj(load_json(path), validate=validate)


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to replay a CLI run and check its outputs."""

    command: tuple[str, ...]
    seed: int | None
    version: str
    inputs: dict[str, str]  # path -> sha256
    outputs: dict[str, str]  # path -> sha256

    def to_obj(self) -> dict:
        return {
            "schema": MANIFEST_SCHEMA,
            "command": list(self.command),
            "seed": self.seed,
            "version": self.version,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "RunManifest":
        if obj.get("schema") != MANIFEST_SCHEMA:
            raise InvalidArgumentError(
                f"expected schema {MANIFEST_SCHEMA!r}, got {obj.get('schema')!r}"
            )
        return cls(
            command=tuple(obj["command"]),
            seed=obj.get("seed"),
            version=obj["version"],
            inputs=dict(obj.get("inputs", {})),
            outputs=dict(obj.get("outputs", {})),
        )


def save_manifest(m: RunManifest, path) -> None:
    save_json(m.to_obj(), path)


def load_manifest(path) -> RunManifest:
    return RunManifest.from_obj(load_json(path))


def replay_manifest(path) -> dict[str, bool]:
    """Re-run the recorded command and compare output digests.

    Returns path -> matched; raises if any input file changed since the
    original run (replay would be meaningless).
    """
    from . import cli

    m = load_manifest(path)
    for p, want in m.inputs.items():
        got = file_digest(p)
        if got != want:
            raise InvalidArgumentError(
                f"input {p} changed since the manifest was written"
            )
    rc = cli.main(list(m.command))
    if rc != 0:
        raise InvalidArgumentError(f"replayed command exited with status {rc}")
    return {p: file_digest(p) == want for p, want in m.outputs.items()}
