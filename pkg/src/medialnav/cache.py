"""Cache files for built shapes, Minkowski sum tables, and width tables.

All writers emit canonical JSON (sorted keys, repr floats) so re-running on
unchanged input produces byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math

from .geom import Circle, Outline, dist
from .medial import BuildParams, MedialShape
from .minkowski import MinkowskiTable, build_tables, register_shape_types
from .orientation import build_width_table, convex_hull_of_tuples


def _circle_doc(c: Circle):
    return [c.c[0], c.c[1], c.r]


def _shape_doc(s: MedialShape):
    hull = convex_hull_of_tuples(s.tuples)
    table = build_width_table(hull)
    return {
        "name": s.name,
        "params": {
            "h": s.params.h, "phi": s.params.phi,
            "web_rays": s.params.web_rays, "web_rings": s.params.web_rings,
            "ring_step_frac": s.params.ring_step_frac,
            "center_cap_frac": s.params.center_cap_frac,
            "radius_cap_frac": s.params.radius_cap_frac,
        },
        "tuples": [
            {
                "big": _circle_doc(t.big), "small": _circle_doc(t.small),
                "tangents": [list(t.t1), list(t.t2), list(t.t3), list(t.t4)],
            }
            for t in s.tuples
        ],
        "adjacency": [list(e) for e in s.adjacency],
        "circles": [_circle_doc(c) for c in s.circles],
        "polygon": [list(p) for p in s.polygon],
        "width_table": {
            "breaks": list(table.breaks),
            "pairs": [list(p) for p in table.pairs],
            "discs": [_circle_doc(d) for d in table.discs],
        },
    }


def _canonical_json(doc) -> str:
    def default(o):
        raise TypeError(f"not serializable: {o!r}")
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), default=default)


def write_shape_cache(path, shapes: dict):
    doc = {"shapes": {name: _shape_doc(s) for name, s in shapes.items()}}
    data = _canonical_json(doc)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(data + "\n")
    return path


def load_shape_cache(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    from .medial import interp_tuple_lenient
    out = {}
    for name, sd in doc["shapes"].items():
        pd = sd["params"]
        params = BuildParams(h=pd["h"], phi=pd["phi"], web_rays=pd["web_rays"],
                             web_rings=pd["web_rings"],
                             ring_step_frac=pd["ring_step_frac"],
                             center_cap_frac=pd["center_cap_frac"],
                             radius_cap_frac=pd["radius_cap_frac"])
        tuples = [interp_tuple_lenient(Circle((td["big"][0], td["big"][1]), td["big"][2]),
                                       Circle((td["small"][0], td["small"][1]), td["small"][2]))
                  for td in sd["tuples"]]
        circles = [Circle((c[0], c[1]), c[2]) for c in sd["circles"]]
        polygon = [tuple(p) for p in sd["polygon"]]
        adjacency = [tuple(e) for e in sd["adjacency"]]
        out[name] = MedialShape(name, tuples, adjacency, circles, polygon,
                                params, params.h)
    return out


def shape_library_hash(shapes: dict) -> str:
    doc = {
        name: [[_circle_doc(t.big), _circle_doc(t.small)] for t in s.tuples]
        for name, s in sorted(shapes.items())
    }
    return hashlib.sha256(_canonical_json(doc).encode()).hexdigest()


def _outline_doc(o: Outline):
    return {"discs": [_circle_doc(d) for d in o.discs]}


def write_table_cache(path, table: MinkowskiTable, library_hash: str):
    doc = {
        "library_hash": library_hash,
        "theta_e": table.theta_e,
        "types": [list(sig) for sig in table.types],
        "entries": {f"{ia},{ib},{k}": _outline_doc(o)
                    for (ia, ib, k), o in sorted(table.entries.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_canonical_json(doc) + "\n")
    return path


def load_table_cache(path, shapes: dict | None = None,
                     expect_hash: str | None = None) -> MinkowskiTable | None:
    """Load a table cache; returns None on a hash mismatch so callers can
    rebuild."""
    from .geom import disc_hull
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if expect_hash is not None and doc.get("library_hash") != expect_hash:
        return None
    types = [tuple(sig) for sig in doc["types"]]
    entries = {}
    for key, od in doc["entries"].items():
        ia, ib, k = (int(v) for v in key.split(","))
        o = disc_hull([Circle((c[0], c[1]), c[2]) for c in od["discs"]])
        o.provenance = "table"
        entries[(ia, ib, k)] = o
    table = MinkowskiTable(doc["theta_e"], types, entries)
    if shapes is not None:
        index = {sig: i for i, sig in enumerate(types)}
        register_shape_types(shapes.values(), types, index)
    return table


def precompute(shapes: dict, theta_e: float = math.pi / 36.0,
               shape_path=None, table_path=None):
    """Write shape cache (with width tables) and the Minkowski table cache;
    idempotent for unchanged inputs."""
    table = build_tables(list(shapes.values()), theta_e)
    lib_hash = shape_library_hash(shapes)
    if shape_path is not None:
        write_shape_cache(shape_path, shapes)
    if table_path is not None:
        write_table_cache(table_path, table, lib_hash)
    return table, lib_hash
