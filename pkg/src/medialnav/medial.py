"""Agent shape approximation: polygonize a contour, sample its boundary,
triangulate the interior, extract and filter medial circles, interpolate
tuples, and grow them until the union covers the whole agent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from shapely import geometry as shgeom

from .geom import (
    TAU, Circle, DegenerateError, GeometryError, MedialTuple, Segment,
    circumcircle, cross, dist, make_tuple, tuple_contains_batch,
    tuple_distance_batch, vsub,
)


class SelfIntersectionError(GeometryError):
    pass


class CoverageFailure(GeometryError):
    def __init__(self, msg, violations=None):
        super().__init__(msg)
        self.violations = violations or []


@dataclass
class BuildParams:
    """Knobs for the shape build; `h` defaults to 5% of the bbox diagonal."""

    h: float | None = None
    phi: float = 1.0
    web_rays: int = 16
    web_rings: int = 8
    ring_step_frac: float = 0.05
    center_cap_frac: float = 0.5
    radius_cap_frac: float = 2.0


# ---------------------------------------------------------------------------
# polygon utilities

def polygon_area(pts):
    s = 0.0
    n = len(pts)
    for i in range(n):
        s += cross(pts[i], pts[(i + 1) % n])
    return 0.5 * s


def _segments_properly_intersect(a, b, c, d):
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    # strict sign products: touching endpoints (zero orientation) do not count
    return o1 * o2 < 0.0 and o3 * o4 < 0.0


def polygon_is_simple(pts):
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            c, d = pts[j], pts[(j + 1) % n]
            if _segments_properly_intersect(a, b, c, d):
                return False
    return True


def point_in_polygon(p, pts):
    """Crossing-number test; boundary points count as inside."""
    n = len(pts)
    x, y = p
    inside = False
    for i in range(n):
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % n]
        # on-edge check
        if min(ax, bx) - 1e-12 <= x <= max(ax, bx) + 1e-12 and \
           min(ay, by) - 1e-12 <= y <= max(ay, by) + 1e-12:
            if abs((bx - ax) * (y - ay) - (by - ay) * (x - ax)) <= 1e-12 * max(1.0, abs(bx - ax) + abs(by - ay)):
                return True
        if (ay > y) != (by > y):
            xx = ax + (y - ay) * (bx - ax) / (by - ay)
            if x < xx:
                inside = not inside
    return inside


def _point_segment_distance(p, a, b):
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 < 1e-30:
        return dist(p, a)
    t = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2))
    return dist(p, (ax + t * dx, ay + t * dy))


def polygonize(contour, tol: float = 0.0):
    """Validate a closed contour and optionally coarsen it outward.

    Returns a simple CCW polygon that contains the input region with
    Hausdorff distance at most `tol`.  With tol <= 0 (or when nothing can be
    merged) the input is returned unchanged apart from CCW normalization.
    """
    raw = [(float(x), float(y)) for x, y in contour]
    scale = max(max(abs(x), abs(y)) for x, y in raw) or 1.0
    pts = []
    for p in raw:
        if pts and dist(p, pts[-1]) <= 1e-12 * scale:
            continue
        pts.append(p)
    if len(pts) > 1 and dist(pts[0], pts[-1]) <= 1e-12 * scale:
        pts.pop()
    if len(pts) < 3:
        raise DegenerateError("contour needs at least 3 vertices")
    if not polygon_is_simple(pts):
        raise SelfIntersectionError("contour is self-intersecting")
    if polygon_area(pts) < 0:
        pts = pts[::-1]
    if tol <= 0.0:
        return pts

    budget = 0.4 * tol
    out = []
    max_dev = 0.0
    n = len(pts)
    i = 0
    while i < n:
        out.append(pts[i])
        j = i + 1
        best_j = j
        best_dev = 0.0
        while j < n:
            # chord from pts[i] to pts[(j+1) % n]; skipped: i+1..j
            end = pts[(j + 1) % n]
            dev = max(_point_segment_distance(pts[k], pts[i], end)
                      for k in range(i + 1, j + 1))
            if dev <= budget:
                best_j = j + 1
                best_dev = dev
                j += 1
            else:
                break
        max_dev = max(max_dev, best_dev)
        i = best_j if best_j > i + 1 else i + 1
    if len(out) < 3 or len(out) == n:
        return pts
    if max_dev <= 0.0:
        return out if polygon_is_simple(out) else pts

    # outward miter offset by the incurred deviation restores containment
    e = max_dev
    m = len(out)
    shifted = []
    for k in range(m):
        a = out[(k - 1) % m]
        b = out[k]
        c = out[(k + 1) % m]
        d1 = vsub(b, a)
        d2 = vsub(c, b)
        l1 = math.hypot(*d1)
        l2 = math.hypot(*d2)
        n1 = (d1[1] / l1, -d1[0] / l1)
        n2 = (d2[1] / l2, -d2[0] / l2)
        den = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(den) < 1e-12 * l1 * l2:
            shifted.append((b[0] + e * n1[0], b[1] + e * n1[1]))
            continue
        # intersection of the two offset edge lines through b
        # b + e*n1 + t*d1 = b + e*n2 + s*d2
        rhs = (e * (n2[0] - n1[0]), e * (n2[1] - n1[1]))
        t = (rhs[0] * d2[1] - rhs[1] * d2[0]) / den
        p = (b[0] + e * n1[0] + t * d1[0], b[1] + e * n1[1] + t * d1[1])
        if dist(p, b) > 2.5 * e:
            p = (b[0] + e * n1[0], b[1] + e * n1[1])
        shifted.append(p)
    if not polygon_is_simple(shifted):
        return pts
    return shifted


# ---------------------------------------------------------------------------
# boundary sampling

class BoundarySamples:
    __slots__ = ("points", "polygon", "h")

    def __init__(self, points, polygon, h):
        self.points = points
        self.polygon = polygon
        self.h = h

    def __len__(self):
        return len(self.points)

    def segment(self, i):
        return Segment(self.points[i], self.points[(i + 1) % len(self.points)])


def sample_boundary(polygon, h: float) -> BoundarySamples:
    """Uniform samples along each edge, ceil(L/h) subdivisions per edge; all
    polygon vertices are included."""
    if h <= 0:
        raise GeometryError("sampling density must be positive")
    pts = []
    n = len(polygon)
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        L = dist(a, b)
        k = max(1, math.ceil(L / h - 1e-12))
        for j in range(k):
            t = j / k
            pts.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return BoundarySamples(pts, polygon, h)


# ---------------------------------------------------------------------------
# triangulation

class TriangleMesh:
    __slots__ = ("points", "triangles", "external", "tri_class")

    def __init__(self, points, triangles, external, tri_class):
        self.points = points        # sample points, boundary order
        self.triangles = triangles  # index triples, CCW
        self.external = external    # per-triangle tuple of 3 bools, edge k = (v_k, v_{k+1})
        self.tri_class = tri_class  # 'T' | 'S' | 'J' | 'X' (all edges external)


def constrained_delaunay(samples: BoundarySamples) -> TriangleMesh:
    """Interior triangulation of the sampled polygon with every sampling
    segment present as an edge; triangles classified by external-edge count."""
    pts = samples.points
    n = len(pts)
    if n < 3:
        raise DegenerateError("need at least 3 samples")
    poly = shgeom.Polygon(pts)
    if poly.area <= 0 or not poly.is_valid:
        raise DegenerateError("degenerate or invalid sample loop")
    coll = shapely.constrained_delaunay_triangles(poly)
    index = {(x, y): i for i, (x, y) in enumerate(pts)}
    tris = []
    for g in coll.geoms:
        vs = list(g.exterior.coords)[:3]
        try:
            tri = tuple(index[v] for v in vs)
        except KeyError as exc:
            raise GeometryError(f"triangulation introduced vertex {exc}") from exc
        a, b, c = (pts[k] for k in tri)
        if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
            tri = (tri[0], tri[2], tri[1])
        tris.append(tri)
    tris.sort()

    def is_external(i, j):
        return (j - i) % n == 1 or (i - j) % n == 1

    external = []
    tri_class = []
    for tri in tris:
        flags = tuple(is_external(tri[k], tri[(k + 1) % 3]) for k in range(3))
        external.append(flags)
        cnt = sum(flags)
        tri_class.append({2: "T", 1: "S", 0: "J"}.get(cnt, "X"))
    return TriangleMesh(pts, tris, external, tri_class)


# ---------------------------------------------------------------------------
# medial graph

class MedialGraph:
    """Medial circles from T/J triangles plus adjacency through S-chains."""

    __slots__ = ("circles", "classes", "adjacency")

    def __init__(self, circles, classes, adjacency):
        self.circles = circles
        self.classes = classes
        self.adjacency = adjacency  # set of (i, j), i < j

    def neighbors(self, i):
        out = []
        for a, b in self.adjacency:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def copy(self):
        return MedialGraph(list(self.circles), list(self.classes), set(self.adjacency))


def build_medial_graph(mesh: TriangleMesh) -> MedialGraph:
    circles = []
    classes = []
    tri_to_node = {}
    for t, tri in enumerate(mesh.triangles):
        if mesh.tri_class[t] in ("T", "J"):
            tri_to_node[t] = len(circles)
            circles.append(circumcircle(*(mesh.points[v] for v in tri)))
            classes.append(mesh.tri_class[t])

    edge_tris = {}
    for t, tri in enumerate(mesh.triangles):
        for k in range(3):
            if mesh.external[t][k]:
                continue
            e = frozenset((tri[k], tri[(k + 1) % 3]))
            edge_tris.setdefault(e, []).append(t)

    def internal_edges(t):
        tri = mesh.triangles[t]
        return [frozenset((tri[k], tri[(k + 1) % 3]))
                for k in range(3) if not mesh.external[t][k]]

    adjacency = set()
    for t in tri_to_node:
        for e in internal_edges(t):
            pair = edge_tris.get(e, [])
            if len(pair) != 2:
                continue
            prev, cur = t, pair[0] if pair[1] == t else pair[1]
            while mesh.tri_class[cur] == "S":
                # an S-triangle has exactly two internal edges; leave via the
                # one that does not lead back
                step = None
                for ee in internal_edges(cur):
                    both = edge_tris.get(ee, [])
                    if len(both) != 2:
                        continue
                    other = both[0] if both[1] == cur else both[1]
                    if other != prev:
                        step = other
                        break
                if step is None:
                    break
                prev, cur = cur, step
            if mesh.tri_class[cur] in ("T", "J") and cur != t:
                a, b = sorted((tri_to_node[t], tri_to_node[cur]))
                adjacency.add((a, b))
    return MedialGraph(circles, classes, adjacency)


def pair_score(ci: Circle, cj: Circle) -> float:
    """Redundancy score of an adjacent circle pair; below the filter
    threshold the pair collapses.  Evaluated in the direction that can
    trigger deletion (the smaller radius in the numerator)."""
    d = dist(ci.c, cj.c)
    denom = ci.r + cj.r
    if denom <= 0:
        return 0.0
    return (d + min(ci.r, cj.r)) / denom


def filter_circles(g: MedialGraph, phi: float) -> MedialGraph:
    """Repeatedly collapse the lowest-scoring adjacent pair below `phi`,
    re-attaching the removed circle's neighbors to the survivor."""
    g = g.copy()
    alive = [True] * len(g.circles)
    while True:
        best = None
        for (i, j) in sorted(g.adjacency):
            if not (alive[i] and alive[j]):
                continue
            s = pair_score(g.circles[i], g.circles[j])
            if s < phi and (best is None or s < best[0] - 1e-15):
                best = (s, i, j)
        if best is None:
            break
        _, i, j = best
        ti, tj = g.classes[i], g.classes[j]
        if ti != tj:
            doomed = i if ti == "T" else j
        elif abs(g.circles[i].r - g.circles[j].r) > 1e-15:
            doomed = i if g.circles[i].r < g.circles[j].r else j
        else:
            doomed = max(i, j)
        keep = j if doomed == i else i
        alive[doomed] = False
        moved = set()
        for (a, b) in list(g.adjacency):
            if doomed in (a, b):
                g.adjacency.discard((a, b))
                other = b if a == doomed else a
                if other != keep and alive[other]:
                    moved.add(tuple(sorted((keep, other))))
        g.adjacency.update(moved)

    remap = {}
    circles, classes = [], []
    for i, ok in enumerate(alive):
        if ok:
            remap[i] = len(circles)
            circles.append(g.circles[i])
            classes.append(g.classes[i])
    adjacency = {tuple(sorted((remap[a], remap[b]))) for a, b in g.adjacency
                 if a in remap and b in remap}
    return MedialGraph(circles, classes, adjacency)


def interp_tuple_lenient(ca: Circle, cb: Circle) -> MedialTuple:
    """Tuple of two circles that degrades gracefully when one contains the
    other (the region is then just the bigger disc)."""
    big, small = (ca, cb) if ca.r >= cb.r else (cb, ca)
    d = dist(big.c, small.c)
    if d <= 1e-12 and abs(big.r - small.r) <= 1e-12:
        return make_tuple(big, small)
    if d + small.r < big.r - 1e-12:
        top = (big.c[0], big.c[1] + big.r)
        bot = (big.c[0], big.c[1] - big.r)
        return MedialTuple(big, small, top, top, bot, bot, 0.0, False)
    return make_tuple(big, small)


def interpolate_tuples(g: MedialGraph):
    """One tuple per adjacency edge; a single circle yields one degenerate
    tuple."""
    if not g.circles:
        raise GeometryError("empty medial graph")
    if not g.adjacency:
        c = g.circles[0]
        return [make_tuple(c, Circle(c.c, c.r))]
    out = []
    for (i, j) in sorted(g.adjacency):
        ci, cj = g.circles[i], g.circles[j]
        big, small = (ci, cj) if (ci.r > cj.r or (ci.r == cj.r and i < j)) else (cj, ci)
        out.append(make_tuple(big, small))
    return out


# ---------------------------------------------------------------------------
# coverage optimization

@dataclass
class CoverProblem:
    circle_index: int
    c_o: tuple
    r_o: float
    incident_edges: list
    g_in: np.ndarray
    g_out: np.ndarray


def _edge_tuples(g: MedialGraph):
    edges = sorted(g.adjacency)
    if not edges:
        c = g.circles[0]
        return [(0, 0)], [interp_tuple_lenient(c, Circle(c.c, c.r))]
    return edges, [interp_tuple_lenient(g.circles[i], g.circles[j]) for i, j in edges]


def classify_cover_segments(g: MedialGraph, m: int, samples: BoundarySamples) -> CoverProblem:
    """Split sampling segments into the sets the per-circle optimization must
    keep (already inside the incident tuples) and must capture (uncovered
    segments this circle is responsible for)."""
    pts = np.asarray(samples.points)
    n = len(pts)
    nxt = np.roll(np.arange(n), -1)
    edges, tuples = _edge_tuples(g)
    incident = [k for k, e in enumerate(edges) if m in e]
    if not incident:
        incident_edges = []
    else:
        incident_edges = [edges[k] for k in incident]

    inside = np.zeros((len(tuples), n), dtype=bool)
    for k, t in enumerate(tuples):
        inside[k] = tuple_contains_batch(t, pts, tol=1e-12)
    seg_in = inside[:, np.arange(n)] & inside[:, nxt]
    covered_any = seg_in.any(axis=0)
    if incident:
        covered_u = seg_in[incident].any(axis=0)
        pt_in_u = inside[incident].any(axis=0)
    else:
        covered_u = np.zeros(n, dtype=bool)
        pt_in_u = np.zeros(n, dtype=bool)

    g_in = np.where(covered_u)[0]

    uncovered = ~covered_any
    one_term = pt_in_u[np.arange(n)] ^ pt_in_u[nxt]

    du = np.full(n, np.inf)
    dother = np.full(n, np.inf)
    if incident:
        da = np.full(n, np.inf)
        for k in incident:
            da = np.minimum(da, tuple_distance_batch(tuples[k], pts))
        du = np.maximum(da, da[nxt])
    others = [k for k in range(len(tuples)) if k not in incident]
    if others:
        da = np.full(n, np.inf)
        for k in others:
            da = np.minimum(da, tuple_distance_batch(tuples[k], pts))
        dother = np.maximum(da, da[nxt])
    claims = du <= dother + 1e-12

    # among circles, only the nearest one captures a rule-(b) segment; a
    # circle cannot usefully cover segments sitting behind its tuple partner
    def circle_dist(ci):
        c = np.asarray(g.circles[ci].c)
        d = np.maximum(0.0, np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1]) - g.circles[ci].r)
        return np.maximum(d, d[nxt])

    d_self = circle_dist(m)
    d_best = np.full(n, np.inf)
    for ci in range(len(g.circles)):
        d_best = np.minimum(d_best, circle_dist(ci))
    nearest_circle = d_self <= d_best + 1e-12
    g_out = np.where(uncovered & nearest_circle & (one_term | claims))[0]
    return CoverProblem(m, g.circles[m].c, g.circles[m].r, incident_edges, g_in, g_out)


def _web_centers(c_o, r_o, rays, rings, step):
    out = [c_o]
    for k in range(1, rings + 1):
        rad = k * step
        for j in range(rays):
            a = TAU * j / rays
            out.append((c_o[0] + rad * math.cos(a), c_o[1] + rad * math.sin(a)))
    return out


def modify_cover(g: MedialGraph, samples: BoundarySamples, params: BuildParams):
    """Per-circle greedy web search: keep covered segments covered, capture
    the uncovered segments this circle claims, and move/grow each circle as
    little as possible.  Returns the updated graph."""
    g = g.copy()
    pts = np.asarray(samples.points)
    n = len(pts)
    nxt = np.roll(np.arange(n), -1)
    order = sorted(range(len(g.circles)), key=lambda i: (-g.circles[i].r, i))

    for m in order:
        prob = classify_cover_segments(g, m, samples)
        need = np.concatenate([prob.g_in, prob.g_out])
        if len(need) == 0:
            continue
        ia = need
        ib = nxt[need]
        pa = pts[ia]
        pb = pts[ib]
        partners = [e[0] if e[1] == m else e[1] for e in prob.incident_edges]
        self_paired = not prob.incident_edges or all(p == m for p in partners)

        c_o, r_o = prob.c_o, prob.r_o
        base = max(r_o, 1e-9)

        def feasible(c, r):
            cc = Circle(c, r)
            if self_paired:
                ts = [interp_tuple_lenient(cc, Circle(c, r))]
            else:
                ts = [interp_tuple_lenient(cc, g.circles[p]) for p in partners]
            ok = np.zeros(len(ia), dtype=bool)
            for t in ts:
                ok |= tuple_contains_batch(t, pa, tol=1e-12) & tuple_contains_batch(t, pb, tol=1e-12)
                if ok.all():
                    return True, ok
            return bool(ok.all()), ok

        def min_radius(c, cap):
            okf, _ = feasible(c, cap)
            if not okf:
                return None
            lo, hi = 0.0, cap
            ok0, _ = feasible(c, 0.0)
            if ok0:
                return 0.0
            tol = 1e-6 * base
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                okm, _ = feasible(c, mid)
                if okm:
                    hi = mid
                else:
                    lo = mid
            return hi

        okf, _ = feasible(c_o, r_o)
        if okf:
            # original configuration already satisfies the constraints,
            # optimum sits at zero cost, keep the circle untouched
            continue

        chosen = None
        for scale in (1.0, 2.0):
            step = params.ring_step_frac * base * scale
            rings = params.web_rings
            cap_c = params.center_cap_frac * base * scale
            rings = min(rings, int(cap_c / step + 1e-9)) if step > 0 else 0
            cap_r = params.radius_cap_frac * base * scale
            best = None
            for c in _web_centers(c_o, r_o, params.web_rays, rings, step):
                r = min_radius(c, cap_r)
                if r is None:
                    continue
                e1 = (c[0] - c_o[0]) ** 2 + (c[1] - c_o[1]) ** 2
                e2 = max(r - r_o, 0.0) ** 2
                e = e1 + e2
                if best is None or e < best[0] - 1e-15:
                    best = (e, c, r)
                if best is not None and best[0] == 0.0:
                    break
            if best is not None:
                chosen = best
                break
        if chosen is None:
            _, okmask = feasible(c_o, params.radius_cap_frac * base * 2.0)
            bad = [(tuple(pa[k]), tuple(pb[k])) for k in range(len(ia)) if not okmask[k]]
            raise CoverageFailure(
                f"no feasible circle for medial circle {m} within search caps", bad)
        _, c_new, r_new = chosen
        g.circles[m] = Circle(c_new, r_new)
    return g


# ---------------------------------------------------------------------------
# final shape

class MedialShape:
    """A built agent shape: tuples in a canonical frame anchored at the area
    centroid, together with the source polygon for exact checks."""

    __slots__ = ("name", "tuples", "adjacency", "circles", "polygon",
                 "params", "h", "bound_radius", "_mec")

    def __init__(self, name, tuples, adjacency, circles, polygon, params, h):
        self.name = name
        self.tuples = tuples
        self.adjacency = adjacency
        self.circles = circles
        self.polygon = polygon
        self.params = params
        self.h = h
        self.bound_radius = max(math.hypot(*c.c) + c.r for c in circles)
        self._mec = None

    def tuple_count(self):
        return len(self.tuples)

    def all_discs(self):
        return list(self.circles)

    def enclosing_circle(self) -> Circle:
        if self._mec is None:
            self._mec = mec_discs(self.circles)
        return self._mec

    def __repr__(self):
        return f"MedialShape({self.name!r}, {len(self.tuples)} tuples)"


def union_contains_batch(tuples, pts, tol=1e-9):
    ok = np.zeros(len(pts), dtype=bool)
    for t in tuples:
        ok |= tuple_distance_batch(t, pts) <= tol
        if ok.all():
            break
    return ok


def verify_cover(shape_or_tuples, polygon, h=None):
    """Resample the polygon boundary at h/4 and test that every point lies in
    the tuple union; returns (ok, violating sub-segments)."""
    if isinstance(shape_or_tuples, MedialShape):
        tuples = shape_or_tuples.tuples
        h = shape_or_tuples.h if h is None else h
    else:
        tuples = shape_or_tuples
        if h is None:
            raise GeometryError("h required when passing a raw tuple list")
    fine = sample_boundary(polygon, h / 4.0)
    pts = np.asarray(fine.points)
    ok = union_contains_batch(tuples, pts, tol=1e-9)
    if ok.all():
        return True, []
    n = len(pts)
    bad = []
    for i in range(n):
        j = (i + 1) % n
        if not (ok[i] and ok[j]):
            bad.append((tuple(pts[i]), tuple(pts[j])))
    return False, bad


def _graph_to_tuples(g: MedialGraph):
    edges, tuples = _edge_tuples(g)
    adjacency = []
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            if set(edges[a]) & set(edges[b]):
                adjacency.append((a, b))
    return edges, tuples, adjacency


def _union_centroid(tuples, resolution=192):
    xs = []
    ys = []
    for t in tuples:
        for c in t.circles():
            xs += [c.c[0] - c.r, c.c[0] + c.r]
            ys += [c.c[1] - c.r, c.c[1] + c.r]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    gx = np.linspace(x0, x1, resolution)
    gy = np.linspace(y0, y1, resolution)
    xx, yy = np.meshgrid(gx, gy)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    ok = np.zeros(len(pts), dtype=bool)
    for t in tuples:
        ok |= tuple_contains_batch(t, pts, tol=0.0)
    sel = pts[ok]
    if len(sel) == 0:
        return tuples[0].big.c
    return (float(sel[:, 0].mean()), float(sel[:, 1].mean()))


def mec_points(points) -> Circle:
    """Smallest enclosing circle of a point set (Welzl)."""
    pts = [tuple(map(float, p)) for p in points]

    def circle_two(a, b):
        c = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        return Circle(c, dist(a, b) / 2)

    def in_circle(c, p):
        return dist(c.c, p) <= c.r + 1e-9

    def mec(ps, boundary):
        if not ps or len(boundary) == 3:
            if len(boundary) == 0:
                return Circle((0.0, 0.0), 0.0)
            if len(boundary) == 1:
                return Circle(boundary[0], 0.0)
            if len(boundary) == 2:
                return circle_two(*boundary)
            try:
                return circumcircle(*boundary)
            except DegenerateError:
                cands = [circle_two(boundary[i], boundary[j])
                         for i in range(3) for j in range(i + 1, 3)]
                cands = [c for c in cands if all(in_circle(c, p) for p in boundary)]
                return min(cands, key=lambda c: c.r)
        p = ps[-1]
        c = mec(ps[:-1], boundary)
        if in_circle(c, p):
            return c
        return mec(ps[:-1], boundary + [p])

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(pts) * 4 + 100))
    try:
        return mec(pts, [])
    finally:
        sys.setrecursionlimit(old)


def mec_discs(circles) -> Circle:
    """Smallest circle containing all the given discs.

    Closed forms for one or two discs; Nelder-Mead polish of the convex
    max(|c - c_i| + r_i) objective otherwise, which keeps the result a true
    cover by construction.
    """
    cs = list(circles)
    if len(cs) == 1:
        return Circle(cs[0].c, cs[0].r)

    def radius_at(p):
        return max(dist(p, c.c) + c.r for c in cs)

    best = None
    for i in range(len(cs)):
        for j in range(i, len(cs)):
            if i == j:
                cand_c = cs[i].c
            else:
                a, b = cs[i], cs[j]
                d = dist(a.c, b.c)
                if d < 1e-12:
                    cand_c = a.c
                else:
                    # center on the segment, balancing both reach values
                    t = 0.5 + (b.r - a.r) / (2 * d)
                    t = max(0.0, min(1.0, t))
                    cand_c = (a.c[0] + t * (b.c[0] - a.c[0]),
                              a.c[1] + t * (b.c[1] - a.c[1]))
            r = radius_at(cand_c)
            if best is None or r < best[1] - 1e-12:
                best = (cand_c, r)
    if len(cs) > 2:
        from scipy.optimize import minimize
        res = minimize(lambda x: radius_at((x[0], x[1])), best[0], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400})
        p = (float(res.x[0]), float(res.x[1]))
        r = radius_at(p)
        if r < best[1]:
            best = (p, r)
    return Circle(best[0], best[1])


def build_shape(contour, params: BuildParams | None = None, name="shape",
                poly_tol: float = 0.0) -> MedialShape:
    """Full pipeline from a closed contour to an anchored MedialShape."""
    params = params or BuildParams()
    polygon = polygonize(contour, poly_tol)
    if params.h is None:
        xs = [p[0] for p in polygon]
        ys = [p[1] for p in polygon]
        diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
        h = 0.05 * diag
    else:
        h = params.h
    samples = sample_boundary(polygon, h)
    mesh = constrained_delaunay(samples)

    if len(mesh.triangles) == 1 or all(c == "X" for c in mesh.tri_class):
        c = mec_points(samples.points)
        graph = MedialGraph([c], ["T"], set())
    else:
        graph = build_medial_graph(mesh)
        graph = filter_circles(graph, params.phi)
    graph = modify_cover(graph, samples, params)
    edges, tuples, adjacency = _graph_to_tuples(graph)

    ok, bad = verify_cover(tuples, polygon, h)
    if not ok:
        raise CoverageFailure(f"shape {name!r}: {len(bad)} boundary segments uncovered", bad)

    anchor = _union_centroid(tuples)
    shift = (-anchor[0], -anchor[1])

    def move_circle(c):
        return Circle((c.c[0] + shift[0], c.c[1] + shift[1]), c.r)

    moved = []
    for t in tuples:
        moved.append(interp_tuple_lenient(move_circle(t.big), move_circle(t.small)))
    circles = [move_circle(graph.circles[i]) for i in range(len(graph.circles))]
    poly_c = [(p[0] + shift[0], p[1] + shift[1]) for p in polygon]
    used_params = BuildParams(h=h, phi=params.phi, web_rays=params.web_rays,
                              web_rings=params.web_rings,
                              ring_step_frac=params.ring_step_frac,
                              center_cap_frac=params.center_cap_frac,
                              radius_cap_frac=params.radius_cap_frac)
    return MedialShape(name, moved, adjacency, circles, poly_c, used_params, h)
