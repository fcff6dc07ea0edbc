"""Convex hull of a multi-tuple agent, the directional width function, its
precomputed piecewise table, and the per-step orientation update that lets
elongated agents rotate through narrow gaps.
"""

from __future__ import annotations

import math
from bisect import bisect_right

from .geom import (
    Circle, GeometryError, Outline, disc_hull, dist, outline_contains, wrap_pi,
)


class AgentHull:
    """Convex outline of all medial circles plus the circles themselves."""

    __slots__ = ("outline", "discs")

    def __init__(self, outline: Outline, discs):
        self.outline = outline
        self.discs = discs


def convex_hull_of_tuples(shape_or_tuples) -> AgentHull:
    tuples = shape_or_tuples.tuples if hasattr(shape_or_tuples, "tuples") else shape_or_tuples
    discs = []
    seen = set()
    for t in tuples:
        for c in t.circles():
            key = (round(c.c[0], 12), round(c.c[1], 12), round(c.r, 12))
            if key not in seen:
                seen.add(key)
                discs.append(c)
    outline = disc_hull(discs)
    return AgentHull(outline, outline.discs)


def _support(discs, n):
    best = -math.inf
    arg = 0
    for i, d in enumerate(discs):
        v = d.c[0] * n[0] + d.c[1] * n[1] + d.r
        if v > best:
            best = v
            arg = i
    return best, arg


def width(hull: AgentHull, theta: float) -> float:
    """Distance between the two supporting lines parallel to direction theta:
    r_i + r_j + d(c_i, c_j) cos(beta) for the contributing circle pair."""
    n = (-math.sin(theta), math.cos(theta))
    hi, _ = _support(hull.discs, n)
    lo, _ = _support(hull.discs, (-n[0], -n[1]))
    return hi + lo


class WidthTable:
    """Piecewise closed-form width over [0, pi): per interval the two
    contributing circles; queries reduce theta mod pi first, which makes
    w(theta) == w(theta + pi) exact."""

    __slots__ = ("breaks", "pairs", "discs", "min_width", "max_width")

    def __init__(self, breaks, pairs, discs):
        self.breaks = breaks
        self.pairs = pairs
        self.discs = discs
        ws = []
        for k in range(len(breaks)):
            lo = breaks[k]
            hi = breaks[k + 1] if k + 1 < len(breaks) else math.pi
            for t in (lo, 0.5 * (lo + hi), hi - 1e-12):
                ws.append(self.query(t))
        self.min_width = min(ws)
        self.max_width = max(ws)
        # closed-form extrema inside intervals
        for k in range(len(breaks)):
            i, j = pairs[k]
            if i == j:
                continue
            ci, cj = discs[i], discs[j]
            base = math.atan2(ci.c[1] - cj.c[1], ci.c[0] - cj.c[0])
            for cand in (base - math.pi / 2, base + math.pi / 2):
                tt = cand % math.pi
                if self._interval_of(tt) == k:
                    w = self.query(tt)
                    self.min_width = min(self.min_width, w)
                    self.max_width = max(self.max_width, w)

    def _interval_of(self, theta_mod):
        k = bisect_right(self.breaks, theta_mod) - 1
        return max(0, k)

    @staticmethod
    def _reduce(theta):
        # snap the mod-pi reduction below fp noise so theta and theta+pi
        # reduce to the identical float (width has exact period pi)
        tm = theta % math.pi
        snapped = math.floor(tm * 1099511627776.0 + 0.5) / 1099511627776.0
        return 0.0 if snapped >= math.pi else snapped

    def query(self, theta: float) -> float:
        tm = self._reduce(theta)
        i, j = self.pairs[self._interval_of(tm)]
        ci, cj = self.discs[i], self.discs[j]
        n = (-math.sin(tm), math.cos(tm))
        return ci.r + cj.r + n[0] * (ci.c[0] - cj.c[0]) + n[1] * (ci.c[1] - cj.c[1])


def build_width_table(hull: AgentHull, resolution: int = 720) -> WidthTable:
    """Breakpoints where the contributing circle pair changes, found from
    pairwise support crossovers and validated on a dense scan."""
    if resolution <= 0:
        raise GeometryError("resolution must be positive")
    discs = hull.discs
    cands = {0.0}
    n_d = len(discs)
    for i in range(n_d):
        for j in range(i + 1, n_d):
            ci, cj = discs[i], discs[j]
            dx = ci.c[0] - cj.c[0]
            dy = ci.c[1] - cj.c[1]
            dr = cj.r - ci.r
            # support crossover: n(theta) . (ci - cj) = rj - ri with
            # n(theta) = (-sin t, cos t)
            amp = math.hypot(dx, dy)
            if amp < 1e-15:
                continue
            base = math.atan2(-dx, dy)
            if abs(dr) <= amp:
                off = math.acos(max(-1.0, min(1.0, dr / amp)))
                for s in (base + off, base - off):
                    cands.add(s % math.pi)
                    cands.add((s + math.pi) % math.pi)
    # dense scan guards against missed argmax switches
    for k in range(resolution):
        t = math.pi * k / resolution
        n = (-math.sin(t), math.cos(t))
        _, a = _support(discs, n)
        _, b = _support(discs, (-n[0], -n[1]))
        t2 = math.pi * (k + 1) / resolution
        n2 = (-math.sin(t2), math.cos(t2))
        _, a2 = _support(discs, n2)
        _, b2 = _support(discs, (-n2[0], -n2[1]))
        if (a, b) != (a2, b2):
            cands.add(t2 % math.pi)
    breaks = sorted(cands)
    pairs = []
    for k, lo in enumerate(breaks):
        hi = breaks[k + 1] if k + 1 < len(breaks) else math.pi
        mid = 0.5 * (lo + hi)
        n = (-math.sin(mid), math.cos(mid))
        _, a = _support(discs, n)
        _, b = _support(discs, (-n[0], -n[1]))
        pairs.append((a, b))
    return WidthTable(breaks, pairs, discs)


def min_rotation_for_clearance(table: WidthTable, theta_current: float,
                               clearance: float, margin: float = 0.0):
    """Smallest signed rotation putting the width at or below
    clearance - margin; None when even the minimal width exceeds it.  Ties
    break toward positive rotation."""
    if clearance <= 0:
        raise GeometryError("clearance must be positive")
    target = clearance - margin
    if table.min_width > target + 1e-12:
        return None
    if table.query(theta_current) <= target:
        return 0.0
    best = None
    n_steps = 4096
    # width has period pi; a rotation of at most pi/2 in either direction
    # reaches every width value.  Scan for the first feasible bracket so the
    # bisection cannot lock onto a later crossing.
    for sign in (1.0, -1.0):
        found = None
        for k in range(1, n_steps + 1):
            d = (math.pi / 2) * k / n_steps
            if table.query(theta_current + sign * d) <= target:
                found = d
                break
        if found is None:
            continue
        hi = found
        lo = max(0.0, hi - (math.pi / 2) / n_steps)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if table.query(theta_current + sign * mid) <= target:
                hi = mid
            else:
                lo = mid
        d = hi
        if best is None or d < abs(best) - 1e-12 or (abs(d - abs(best)) <= 1e-12 and sign > 0):
            best = sign * d
    return best


def hull_sweep_discs(hull: AgentHull, pivot, theta0: float, theta1: float):
    """Conservative disc cover of the hull swept by rotating about `pivot`
    through [theta0, theta1]: sampled disc positions inflated by the chord
    sagitta bound, same construction as the tuple sweep cover."""
    lo, hi = (theta0, theta1) if theta1 >= theta0 else (theta1, theta0)
    span = hi - lo
    out = []
    steps = max(1, math.ceil(span / 0.15))
    for d in hull.discs:
        rel = (d.c[0] - pivot[0], d.c[1] - pivot[1])
        L = math.hypot(rel[0], rel[1])
        if L < 1e-12:
            out.append(Circle(d.c, d.r))
            continue
        base = math.atan2(rel[1], rel[0])
        pad = 2.0 * L * math.sin((span / steps) / 4.0)
        for k in range(steps + 1):
            a = base + lo + span * k / steps
            out.append(Circle((pivot[0] + L * math.cos(a), pivot[1] + L * math.sin(a)),
                              d.r + pad))
    return out


def discs_overlap_discs(discs_a, discs_b) -> bool:
    """Exact overlap test of two disc hulls via origin membership in the
    difference hull; any overlapping disc pair short-circuits."""
    for a in discs_a:
        for b in discs_b:
            if dist(a.c, b.c) <= a.r + b.r:
                return True
    diff = [Circle((b.c[0] - a.c[0], b.c[1] - a.c[1]), a.r + b.r)
            for a in discs_a for b in discs_b]
    hull = disc_hull(diff)
    return outline_contains(hull, (0.0, 0.0))


def update_orientation(theta_current: float, v_new, hull: AgentHull,
                       table: WidthTable, pivot, dt: float, omega_max: float,
                       neighbor_discs=(), corridor_width: float | None = None,
                       clearance_margin: float = 0.0):
    """New orientation: align to the velocity direction, override with the
    minimal clearance rotation when a narrow corridor is detected, clamp the
    step to omega_max*dt, and apply it only when the swept hull stays clear
    of every neighbor."""
    if omega_max <= 0:
        raise GeometryError("omega_max must be positive")
    speed = math.hypot(v_new[0], v_new[1])
    if speed < 1e-9:
        return theta_current
    target = math.atan2(v_new[1], v_new[0])
    if corridor_width is not None and corridor_width < table.query(theta_current):
        rot = min_rotation_for_clearance(table, theta_current, corridor_width,
                                         margin=clearance_margin)
        if rot is not None:
            target = theta_current + rot
    delta = wrap_pi(target - theta_current)
    limit = omega_max * dt
    delta = max(-limit, min(limit, delta))
    if abs(delta) < 1e-12:
        return theta_current
    swept = hull_sweep_discs(hull, pivot, 0.0, delta) if delta > 0 else \
        hull_sweep_discs(hull, pivot, delta, 0.0)
    for nd in neighbor_discs:
        if discs_overlap_discs(swept, nd):
            return theta_current
    return theta_current + delta
