"""SVG frame dumps: one closed arc/line path per agent tuple."""

from __future__ import annotations

import math

from .geom import Arc, Segment

_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def outline_path(outline) -> str:
    """SVG path data for an arc/segment outline (y axis handled by the
    caller's transform)."""
    pieces = outline.pieces
    if not pieces:
        return ""
    start = pieces[0].p0
    cmds = [f"M {start[0]:.6f} {start[1]:.6f}"]
    for p in pieces:
        if isinstance(p, Segment):
            cmds.append(f"L {p.b[0]:.6f} {p.b[1]:.6f}")
        elif isinstance(p, Arc):
            if p.span >= 2 * math.pi - 1e-9:
                # full circles need two half arcs
                mid = p.point_at(p.a0 + math.pi)
                end = p.p1
                cmds.append(f"A {p.r:.6f} {p.r:.6f} 0 0 1 {mid[0]:.6f} {mid[1]:.6f}")
                cmds.append(f"A {p.r:.6f} {p.r:.6f} 0 0 1 {end[0]:.6f} {end[1]:.6f}")
            else:
                large = 1 if p.span > math.pi else 0
                end = p.p1
                cmds.append(f"A {p.r:.6f} {p.r:.6f} 0 {large} 1 {end[0]:.6f} {end[1]:.6f}")
    cmds.append("Z")
    return " ".join(cmds)


def write_frame(path, world, scale=20.0, margin=2.0):
    """Write the current world state as one SVG document."""
    xs, ys = [], []
    outlines = []
    for i, a in enumerate(world.agents):
        for t in world.world_tuples(i):
            o = t.outline()
            outlines.append((a, o))
            for c in t.circles():
                xs += [c.c[0] - c.r, c.c[0] + c.r]
                ys += [c.c[1] - c.r, c.c[1] + c.r]
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin
    w = (x1 - x0) * scale
    h = (y1 - y0) * scale
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
        f'viewBox="0 0 {w:.3f} {h:.3f}">',
        f'<g transform="translate({-x0 * scale:.3f},{y1 * scale:.3f}) scale({scale},-{scale})">',
    ]
    for a, o in outlines:
        color = "#444444" if a.static else _PALETTE[a.id % len(_PALETTE)]
        d = outline_path(o)
        lines.append(
            f'<path d="{d}" fill="{color}" fill-opacity="0.35" '
            f'stroke="{color}" stroke-width="{1.5 / scale:.5f}"/>')
    for a in world.agents:
        if not a.static:
            lines.append(
                f'<circle cx="{a.goal[0]:.4f}" cy="{a.goal[1]:.4f}" r="{2.0 / scale:.4f}" '
                f'fill="none" stroke="#999999" stroke-width="{1.0 / scale:.5f}"/>')
    lines.append("</g></svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
