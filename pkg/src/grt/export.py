"""Static exports of realizations: Wavefront OBJ (3D) and SVG (2D)."""

from __future__ import annotations

import numpy as np

from grt.errors import PreconditionError


def _fmt(x):
    x = float(x)
    return "0" if x == 0 else f"{x:.10g}"


def to_obj(r):
    """``v x y z`` lines, then 1-indexed ``l i j`` lines.

    Realizations with ``d > 3`` are projected onto their first three
    coordinates; ``d < 3`` is rejected.
    """
    if r.d < 3:
        raise PreconditionError(f"dimension too low for OBJ export (d={r.d}); use svg for d=2")
    lines = ["v " + " ".join(_fmt(x) for x in row) for row in r.matrix[:, :3]]
    lines += [f"l {i + 1} {j + 1}" for i, j in r.graph.edge_list]
    return "\n".join(lines) + "\n"


def to_svg(r, size=400, margin=20):
    """Edges as ``<line>`` and vertices as ``<circle>`` for a 2-dimensional realization."""
    if r.d != 2:
        kind = "low" if r.d < 2 else "high"
        raise PreconditionError(f"dimension too {kind} for SVG export (d={r.d}); SVG needs d=2")
    pts = r.matrix
    lo = pts.min(axis=0)
    span = float(np.max(pts.max(axis=0) - lo)) or 1.0
    scale = (size - 2 * margin) / span
    xy = (pts - lo) * scale + margin
    xy[:, 1] = size - xy[:, 1]  # SVG y axis points down
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<g stroke="black" stroke-width="1">',
    ]
    for i, j in r.graph.edge_list:
        out.append(f'<line x1="{xy[i, 0]:.3f}" y1="{xy[i, 1]:.3f}" x2="{xy[j, 0]:.3f}" y2="{xy[j, 1]:.3f}"/>')
    out.append("</g>")
    out.append('<g fill="black">')
    for x, y in xy:
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
