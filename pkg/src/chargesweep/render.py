"""SVG route maps for coordinate-mode instances."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .instance import Instance, InstanceError
from .routes import Schedule

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
SIZE, MARGIN, LEGEND_W = 600, 30, 160


def render(instance: Instance, schedule: Schedule) -> str:
    if instance.coords is None:
        raise InstanceError("rendering requires coordinates")
    pts = instance.coords
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float((hi - lo).max()), 1e-9)
    scale = (SIZE - 2 * MARGIN) / span

    def xy(node: int) -> tuple[float, float]:
        x, y = pts[node]
        # SVG y grows downward
        return (MARGIN + (x - lo[0]) * scale, SIZE - MARGIN - (y - lo[1]) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE + LEGEND_W}" '
           f'height="{SIZE}" viewBox="0 0 {SIZE + LEGEND_W} {SIZE}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for k, it in enumerate(schedule.itineraries):
        color = PALETTE[k % len(PALETTE)]
        nodes = [node for node, _ in it.loop.node_walk(instance)]
        nodes.append(nodes[0])
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, nodes))
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                   f'stroke-width="2" stroke-opacity="0.7"/>')
    for t in instance.target_ids:
        x, y = xy(t)
        fill = "black" if t in schedule.covered else "white"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{fill}" stroke="black"/>')
    for c in instance.charger_ids:
        x, y = xy(instance.charger_node(c))
        out.append(f'<rect x="{x - 6:.2f}" y="{y - 6:.2f}" width="12" height="12" '
                   f'fill="gold" stroke="black"/>')
        out.append(f'<text x="{x + 8:.2f}" y="{y - 8:.2f}" font-size="11">c{c}</text>')
    lx = SIZE + 10
    out.append(f'<text x="{lx}" y="20" font-size="12">{escape(schedule.variant.value)}</text>')
    for k, it in enumerate(schedule.itineraries):
        y = 40 + 18 * k
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<line x1="{lx}" y1="{y}" x2="{lx + 24}" y2="{y}" stroke="{color}" '
                   f'stroke-width="3"/>')
        out.append(f'<text x="{lx + 30}" y="{y + 4}" font-size="11">sensor '
                   f'{it.sensor_id}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
