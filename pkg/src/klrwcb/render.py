"""SVG rendering of flavoured KLRW diagrams.

Solid black corporeal strands, dashed ghosts, red strands for new edges,
dots as filled circles, and two annotation rows (label above, longitude
below) at the top and the bottom, following the drawing conventions used
for these diagrams.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import format_scalar

XSTEP = 46
HEIGHT = 240
MARGIN_X = 40
MARGIN_Y = 56


def _esc(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _xy(pos, t):
    return (MARGIN_X + XSTEP * pos, MARGIN_Y + HEIGHT * (1 - t))


def _strand_path(points):
    d = "M %g %g" % points[0]
    for p in points[1:]:
        d += " L %g %g" % p
    return d


def render_diagram(engine, diagram, title=None):
    """Standalone SVG document for a diagram."""
    bottom, top = diagram.bottom, diagram.top
    item_map = diagram.item_map()
    bottom_pos = {it: i for i, it in enumerate(bottom.order)}
    top_pos = {it: i for i, it in enumerate(top.order)}

    # follow each strand through the event list to get waypoints
    order = list(bottom.order)
    waypoints = {it: [(bottom_pos[it], Fraction(0))] for it in bottom.order}
    dots = []
    for ev in sorted(diagram.events, key=lambda e: e[-1]):
        t = ev[-1]
        if ev[0] == "dot":
            it = ev[1]
            dots.append((it, t))
            continue
        _, left, right, _ = ev
        il, ir = order.index(left), order.index(right)
        waypoints[left].append((il, t))
        waypoints[right].append((ir, t))
        order[il], order[ir] = order[ir], order[il]
        waypoints[left].append((ir, t))
        waypoints[right].append((il, t))
    for it in bottom.order:
        waypoints[it].append((top_pos[item_map[it]], Fraction(1)))

    def dot_xy(it, t):
        pts = waypoints[it]
        for (p1, t1), (p2, t2) in zip(pts, pts[1:]):
            if t1 <= t <= t2:
                if t1 == t2:
                    continue
                frac = float((t - t1) / (t2 - t1))
                x1, y1 = _xy(p1, float(t1))
                x2, y2 = _xy(p2, float(t2))
                return (x1 + frac * (x2 - x1), y1 + frac * (y2 - y1))
        return _xy(pts[-1][0], 1)

    width = MARGIN_X * 2 + XSTEP * max(1, len(bottom.order) - 1)
    height = MARGIN_Y * 2 + HEIGHT
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
               'viewBox="0 0 %d %d">' % (width, height, width, height))
    out.append('<rect width="100%" height="100%" fill="white"/>')
    if title:
        out.append('<text x="%d" y="16" font-size="12" font-family="serif">%s'
                   '</text>' % (MARGIN_X, _esc(title)))

    for it in bottom.order:
        pts = [_xy(p, float(t)) for p, t in waypoints[it]]
        if it.is_red():
            style = 'stroke="#cc0000" stroke-width="2.4"'
        elif it.is_ghost():
            style = 'stroke="black" stroke-width="1.6" stroke-dasharray="6 4"'
        else:
            style = 'stroke="black" stroke-width="2.4"'
        out.append('<path d="%s" fill="none" %s/>' % (_strand_path(pts), style))

    for it, t in dots:
        x, y = dot_xy(it, t)
        out.append('<circle cx="%g" cy="%g" r="4.2" fill="black"/>' % (x, y))

    def annotate(seq, positions, y_label, y_long):
        rows = []
        for it in seq.order:
            x, _ = _xy(positions[it], 0)
            if it.is_corporeal():
                label = str(seq.labels[it.k - 1])
            elif it.is_ghost():
                label = str(it.edge)
            else:
                label = str(engine.tails[it.edge])
            longitude = format_scalar(seq.longitude(it, engine.flavour))
            rows.append('<text x="%g" y="%g" font-size="12" text-anchor="middle" '
                        'font-family="serif">%s</text>' % (x, y_label, _esc(label)))
            rows.append('<text x="%g" y="%g" font-size="11" text-anchor="middle" '
                        'font-family="serif">%s</text>' % (x, y_long, _esc(longitude)))
        return rows

    out.extend(annotate(top, top_pos, MARGIN_Y - 26, MARGIN_Y - 10))
    out.extend(annotate(bottom, bottom_pos, MARGIN_Y + HEIGHT + 22,
                        MARGIN_Y + HEIGHT + 38))
    out.append("</svg>")
    return "\n".join(out)
