"""SVG pictures of the disk: lamination leaves, cut curves, fixed points.

A geodesic with ideal endpoints at boundary angles alpha, beta is drawn
as the arc of the circle orthogonal to the unit circle through those
points.  With gap d = angular distance (0 < d <= pi), that circle has
center at distance R / cos(d/2) from the origin along the bisector and
radius R * tan(d/2); a gap of pi degenerates to a diameter.  The arc is
always the minor one, bulging toward the origin.

Output is deterministic: leaves are sorted by endpoint angles, floats
are printed with a fixed format, and nothing time- or id-dependent is
emitted, so equal inputs produce byte-identical files.
"""

from __future__ import annotations

import math

VIEW = 1000.0
CENTER = VIEW / 2.0
RADIUS = 480.0
_DIAMETER_TOL = 1e-9

_STYLE = """\
    circle.boundary { fill: none; stroke: #202020; stroke-width: 2; }
    path.lam-plus { fill: none; stroke: #1f77b4; stroke-width: 1.2; }
    path.lam-minus { fill: none; stroke: #d62728; stroke-width: 1.2; }
    path.gamma { fill: none; stroke: #2ca02c; stroke-width: 2.4; }
    circle.fp-contracting { fill: #1f77b4; stroke: #202020; stroke-width: 1; }
    circle.fp-expanding { fill: #ffffff; stroke: #d62728; stroke-width: 2; }
"""


def _point(theta: float) -> tuple[float, float]:
    """Screen coordinates of the boundary point at angle theta.

    Screen y grows downward, so the picture keeps the mathematical
    orientation (angles run counterclockwise).
    """
    return (CENTER + RADIUS * math.cos(theta),
            CENTER - RADIUS * math.sin(theta))


def _fmt(x: float) -> str:
    out = f"{x:.6f}"
    return "0.000000" if out == "-0.000000" else out


def _arc_path(alpha: float, beta: float) -> str:
    """SVG path of the geodesic arc between two boundary angles."""
    x1, y1 = _point(alpha)
    x2, y2 = _point(beta)
    gap = math.fmod(beta - alpha, 2.0 * math.pi)
    if gap < 0:
        gap += 2.0 * math.pi
    if gap > math.pi:
        gap = 2.0 * math.pi - gap
    if abs(gap - math.pi) < _DIAMETER_TOL:
        return (f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}")
    half = 0.5 * gap
    r = RADIUS * math.tan(half)
    # center of the orthogonal circle: along the bisector, at distance
    # R / cos(half) from the disk center
    mid_x, mid_y = 0.5 * (x1 + x2), 0.5 * (y1 + y2)
    dx, dy = mid_x - CENTER, mid_y - CENTER
    norm = math.hypot(dx, dy)
    d = RADIUS / math.cos(half)
    cx, cy = CENTER + dx / norm * d, CENTER + dy / norm * d
    # minor arc: sweep follows the rotation sense from P1 to P2 about C
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    return (f"M {_fmt(x1)} {_fmt(y1)} "
            f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}")


def _leaf_angles(approx) -> list[tuple[float, float]]:
    pairs = []
    for leaf in approx.leaves:
        a = leaf.att_angle % (2.0 * math.pi)
        b = leaf.rep_angle % (2.0 * math.pi)
        pairs.append((min(a, b), max(a, b)))
    pairs.sort()
    return pairs


def render_disk_svg(approxes, census=None, out=None, gamma=(),
                    fixed_points=()) -> str:
    """SVG text of the disk picture; also written to `out` when given.

    approxes: lamination approximations (their direction attribute picks
    the stroke class), gamma: curve classes drawn by their axes,
    fixed_points: boundary fixed points drawn as filled (contracting) or
    open (expanding) dots.  The census, when given, is recorded in the
    document description.
    """
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {VIEW:g} {VIEW:g}" width="{VIEW:g}" '
        f'height="{VIEW:g}">',
        "  <style>",
        _STYLE.rstrip(),
        "  </style>",
    ]
    if census:
        text = " / ".join(f"{t} x{n}" for t, n in census)
        lines.append(f"  <desc>census: {text}</desc>")
    lines.append(
        f'  <circle class="boundary" cx="{CENTER:g}" cy="{CENTER:g}" '
        f'r="{RADIUS:g}"/>')
    for approx in approxes:
        cls = "lam-plus" if approx.direction == "+" else "lam-minus"
        for a, b in _leaf_angles(approx):
            lines.append(f'  <path class="{cls}" d="{_arc_path(a, b)}"/>')
    for curve in gamma:
        lines.append(
            f'  <path class="gamma" '
            f'd="{_arc_path(curve.attracting, curve.repelling)}"/>')
    for fp in sorted(fixed_points, key=lambda p: p.angle):
        x, y = _point(fp.angle)
        cls = ("fp-contracting" if fp.kind == "contracting"
               else "fp-expanding")
        lines.append(
            f'  <circle class="{cls}" cx="{_fmt(x)}" cy="{_fmt(y)}" '
            f'r="6"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if out is not None:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    return text
