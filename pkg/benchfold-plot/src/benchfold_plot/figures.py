"""The six figure builders.

Each builder maps loaded artifact data to a :class:`Scene`. Glyph
conventions follow the upstream pipeline's plots: ideal points are
circles, methods are triangles, default options are grey, and connector
segments tie each default-option ideal point to the alternatives that
differ in exactly that choice.
"""

from __future__ import annotations

import math

from .readers import CHOICES, PlotDataError
from .scene import Circle, Line, Polygon, Rect, Scene, Text

PALETTE = (
    "#4477aa", "#ee6677", "#228833", "#ccbb44",
    "#66ccee", "#aa3377", "#bb5566", "#004488",
)
GREY = "#888888"
DARK = "#222222"
LIGHT = "#cccccc"

FIGURE_KINDS = ("rank_dist", "stepwise", "unfolding_map", "distance_box",
                "scree", "spp")


def option_colors(options, default=None) -> dict:
    """Deterministic option -> color map; the default option is grey."""
    colors = {}
    i = 0
    for opt in sorted(options):
        if opt == default:
            colors[opt] = GREY
        else:
            colors[opt] = PALETTE[i % len(PALETTE)]
            i += 1
    return colors


class _Axes:
    """Linear mapping from data coordinates to a pixel viewport."""

    def __init__(self, x0, x1, y0, y1, left, top, width, height):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.left, self.top, self.width, self.height = left, top, width, height

    def x(self, v):
        span = self.x1 - self.x0 or 1.0
        return self.left + (v - self.x0) / span * self.width

    def y(self, v):
        span = self.y1 - self.y0 or 1.0
        return self.top + self.height - (v - self.y0) / span * self.height

    def frame(self, scene):
        scene.add(Line(self.left, self.top + self.height,
                       self.left + self.width, self.top + self.height, DARK))
        scene.add(Line(self.left, self.top, self.left, self.top + self.height,
                       DARK))


def _title(scene, s):
    scene.add(Text(scene.width / 2, 24, s, size=14, anchor="middle",
                   cls="title"))


# ---------------------------------------------------------------------------

def rank_dist(universes, methods, ranks) -> Scene:
    """Per-method histogram of achieved ranks (one panel per method)."""
    if not ranks:
        raise PlotDataError("no data: rankings table is empty")
    scene = Scene(900, 140 + 34 * len(methods))
    _title(scene, f"Rank distribution across {len(ranks)} universes")
    m = len(methods)
    levels = sorted({r for row in ranks for r in row})
    counts = {
        (j, lev): sum(1 for row in ranks if row[j] == lev)
        for j in range(m) for lev in levels
    }
    max_count = max(counts.values()) or 1
    left, top = 150, 60
    panel_w, row_h = 680, 34
    scene.add(Text(left + panel_w / 2, top - 14, "rank", anchor="middle"))
    for j, method in enumerate(methods):
        y = top + j * row_h
        scene.add(Text(left - 10, y + row_h - 12, method, anchor="end"))
        scene.add(Line(left, y + row_h - 6, left + panel_w, y + row_h - 6,
                       LIGHT, 0.5))
        for lev in levels:
            c = counts[(j, lev)]
            if c == 0:
                continue
            x = left + (lev - levels[0]) / max(levels[-1] - levels[0], 1) \
                * (panel_w - 24)
            h = 22 * c / max_count
            scene.add(Rect(x, y + row_h - 6 - h, 10, h,
                           PALETTE[0], cls="count-bar"))
    for lev in levels:
        if float(lev).is_integer():
            x = left + (lev - levels[0]) / max(levels[-1] - levels[0], 1) \
                * (panel_w - 24)
            scene.add(Text(x + 5, top + m * row_h + 14, f"{lev:g}",
                           size=9, anchor="middle"))
    return scene


def stepwise(trajectories) -> Scene:
    """Rank trajectories of the greedy per-choice optimization."""
    methods = sorted(trajectories)
    n_steps = max(len(t["steps"]) for t in trajectories.values())
    max_rank = max(
        [t["start_rank"] for t in trajectories.values()]
        + [s["rank"] for t in trajectories.values() for s in t["steps"]]
    )
    scene = Scene(820, 520)
    _title(scene, "Step-wise rank optimization")
    ax = _Axes(0, n_steps, 1, max(max_rank, 2), 70, 50, 560, 400)
    ax.frame(scene)
    choice_color = dict(zip(CHOICES, PALETTE))
    for rank in range(1, int(max_rank) + 1):
        scene.add(Line(ax.left, ax.y(rank), ax.left + ax.width, ax.y(rank),
                       LIGHT, 0.5))
        scene.add(Text(ax.left - 8, ax.y(rank) + 4, str(rank), anchor="end",
                       size=9))
    for i, method in enumerate(methods):
        t = trajectories[method]
        path = [(0, t["start_rank"])]
        path += [(k + 1, s["rank"]) for k, s in enumerate(t["steps"])]
        color = PALETTE[i % len(PALETTE)]
        for (xa, ya), (xb, yb) in zip(path, path[1:]):
            scene.add(Line(ax.x(xa), ax.y(ya), ax.x(xb), ax.y(yb), color,
                           1.5, cls="trajectory"))
        for k, s in enumerate(t["steps"]):
            if s.get("improved"):
                scene.add(Circle(ax.x(k + 1), ax.y(s["rank"]), 4,
                                 choice_color[s["choice"]], cls="step-marker"))
        scene.add(Text(ax.x(path[-1][0]) + 8 + (i % 3) * 52,
                       ax.y(path[-1][1]) + 4, method, size=9))
    scene.add(Text(ax.left + ax.width / 2, ax.top + ax.height + 30,
                   "optimization step (0 = default analysis)",
                   anchor="middle"))
    for i, choice in enumerate(CHOICES):
        y = 90 + i * 18
        scene.add(Rect(700, y, 10, 10, choice_color[choice], cls="legend"))
        scene.add(Text(716, y + 9, choice, size=10))
    return scene


def unfolding_map(unfolding, color_by=None) -> Scene:
    """Ideal points (circles) and methods (triangles) in the plane."""
    if color_by is not None and color_by not in CHOICES:
        raise PlotDataError(f"unknown choice {color_by!r}; "
                            f"expected one of {', '.join(CHOICES)}")
    universes = unfolding["universes"]
    methods = unfolding["methods"]
    ideal = [row[:2] if len(row) >= 2 else [row[0], 0.0]
             for row in unfolding["ideal_points"]]
    objects = [row[:2] if len(row) >= 2 else [row[0], 0.0]
               for row in unfolding["object_points"]]

    xs = [p[0] for p in ideal + objects]
    ys = [p[1] for p in ideal + objects]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    half = span / 2 * 1.1
    scene = Scene(720, 720)
    ax = _Axes(cx - half, cx + half, cy - half, cy + half, 60, 60, 600, 600)

    label = f" coloured by {color_by}" if color_by else ""
    _title(scene, f"Unfolding map: {len(ideal)} universes, "
                  f"{len(methods)} methods{label}")

    defaults = unfolding.get("defaults")
    colors = {}
    if color_by:
        default_opt = defaults.get(color_by) if defaults else None
        colors = option_colors({u[color_by] for u in universes}, default_opt)

    # connector segments beneath the points: default option -> alternatives
    if color_by and defaults:
        index = {tuple(u[c] for c in CHOICES): k
                 for k, u in enumerate(universes)}
        for key, k in index.items():
            u = dict(zip(CHOICES, key))
            if u[color_by] != defaults[color_by]:
                continue
            for alt_key, j in index.items():
                if alt_key == key:
                    continue
                alt = dict(zip(CHOICES, alt_key))
                if all(alt[c] == u[c] for c in CHOICES if c != color_by):
                    scene.add(Line(ax.x(ideal[k][0]), ax.y(ideal[k][1]),
                                   ax.x(ideal[j][0]), ax.y(ideal[j][1]),
                                   "#bbbbbb", 0.6, cls="connector"))

    for k, (x, y) in enumerate(ideal):
        fill = colors.get(universes[k][color_by], GREY) if color_by else GREY
        scene.add(Circle(ax.x(x), ax.y(y), 4, fill, cls="ideal-point"))

    for j, (x, y) in enumerate(objects):
        px, py = ax.x(x), ax.y(y)
        scene.add(Polygon(((px, py - 7), (px - 6, py + 5), (px + 6, py + 5)),
                          DARK, cls="object-point"))
        scene.add(Text(px + 8, py + 4, methods[j], size=10))

    if color_by:
        for i, (opt, color) in enumerate(sorted(colors.items())):
            y = 90 + i * 18
            scene.add(Rect(600, y, 10, 10, color, cls="legend"))
            suffix = " (default)" if defaults and opt == defaults.get(color_by) \
                else ""
            scene.add(Text(616, y + 9, opt + suffix, size=10))
    return scene


def _quartiles(values):
    vs = sorted(values)
    n = len(vs)

    def at(q):
        pos = q * (n - 1)
        lo = int(math.floor(pos))
        hi = min(lo + 1, n - 1)
        frac = pos - lo
        return vs[lo] * (1 - frac) + vs[hi] * frac

    return at(0.25), at(0.5), at(0.75)


def distance_box(rows) -> Scene:
    """One box per alternative option, grouped by choice."""
    if not rows:
        raise PlotDataError("no data: distances file has no rows")
    groups = {}
    for choice, alternative, _, distance in rows:
        groups.setdefault((choice, alternative), []).append(distance)
    keys = sorted(groups, key=lambda k: (CHOICES.index(k[0])
                                         if k[0] in CHOICES else 99, k[1]))
    top = max(v for vals in groups.values() for v in vals) or 1.0
    scene = Scene(180 + 86 * len(keys), 520)
    _title(scene, "Ideal-point distance when one choice leaves its default")
    ax = _Axes(0, len(keys), 0, top * 1.05, 90, 60, 86 * len(keys), 340)
    ax.frame(scene)
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = top * frac
        scene.add(Line(ax.left, ax.y(v), ax.left + ax.width, ax.y(v),
                       LIGHT, 0.5))
        scene.add(Text(ax.left - 8, ax.y(v) + 4, f"{v:.2f}", anchor="end",
                       size=9))
    choice_color = dict(zip(CHOICES, PALETTE))
    prev_choice = None
    for i, key in enumerate(keys):
        choice, alternative = key
        vals = groups[key]
        q1, med, q3 = _quartiles(vals)
        lo, hi = min(vals), max(vals)
        cx = ax.x(i + 0.5)
        w = 30
        color = choice_color.get(choice, GREY)
        scene.add(Line(cx, ax.y(lo), cx, ax.y(q1), DARK, 1.0, cls="whisker"))
        scene.add(Line(cx, ax.y(q3), cx, ax.y(hi), DARK, 1.0, cls="whisker"))
        scene.add(Line(cx - w / 4, ax.y(lo), cx + w / 4, ax.y(lo), DARK, 1.0))
        scene.add(Line(cx - w / 4, ax.y(hi), cx + w / 4, ax.y(hi), DARK, 1.0))
        scene.add(Rect(cx - w / 2, ax.y(q3), w, ax.y(q1) - ax.y(q3),
                       color, stroke=DARK, cls="box"))
        scene.add(Line(cx - w / 2, ax.y(med), cx + w / 2, ax.y(med),
                       DARK, 1.5, cls="median"))
        scene.add(Text(cx, ax.top + ax.height + 16, alternative, size=9,
                       anchor="middle"))
        if choice != prev_choice:
            scene.add(Text(cx - w / 2, ax.top + ax.height + 34, choice,
                           size=10, cls="group-label"))
            prev_choice = choice
    return scene


def scree_plot(diagnostics) -> Scene:
    """Penalized stress by embedding dimension."""
    if "scree" not in diagnostics:
        raise PlotDataError("diagnostics file has no 'scree' section")
    curve = {int(k): float(v) for k, v in diagnostics["scree"].items()}
    if not curve:
        raise PlotDataError("no data: scree section is empty")
    dims = sorted(curve)
    top = max(curve.values()) or 1.0
    scene = Scene(640, 460)
    _title(scene, "Scree plot")
    ax = _Axes(dims[0] - 0.5, dims[-1] + 0.5, 0, top * 1.08, 80, 60, 480, 320)
    ax.frame(scene)
    pts = [(ax.x(d), ax.y(curve[d])) for d in dims]
    for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
        scene.add(Line(xa, ya, xb, yb, PALETTE[0], 1.5, cls="scree-line"))
    for d, (x, y) in zip(dims, pts):
        scene.add(Circle(x, y, 4, PALETTE[0], cls="scree-point"))
        scene.add(Text(x, ax.top + ax.height + 16, str(d), size=10,
                       anchor="middle"))
        scene.add(Text(x, y - 8, f"{curve[d]:.3g}", size=8, anchor="middle"))
    scene.add(Text(ax.left + ax.width / 2, ax.top + ax.height + 34,
                   "dimensions", anchor="middle"))
    return scene


def spp(diagnostics) -> Scene:
    """Stress-per-point shares for universes (top) and methods (bottom)."""
    if "spp_rows" not in diagnostics or "spp_cols" not in diagnostics:
        raise PlotDataError("diagnostics file has no stress-per-point section")
    rows = diagnostics["spp_rows"]
    cols = diagnostics["spp_cols"]
    if not rows or not cols:
        raise PlotDataError("no data: stress-per-point sections are empty")
    scene = Scene(900, 640)
    _title(scene, "Stress per point")

    def panel(values, labels, top_px, label_every, cls):
        ax = _Axes(0, len(values), 0, max(max(values) * 1.1, 1e-9),
                   90, top_px, 720, 200)
        ax.frame(scene)
        uniform = 100.0 / len(values)
        scene.add(Line(ax.left, ax.y(uniform), ax.left + ax.width,
                       ax.y(uniform), GREY, 0.8, cls="uniform-share"))
        bw = ax.width / len(values)
        for i, v in enumerate(values):
            scene.add(Rect(ax.x(i) + bw * 0.1, ax.y(v), bw * 0.8,
                           ax.y(0) - ax.y(v), PALETTE[0], cls=cls))
            if label_every and i % label_every == 0:
                scene.add(Text(ax.x(i + 0.5), ax.top + 216, labels[i],
                               size=8, anchor="middle"))
        scene.add(Text(ax.left - 8, ax.y(uniform) + 4, f"{uniform:.1f}%",
                       anchor="end", size=8))

    ukeys = list(rows)
    panel([rows[k] for k in ukeys], ukeys, 60,
          label_every=max(1, len(ukeys) // 8), cls="spp-row")
    scene.add(Text(450, 302, "universes", anchor="middle"))
    mkeys = list(cols)
    panel([cols[k] for k in mkeys], mkeys, 360, label_every=1, cls="spp-col")
    scene.add(Text(450, 602, "methods", anchor="middle"))
    return scene
