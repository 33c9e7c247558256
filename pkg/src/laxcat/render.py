"""SVG pictures of envelope diagrams.

Diagrams are drawn bottom to top.  Every segment of a boundary is a gray
envelope band containing its letters as teal strands; merges are drawn as a
pair of pants, splits as its mirror image, units as caps and counits as
cups.  Generators of the base sit on their strands as labelled dots.

Each connected piece of envelope is one ``<path class="frame">`` made of
abutting sub-paths; each letter wire is one ``<path class="strand">``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classifier import Env, J, K, L, Q
from .rewrite import Diagram


@dataclass(frozen=True)
class RenderStyle:
    slice_height: float = 48.0
    letter_gap: float = 16.0
    pad: float = 10.0
    segment_gap: float = 14.0
    empty_width: float = 18.0
    margin: float = 20.0
    strand_color: str = "#1b7f79"
    frame_color: str = "#d9d9d9"
    node_color: str = "#ffffff"
    text_color: str = "#222222"
    font_size: float = 10.0
    node_radius: float = 5.0

    def __post_init__(self):
        for k in ("slice_height", "letter_gap", "pad", "segment_gap", "empty_width", "font_size",
                  "node_radius"):
            if getattr(self, k) <= 0:
                raise ValueError(f"{k} must be positive")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")


@dataclass
class Strand:
    label: str
    points: list
    starts_at_boundary: bool = False
    ends_at_boundary: bool = False


@dataclass
class Node:
    x: float
    y: float
    label: str


@dataclass
class Label:
    x: float
    y: float
    text: str
    anchor: str = "middle"


@dataclass
class Scene:
    """Vector primitives in abstract units, with ``y`` pointing up."""
    width: float
    height: float
    frames: list = field(default_factory=list)    # list of list of closed polygons
    strands: list = field(default_factory=list)
    nodes: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    bottom_anchors: list = field(default_factory=list)  # (x, letter)
    top_anchors: list = field(default_factory=list)


class _UF:
    def __init__(self):
        self.p = {}

    def add(self, a):
        self.p.setdefault(a, a)

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def _intervals(boundary, st: RenderStyle):
    out, x = [], st.margin
    for seg in boundary:
        w = st.empty_width if not seg else 2 * st.pad + len(seg) * st.letter_gap
        out.append((x, x + w))
        x += w + st.segment_gap
    return out


def _spread(lo, hi, n):
    step = (hi - lo) / n
    return [lo + step * (k + 0.5) for k in range(n)]


def _lerp(a, b, t):
    return a + (b - a) * t


def layout(d: Diagram, style: RenderStyle = RenderStyle()) -> Scene:
    st = style
    bounds = d.boundaries()
    slices = list(d.slices)
    rows = max(len(slices), 1)
    if not slices:
        bounds = [bounds[0], bounds[0]]
    ivs = [_intervals(b, st) for b in bounds]
    width = max([st.margin * 2] + [iv[-1][1] + st.margin for iv in ivs if iv])
    height = 2 * st.margin + rows * st.slice_height
    ys = [st.margin + i * st.slice_height for i in range(rows + 1)]
    scene = Scene(width, height)

    uf = _UF()
    pieces = []  # (wire id, polygon)
    next_id = [0]

    def fresh():
        next_id[0] += 1
        uf.add(next_id[0])
        return next_id[0]

    wires = [fresh() for _ in bounds[0]]

    def letter_xs(level, o):
        lo, hi = ivs[level][o]
        return _spread(lo + st.pad, hi - st.pad, len(bounds[level][o])) if bounds[level][o] else []

    # strands: one per letter wire, tracked as lists of points per segment
    active = []
    for o, seg in enumerate(bounds[0]):
        xs = letter_xs(0, o)
        group = []
        for letter, x in zip(seg, xs):
            s = Strand(letter, [(x, ys[0])], starts_at_boundary=True)
            scene.strands.append(s)
            scene.bottom_anchors.append((x, letter))
            group.append(s)
        active.append(group)

    for i in range(rows):
        y0, y1 = ys[i], ys[i + 1]
        lo_b, hi_b = bounds[i], bounds[i + 1]
        if not slices:
            off, box = 0, None
            n_in = n_out = 0
        else:
            off, box = slices[i]
            n_in, n_out = box.n_in, box.n_out
        new_wires, new_active = [], []
        # pass-through segments left and right of the box
        for o in range(len(lo_b)):
            if off <= o < off + n_in:
                continue
            o2 = o if o < off else o - n_in + n_out
            (a0, b0), (a1, b1) = ivs[i][o], ivs[i + 1][o2]
            pieces.append((wires[o], [(a0, y0), (b0, y0), (b1, y1), (a1, y1)]))
            xs = letter_xs(i + 1, o2)
            for s, x in zip(active[o], xs):
                s.points.append((x, y1))
        if box is not None:
            ins = list(range(off, off + n_in))
            outs = list(range(off, off + n_out))
            ids = [fresh() for _ in outs]
            for w in [wires[o] for o in ins] + ids[1:]:
                uf.union(w, ids[0] if ids else wires[ins[0]])
            owner = ids[0] if ids else wires[ins[0]]
            bot = [ivs[i][o] for o in ins]
            top = [ivs[i + 1][o] for o in outs]
            out_groups = _box(scene, box, bot, top, y0, y1, [active[o] for o in ins],
                              pieces, owner, st, bounds[i + 1], off, lambda o: letter_xs(i + 1, o))
        else:
            ids, out_groups = [], []
        # rebuild wire ids and strand groups for the next boundary
        for o in range(len(hi_b)):
            if box is not None and off <= o < off + n_out:
                new_wires.append(ids[o - off])
                new_active.append(out_groups[o - off])
            else:
                src = o if o < off else o - n_out + n_in
                new_wires.append(wires[src])
                new_active.append(active[src])
        wires, active = new_wires, new_active

    for group in active:
        for s in group:
            s.ends_at_boundary = True
            scene.top_anchors.append((s.points[-1][0], s.label))

    comps = {}
    for wid, poly in pieces:
        comps.setdefault(uf.find(wid), []).append(poly)
    scene.frames = [comps[k] for k in sorted(comps)]
    for x, letter in scene.bottom_anchors:
        scene.labels.append(Label(x, ys[0] - st.font_size, letter))
    for x, letter in scene.top_anchors:
        scene.labels.append(Label(x, ys[-1] + st.font_size * 0.5, letter))
    return scene


def _box(scene, box, bot, top, y0, y1, groups, pieces, owner, st, top_boundary, off, letter_xs):
    """Add the frame and strands of one box; returns strand groups of its outputs."""
    h = y1 - y0
    if isinstance(box, L):
        (a0, b0), (a1, b1) = bot
        (c, e), = top
        crotch = ((b0 + a1) / 2, y0 + h * 0.45)
        pieces.append((owner, [(a0, y0), (b0, y0), crotch, (a1, y0), (b1, y0), (e, y1), (c, y1)]))
        xs = letter_xs(off)
        merged = groups[0] + groups[1]
        for s, x in zip(merged, xs):
            s.points.append((x, y1))
        return [merged]
    if isinstance(box, K):
        (c, e), = bot
        (a0, b0), (a1, b1) = top
        crotch = ((b0 + a1) / 2, y1 - h * 0.45)
        pieces.append((owner, [(c, y0), (e, y0), (b1, y1), (a1, y1), crotch, (b0, y1), (a0, y1)]))
        g = groups[0]
        k = len(box.x)
        left, right = g[:k], g[k:]
        for s, x in zip(left, letter_xs(off)):
            s.points.append((x, y1))
        for s, x in zip(right, letter_xs(off + 1)):
            s.points.append((x, y1))
        return [left, right]
    if isinstance(box, J):
        (a, b), = top
        mid = (a + b) / 2
        pieces.append((owner, [(a, y1), (a, y1 - h * 0.25), (mid, y1 - h * 0.5), (b, y1 - h * 0.25), (b, y1)]))
        return [[]]
    if isinstance(box, Q):
        (a, b), = bot
        mid = (a + b) / 2
        pieces.append((owner, [(a, y0), (b, y0), (b, y0 + h * 0.25), (mid, y0 + h * 0.5), (a, y0 + h * 0.25)]))
        return []
    if isinstance(box, Env):
        (a0, b0), = bot
        (a1, b1), = top
        pieces.append((owner, [(a0, y0), (b0, y0), (b1, y1), (a1, y1)]))
        return [_env_strands(scene, box, groups[0], a0, b0, a1, b1, y0, y1, st)]
    raise TypeError(box)


def _env_strands(scene, box, group, a0, b0, a1, b1, y0, y1, st):
    body = box.body
    m = len(body.slices)
    words = [body.dom]
    for o, g in body.slices:
        w = words[-1]
        words.append(w[:o] + g.cod + w[o + len(g.dom):])

    def xs_at(k):
        t = k / m if m else 1.0
        y = _lerp(y0, y1, t)
        lo, hi = _lerp(a0, a1, t), _lerp(b0, b1, t)
        return y, _spread(lo + st.pad, hi - st.pad, len(words[k])) if words[k] else []

    cur = list(group)
    for k, (o, g) in enumerate(body.slices):
        yb, xb = xs_at(k)
        ya, xa = xs_at(k + 1)
        ny = (yb + ya) / 2
        ins = cur[o:o + len(g.dom)]
        in_x = [xb[o + j] for j in range(len(g.dom))]
        out_x = [xa[o + j] for j in range(len(g.cod))]
        pool = in_x or out_x or [(_lerp(a0, a1, 0.5) + _lerp(b0, b1, 0.5)) / 2]
        nx = sum(pool) / len(pool)
        for s in ins:
            s.points.append((nx, ny))
        outs = []
        for letter in g.cod:
            s = Strand(letter, [(nx, ny)])
            scene.strands.append(s)
            outs.append(s)
        scene.nodes.append(Node(nx, ny, g.name))
        cur = cur[:o] + outs + cur[o + len(g.dom):]
        for j, s in enumerate(cur):
            if o <= j < o + len(g.cod):
                continue
            s.points.append((xa[j], ya))
        for j, s in enumerate(outs):
            s.points.append((out_x[j], ya))
    _, xt = xs_at(m)
    if m == 0:
        for s, x in zip(cur, xt):
            s.points.append((x, y1))
    return cur


# ---------------------------------------------------------------------------
# SVG


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def emit_svg(scene: Scene, style: RenderStyle = RenderStyle()) -> str:
    """Deterministic SVG 1.1 text for a scene."""
    H = scene.height

    def pt(p):
        return f"{_f(p[0])},{_f(H - p[1])}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(scene.width)}" '
        f'height="{_f(H)}" viewBox="0 0 {_f(scene.width)} {_f(H)}">',
        '<g id="frames">',
    ]
    for comp in scene.frames:
        d = " ".join("M " + " L ".join(pt(p) for p in poly) + " Z" for poly in comp)
        out.append(f'<path class="frame" d="{d}" fill="{style.frame_color}" stroke="none"/>')
    out.append("</g>")
    out.append('<g id="strands">')
    for s in scene.strands:
        d = "M " + " L ".join(pt(p) for p in s.points)
        out.append(f'<path class="strand" d="{d}" fill="none" stroke="{style.strand_color}" '
                   f'stroke-width="1.500"/>')
    out.append("</g>")
    out.append('<g id="nodes">')
    for n in scene.nodes:
        out.append(f'<circle cx="{_f(n.x)}" cy="{_f(H - n.y)}" r="{_f(style.node_radius)}" '
                   f'fill="{style.node_color}" stroke="{style.strand_color}" stroke-width="1.500"/>')
        out.append(f'<text x="{_f(n.x + style.node_radius + 2)}" y="{_f(H - n.y + style.font_size / 3)}" '
                   f'font-size="{_f(style.font_size)}" fill="{style.text_color}">{_esc(n.label)}</text>')
    out.append("</g>")
    out.append('<g id="labels">')
    for lb in scene.labels:
        out.append(f'<text x="{_f(lb.x)}" y="{_f(H - lb.y)}" font-size="{_f(style.font_size)}" '
                   f'text-anchor="{lb.anchor}" fill="{style.text_color}">{_esc(lb.text)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(d: Diagram, style: RenderStyle = RenderStyle()) -> str:
    return emit_svg(layout(d, style), style)
