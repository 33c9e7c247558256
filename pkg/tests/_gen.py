"""Random terms, diagrams and bases shared by the test modules."""

from __future__ import annotations

import numpy as np

from laxcat.classifier import ClassifierPresentation, Env, J, K, L, Q
from laxcat.presentation import CCompose, CDiagram, CId, CTensor, parse_presentation
from laxcat.rewrite import Diagram
from laxcat.slicing import apply_slice

TWO = "objects: x, y; morphisms: f: x -> y, h: y -> x;"
RICH = "objects: x, y; morphisms: f: x -> y, g: x.y -> y, c: 1 -> x, e: y -> 1;"


def classifier(src=TWO, flavor="frob"):
    return ClassifierPresentation(parse_presentation(src), flavor)


def _whisker(u, g, v):
    t = g
    if u:
        t = CTensor(CId(u), t)
    if v:
        t = CTensor(t, CId(v))
    return t


def _steps(p, w, max_letters):
    out = []
    for g in p.morphism_generators:
        for pos in range(len(w) - len(g.dom) + 1):
            if w[pos:pos + len(g.dom)] == g.dom and len(w) - len(g.dom) + len(g.cod) <= max_letters:
                out.append((pos, g))
    return out


def random_layers(rng, p, max_gens=4, max_letters=3):
    """A start word and up to ``max_gens`` composable whiskered generators."""
    words = p.words(max_letters)
    w = start = words[int(rng.integers(len(words)))]
    layers = []
    for _ in range(int(rng.integers(0, max_gens + 1))):
        opts = _steps(p, w, max_letters)
        if not opts:
            break
        pos, g = opts[int(rng.integers(len(opts)))]
        u, v = w[:pos], w[pos + len(g.dom):]
        layers.append(_whisker(u, g, v))
        w = u + g.cod + v
    return start, layers


def chain(start, layers):
    t = CId(start)
    for layer in layers:
        t = layer if isinstance(t, CId) else CCompose(layer, t)
    return t


def random_cterm(rng, p, max_gens=4, max_letters=3):
    return chain(*random_layers(rng, p, max_gens, max_letters))


def random_laxword(rng, p, max_segments=3, max_letters=3):
    segs, used = [], 0
    for _ in range(int(rng.integers(0, max_segments + 1))):
        n = int(rng.integers(0, max(1, max_letters - used) + 1))
        n = min(n, max_letters - used)
        segs.append(tuple(p.object_generators[int(i)] for i in rng.integers(len(p.object_generators), size=n)))
        used += n
    return tuple(segs)


def random_diagram(rng, cp, n_slices=4, max_letters=3):
    """Random well-typed sliced diagram over ``cp``."""
    p, fl = cp.base, cp.flavor
    b = random_laxword(rng, p, max_letters=max_letters)
    dom, slices = b, []
    kinds = {"lax": "ELJ", "oplax": "EKQ", "frob": "ELJKQ"}[fl]
    for _ in range(n_slices):
        opts = []
        letters = sum(len(s) for s in b)
        for o, seg in enumerate(b):
            if "E" in kinds:
                for pos, g in _steps(p, seg, max_letters - letters + len(seg)):
                    opts.append((o, Env(CDiagram(seg, ((pos, g),)))))
            if "L" in kinds and o + 1 < len(b):
                opts.append((o, L(seg, b[o + 1])))
            if "K" in kinds:
                for cut in range(len(seg) + 1):
                    opts.append((o, K(seg[:cut], seg[cut:])))
            if "Q" in kinds and not seg:
                opts.append((o, Q()))
        if "J" in kinds:
            for o in range(len(b) + 1):
                opts.append((o, J()))
        if not opts:
            break
        sl = opts[int(rng.integers(len(opts)))]
        slices.append(sl)
        b = apply_slice(b, sl)
    return Diagram(dom, tuple(slices))


def rng(seed=0):
    return np.random.default_rng(seed)
