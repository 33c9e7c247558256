"""Dual pairs, inverses of monoidal transformations, and hom-set enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import matrix as mx
from .classifier import ClassifierPresentation, Env, J, K, L, Q, format_laxword, seq, tensor
from .model import (
    DepthError, FrobeniusAlgebraData, ModelError, ModelFunctor, evaluate, evaluate_diagram,
    default_models,
)
from .presentation import (
    CDiagram, CTerm, LaxcatError, Presentation, c_equal, format_word, parse_cterm,
)
from .rewrite import (
    Diagram, Equal, canon, check_equal, moves_for, normalize, placements,
)
from . import slicing


class NotADualPair(LaxcatError):
    pass


class InvalidTransformation(LaxcatError):
    pass


# ---------------------------------------------------------------------------
# dual pairs


@dataclass(frozen=True)
class DualData:
    """``x_star`` is a right dual of ``x`` with ``unit: 1 -> x*.x`` and ``counit: x.x* -> 1``."""
    x: tuple
    x_star: tuple
    unit: CTerm
    counit: CTerm

    def check_types(self):
        if (self.unit.dom, self.unit.cod) != ((), self.x_star + self.x):
            raise NotADualPair(f"unit must be 1 -> {format_word(self.x_star + self.x)}")
        if (self.counit.dom, self.counit.cod) != (self.x + self.x_star, ()):
            raise NotADualPair(f"counit must be {format_word(self.x + self.x_star)} -> 1")


def zigzags(p: Presentation, d: DualData):
    """The two zigzag composites in C together with the identities they should equal."""
    from .presentation import CId
    x, xs = d.x, d.x_star
    z1 = (CId(x) * d.unit).then(d.counit * CId(x))
    z2 = (d.unit * CId(xs)).then(CId(xs) * d.counit)
    return (z1, CId(x)), (z2, CId(xs))


def dual_pair(p: Presentation, x, x_star, unit, counit, models=()) -> DualData:
    """Build a :class:`DualData`, refusing it unless both zigzags hold in C."""
    from .presentation import word
    x = word(x) if isinstance(x, str) else tuple(x)
    x_star = word(x_star) if isinstance(x_star, str) else tuple(x_star)
    unit = parse_cterm(unit, p) if isinstance(unit, str) else unit
    counit = parse_cterm(counit, p) if isinstance(counit, str) else counit
    d = DualData(x, x_star, unit, counit)
    d.check_types()
    for lhs, rhs in zigzags(p, d):
        v = c_equal(p, lhs, rhs, models)
        if not isinstance(v, Equal):
            raise NotADualPair(f"zigzag not established in C ({v.kind})")
    return d


def transport_dual(cp: ClassifierPresentation, d: DualData):
    """Cup and cap of the transported dual pair in the Frobenius classifier.

    ``unit' = J ; env(unit) ; K(x*, x)`` and
    ``counit' = L(x, x*) ; env(counit) ; Q``.
    """
    if cp.flavor != "frob":
        raise LaxcatError("dual pairs transport into the Frobenius classifier")
    d.check_types()
    for lhs, rhs in zigzags(cp.base, d):
        if not isinstance(c_equal(cp.base, lhs, rhs), Equal):
            raise NotADualPair("zigzag not established in C")
    unit = seq(cp.J(), Env(d.unit, "frob"), cp.K(d.x_star, d.x))
    counit = seq(cp.L(d.x, d.x_star), Env(d.counit, "frob"), cp.Q())
    return unit, counit


def zigzag_terms(cp, unit, counit, x, x_star):
    z1 = seq(tensor(cp.Id([x]), unit), tensor(counit, cp.Id([x])))
    z2 = seq(tensor(unit, cp.Id([x_star])), tensor(cp.Id([x_star]), counit))
    return (z1, cp.Id([x])), (z2, cp.Id([x_star]))


def check_zigzag(cp: ClassifierPresentation, unit, counit, x, x_star, models=None, **kw):
    """Verdicts for the two zigzag equations of a transported dual pair.

    Besides the symbolic check every model is evaluated; the returned pair is
    accompanied by the list of models on which both zigzags evaluate to
    identities.
    """
    if models is None:
        models = default_models(cp)
    verdicts, confirmed = [], []
    pairs = zigzag_terms(cp, unit, counit, x, x_star)
    for lhs, rhs in pairs:
        verdicts.append(check_equal(cp, lhs, rhs, models=models, **kw))
    for m in models:
        if all(mx.mat_eq(evaluate(m, a), evaluate(m, b)) for a, b in pairs):
            confirmed.append(m.name)
    return tuple(verdicts), confirmed


# ---------------------------------------------------------------------------
# monoidal transformations


@dataclass(frozen=True, eq=False)
class TransformationData:
    """Components ``tau[w]: G(w) -> K(w)`` for segment words ``w``.

    Components of words missing from ``components`` are Kronecker products of
    letter components; that extension is only meaningful for strict models,
    so twist and tabulated models should list every word they need.
    """
    source: ModelFunctor
    target: ModelFunctor
    components: dict

    def component(self, w) -> np.ndarray:
        w = tuple(w)
        if w in self.components:
            return self.components[w]
        if self.source.kind != "strict" or self.target.kind != "strict":
            raise DepthError(f"no component for {format_word(w)}")
        return mx.kron(*(self.components[(a,)] for a in w)) if w else mx.eye(1)


@dataclass
class TransformationReport:
    lines: list = field(default_factory=list)
    failure: Optional[tuple] = None

    @property
    def ok(self):
        return self.failure is None

    def to_text(self):
        return "".join(f"{'OK' if ok else 'FAIL'} {ax} {w}\n" for ok, ax, w in self.lines)


def validate_transformation(t: TransformationData, depth: int = 2, flavor: str = "frob"):
    """Naturality and (op)lax monoidality of ``t`` on all words up to ``depth``."""
    from .model import _whiskered_generators

    G, Kf = t.source, t.target
    rep = TransformationReport()
    base = G.base

    def check(ax, w, a, b):
        ok = mx.mat_eq(a, b)
        rep.lines.append((ok, ax, w))
        if not ok and rep.failure is None:
            rep.failure = (ax, w, a, b)

    words = base.words(depth)
    for u, g, v in _whiskered_generators(base, depth):
        src, dst = u + g.dom + v, u + g.cod + v
        e = Env(CDiagram(src, ((len(u), g),)))
        check("naturality", f"{g.name}:{format_word(src)}",
              mx.matmul(t.component(dst), G.box(e)), mx.matmul(Kf.box(e), t.component(src)))
    for x, z in itertools.product(words, repeat=2):
        if len(x) + len(z) > depth:
            continue
        w = f"{format_word(x)}|{format_word(z)}"
        both = mx.kron(t.component(x), t.component(z))
        if flavor in ("lax", "frob"):
            check("lax", w, mx.matmul(t.component(x + z), G.box(L(x, z))),
                  mx.matmul(Kf.box(L(x, z)), both))
        if flavor in ("oplax", "frob"):
            check("oplax", w, mx.matmul(Kf.box(K(x, z)), t.component(x + z)),
                  mx.matmul(both, G.box(K(x, z))))
    if flavor in ("lax", "frob"):
        check("unit", "1", mx.matmul(t.component(()), G.box(J())), Kf.box(J()))
    if flavor in ("oplax", "frob"):
        check("counit", "1", mx.matmul(Kf.box(Q()), t.component(())), G.box(Q()))
    return rep


def automorphism_transformation(M: ModelFunctor, phi, depth: int = 2) -> TransformationData:
    """``tau[w] = phi (x) I`` on a twist model, for an algebra automorphism ``phi``."""
    if M.kind != "twist":
        raise ModelError("automorphism transformations need a twist model")
    phi = mx.qmat(phi)
    comps = {w: mx.kron(phi, mx.eye(M.gdim(w))) for w in M.base.words(depth)}
    return TransformationData(M, M, comps)


def algebra_automorphisms(A: FrobeniusAlgebraData):
    """A few Frobenius algebra automorphisms of ``A`` in its given basis."""
    out = [mx.eye(A.n)]
    n = A.n
    # permutation and sign candidates; keep those preserving all structure
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            P = mx.zeros(n, n)
            for i, j in enumerate(perm):
                P[j, i] = signs[i]
            if _is_automorphism(A, P) and not mx.mat_eq(P, mx.eye(n)):
                out.append(P)
        if len(out) > 8:
            break
    return out


def _is_automorphism(A, P):
    return (mx.mat_eq(mx.matmul(P, A.mult), mx.matmul(A.mult, mx.kron(P, P)))
            and mx.mat_eq(mx.matmul(P, A.unit), A.unit)
            and mx.mat_eq(mx.matmul(A.counit, P), A.counit)
            and mx.mat_eq(mx.matmul(mx.kron(P, P), A.comult), mx.matmul(A.comult, P)))


def invert_transformation(t: TransformationData, duals: dict, depth: int = 2,
                          words=None, check: bool = True) -> dict:
    """Inverse components built from right duals.

    For each requested word ``x`` with dual data ``duals[x]``::

        tau^-1[x] = (counit'_K (x) I_G(x)) . (I_K(x) (x) tau[x*] (x) I_G(x)) . (I_K(x) (x) unit'_G)

    where ``unit'`` and ``counit'`` are the transported cup and cap evaluated
    in the source and target model.
    """
    G, Kf = t.source, t.target
    if check:
        rep = validate_transformation(t, depth)
        if not rep.ok:
            ax, w, _, _ = rep.failure
            raise InvalidTransformation(f"not a lax and oplax monoidal transformation: {ax} {w}")
    cp = ClassifierPresentation(G.base, "frob")
    out = {}
    for x in (words if words is not None else duals):
        x = tuple(x)
        if x == ():
            out[x] = mx.inverse(t.component(()))
            continue
        if x not in duals:
            raise LaxcatError(f"no dual data for {format_word(x)}")
        d = duals[x]
        unit, counit = transport_dual(cp, d)
        cup = evaluate(G, unit)        # 1 -> G(x*) (x) G(x)
        cap = evaluate(Kf, counit)     # K(x) (x) K(x*) -> 1
        kx, gx = Kf.seg_dim(x), G.seg_dim(x)
        inv = mx.matmul(
            mx.kron(cap, mx.eye(gx)),
            mx.kron(mx.eye(kx), t.component(d.x_star), mx.eye(gx)),
            mx.kron(mx.eye(kx), cup),
        )
        out[x] = inv
    return out


# ---------------------------------------------------------------------------
# hom-set enumeration


@dataclass
class EnumReport:
    depth: int
    dom: tuple
    cod: tuple
    lower: int
    upper: int
    representatives: list
    terms: int = 0
    unknown_pairs: int = 0

    @property
    def exact(self):
        return self.lower == self.upper

    def to_text(self) -> str:
        head = "depth, dom, cod, lower, upper, representatives..."
        reps = ", ".join(str(r) for r in self.representatives)
        row = f"{self.depth}, {format_laxword(self.dom)}, {format_laxword(self.cod)}, {self.lower}, {self.upper}, {reps}"
        return head + "\n" + row + "\n"


class _UF:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller diagram as the root so representatives are canonical
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _step_change(box):
    return box.n_out - box.n_in


def enumerate_diagrams(cp: ClassifierPresentation, dom, cod, depth: int, max_letters=None):
    """Normal forms of all diagrams ``dom -> cod`` with at most ``depth`` generators."""
    dom, cod = tuple(dom), tuple(cod)
    if max_letters is None:
        max_letters = max(sum(map(len, dom)), sum(map(len, cod)))
    found = set()
    layer = {Diagram(dom, ())}
    seen = set(layer)
    for level in range(depth + 1):
        for d in layer:
            if d.cod == cod:
                found.add(normalize(d, cp).diagram)
        if level == depth:
            break
        remaining = depth - level - 1
        nxt = set()
        for d in layer:
            top = d.cod
            for sl in placements(cp, top, max_letters):
                new_top = slicing.apply_slice(top, sl)
                if abs(len(new_top) - len(cod)) > remaining:
                    continue
                nd = normalize(Diagram(dom, slicing.canonical(list(d.slices) + [sl])), cp).diagram
                if nd not in seen:
                    seen.add(nd)
                    nxt.add(nd)
        layer = nxt
    return sorted(found)


def _signature(models, d):
    sig = []
    for m in models:
        try:
            sig.append(tuple(evaluate_diagram(m, d).flat))
        except DepthError:
            sig.append(None)
    return tuple(sig)


def enumerate_homs(cp: ClassifierPresentation, dom, cod, depth: int, models=None,
                   search_depth: int = 4, max_letters=None) -> EnumReport:
    """Count classes of morphisms ``dom -> cod`` built from at most ``depth`` generators.

    Normal forms are merged when a search move connects them or when a
    bounded search proves them equal; classes that no model separates and no
    search joins stay apart and widen the bracket.  ``lower`` counts distinct
    model signatures; ``upper`` counts the classes left after merging.
    """
    dom, cod = tuple(dom), tuple(cod)
    if models is None:
        models = default_models(cp)
    diagrams = enumerate_diagrams(cp, dom, cod, depth, max_letters)
    uf = _UF(diagrams)
    present = set(diagrams)
    moves = moves_for(cp.flavor)
    for d in diagrams:
        seq_ = list(d.slices)
        for j in range(len(seq_)):
            for rule in moves:
                new = rule.apply(seq_, j)
                if new is None:
                    continue
                n = normalize(canon(new, d.dom, cp), cp).diagram
                if n in present:
                    uf.union(d, n)
    sigs = {d: _signature(models, d) for d in diagrams}
    classes = sorted({uf.find(d) for d in diagrams})
    by_sig = {}
    for c in classes:
        by_sig.setdefault(sigs[c], []).append(c)
    unknown = 0
    for group in by_sig.values():
        for a, b in itertools.combinations(group, 2):
            ra, rb = uf.find(a), uf.find(b)
            if ra == rb:
                continue
            v = check_equal(cp, ra, rb, depth=search_depth, models=[])
            if isinstance(v, Equal):
                uf.union(ra, rb)
            else:
                unknown += 1
    classes = sorted({uf.find(d) for d in diagrams})
    lower = len({sigs[c] for c in classes})
    return EnumReport(depth, dom, cod, lower, len(classes), classes, len(diagrams), unknown)


def monotone_maps(m: int, n: int) -> int:
    """Brute-force count of order-preserving maps from an m-chain to an n-chain."""
    return sum(1 for f in itertools.product(range(n), repeat=m)
               if all(f[i] <= f[i + 1] for i in range(m - 1)))
