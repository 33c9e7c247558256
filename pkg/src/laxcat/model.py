"""Strict monoidal functors from classifiers into exact rational matrices.

Three families are supported:

``strict``
    a strict monoidal functor ``G`` of the base, with every structure map an
    identity;
``twist``
    ``F(w) = A (x) G(w)`` for a Frobenius algebra ``A``; the merge, split,
    unit and counit come from ``A`` together with the swap of tensor factors;
``tabulated``
    explicit tables for segment dimensions, whiskered generator images and
    the structure maps, up to a fixed number of letters.

Evaluation is exact; nothing in this module takes a tolerance.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import matrix as mx
from .classifier import (
    ClassifierPresentation, Compose, Env, Id, J, K, L, Q, Tensor, Term, _Atom,
)
from .presentation import (
    CDiagram, LaxcatError, Presentation, c_sliced, format_word, raw_slices, word,
)


class ModelError(LaxcatError):
    pass


class DepthError(ModelError):
    """A tabulated model was asked for data beyond its tabulation."""


# ---------------------------------------------------------------------------
# Frobenius algebras


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebraData:
    name: str
    n: int
    unit: np.ndarray     # n x 1
    mult: np.ndarray     # n x n^2
    counit: np.ndarray   # 1 x n
    comult: np.ndarray   # n^2 x n

    def failures(self) -> list:
        n, I = self.n, mx.eye(self.n)
        m, u, c, e = self.mult, self.unit, self.comult, self.counit
        checks = {
            "associativity": (mx.matmul(m, mx.kron(m, I)), mx.matmul(m, mx.kron(I, m))),
            "left unit": (mx.matmul(m, mx.kron(u, I)), I),
            "right unit": (mx.matmul(m, mx.kron(I, u)), I),
            "coassociativity": (mx.matmul(mx.kron(c, I), c), mx.matmul(mx.kron(I, c), c)),
            "left counit": (mx.matmul(mx.kron(e, I), c), I),
            "right counit": (mx.matmul(mx.kron(I, e), c), I),
            "frobenius left": (mx.matmul(mx.kron(m, I), mx.kron(I, c)), mx.matmul(c, m)),
            "frobenius right": (mx.matmul(mx.kron(I, m), mx.kron(c, I)), mx.matmul(c, m)),
        }
        shapes = [(u.shape, (n, 1)), (m.shape, (n, n * n)), (e.shape, (1, n)), (c.shape, (n * n, n))]
        bad = [f"shape {a} != {b}" for a, b in shapes if a != b]
        if bad:
            return bad
        return [k for k, (a, b) in checks.items() if not mx.mat_eq(a, b)]

    def conjugate(self, P, name=None) -> "FrobeniusAlgebraData":
        """The same algebra in the basis given by the columns of ``P``."""
        Pi = mx.inverse(P)
        return FrobeniusAlgebraData(
            name or self.name, self.n,
            mx.matmul(Pi, self.unit),
            mx.matmul(Pi, self.mult, mx.kron(P, P)),
            mx.matmul(self.counit, P),
            mx.matmul(mx.kron(Pi, Pi), self.comult, P),
        )

    def __eq__(self, other):
        if not isinstance(other, FrobeniusAlgebraData):
            return NotImplemented
        return self.n == other.n and all(
            mx.mat_eq(getattr(self, k), getattr(other, k)) for k in ("unit", "mult", "counit", "comult"))

    __hash__ = object.__hash__


def _group_algebra(k: int) -> FrobeniusAlgebraData:
    if k < 1:
        raise ModelError("group order must be positive")
    unit, mult = mx.zeros(k, 1), mx.zeros(k, k * k)
    counit, comult = mx.zeros(1, k), mx.zeros(k * k, k)
    unit[0, 0] = 1
    counit[0, 0] = 1
    for g in range(k):
        for h in range(k):
            mult[(g + h) % k, g * k + h] = 1
            comult[((g + h) % k) * k + (-h) % k, g] = 1
    return FrobeniusAlgebraData(f"group_algebra({k})", k, unit, mult, counit, comult)


def _matrix_algebra(m: int) -> FrobeniusAlgebraData:
    if m < 1:
        raise ModelError("matrix size must be positive")
    n = m * m
    idx = lambda i, j: i * m + j  # noqa: E731
    unit, mult = mx.zeros(n, 1), mx.zeros(n, n * n)
    counit, comult = mx.zeros(1, n), mx.zeros(n * n, n)
    for i in range(m):
        unit[idx(i, i), 0] = 1
        counit[0, idx(i, i)] = 1
    for i, j, k in itertools.product(range(m), repeat=3):
        for l in range(m):
            mult[idx(i, l), idx(i, j) * n + idx(k, l)] = int(j == k)
        comult[idx(i, k) * n + idx(k, j), idx(i, j)] = 1
    return FrobeniusAlgebraData(f"matrix_algebra({m})", n, unit, mult, counit, comult)


def _direct_sum(a: FrobeniusAlgebraData, b: FrobeniusAlgebraData) -> FrobeniusAlgebraData:
    n = a.n + b.n

    def pair(i, j):  # index of basis pair in the sum
        return i * n + j

    unit = np.vstack([a.unit, b.unit]).astype(object)
    counit = np.hstack([a.counit, b.counit]).astype(object)
    mult, comult = mx.zeros(n, n * n), mx.zeros(n * n, n)
    for alg, shift in ((a, 0), (b, a.n)):
        k = alg.n
        for r in range(k):
            for i in range(k):
                for j in range(k):
                    mult[r + shift, pair(i + shift, j + shift)] = alg.mult[r, i * k + j]
                    comult[pair(i + shift, j + shift), r + shift] = alg.comult[i * k + j, r]
    return FrobeniusAlgebraData(f"{a.name}+{b.name}", n, unit, mult, counit, comult)


def make_frobenius_algebra(kind: str, *params, name: Optional[str] = None) -> FrobeniusAlgebraData:
    """Build and verify a Frobenius algebra.

    ``kind`` is ``group_algebra`` (cyclic order ``k``), ``matrix_algebra``
    (size ``m``), ``direct_sum`` (two algebras) or ``from_tables``
    (``unit, mult, counit, comult``).
    """
    if kind == "group_algebra":
        alg = _group_algebra(int(params[0]))
    elif kind == "matrix_algebra":
        alg = _matrix_algebra(int(params[0]))
    elif kind == "direct_sum":
        alg = _direct_sum(*params)
    elif kind == "from_tables":
        unit, mult, counit, comult = (mx.qmat(p) for p in params)
        alg = FrobeniusAlgebraData(name or "tables", unit.shape[0], unit, mult, counit, comult)
    else:
        raise ModelError(f"unknown algebra kind {kind!r}")
    bad = alg.failures()
    if bad:
        raise ModelError(f"{alg.name} is not a Frobenius algebra: {', '.join(bad)}")
    if name:
        alg = FrobeniusAlgebraData(name, alg.n, alg.unit, alg.mult, alg.counit, alg.comult)
    return alg


def parse_algebra_spec(text: str) -> FrobeniusAlgebraData:
    """``group_algebra 2``, ``matrix_algebra(2)`` or ``a + b`` of those."""
    parts = [s.strip() for s in text.split("+")]
    algs = []
    for part in parts:
        m = re.fullmatch(r"(group_algebra|matrix_algebra)\s*[\s(]\s*(\d+)\s*\)?", part)
        if not m:
            raise ModelError(f"cannot read algebra {part!r}")
        algs.append(make_frobenius_algebra(m.group(1), int(m.group(2))))
    alg = algs[0]
    for b in algs[1:]:
        alg = make_frobenius_algebra("direct_sum", alg, b)
    return alg


def random_unimodular(rng, n: int, steps: int = 6) -> np.ndarray:
    """Integer matrix with determinant +-1 built from elementary operations."""
    P = mx.eye(n)
    if n < 2:
        return P
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        P[i, :] = P[i, :] + int(rng.integers(-1, 2)) * P[j, :]
    return P


# ---------------------------------------------------------------------------
# model functors


@dataclass(frozen=True, eq=False)
class ModelFunctor:
    """A strict monoidal functor out of a classifier, with matrix values.

    ``obj_dims`` and ``morphisms`` describe the underlying strict functor of
    the base.  Tabulated models carry their tables in ``tables``.
    """
    name: str
    kind: str
    base: Presentation
    obj_dims: dict
    morphisms: dict
    algebra: Optional[FrobeniusAlgebraData] = None
    tables: Optional["WeakStructure"] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("strict", "twist", "tabulated"):
            raise ModelError(f"unknown model kind {self.kind!r}")
        if self.kind == "twist" and self.algebra is None:
            raise ModelError("a twist model needs a Frobenius algebra")
        if self.kind == "tabulated" and self.tables is None:
            raise ModelError("a tabulated model needs tables")
        for g in self.base.morphism_generators:
            if g.name not in self.morphisms and self.kind != "tabulated":
                raise ModelError(f"no matrix for generator {g.name!r}")
            if g.name in self.morphisms:
                want = (self.gdim(g.cod), self.gdim(g.dom))
                if self.morphisms[g.name].shape != want:
                    raise ModelError(f"matrix for {g.name} has shape {self.morphisms[g.name].shape}, want {want}")

    # base strict functor G
    def gdim(self, w) -> int:
        return int(np.prod([self.obj_dims[x] for x in w], dtype=object)) if w else 1

    def base_image(self, t) -> np.ndarray:
        """``G(t)`` for a C-term or sliced C-diagram."""
        d = t if isinstance(t, CDiagram) else c_sliced(t)
        key = ("G", d)
        if key not in self._cache:
            dims = [self.obj_dims[x] for x in d.dom]
            self._cache[key] = _run(dims, d.slices, lambda box: self.morphisms[box.name],
                                    lambda box: [self.obj_dims[x] for x in box.cod])
        return self._cache[key]

    # classifier functor F
    def seg_dim(self, w) -> int:
        if self.kind == "strict":
            return self.gdim(w)
        if self.kind == "twist":
            return self.algebra.n * self.gdim(w)
        try:
            return self.tables.seg_dims[tuple(w)]
        except KeyError:
            raise DepthError(f"segment {format_word(w)} is not tabulated") from None

    def dim(self, lw) -> int:
        out = 1
        for seg in lw:
            out *= self.seg_dim(seg)
        return out

    def box(self, box) -> np.ndarray:
        key = ("F", box)
        if key not in self._cache:
            self._cache[key] = self._box(box)
        return self._cache[key]

    def _box(self, box):
        kind = self.kind
        if isinstance(box, Env):
            if kind == "strict":
                return self.base_image(box.body)
            if kind == "twist":
                return mx.kron(mx.eye(self.algebra.n), self.base_image(box.body))
            return self.tables.env_image(box.body)
        if isinstance(box, (L, K)):
            x, z = box.x, box.z
            if kind == "strict":
                return mx.eye(self.gdim(x + z))
            if kind == "tabulated":
                table = self.tables.m if isinstance(box, L) else self.tables.c
                try:
                    return table[(x, z)]
                except KeyError:
                    raise DepthError(f"{type(box).__name__}({format_word(x)},{format_word(z)}) "
                                     "is not tabulated") from None
            A, n, gx, gz = self.algebra, self.algebra.n, self.gdim(x), self.gdim(z)
            if isinstance(box, L):
                return mx.matmul(mx.kron(A.mult, mx.eye(gx * gz)),
                                 mx.kron(mx.eye(n), mx.swap(gx, n), mx.eye(gz)))
            return mx.matmul(mx.kron(mx.eye(n), mx.swap(n, gx), mx.eye(gz)),
                             mx.kron(A.comult, mx.eye(gx * gz)))
        if isinstance(box, J):
            if kind == "strict":
                return mx.eye(1)
            return self.algebra.unit if kind == "twist" else self.tables.u
        if isinstance(box, Q):
            if kind == "strict":
                return mx.eye(1)
            return self.algebra.counit if kind == "twist" else self.tables.e
        raise TypeError(box)

    def structure(self):
        """Summary used to compare models."""
        parts = [self.kind, sorted(self.obj_dims.items())]
        parts += [(k, tuple(v.flat)) for k, v in sorted(self.morphisms.items())]
        if self.algebra is not None:
            parts.append(tuple(tuple(getattr(self.algebra, k).flat)
                               for k in ("unit", "mult", "counit", "comult")))
        return parts


def _run(dims, slices, image, out_dims):
    """Evaluate a layered diagram by contracting each box into a running tensor.

    ``dims`` lists the dimension of each wire of the domain.  Only the touched
    axes are contracted.  The running tensor stays in int64 while every box is
    integral and the entries provably fit, and switches to exact objects
    otherwise.
    """
    total = int(np.prod(dims, dtype=object)) if dims else 1
    state = np.eye(total, dtype=np.int64).reshape(tuple(dims) + (total,))
    dims = list(dims)
    for off, box in slices:
        B = image(box)
        n_in = box.n_in
        left = int(np.prod(dims[:off], dtype=object)) if off else 1
        mid = int(np.prod(dims[off:off + n_in], dtype=object)) if n_in else 1
        right = int(np.prod(dims[off + n_in:], dtype=object)) if dims[off + n_in:] else 1
        if B.shape[1] != mid:
            raise ModelError(f"box {box} has {B.shape[1]} inputs, expected {mid}")
        s = state.reshape(left, mid, right, total)
        if state.dtype != object:
            iB = mx._as_int(B)
            if iB is None or (iB.size and s.size and
                              int(np.abs(iB).max()) * int(np.abs(s).max()) * max(mid, 1) >= mx._SAFE):
                s = s.astype(object)
            else:
                B = iB
        if state.dtype == object or s.dtype == object:
            B = B.astype(object)
        if mid == 0 or B.shape[0] == 0 or s.size == 0:
            r = np.zeros((B.shape[0], left, right, total), dtype=B.dtype)
        else:
            r = np.tensordot(B, s, axes=([1], [1]))
        new = out_dims(box)
        dims = dims[:off] + list(new) + dims[off + n_in:]
        state = np.transpose(r, (1, 0, 2, 3)).reshape(tuple(dims) + (total,))
    out = int(np.prod(dims, dtype=object)) if dims else 1
    return state.reshape(out, total).astype(object)


def evaluate_diagram(M: ModelFunctor, d) -> np.ndarray:
    """Matrix of a sliced classifier diagram."""
    dims = [M.seg_dim(s) for s in d.dom]
    return _run(dims, d.slices, M.box, lambda box: [M.seg_dim(s) for s in box.outputs])


def evaluate(M: ModelFunctor, t: Term) -> np.ndarray:
    """Compose with matrix products, tensor with Kronecker products."""
    if isinstance(t, Id):
        return mx.eye(M.dim(t.dom))
    if isinstance(t, _Atom):
        return M.box(t)
    if isinstance(t, Compose):
        return mx.matmul(evaluate(M, t.outer), evaluate(M, t.inner))
    if isinstance(t, Tensor):
        return mx.kron(evaluate(M, t.left), evaluate(M, t.right))
    raise TypeError(t)


# ---------------------------------------------------------------------------
# weak structure tables


@dataclass(frozen=True, eq=False)
class WeakStructure:
    """Finite data of a weak (lax, oplax or Frobenius) monoidal functor."""
    base: Presentation
    depth: int
    seg_dims: dict                      # word -> dim
    env: dict                           # (u, generator name, v) -> matrix
    m: dict = field(default_factory=dict)   # (x, z) -> matrix
    c: dict = field(default_factory=dict)
    u: Optional[np.ndarray] = None
    e: Optional[np.ndarray] = None

    def env_image(self, body: CDiagram) -> np.ndarray:
        b = body.dom
        out = mx.eye(self._dim(b))
        for off, g in body.slices:
            u, v = b[:off], b[off + len(g.dom):]
            try:
                img = self.env[(u, g.name, v)]
            except KeyError:
                raise DepthError(f"whiskered {g.name} in {format_word(b)} is not tabulated") from None
            out = mx.matmul(img, out)
            b = u + g.cod + v
        return out

    def _dim(self, w):
        try:
            return self.seg_dims[tuple(w)]
        except KeyError:
            raise DepthError(f"segment {format_word(w)} is not tabulated") from None


def _whiskered_generators(base: Presentation, depth: int):
    for g in base.morphism_generators:
        for w in base.words(depth):
            for pos in range(len(w) - len(g.dom) + 1):
                if w[pos:pos + len(g.dom)] != g.dom:
                    continue
                u, v = w[:pos], w[pos + len(g.dom):]
                if len(u) + len(g.cod) + len(v) <= depth:
                    yield u, g, v


def _word_pairs(base: Presentation, depth: int):
    ws = base.words(depth)
    return [(x, z) for x in ws for z in ws if len(x) + len(z) <= depth]


def extract_weak_structure(M: ModelFunctor, flavor: str = "frob", depth: int = 2) -> WeakStructure:
    """Read off the structure maps of the weak functor classified by ``M``.

    Merges and the unit are recorded for ``lax`` and ``frob``; splits and the
    counit for ``oplax`` and ``frob``.
    """
    if M.kind == "tabulated" and depth > M.tables.depth:
        raise DepthError(f"model is tabulated to {M.tables.depth} letters, asked for {depth}")
    base = M.base
    seg_dims = {w: M.seg_dim(w) for w in base.words(depth)}
    env = {}
    for u, g, v in _whiskered_generators(base, depth):
        env[(u, g.name, v)] = M.box(Env(CDiagram(u + g.dom + v, ((len(u), g),))))
    m, c, unit, counit = {}, {}, None, None
    for x, z in _word_pairs(base, depth):
        if flavor in ("lax", "frob"):
            m[(x, z)] = M.box(L(x, z))
        if flavor in ("oplax", "frob"):
            c[(x, z)] = M.box(K(x, z))
    if flavor in ("lax", "frob"):
        unit = M.box(J())
    if flavor in ("oplax", "frob"):
        counit = M.box(Q())
    return WeakStructure(base, depth, seg_dims, env, m, c, unit, counit)


def tabulated_model(ws: WeakStructure, name: str = "tabulated", obj_dims=None, morphisms=None) -> ModelFunctor:
    """Model whose values are looked up in ``ws``."""
    if obj_dims is None:
        obj_dims = {x: ws.seg_dims.get((x,), 1) for x in ws.base.object_generators}
    return ModelFunctor(name, "tabulated", ws.base, dict(obj_dims), dict(morphisms or {}), tables=ws)


def weak_image(ws: WeakStructure, t) -> np.ndarray:
    """Image of a C-morphism under the weak functor given by tables.

    A term is read layer by layer in its own order, so it is covered whenever
    its intermediate words fit the table depth.
    """
    d = t if isinstance(t, CDiagram) else CDiagram(t.dom, tuple(raw_slices(t)))
    return ws.env_image(d)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    lines: list = field(default_factory=list)  # (ok, axiom, words)
    failure: Optional[tuple] = None             # (axiom, words, lhs, rhs)

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def checked(self) -> int:
        return len(self.lines)

    def to_text(self) -> str:
        out = [f"{'OK' if ok else 'FAIL'} {axiom} {words}" for ok, axiom, words in self.lines]
        if self.failure:
            axiom, words, a, b = self.failure
            out.append(f"# first failure: {axiom} {words}")
            out.append("# lhs")
            out += ["# " + s for s in mx.format_matrix(a).splitlines()]
            out.append("# rhs")
            out += ["# " + s for s in mx.format_matrix(b).splitlines()]
        return "\n".join(out) + "\n"


def _words_text(*ws):
    return "|".join(format_word(w) for w in ws)


def validate_model(M: ModelFunctor, depth: int = 2, flavor: str = "frob",
                   stop_at_first: bool = False) -> ValidationReport:
    """Check the weak monoidal functor axioms exactly on all words.

    Every instance whose parameters have at most ``depth`` letters in total
    is checked, in a fixed order: associativity and its opposite, the two
    Frobenius squares, unitality and counitality, then naturality.
    """
    rep = ValidationReport()
    base = M.base
    lax, oplax = flavor in ("lax", "frob"), flavor in ("oplax", "frob")
    words = base.words(depth)

    def check(axiom, wtext, a, b):
        ok = mx.mat_eq(a, b)
        rep.lines.append((ok, axiom, wtext))
        if not ok and rep.failure is None:
            rep.failure = (axiom, wtext, a, b)
        return ok or not stop_at_first

    def go(axiom, wtext, lhs_dom, lhs, rhs):
        try:
            a = evaluate_diagram(M, _D(lhs_dom, lhs))
            b = evaluate_diagram(M, _D(lhs_dom, rhs))
        except DepthError:
            return True
        return check(axiom, wtext, a, b)

    for x, z, w in itertools.product(words, repeat=3):
        if len(x) + len(z) + len(w) > depth:
            continue
        t = _words_text(x, z, w)
        if lax and not go("associativity", t, (x, z, w),
                          [(0, L(x, z)), (0, L(x + z, w))], [(1, L(z, w)), (0, L(x, z + w))]):
            return rep
        if oplax and not go("coassociativity", t, (x + z + w,),
                            [(0, K(x + z, w)), (0, K(x, z))], [(0, K(x, z + w)), (1, K(z, w))]):
            return rep
        if lax and oplax:
            if not go("frobenius-left", t, (x, z + w),
                      [(0, L(x, z + w)), (0, K(x + z, w))], [(1, K(z, w)), (0, L(x, z))]):
                return rep
            if not go("frobenius-right", t, (x + z, w),
                      [(0, L(x + z, w)), (0, K(x, z + w))], [(0, K(x, z)), (1, L(z, w))]):
                return rep
    for x in words:
        t = _words_text(x)
        if lax:
            if not go("unit-right", t, (x,), [(1, J()), (0, L(x, ()))], []):
                return rep
            if not go("unit-left", t, (x,), [(0, J()), (0, L((), x))], []):
                return rep
        if oplax:
            if not go("counit-right", t, (x,), [(0, K(x, ())), (1, Q())], []):
                return rep
            if not go("counit-left", t, (x,), [(0, K((), x)), (0, Q())], []):
                return rep
    # naturality of merges and splits in each argument
    for u, g, v in _whiskered_generators(base, depth):
        src, dst = u + g.dom + v, u + g.cod + v
        env = Env(CDiagram(src, ((len(u), g),)))
        for w in words:
            if len(src) + len(w) > depth or len(dst) + len(w) > depth:
                continue
            wid = Env(CDiagram(src + w, ((len(u), g),)))
            widl = Env(CDiagram(w + src, ((len(w) + len(u), g),)))
            t = _words_text(u, src, v, w)
            if lax:
                if not go("naturality-m-left", f"{g.name}:{t}", (src, w),
                          [(0, env), (0, L(dst, w))], [(0, L(src, w)), (0, wid)]):
                    return rep
                if not go("naturality-m-right", f"{g.name}:{t}", (w, src),
                          [(1, env), (0, L(w, dst))], [(0, L(w, src)), (0, widl)]):
                    return rep
            if oplax:
                if not go("naturality-c-left", f"{g.name}:{t}", (src + w,),
                          [(0, K(src, w)), (0, env)], [(0, wid), (0, K(dst, w))]):
                    return rep
                if not go("naturality-c-right", f"{g.name}:{t}", (w + src,),
                          [(0, K(w, src)), (1, env)], [(0, widl), (0, K(w, dst))]):
                    return rep
    return rep


@dataclass(frozen=True)
class _D:
    dom: tuple
    slices: list

    def __hash__(self):
        return id(self)


# ---------------------------------------------------------------------------
# model families


def strict_model(base: Presentation, obj_dims: dict, morphisms: dict, name="strict") -> ModelFunctor:
    return ModelFunctor(name, "strict", base, dict(obj_dims), {k: mx.qmat(v) for k, v in morphisms.items()})


def twist_model(base: Presentation, algebra: FrobeniusAlgebraData, obj_dims=None, morphisms=None,
                name=None) -> ModelFunctor:
    obj_dims = obj_dims or {x: 1 for x in base.object_generators}
    if morphisms is None:
        morphisms = {g.name: mx.eye(1) for g in base.morphism_generators}
    return ModelFunctor(name or f"twist[{algebra.name}]", "twist", base, dict(obj_dims),
                        {k: mx.qmat(v) for k, v in morphisms.items()}, algebra)


def _relations_hold(M: ModelFunctor) -> bool:
    return all(mx.mat_eq(M.base_image(r.lhs), M.base_image(r.rhs)) for r in M.base.relations)


def _random_base(rng, base: Presentation, max_dim: int, entries=(-2, 3)):
    """Random base functor satisfying the relations of ``base``.

    Falls back to one-dimensional objects and all-ones scalars, which satisfy
    every relation.
    """
    for attempt in range(50 if base.relations else 1):
        dims = {x: int(rng.integers(1, max_dim + 1)) for x in base.object_generators}
        if attempt >= 25:
            dims = {x: 1 for x in base.object_generators}
        gd = lambda w: int(np.prod([dims[x] for x in w], dtype=object)) if w else 1  # noqa: E731
        morphs = {}
        for g in base.morphism_generators:
            r, c = gd(g.cod), gd(g.dom)
            a = rng.integers(entries[0], entries[1], size=(r, c)) if r * c else np.zeros((r, c), dtype=int)
            morphs[g.name] = mx.qmat(a.tolist()) if r * c else mx.zeros(r, c)
        trial = ModelFunctor("trial", "strict", base, dims, morphs)
        if _relations_hold(trial):
            return dims, morphs
    dims = {x: 1 for x in base.object_generators}
    return dims, {g.name: mx.qmat([[1]]) for g in base.morphism_generators}


_PROFILE = re.compile(r"(strict|group_algebra|matrix_algebra|mixed)(?:\(\s*(?:<=|≤)?\s*(\d+)\s*\))?")


def random_model(seed: int, cp, profile: str = "group_algebra(<=4)", max_dim: int = 2) -> ModelFunctor:
    """Deterministic random model from a named family.

    Profiles: ``strict``, ``group_algebra(<=k)``, ``matrix_algebra(<=m)``,
    ``mixed(<=k)`` (a direct sum of a group algebra and a matrix algebra).
    Algebras are presented in a random unimodular basis.
    """
    base = cp.base if isinstance(cp, ClassifierPresentation) else cp
    m = _PROFILE.fullmatch(profile.replace(" ", ""))
    if not m:
        raise ModelError(f"unknown profile {profile!r}")
    fam, bound = m.group(1), int(m.group(2) or 3)
    rng = np.random.default_rng(seed)
    dims, morphs = _random_base(rng, base, max_dim)
    name = f"{profile}#{seed}"
    if fam == "strict":
        return ModelFunctor(name, "strict", base, dims, morphs)
    if fam == "group_algebra":
        alg = make_frobenius_algebra("group_algebra", int(rng.integers(1, bound + 1)))
    elif fam == "matrix_algebra":
        alg = make_frobenius_algebra("matrix_algebra", int(rng.integers(1, bound + 1)))
    else:
        alg = make_frobenius_algebra("direct_sum",
                                     make_frobenius_algebra("group_algebra", int(rng.integers(1, bound + 1))),
                                     make_frobenius_algebra("matrix_algebra", 1 + int(rng.integers(0, 2))))
    alg = alg.conjugate(random_unimodular(rng, alg.n))
    return ModelFunctor(name, "twist", base, dims, morphs, alg)


def default_models(cp) -> list:
    """Small fixed models used to refute equalities.

    Every model here is valid by construction, so a separation is a proof of
    inequality.
    """
    base = cp.base if isinstance(cp, ClassifierPresentation) else cp
    rng = np.random.default_rng(7)
    dims1, morphs1 = _random_base(rng, base, 1, entries=(2, 6))
    dims2, morphs2 = _random_base(rng, base, 2)
    out = [
        ModelFunctor("strict-scalar", "strict", base, dims1, morphs1),
        ModelFunctor("strict", "strict", base, dims2, morphs2),
        twist_model(base, make_frobenius_algebra("group_algebra", 2), dims1, morphs1, "twist[Z/2]"),
        twist_model(base, make_frobenius_algebra("group_algebra", 3), dims1, morphs1, "twist[Z/3]"),
        twist_model(base, make_frobenius_algebra("matrix_algebra", 2), dims1, morphs1, "twist[M2]"),
    ]
    return out


# ---------------------------------------------------------------------------
# model files


def _fmt_key_word(w):
    return format_word(w)


def write_model(M: ModelFunctor, extra: Optional[dict] = None) -> str:
    """Serialize a model to the line-based model file format."""
    out = [f"name: {M.name}", f"kind: {M.kind}"]
    for x in M.base.object_generators:
        out.append(f"object {x}: {M.obj_dims[x]}")

    def mat(key, a):
        out.append(f"matrix {key} {a.shape[0]}x{a.shape[1]}")
        out.extend(" ".join(str(v) for v in row) for row in a)

    for g in M.base.morphism_generators:
        if g.name in M.morphisms:
            mat(f"gen:{g.name}", M.morphisms[g.name])
    if M.kind == "twist":
        A = M.algebra
        out.append(f"algebra: {A.name}")
        for k in ("unit", "mult", "counit", "comult"):
            mat(f"algebra:{k}", getattr(A, k))
    if M.kind == "tabulated":
        T = M.tables
        out.append(f"depth: {T.depth}")
        for w, d in T.seg_dims.items():
            out.append(f"segment {format_word(w)}: {d}")
        for (u, g, v), a in T.env.items():
            mat(f"env[{format_word(u)}|{g}|{format_word(v)}]", a)
        for (x, z), a in T.m.items():
            mat(f"m[{format_word(x)}|{format_word(z)}]", a)
        for (x, z), a in T.c.items():
            mat(f"c[{format_word(x)}|{format_word(z)}]", a)
        if T.u is not None:
            mat("u", T.u)
        if T.e is not None:
            mat("e", T.e)
    for key, a in (extra or {}).items():
        mat(key, a)
    return "\n".join(out) + "\n"


def _read_blocks(text: str):
    header, mats = {}, {}
    objects, segments = {}, {}
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    i = 0
    while i < len(lines):
        ln = lines[i]
        i += 1
        if ln.startswith("matrix "):
            _, key, shape = ln.split()
            r, c = (int(s) for s in shape.lower().split("x"))
            rows = []
            for _ in range(r):
                if i >= len(lines):
                    raise ModelError(f"matrix {key} is truncated")
                toks = lines[i].split()
                i += 1
                if len(toks) != c:
                    raise ModelError(f"matrix {key}: row has {len(toks)} entries, expected {c}")
                rows.append([mx.parse_rational(t) for t in toks])
            mats[key] = mx.qmat(rows) if r and c else mx.zeros(r, c)
        elif ln.startswith("object "):
            name, d = ln[len("object "):].split(":")
            objects[name.strip()] = int(d)
        elif ln.startswith("segment "):
            w, d = ln[len("segment "):].split(":")
            segments[word(w.strip())] = int(d)
        elif ":" in ln:
            k, v = ln.split(":", 1)
            header[k.strip()] = v.strip()
        else:
            raise ModelError(f"cannot read model line {ln!r}")
    return header, mats, objects, segments


def _bracket(key, prefix):
    inner = key[len(prefix) + 1:-1]
    return [s.strip() for s in inner.split("|")]


def read_model(text: str, base: Presentation):
    """Parse a model file; returns ``(model, extra_matrices)``.

    Matrices whose keys are not part of the model (for instance ``tau[x]``
    components) are returned in ``extra_matrices``.
    """
    header, mats, objects, segments = _read_blocks(text)
    kind = header.get("kind", "strict")
    name = header.get("name", kind)
    dims = {x: objects.get(x, 1) for x in base.object_generators}
    morphs, extra = {}, {}
    for key, a in mats.items():
        if key.startswith("gen:"):
            morphs[key[4:]] = a
    algebra = None
    if kind == "twist":
        keys = [f"algebra:{k}" for k in ("unit", "mult", "counit", "comult")]
        if all(k in mats for k in keys):
            algebra = make_frobenius_algebra("from_tables", *(mats[k] for k in keys),
                                             name=header.get("algebra", "tables"))
        elif "algebra" in header:
            algebra = parse_algebra_spec(header["algebra"])
        else:
            raise ModelError("twist model without an algebra")
    tables = None
    if kind == "tabulated":
        env, m, c = {}, {}, {}
        for key, a in mats.items():
            if key.startswith("env["):
                u, g, v = _bracket(key, "env")
                env[(word(u), g, word(v))] = a
            elif key.startswith("m["):
                x, z = _bracket(key, "m")
                m[(word(x), word(z))] = a
            elif key.startswith("c["):
                x, z = _bracket(key, "c")
                c[(word(x), word(z))] = a
        tables = WeakStructure(base, int(header.get("depth", 2)), segments, env, m, c,
                               mats.get("u"), mats.get("e"))
    known = ("gen:", "algebra:", "env[", "m[", "c[")
    for key, a in mats.items():
        if not key.startswith(known) and key not in ("u", "e"):
            extra[key] = a
    return ModelFunctor(name, kind, base, dims, morphs, algebra, tables), extra
