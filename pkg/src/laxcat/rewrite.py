"""Sliced envelope diagrams, oriented normalization and equality search.

A :class:`Diagram` is the interchange-canonical layering of a classifier
term.  Equality of classifier morphisms is semi-decided in three stages:

1. both sides are normalized with the terminating oriented rules (envelope
   removal and merging, naturality, unit deletion);
2. registered models are evaluated; a separating model gives ``Distinct``;
3. a bounded bidirectional search over normal forms using the reversible
   moves (associativity of merges and splits, the two Frobenius relations).

``Equal`` is only returned together with a replayable trace.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import slicing
from .classifier import (
    ClassifierPresentation, Compose, Env, Id, J, K, L, Q, Tensor, Term, _Atom, format_laxword,
    format_term,
)
from .presentation import BoundaryMismatch, CDiagram, c_normal_form

DEFAULT_BUDGET = 10_000
DEFAULT_DEPTH = 8
DEFAULT_FRONTIER = 50_000


def default_budget() -> int:
    return int(os.environ.get("LAXCAT_BUDGET", DEFAULT_BUDGET))


class TerminationError(AssertionError):
    """An oriented step failed to decrease the termination measure."""


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class Diagram:
    dom: tuple
    slices: tuple

    @property
    def cod(self):
        b = self.dom
        for sl in self.slices:
            b = slicing.apply_slice(b, sl)
        return b

    def boundaries(self):
        return slicing.boundaries(self.dom, self.slices)

    def key(self):
        return (len(self.slices), self.dom, tuple((o, box.sort_key()) for o, box in self.slices))

    def __lt__(self, other):
        return self.key() < other.key()

    def to_term(self, flavor=None) -> Term:
        t = Id(self.dom, flavor=flavor)
        b = self.dom
        for off, box in self.slices:
            layer = box
            if off:
                layer = Tensor(Id(b[:off], flavor=flavor), layer)
            rest = b[off + box.n_in:]
            if rest:
                layer = Tensor(layer, Id(rest, flavor=flavor))
            t = layer if isinstance(t, Id) else Compose(layer, t)
            b = slicing.apply_slice(b, (off, box))
        return t

    def __str__(self):
        if not self.slices:
            return "id" + format_laxword(self.dom)
        return format_term(self.to_term())


def raw_slices(t: Term) -> list:
    if isinstance(t, Id):
        return []
    if isinstance(t, _Atom):
        return [(0, t)]
    if isinstance(t, Compose):
        return raw_slices(t.inner) + raw_slices(t.outer)
    if isinstance(t, Tensor):
        shift = len(t.left.cod)
        return raw_slices(t.left) + [(o + shift, a) for o, a in raw_slices(t.right)]
    raise TypeError(t)


def _strip(box):
    # flavor tags are bookkeeping for term construction, not part of the diagram
    if box.flavor is None:
        return box
    if isinstance(box, Env):
        return Env(box.body)
    if isinstance(box, L):
        return L(box.x, box.z)
    if isinstance(box, K):
        return K(box.x, box.z)
    return type(box)()


def to_sliced(t: Term) -> Diagram:
    """Interchange-canonical layering of ``t``."""
    raw = [(o, _strip(a)) for o, a in raw_slices(t)]
    return Diagram(t.dom, slicing.canonical(raw))


def canon(seq, dom, cp: Optional[ClassifierPresentation] = None) -> Diagram:
    if cp is not None and cp.base.relations:
        seq = [(o, Env(c_normal_form(cp.base, box.body))) if isinstance(box, Env) else (o, box)
               for o, box in seq]
    return Diagram(dom, slicing.canonical(seq))


# ---------------------------------------------------------------------------
# rules

def _tensor_body(f: CDiagram, h: CDiagram) -> CDiagram:
    shift = len(f.cod)
    return CDiagram(f.dom + h.dom, slicing.canonical(
        list(f.slices) + [(o + shift, g) for o, g in h.slices]))


def _whisker(f: CDiagram, left: tuple, right: tuple) -> CDiagram:
    return CDiagram(left + f.dom + right,
                    slicing.canonical([(o + len(left), g) for o, g in f.slices]))


def _then(f: CDiagram, g: CDiagram) -> CDiagram:
    return CDiagram(f.dom, slicing.canonical(list(f.slices) + list(g.slices)))


def _replace(seq, idxs, new):
    """Gather ``idxs`` into a block and substitute ``new(block)`` for it."""
    r = slicing.gather_all(seq, idxs)
    if r is None:
        return None
    cur, start = r
    block = cur[start:start + len(idxs)]
    repl = new(block)
    if repl is None:
        return None
    return cur[:start] + repl + cur[start + len(idxs):]


@dataclass(frozen=True)
class RewriteRule:
    """A rule schema anchored at one slice.

    ``involved(seq, j)`` returns the indices of the slices forming the
    left-hand side (anchor included) or ``None``; ``build(block)`` returns the
    replacement slices for the gathered left-hand side.
    """
    name: str
    orientation: str  # 'forward' or 'bidirectional'
    kinds: frozenset  # generators that must be available for the rule to exist
    involved: Callable = field(repr=False)
    build: Callable = field(repr=False)
    lhs: str = ""
    rhs: str = ""

    def apply(self, seq, j):
        idxs = self.involved(seq, j)
        if idxs is None:
            return None
        return _replace(seq, idxs, self.build)


def _prod(seq, j, port, kind=None, out_port=None):
    off = seq[j][0]
    r = slicing.producer(seq, j, off + port)
    if r is None:
        return None
    i, p = r
    if kind is not None and not isinstance(seq[i][1], kind):
        return None
    if out_port is not None and p != out_port:
        return None
    return i


def _cons(seq, j, port, kind=None, in_port=None):
    off = seq[j][0]
    r = slicing.consumer(seq, j, off + port)
    if r is None:
        return None
    i, p = r
    if kind is not None and not isinstance(seq[i][1], kind):
        return None
    if in_port is not None and p != in_port:
        return None
    return i


def _is(seq, j, kind):
    return isinstance(seq[j][1], kind)


# -- oriented rules

def _drop_env_inv(seq, j):
    if _is(seq, j, Env) and seq[j][1].body.is_identity():
        return (j,)
    return None


def _merge_env_inv(seq, j):
    if not _is(seq, j, Env):
        return None
    i = _prod(seq, j, 0, Env)
    return None if i is None else (i, j)


def _merge_env_build(block):
    (o, f), (_, g) = block
    return [(o, Env(_then(f.body, g.body)))]


def _nat_l_inv(seq, j):
    if not _is(seq, j, L):
        return None
    a, b = _prod(seq, j, 0, Env), _prod(seq, j, 1, Env)
    if a is None or b is None:
        return None
    return tuple(sorted((a, b, j)))


def _nat_l_build(block):
    envs = sorted((sl for sl in block if isinstance(sl[1], Env)), key=lambda s: s[0])
    lo = [sl for sl in block if isinstance(sl[1], L)][0]
    (_, f), (_, h) = envs
    o = lo[0]
    return [(o, L(f.body.dom, h.body.dom)), (o, Env(_tensor_body(f.body, h.body)))]


def _nat_l_side(port):
    def inv(seq, j):
        if not _is(seq, j, L):
            return None
        a = _prod(seq, j, port, Env)
        return None if a is None else tuple(sorted((a, j)))

    def build(block):
        (_, e), = [sl for sl in block if isinstance(sl[1], Env)]
        (o, lbox), = [sl for sl in block if isinstance(sl[1], L)]
        if port == 0:
            x, z = e.body.dom, lbox.z
            body = _whisker(e.body, (), z)
        else:
            x, z = lbox.x, e.body.dom
            body = _whisker(e.body, x, ())
        return [(o, L(x, z)), (o, Env(body))]
    return inv, build


def _sink_effects(seq):
    # slices with no outputs go as low as they can, so their offset is read
    # in the earliest frame
    for k in range(len(seq)):
        if seq[k][1].n_out:
            continue
        p = k
        while p > 0 and slicing.exchange(seq[p - 1], seq[p]) is not None:
            seq = slicing.bubble_down(seq, p, p - 1)
            p -= 1
    return seq


def peel(body: CDiagram, cut: int):
    """Split off the largest top part of ``body`` that factors at ``cut``.

    Returns ``(lower, left, right, lower_cut)`` where ``left`` and ``right``
    act on the two sides of ``lower.cod`` divided at ``lower_cut``.  A slice
    with no outputs sitting exactly on the cut goes to the left.
    """
    rest = _sink_effects(list(body.slices))
    left, right = [], []
    progress = True
    while progress and rest:
        progress = False
        for k in range(len(rest) - 1, -1, -1):
            moved = slicing.bubble_up(rest, k, len(rest) - 1)
            if moved is None:
                continue
            off, g = moved[-1]
            if off + g.n_out <= cut:
                left.insert(0, (off, g))
                cut += g.n_in - g.n_out
            elif off >= cut:
                right.insert(0, (off - cut, g))
            else:
                continue
            rest = moved[:-1]
            progress = True
            break
    lower = CDiagram(body.dom, slicing.canonical(rest))
    mid = lower.cod
    return (lower, CDiagram(mid[:cut], slicing.canonical(left)),
            CDiagram(mid[cut:], slicing.canonical(right)), cut)


def _lift_k_inv(seq, j):
    if not _is(seq, j, K):
        return None
    i = _prod(seq, j, 0, Env)
    if i is None:
        return None
    _, left, right, _ = peel(seq[i][1].body, len(seq[j][1].x))
    if not left.slices and not right.slices:
        return None
    return (i, j)


def _lift_k_build(block):
    (o, e), (_, kb) = block
    lower, left, right, cut = peel(e.body, len(kb.x))
    out = []
    if lower.slices:
        out.append((o, Env(lower)))
    out.append((o, K(lower.cod[:cut], lower.cod[cut:])))
    if left.slices:
        out.append((o, Env(left)))
    if right.slices:
        out.append((o + 1, Env(right)))
    return out


def _unit_l(port):
    def inv(seq, j):
        if not _is(seq, j, L):
            return None
        i = _prod(seq, j, port, J)
        return None if i is None else (i, j)
    return inv, lambda block: []


def _counit_k(port):
    def inv(seq, j):
        if not _is(seq, j, K):
            return None
        i = _cons(seq, j, port, Q)
        return None if i is None else (j, i)
    return inv, lambda block: []


# -- reversible moves

def _assoc_l_fwd_inv(seq, j):
    if not _is(seq, j, L):
        return None
    i = _prod(seq, j, 0, L, out_port=0)
    return None if i is None else (i, j)


def _assoc_l_fwd_build(block):
    (o, inner), (_, outer) = block
    x, z, w = inner.x, inner.z, outer.z
    return [(o + 1, L(z, w)), (o, L(x, z + w))]


def _assoc_l_bwd_inv(seq, j):
    if not _is(seq, j, L):
        return None
    i = _prod(seq, j, 1, L, out_port=0)
    return None if i is None else (i, j)


def _assoc_l_bwd_build(block):
    (oi, inner), (o, outer) = block
    x, z, w = outer.x, inner.x, inner.z
    return [(o, L(x, z)), (o, L(x + z, w))]


def _assoc_k_fwd_inv(seq, j):
    # (K(x,z) (x) id) . K(x.z, w)  ->  (id (x) K(z,w)) . K(x, z.w)
    if not _is(seq, j, K):
        return None
    i = _cons(seq, j, 0, K, in_port=0)
    return None if i is None else (j, i)


def _assoc_k_fwd_build(block):
    (o, outer), (_, inner) = block
    x, z, w = inner.x, inner.z, outer.z
    return [(o, K(x, z + w)), (o + 1, K(z, w))]


def _assoc_k_bwd_inv(seq, j):
    if not _is(seq, j, K):
        return None
    i = _cons(seq, j, 1, K, in_port=0)
    return None if i is None else (j, i)


def _assoc_k_bwd_build(block):
    (o, outer), (_, inner) = block
    x, z, w = outer.x, inner.x, inner.z
    return [(o, K(x + z, w)), (o, K(x, z))]


def _lk_inv(which):
    def inv(seq, j):
        if not _is(seq, j, L):
            return None
        i = _cons(seq, j, 0, K, in_port=0)
        if i is None:
            return None
        lb, kb = seq[j][1], seq[i][1]
        if which == 7 and len(kb.x) < len(lb.x):
            return None
        if which == 8 and len(lb.x) < len(kb.x):
            return None
        return (j, i)
    return inv


def _frob7_fwd_build(block):
    (o, lb), (_, kb) = block
    x = lb.x
    z = kb.x[len(x):]
    w = kb.z
    return [(o + 1, K(z, w)), (o, L(x, z))]


def _frob8_fwd_build(block):
    (o, lb), (_, kb) = block
    x = kb.x
    z = lb.x[len(x):]
    w = lb.z
    return [(o, K(x, z)), (o + 1, L(z, w))]


def _frob7_bwd_inv(seq, j):
    if not _is(seq, j, L):
        return None
    i = _prod(seq, j, 1, K, out_port=0)
    if i is None or seq[i][1].x != seq[j][1].z:
        return None
    return (i, j)


def _frob7_bwd_build(block):
    (_, kb), (o, lb) = block
    x, z, w = lb.x, lb.z, kb.z
    return [(o, L(x, z + w)), (o, K(x + z, w))]


def _frob8_bwd_inv(seq, j):
    if not _is(seq, j, L):
        return None
    i = _prod(seq, j, 0, K, out_port=1)
    if i is None or seq[i][1].z != seq[j][1].x:
        return None
    return (i, j)


def _frob8_bwd_build(block):
    (ok, kb), (_, lb) = block
    x, z, w = kb.x, kb.z, lb.z
    return [(ok, L(x + z, w)), (ok, K(x, z + w))]


def _rule(name, orient, kinds, inv, build, lhs="", rhs=""):
    return RewriteRule(name, orient, frozenset(kinds), inv, build, lhs, rhs)


_nl0, _nb0 = _nat_l_side(0)
_nl1, _nb1 = _nat_l_side(1)
_u4, _ub4 = _unit_l(1)
_u5, _ub5 = _unit_l(0)
_c4, _cb4 = _counit_k(1)
_c5, _cb5 = _counit_k(0)

ORIENTED = (
    _rule("0:drop-env", "forward", (), _drop_env_inv, lambda b: [], "env(id(x))", "id[x]"),
    _rule("1:merge-env", "forward", (), _merge_env_inv, _merge_env_build, "f;g", "env(f;g)"),
    _rule("4:unit-right-l", "forward", "LJ", _u4, _ub4, "(id[x]*j);l[x,1]", "id[x]"),
    _rule("5:unit-left-l", "forward", "LJ", _u5, _ub5, "(j*id[x]);l[1,x]", "id[x]"),
    _rule("4op:counit-right-k", "forward", "KQ", _c4, _cb4, "k[x,1];(id[x]*q)", "id[x]"),
    _rule("5op:counit-left-k", "forward", "KQ", _c5, _cb5, "k[1,x];(q*id[x])", "id[x]"),
    _rule("2:naturality-l", "forward", "L", _nat_l_inv, _nat_l_build, "(f*h);l[y,w]", "l[x,z];env(f*h)"),
    _rule("2:naturality-l-left", "forward", "L", _nl0, _nb0, "(f*id[z]);l[y,z]", "l[x,z];env(f*id(z))"),
    _rule("2:naturality-l-right", "forward", "L", _nl1, _nb1, "(id[x]*h);l[x,w]", "l[x,z];env(id(x)*h)"),
    _rule("2op:naturality-k", "forward", "K", _lift_k_inv, _lift_k_build,
          "env(b;(f*h));k[y,w]", "env(b);k[x,z];(f*h)"),
)

MOVES = (
    _rule("3:assoc-l>", "bidirectional", "L", _assoc_l_fwd_inv, _assoc_l_fwd_build,
          "(l[x,z]*id[w]);l[x.z,w]", "(id[x]*l[z,w]);l[x,z.w]"),
    _rule("3:assoc-l<", "bidirectional", "L", _assoc_l_bwd_inv, _assoc_l_bwd_build,
          "(id[x]*l[z,w]);l[x,z.w]", "(l[x,z]*id[w]);l[x.z,w]"),
    _rule("3op:assoc-k>", "bidirectional", "K", _assoc_k_fwd_inv, _assoc_k_fwd_build,
          "k[x.z,w];(k[x,z]*id[w])", "k[x,z.w];(id[x]*k[z,w])"),
    _rule("3op:assoc-k<", "bidirectional", "K", _assoc_k_bwd_inv, _assoc_k_bwd_build,
          "k[x,z.w];(id[x]*k[z,w])", "k[x.z,w];(k[x,z]*id[w])"),
    _rule("7:frobenius-left>", "bidirectional", "LK", _lk_inv(7), _frob7_fwd_build,
          "l[x,z.w];k[x.z,w]", "(id[x]*k[z,w]);(l[x,z]*id[w])"),
    _rule("7:frobenius-left<", "bidirectional", "LK", _frob7_bwd_inv, _frob7_bwd_build,
          "(id[x]*k[z,w]);(l[x,z]*id[w])", "l[x,z.w];k[x.z,w]"),
    _rule("8:frobenius-right>", "bidirectional", "LK", _lk_inv(8), _frob8_fwd_build,
          "l[x.z,w];k[x,z.w]", "(k[x,z]*id[w]);(id[x]*l[z,w])"),
    _rule("8:frobenius-right<", "bidirectional", "LK", _frob8_bwd_inv, _frob8_bwd_build,
          "(k[x,z]*id[w]);(id[x]*l[z,w])", "l[x.z,w];k[x,z.w]"),
)

_AVAILABLE = {"lax": set("LJ"), "oplax": set("KQ"), "frob": set("LJKQ")}
RULES = {r.name: r for r in ORIENTED + MOVES}


def rules_for(flavor: str) -> tuple:
    ok = _AVAILABLE[flavor]
    return tuple(r for r in ORIENTED + MOVES if r.kinds <= ok)


def oriented_for(flavor):
    return tuple(r for r in rules_for(flavor) if r.orientation == "forward")


def moves_for(flavor):
    return tuple(r for r in rules_for(flavor) if r.orientation == "bidirectional")


# ---------------------------------------------------------------------------
# termination measure


def _edges(seq):
    preds = [set() for _ in seq]
    for j, (off, box) in enumerate(seq):
        for port in range(box.n_in):
            r = slicing.producer(seq, j, off + port)
            if r is not None:
                preds[j].add(r[0])
    return preds


def measure(d: Diagram) -> tuple:
    """(envelope weight, units and counits, slices).

    An envelope whose body has ``n`` slices and which has ``c`` merges and
    splits not below it weighs ``(n + 1) * 3**c``.  Envelopes only ever move
    toward the codomain, past merges by fusing and past splits by factoring,
    and each such move lowers the total weight.
    """
    seq = d.slices
    n = len(seq)
    preds = _edges(seq)
    below = [0] * n  # bitmask of ancestors
    for j in range(n):
        m = 0
        for i in preds[j]:
            m |= below[i] | (1 << i)
        below[j] = m
    lk = sum(1 << i for i, (_, b) in enumerate(seq) if isinstance(b, (L, K)))
    total = bin(lk).count("1")
    weight = sum((len(b.body.slices) + 1) * 3 ** (total - bin(below[i] & lk).count("1"))
                 for i, (_, b) in enumerate(seq) if isinstance(b, Env))
    jq = sum(1 for _, b in seq if isinstance(b, (J, Q)))
    return (weight, jq, n)


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class Step:
    rule: str
    slice: int
    offset: int

    def __str__(self):
        return f"{self.rule} @ slice {self.slice}, offset {self.offset}"

    @classmethod
    def parse(cls, text: str) -> "Step":
        """Inverse of ``str``: ``'4:unit-right-l @ slice 1, offset 0'``."""
        m = re.fullmatch(r"\s*(\S+) @ slice (\d+), offset (\d+)\s*", text)
        if not m:
            raise ValueError(f"not a step: {text!r}")
        return cls(m.group(1), int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True)
class NormalizeResult:
    diagram: Diagram
    steps: tuple
    complete: bool  # False when the budget ran out

    @property
    def normal(self):
        return self.complete


def apply_step(d: Diagram, step: Step, cp: ClassifierPresentation) -> Diagram:
    rule = RULES[step.rule]
    seq = list(d.slices)
    if step.slice >= len(seq) or seq[step.slice][0] != step.offset:
        raise ValueError(f"step {step} does not fit the diagram")
    new = rule.apply(seq, step.slice)
    if new is None:
        raise ValueError(f"rule {step.rule} does not apply at slice {step.slice}")
    return canon(new, d.dom, cp)


def find_redex(d: Diagram, rules) -> Optional[tuple]:
    seq = list(d.slices)
    for j in range(len(seq)):
        for rule in rules:
            new = rule.apply(seq, j)
            if new is not None:
                return rule, j, new
    return None


def normalize(d: Diagram, cp: ClassifierPresentation, budget: Optional[int] = None,
              check_measure: bool = True) -> NormalizeResult:
    """Apply oriented rules until none matches or the budget is spent."""
    budget = default_budget() if budget is None else budget
    rules = oriented_for(cp.flavor)
    d = canon(list(d.slices), d.dom, cp)
    steps = []
    mu = measure(d) if check_measure else None
    while True:
        if len(steps) >= budget:
            return NormalizeResult(d, tuple(steps), False)
        r = find_redex(d, rules)
        if r is None:
            return NormalizeResult(d, tuple(steps), True)
        rule, j, new = r
        steps.append(Step(rule.name, j, d.slices[j][0]))
        d = canon(new, d.dom, cp)
        if check_measure:
            nu = measure(d)
            if not nu < mu:
                raise TerminationError(f"{rule.name} did not decrease the measure: {mu} -> {nu}")
            mu = nu


def replay(cp: ClassifierPresentation, d: Diagram, steps) -> Diagram:
    d = canon(list(d.slices), d.dom, cp)
    for st in steps:
        d = apply_step(d, st, cp)
    return d


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Trace:
    lhs_steps: tuple = ()
    rhs_steps: tuple = ()

    def __len__(self):
        return len(self.lhs_steps) + len(self.rhs_steps)

    def to_text(self) -> str:
        lines, n = [], 0
        for side, steps in (("lhs", self.lhs_steps), ("rhs", self.rhs_steps)):
            lines.append(f"# {side}")
            for st in steps:
                n += 1
                lines.append(f"step {n}: {st}")
        return "\n".join(lines)

    def reversed(self):
        return Trace(self.rhs_steps, self.lhs_steps)


@dataclass(frozen=True)
class Equal:
    trace: object = ()
    kind = "Equal"

    def to_text(self):
        body = self.trace.to_text() if isinstance(self.trace, Trace) else ""
        n = len(self.trace)
        return f"verdict: Equal\nsteps: {n}\n" + (body + "\n" if body else "")


@dataclass(frozen=True)
class Distinct:
    model: str
    lhs_value: object = field(repr=False)
    rhs_value: object = field(repr=False)
    kind = "Distinct"

    def to_text(self):
        from .matrix import format_matrix
        return (f"verdict: Distinct\nmodel: {self.model}\n"
                f"lhs_value:\n{format_matrix(self.lhs_value)}\n"
                f"rhs_value:\n{format_matrix(self.rhs_value)}\n")


@dataclass(frozen=True)
class Unknown:
    report: dict = field(default_factory=dict)
    kind = "Unknown"

    def to_text(self):
        return "verdict: Unknown\n" + "".join(f"{k}: {v}\n" for k, v in sorted(self.report.items()))


# ---------------------------------------------------------------------------
# equality


def move_sites(d: Diagram, moves):
    seq = list(d.slices)
    for j in range(len(seq)):
        for rule in moves:
            new = rule.apply(seq, j)
            if new is not None:
                yield Step(rule.name, j, seq[j][0]), new


def search(cp, a: NormalizeResult, b: NormalizeResult, depth=DEFAULT_DEPTH,
           frontier_cap=DEFAULT_FRONTIER, budget=None):
    """Bidirectional breadth-first search over normal forms.

    Returns ``(lhs_path, rhs_path)`` of steps meeting in a common diagram, or
    ``None`` with search statistics.
    """
    moves = moves_for(cp.flavor)
    seen = [{a.diagram: a.steps}, {b.diagram: b.steps}]
    frontier = [[a.diagram], [b.diagram]]
    levels = [0, 0]
    stats = {"visited": 2, "depth_reached": 0}
    while levels[0] + levels[1] < depth:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        if not frontier[side]:
            side = 1 - side
            if not frontier[side]:
                break
        nxt = []
        for d in sorted(frontier[side]):
            base = seen[side][d]
            for step, new in move_sites(d, moves):
                res = normalize(canon(new, d.dom, cp), cp, budget)
                n = res.diagram
                if n in seen[side]:
                    continue
                path = base + (step,) + res.steps
                seen[side][n] = path
                nxt.append(n)
                if n in seen[1 - side]:
                    other = seen[1 - side][n]
                    return (path, other) if side == 0 else (other, path), stats
                stats["visited"] += 1
                if stats["visited"] > frontier_cap:
                    stats["frontier_cap_hit"] = True
                    return None, stats
        frontier[side] = nxt
        levels[side] += 1
        stats["depth_reached"] = levels[0] + levels[1]
    return None, stats


def check_equal(cp: ClassifierPresentation, s: Term, t: Term, budget: Optional[int] = None,
                depth: int = DEFAULT_DEPTH, frontier_cap: int = DEFAULT_FRONTIER,
                models=None):
    """Three-valued equality of two parallel classifier morphisms.

    ``models`` defaults to :func:`laxcat.model.default_models` for ``cp``.
    """
    if (s.dom, s.cod) != (t.dom, t.cod):
        raise BoundaryMismatch(
            f"check_equal needs parallel morphisms: {format_laxword(s.dom)} -> {format_laxword(s.cod)}"
            f" vs {format_laxword(t.dom)} -> {format_laxword(t.cod)}")
    ds = to_sliced(s) if isinstance(s, Term) else s
    dt = to_sliced(t) if isinstance(t, Term) else t
    if ds == dt:
        return Equal(Trace())
    budget = default_budget() if budget is None else budget
    a = normalize(ds, cp, budget)
    b = normalize(dt, cp, budget)
    if a.diagram == b.diagram:
        return Equal(Trace(a.steps, b.steps))
    if models is None:
        from .model import default_models
        models = default_models(cp)
    if models:
        from .matrix import mat_eq
        from .model import evaluate_diagram
        for m in models:
            va, vb = evaluate_diagram(m, a.diagram), evaluate_diagram(m, b.diagram)
            if not mat_eq(va, vb):
                return Distinct(m.name, va, vb)
    found, stats = search(cp, a, b, depth, frontier_cap, budget)
    if found is not None:
        return Equal(Trace(*found))
    stats.update(budget=budget, depth=depth, frontier_cap=frontier_cap,
                 lhs_normal=str(a.diagram), rhs_normal=str(b.diagram),
                 lhs_complete=a.complete, rhs_complete=b.complete, models=len(models))
    return Unknown(stats)


def verify_trace(cp, s: Term, t: Term, verdict) -> bool:
    """Replay an Equal trace: both sides must reach the same diagram."""
    tr = verdict.trace
    if not isinstance(tr, Trace):
        return to_sliced(s) == to_sliced(t)
    return replay(cp, to_sliced(s), tr.lhs_steps) == replay(cp, to_sliced(t), tr.rhs_steps)


# ---------------------------------------------------------------------------
# slice placements and critical pairs


def placements(cp: ClassifierPresentation, boundary: tuple, max_letters: int,
               identity_envelopes: bool = False):
    """Every single-generator slice that fits on top of ``boundary``."""
    avail = _AVAILABLE[cp.flavor]
    letters = sum(len(s) for s in boundary)
    out = []
    n = len(boundary)
    if "L" in avail:
        for o in range(n - 1):
            out.append((o, L(boundary[o], boundary[o + 1])))
    if "K" in avail:
        for o, seg in enumerate(boundary):
            for cut in range(len(seg) + 1):
                out.append((o, K(seg[:cut], seg[cut:])))
    if "J" in avail:
        for o in range(n + 1):
            out.append((o, J()))
    if "Q" in avail:
        for o, seg in enumerate(boundary):
            if seg == ():
                out.append((o, Q()))
    for o, seg in enumerate(boundary):
        if identity_envelopes:
            out.append((o, Env(CDiagram(seg, ()))))
        for g in cp.base.morphism_generators:
            k = len(g.dom)
            for pos in range(len(seg) - k + 1):
                if seg[pos:pos + k] != g.dom:
                    continue
                if letters - k + len(g.cod) > max_letters:
                    continue
                body = CDiagram(seg, ((pos, g),))
                out.append((o, Env(body)))
    return out


def _laxwords(cp, max_letters, max_segments):
    words = cp.base.words(max_letters)
    out = [()]
    layer = [()]
    for _ in range(max_segments):
        layer = [lw + (w,) for lw in layer for w in words
                 if sum(map(len, lw)) + len(w) <= max_letters]
        out.extend(layer)
    return out


@dataclass(frozen=True)
class CriticalPair:
    peak: Diagram
    rule_a: str
    rule_b: str
    joined: bool
    steps: int


def redexes(d: Diagram, rules):
    seq = list(d.slices)
    for j in range(len(seq)):
        for rule in rules:
            idxs = rule.involved(seq, j)
            if idxs is None:
                continue
            new = _replace(seq, idxs, rule.build)
            if new is not None:
                yield rule, j, frozenset(idxs), new


def critical_pairs(cp: ClassifierPresentation, max_letters: int = 3, max_slices: int = 3,
                   join_steps: int = 4):
    """Enumerate overlapping oriented redexes on small diagrams and join them."""
    rules = oriented_for(cp.flavor)
    peaks = set()
    for dom in _laxwords(cp, max_letters, 2):
        layer = [Diagram(dom, ())]
        for _ in range(max_slices):
            nxt = []
            for d in layer:
                top = d.cod
                for sl in placements(cp, top, max_letters, identity_envelopes=True):
                    nd = Diagram(dom, slicing.canonical(list(d.slices) + [sl]))
                    nxt.append(nd)
                    if len(nd.slices) >= 2:
                        peaks.add(nd)
            layer = nxt
    out = []
    for peak in sorted(peaks):
        found = list(redexes(peak, rules))
        for a in range(len(found)):
            for b in range(a + 1, len(found)):
                ra, ja, ia, na = found[a]
                rb, jb, ib, nb = found[b]
                if not ia & ib:
                    continue
                da = normalize(canon(na, peak.dom, cp), cp, join_steps)
                db = normalize(canon(nb, peak.dom, cp), cp, join_steps)
                joined = da.complete and db.complete and da.diagram == db.diagram
                out.append(CriticalPair(peak, ra.name, rb.name, joined,
                                        max(len(da.steps), len(db.steps))))
    return out
