"""Finitely presented strict monoidal categories with a free object monoid.

Objects are words over declared object generators (``Word`` is a tuple of
names, ``()`` is the unit).  Morphisms are typed expression trees (``CTerm``)
over the declared morphism generators.  Composition is written in diagrammatic
order in the text syntax: ``f;g`` means *first f, then g*.  The classical
order is also accepted as ``g∘f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from . import slicing

Word = tuple

RESERVED = frozenset({"objects", "morphisms", "relations", "id", "l", "k", "j", "q", "env"})


class LaxcatError(Exception):
    """Base class for errors raised by this package."""


class DSLSyntaxError(LaxcatError):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class UndeclaredName(LaxcatError):
    pass


class BoundaryMismatch(LaxcatError, TypeError):
    def __init__(self, msg, path=()):
        where = "/".join(path) or "<root>"
        super().__init__(f"{msg} (at {where})")
        self.path = tuple(path)
        self.detail = msg

    def located(self, line, col):
        return BoundaryMismatch(f"line {line}, column {col}: {self.detail}", self.path)


def word(text) -> Word:
    """``'x.y'`` -> ``('x', 'y')``; ``'1'`` or ``''`` -> ``()``."""
    if isinstance(text, tuple):
        return text
    text = text.strip()
    if text in ("", "1"):
        return ()
    return tuple(part.strip() for part in text.split("."))


def format_word(w: Word) -> str:
    return ".".join(w) if w else "1"


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class CTerm:
    def __mul__(self, other):
        return CTensor(self, other)

    def then(self, other):
        return CCompose(other, self)


@dataclass(frozen=True)
class CId(CTerm):
    word: Word

    @property
    def dom(self):
        return self.word

    @property
    def cod(self):
        return self.word


@dataclass(frozen=True)
class CGen(CTerm):
    name: str
    dom: Word
    cod: Word

    # box protocol for slicing
    @property
    def inputs(self):
        return self.dom

    @property
    def outputs(self):
        return self.cod

    @property
    def n_in(self):
        return len(self.dom)

    @property
    def n_out(self):
        return len(self.cod)

    def sort_key(self):
        return (self.name, self.dom, self.cod)


@dataclass(frozen=True)
class CTensor(CTerm):
    left: CTerm
    right: CTerm
    dom: Word = field(init=False, compare=False, repr=False)
    cod: Word = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dom", self.left.dom + self.right.dom)
        object.__setattr__(self, "cod", self.left.cod + self.right.cod)


@dataclass(frozen=True)
class CCompose(CTerm):
    """``outer ∘ inner``."""
    outer: CTerm
    inner: CTerm
    dom: Word = field(init=False, compare=False, repr=False)
    cod: Word = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.inner.cod != self.outer.dom:
            raise BoundaryMismatch(
                f"cannot compose: {format_word(self.inner.cod)} != {format_word(self.outer.dom)}")
        object.__setattr__(self, "dom", self.inner.dom)
        object.__setattr__(self, "cod", self.outer.cod)


@dataclass(frozen=True)
class Relation:
    lhs: CTerm
    rhs: CTerm

    def __post_init__(self):
        if (self.lhs.dom, self.lhs.cod) != (self.rhs.dom, self.rhs.cod):
            raise BoundaryMismatch(
                "relation sides differ in type: "
                f"{format_word(self.lhs.dom)} -> {format_word(self.lhs.cod)} vs "
                f"{format_word(self.rhs.dom)} -> {format_word(self.rhs.cod)}")


@dataclass(frozen=True)
class Presentation:
    object_generators: tuple = ()
    morphism_generators: tuple = ()  # of CGen, in declaration order
    relations: tuple = ()

    def __post_init__(self):
        names = list(self.object_generators) + [g.name for g in self.morphism_generators]
        if len(set(names)) != len(names):
            raise LaxcatError("generator names must be unique")
        for n in names:
            if n in RESERVED or not _NAME.fullmatch(n):
                raise LaxcatError(f"illegal generator name {n!r}")
        objs = set(self.object_generators)
        for g in self.morphism_generators:
            for letter in g.dom + g.cod:
                if letter not in objs:
                    raise UndeclaredName(f"object {letter!r} used by {g.name} is not declared")
        for r in self.relations:
            infer_type(self, r.lhs)
            infer_type(self, r.rhs)

    def generator(self, name) -> CGen:
        for g in self.morphism_generators:
            if g.name == name:
                return g
        raise UndeclaredName(f"undeclared morphism generator {name!r}")

    def words(self, max_len: int):
        """All words of length <= max_len, shortest first."""
        out = [()]
        layer = [()]
        for _ in range(max_len):
            layer = [w + (x,) for w in layer for x in self.object_generators]
            out.extend(layer)
        return out

    def __str__(self):
        return print_presentation(self)


def infer_type(p: Presentation, t: CTerm, path=()) -> tuple:
    """Return ``(dom, cod)`` of ``t`` after checking every generator against ``p``."""
    if isinstance(t, CId):
        for letter in t.word:
            if letter not in p.object_generators:
                raise UndeclaredName(f"undeclared object {letter!r} at {'/'.join(path) or '<root>'}")
        return t.word, t.word
    if isinstance(t, CGen):
        g = p.generator(t.name)
        if (g.dom, g.cod) != (t.dom, t.cod):
            raise BoundaryMismatch(f"generator {t.name} used with wrong type", path)
        return g.dom, g.cod
    if isinstance(t, CTensor):
        d1, c1 = infer_type(p, t.left, path + ("tensor.left",))
        d2, c2 = infer_type(p, t.right, path + ("tensor.right",))
        return d1 + d2, c1 + c2
    if isinstance(t, CCompose):
        d1, c1 = infer_type(p, t.inner, path + ("compose.inner",))
        d2, c2 = infer_type(p, t.outer, path + ("compose.outer",))
        if c1 != d2:
            raise BoundaryMismatch(f"{format_word(c1)} != {format_word(d2)}", path)
        return d1, c2
    raise TypeError(f"not a C-term: {t!r}")


def format_cterm(t: CTerm) -> str:
    return _fmt(t, 0)


def _fmt(t, prec):
    if isinstance(t, CId):
        return f"id({format_word(t.word)})"
    if isinstance(t, CGen):
        return t.name
    if isinstance(t, CTensor):
        s = f"{_fmt(t.left, 1)}*{_fmt(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, CCompose):
        s = f"{_fmt(t.inner, 0)};{_fmt(t.outer, 1)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(t)


def print_presentation(p: Presentation) -> str:
    lines = ["objects: " + ", ".join(p.object_generators) + ";"]
    gens = ", ".join(f"{g.name}: {format_word(g.dom)} -> {format_word(g.cod)}"
                     for g in p.morphism_generators)
    lines.append("morphisms: " + gens + ";")
    if p.relations:
        rels = ", ".join(f"{format_cterm(r.lhs)} = {format_cterm(r.rhs)}" for r in p.relations)
        lines.append("relations: " + rels + ";")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tokenizer and parser

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<name>[A-Za-z_][A-Za-z0-9_]*) | (?P<one>1)
  | (?P<sym>[:;,=()*.\[\]{}∘])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class TokenStream:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def at(self, text):
        return self.peek().text == text and self.peek().kind != "eof"

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise DSLSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def error(self, msg):
        t = self.peek()
        return DSLSyntaxError(msg, t.line, t.col)


def parse_word_tokens(ts: TokenStream) -> Word:
    t = ts.peek()
    if t.kind == "one":
        ts.next()
        return ()
    if t.kind != "name":
        raise ts.error(f"expected a word, found {t.text or 'end of input'!r}")
    letters = [ts.next().text]
    while ts.at(".") and ts.peek(1).kind == "name":
        ts.next()
        letters.append(ts.next().text)
    return tuple(letters)


def parse_cterm_tokens(ts: TokenStream, p: Presentation) -> CTerm:
    return _parse_comp(ts, p)


def _parse_comp(ts, p):
    t = _parse_tensor(ts, p)
    while ts.at(";") or ts.at("∘"):
        # a ';' followed by a section keyword, ',' or the end closes a statement
        if ts.at(";") and (ts.peek(1).kind == "eof" or ts.peek(1).text in ("objects", "morphisms", "relations", ",", "=")):
            break
        op = ts.next()
        rhs = _parse_tensor(ts, p)
        try:
            t = CCompose(rhs, t) if op.text == ";" else CCompose(t, rhs)
        except BoundaryMismatch as e:
            raise e.located(op.line, op.col) from None
    return t


def _parse_tensor(ts, p):
    t = _parse_atom(ts, p)
    while ts.at("*"):
        ts.next()
        t = CTensor(t, _parse_atom(ts, p))
    return t


def _parse_atom(ts, p):
    tok = ts.peek()
    if tok.text == "(":
        ts.next()
        t = _parse_comp(ts, p)
        ts.expect(")")
        return t
    if tok.text == "id":
        ts.next()
        ts.expect("(")
        w = parse_word_tokens(ts)
        ts.expect(")")
        for letter in w:
            if letter not in p.object_generators:
                raise UndeclaredName(f"line {tok.line}: undeclared object {letter!r}")
        return CId(w)
    if tok.kind == "name":
        ts.next()
        try:
            return p.generator(tok.text)
        except UndeclaredName:
            raise UndeclaredName(
                f"line {tok.line}, column {tok.col}: undeclared morphism generator {tok.text!r}") from None
    raise ts.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_cterm(text: str, p: Presentation) -> CTerm:
    ts = TokenStream(tokenize(text))
    t = _parse_comp(ts, p)
    if ts.peek().kind != "eof":
        raise ts.error(f"unexpected {ts.peek().text!r}")
    return t


def parse_presentation(text: str) -> Presentation:
    """Parse the ``.mcat`` DSL.

    >>> p = parse_presentation("objects: x; morphisms: f: x -> x;")
    >>> p.generator("f").dom
    ('x',)
    """
    ts = TokenStream(tokenize(text))
    objects, gens, relations = [], [], []
    seen = set()
    while ts.peek().kind != "eof":
        kw = ts.next()
        if kw.text not in ("objects", "morphisms", "relations"):
            raise DSLSyntaxError(f"expected a section keyword, found {kw.text!r}", kw.line, kw.col)
        if kw.text in seen:
            raise DSLSyntaxError(f"duplicate section {kw.text!r}", kw.line, kw.col)
        seen.add(kw.text)
        ts.expect(":")
        if kw.text == "objects":
            while not ts.at(";"):
                t = ts.next()
                if t.kind != "name":
                    raise DSLSyntaxError(f"expected an object name, found {t.text!r}", t.line, t.col)
                objects.append(t.text)
                if not ts.at(";"):
                    ts.expect(",")
        elif kw.text == "morphisms":
            while not ts.at(";"):
                t = ts.next()
                if t.kind != "name":
                    raise DSLSyntaxError(f"expected a generator name, found {t.text!r}", t.line, t.col)
                ts.expect(":")
                d = parse_word_tokens(ts)
                ts.expect("->")
                c = parse_word_tokens(ts)
                gens.append(CGen(t.text, d, c))
                if not ts.at(";"):
                    ts.expect(",")
        else:
            base = _checked(objects, gens, (), kw)
            while not ts.at(";"):
                start = ts.peek()
                lhs = _parse_comp(ts, base)
                ts.expect("=")
                rhs = _parse_comp(ts, base)
                try:
                    relations.append(Relation(lhs, rhs))
                except BoundaryMismatch as e:
                    raise e.located(start.line, start.col) from None
                if not ts.at(";"):
                    ts.expect(",")
        ts.expect(";")
    return _checked(objects, gens, relations, None)


def _checked(objects, gens, relations, kw):
    try:
        return Presentation(tuple(objects), tuple(gens), tuple(relations))
    except UndeclaredName:
        raise
    except LaxcatError as e:
        line, col = (kw.line, kw.col) if kw else (0, 0)
        raise DSLSyntaxError(str(e), line, col) from None


# ---------------------------------------------------------------------------
# string diagrams of C


@dataclass(frozen=True)
class CDiagram:
    """Interchange-canonical sliced form of a C-morphism."""
    dom: Word
    slices: tuple

    @property
    def cod(self):
        b = self.dom
        for sl in self.slices:
            b = slicing.apply_slice(b, sl)
        return b

    def key(self):
        return (len(self.slices), self.dom, tuple((o, g.sort_key()) for o, g in self.slices))

    def is_identity(self):
        return not self.slices

    def to_term(self) -> CTerm:
        t = CId(self.dom)
        b = self.dom
        for off, g in self.slices:
            layer = g
            if off:
                layer = CTensor(CId(b[:off]), layer)
            rest = b[off + g.n_in:]
            if rest:
                layer = CTensor(layer, CId(rest))
            t = layer if isinstance(t, CId) else CCompose(layer, t)
            b = slicing.apply_slice(b, (off, g))
        return t


def raw_slices(t: CTerm) -> list:
    if isinstance(t, CId):
        return []
    if isinstance(t, CGen):
        return [(0, t)]
    if isinstance(t, CCompose):
        return raw_slices(t.inner) + raw_slices(t.outer)
    if isinstance(t, CTensor):
        shift = len(t.left.cod)
        return raw_slices(t.left) + [(o + shift, g) for o, g in raw_slices(t.right)]
    raise TypeError(t)


def c_sliced(t: CTerm) -> CDiagram:
    return CDiagram(t.dom, slicing.canonical(raw_slices(t)))


def _oriented(p: Presentation):
    rules = []
    for r in p.relations:
        lhs, rhs = c_sliced(r.lhs), c_sliced(r.rhs)
        if lhs.is_identity():
            lhs, rhs = rhs, lhs
        if not lhs.is_identity():
            rules.append((lhs, rhs))
    return rules


def match_block(seq, dom, pattern: CDiagram):
    """Find ``pattern`` as a (gatherable) block of ``seq``.

    Returns ``(new_seq, start, shift)`` with the matched slices at
    ``new_seq[start:start+len(pattern.slices)]`` or ``None``.
    """
    pat = pattern.slices
    for i, (o, box) in enumerate(seq):
        if box != pat[0][1]:
            continue
        d = o - pat[0][0]
        if d < 0:
            continue
        cur, start = list(seq), i
        ok = True
        for t in range(1, len(pat)):
            po, pbox = pat[t]
            end = start + t - 1
            found = False
            for k in range(end + 1, len(cur)):
                if cur[k][1] != pbox:
                    continue
                r = slicing.gather(cur, start, end, k)
                if r is None:
                    continue
                cand, cstart = r
                if cand[cstart + t][0] == po + d:
                    cur, start, found = cand, cstart, True
                    break
            if not found:
                ok = False
                break
        if not ok:
            continue
        below = slicing.boundaries(dom, cur[:start])[-1]
        if tuple(below[d:d + len(pattern.dom)]) != tuple(pattern.dom):
            continue
        return cur, start, d
    return None


@lru_cache(maxsize=65536)
def c_normalize(p: Presentation, d: CDiagram, budget: int = 10_000) -> tuple:
    """Rewrite with the relations of ``p`` (oriented as supplied).

    Returns ``(normal_diagram, complete)``; ``complete`` is False when the
    budget ran out first.
    """
    rules = _oriented(p)
    seq = list(d.slices)
    steps = 0
    while True:
        for lhs, rhs in rules:
            m = match_block(seq, d.dom, lhs)
            if m is not None:
                cur, start, shift = m
                new = [(o + shift, g) for o, g in rhs.slices]
                seq = list(slicing.canonical(cur[:start] + new + cur[start + len(lhs.slices):]))
                steps += 1
                break
        else:
            return CDiagram(d.dom, tuple(seq)), True
        if steps >= budget:
            return CDiagram(d.dom, tuple(seq)), False


def c_normal_form(p: Presentation, t) -> CDiagram:
    d = t if isinstance(t, CDiagram) else c_sliced(t)
    return c_normalize(p, d)[0]


def c_equal(p: Presentation, s: CTerm, t: CTerm, models: Iterable = (), budget: int = 10_000):
    """Semi-decide equality of two parallel C-morphisms.

    ``models`` are objects with a ``base_image(CTerm)`` method (for instance a
    :class:`laxcat.model.ModelFunctor`); a model separating the two terms
    yields ``Distinct``.
    """
    from .rewrite import Distinct, Equal, Unknown

    if (s.dom, s.cod) != (t.dom, t.cod):
        raise BoundaryMismatch("c_equal needs parallel morphisms")
    ns, done_s = c_normalize(p, c_sliced(s), budget)
    nt, done_t = c_normalize(p, c_sliced(t), budget)
    if ns == nt:
        return Equal(())
    from .matrix import mat_eq
    for i, m in enumerate(models):
        a, b = m.base_image(s), m.base_image(t)
        if not mat_eq(a, b):
            return Distinct(getattr(m, "name", f"model{i}"), a, b)
    return Unknown({"normalized": done_s and done_t, "budget": budget})
