"""Presentations of the lax, oplax and Frobenius classifiers of a presented C.

Objects are lists of *segments*; a segment is a word of C drawn inside one
envelope.  ``((), )`` is a single envelope around the unit of C, while ``()``
is the empty list.  Morphisms are terms built from

* ``Env(t)``  a C-morphism inside one envelope,
* ``L(x, z)`` merging envelopes ``[x][z] -> [x.z]``,
* ``J()``     creating an empty envelope ``{} -> [1]``,
* ``K(x, z)`` splitting ``[x.z] -> [x][z]``,
* ``Q()``     closing an empty envelope ``[1] -> {}``,

together with ``Id``, ``Tensor`` and ``Compose``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .presentation import (
    BoundaryMismatch, CDiagram, CGen, CId, CTensor, CCompose, CTerm,
    LaxcatError, Presentation, TokenStream, UndeclaredName, c_sliced, format_cterm, format_word,
    infer_type, parse_cterm_tokens, parse_word_tokens, print_presentation, tokenize,
)

LaxWord = tuple
FLAVORS = ("lax", "oplax", "frob")
_ALLOWED = {"lax": {"L", "J"}, "oplax": {"K", "Q"}, "frob": {"L", "J", "K", "Q"}}


class FlavorError(LaxcatError):
    pass


def format_laxword(lw: LaxWord) -> str:
    if not lw:
        return "{}"
    return "".join(f"[{format_word(seg)}]" for seg in lw)


def flatten(lw: LaxWord) -> tuple:
    return tuple(letter for seg in lw for letter in seg)


def _join(a, b):
    fl = a.flavor or b.flavor
    if a.flavor and b.flavor and a.flavor != b.flavor:
        raise FlavorError(f"cannot combine {a.flavor} and {b.flavor} terms")
    kinds = a.kinds | b.kinds
    _gate(fl, kinds)
    return fl, kinds


def _gate(flavor, kinds):
    if flavor is not None and not kinds <= _ALLOWED[flavor]:
        bad = ", ".join(sorted(kinds - _ALLOWED[flavor]))
        raise FlavorError(f"generator(s) {bad} not available in the {flavor} classifier")


class Term:
    """Morphism of a classifier.  Subclasses are frozen dataclasses."""

    flavor: Optional[str]
    kinds: frozenset

    def __matmul__(self, other):
        return Compose(self, other)

    def __mul__(self, other):
        return Tensor(self, other)

    def then(self, other):
        return Compose(other, self)

    def __str__(self):
        return format_term(self)


class _Atom(Term):
    """Generator boxes; they double as slice boxes of a Diagram."""
    kind = ""

    @property
    def kinds(self):
        return frozenset({self.kind}) if self.kind in ("L", "J", "K", "Q") else frozenset()

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


@dataclass(frozen=True)
class Env(_Atom):
    """A C-morphism inside a single envelope."""
    body: CDiagram
    flavor: Optional[str] = field(default=None, compare=False)
    kind = "E"

    def __post_init__(self):
        if isinstance(self.body, CTerm):
            object.__setattr__(self, "body", c_sliced(self.body))

    @property
    def dom(self):
        return (self.body.dom,)

    @property
    def cod(self):
        return (self.body.cod,)

    def sort_key(self):
        return ("E",) + self.body.key()


@dataclass(frozen=True)
class L(_Atom):
    x: tuple
    z: tuple
    flavor: Optional[str] = field(default=None, compare=False)
    kind = "L"

    def __post_init__(self):
        _gate(self.flavor, self.kinds)

    @property
    def dom(self):
        return (self.x, self.z)

    @property
    def cod(self):
        return (self.x + self.z,)

    def sort_key(self):
        return ("L", self.x, self.z)


@dataclass(frozen=True)
class K(_Atom):
    x: tuple
    z: tuple
    flavor: Optional[str] = field(default=None, compare=False)
    kind = "K"

    def __post_init__(self):
        _gate(self.flavor, self.kinds)

    @property
    def dom(self):
        return (self.x + self.z,)

    @property
    def cod(self):
        return (self.x, self.z)

    def sort_key(self):
        return ("K", self.x, self.z)


@dataclass(frozen=True)
class J(_Atom):
    flavor: Optional[str] = field(default=None, compare=False)
    kind = "J"

    def __post_init__(self):
        _gate(self.flavor, self.kinds)

    dom = ()
    cod = ((),)

    def sort_key(self):
        return ("J",)


@dataclass(frozen=True)
class Q(_Atom):
    flavor: Optional[str] = field(default=None, compare=False)
    kind = "Q"

    def __post_init__(self):
        _gate(self.flavor, self.kinds)

    dom = ((),)
    cod = ()

    def sort_key(self):
        return ("Q",)


@dataclass(frozen=True)
class Id(Term):
    word: LaxWord
    flavor: Optional[str] = field(default=None, compare=False)
    kinds = frozenset()

    @property
    def dom(self):
        return self.word

    @property
    def cod(self):
        return self.word


@dataclass(frozen=True)
class Tensor(Term):
    left: Term
    right: Term
    dom: LaxWord = field(init=False, compare=False, repr=False)
    cod: LaxWord = field(init=False, compare=False, repr=False)
    flavor: Optional[str] = field(init=False, compare=False, repr=False)
    kinds: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fl, kinds = _join(self.left, self.right)
        object.__setattr__(self, "flavor", fl)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "dom", self.left.dom + self.right.dom)
        object.__setattr__(self, "cod", self.left.cod + self.right.cod)


@dataclass(frozen=True)
class Compose(Term):
    """``outer ∘ inner``."""
    outer: Term
    inner: Term
    dom: LaxWord = field(init=False, compare=False, repr=False)
    cod: LaxWord = field(init=False, compare=False, repr=False)
    flavor: Optional[str] = field(init=False, compare=False, repr=False)
    kinds: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.inner.cod != self.outer.dom:
            raise BoundaryMismatch(
                f"cannot compose: {format_laxword(self.inner.cod)} != {format_laxword(self.outer.dom)}")
        fl, kinds = _join(self.outer, self.inner)
        object.__setattr__(self, "flavor", fl)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "dom", self.inner.dom)
        object.__setattr__(self, "cod", self.outer.cod)


def seq(*terms: Term) -> Term:
    """Diagrammatic composite: ``seq(f, g, h)`` is h ∘ g ∘ f."""
    t = terms[0]
    for u in terms[1:]:
        t = Compose(u, t)
    return t


def tensor(*terms: Term) -> Term:
    t = terms[0]
    for u in terms[1:]:
        t = Tensor(t, u)
    return t


def ident(*segments) -> Id:
    """``ident('x', 'y.z')`` is the identity of ``[x][y.z]``."""
    from .presentation import word
    return Id(tuple(word(s) for s in segments))


# ---------------------------------------------------------------------------
# classifier presentations


@dataclass(frozen=True)
class ClassifierPresentation:
    base: Presentation
    flavor: str

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")

    # generator constructors, gated by flavor
    def L(self, x, z):
        return L(_w(x), _w(z), flavor=self.flavor)

    def K(self, x, z):
        return K(_w(x), _w(z), flavor=self.flavor)

    def J(self):
        return J(flavor=self.flavor)

    def Q(self):
        return Q(flavor=self.flavor)

    def Env(self, t):
        if isinstance(t, str):
            from .presentation import parse_cterm
            t = parse_cterm(t, self.base)
        if isinstance(t, CTerm):
            infer_type(self.base, t)
        return Env(t, flavor=self.flavor)

    def Id(self, lw):
        return Id(tuple(_w(s) for s in lw), flavor=self.flavor)

    @property
    def rules(self):
        from .rewrite import rules_for
        return rules_for(self.flavor)

    def parse_term(self, text: str) -> Term:
        return parse_term(text, self)

    def check(self, t: Term) -> Term:
        """Verify every generator of ``t`` against the base and the flavor."""
        _gate(self.flavor, t.kinds)
        for atom in atoms(t):
            if isinstance(atom, Env):
                infer_type(self.base, atom.body.to_term())
            for seg in atom.dom + atom.cod if isinstance(atom, _Atom) else atom.dom:
                for letter in seg:
                    if letter not in self.base.object_generators:
                        raise UndeclaredName(f"undeclared object {letter!r}")
        return t

    def generators(self, max_letters: int) -> Iterator[Term]:
        """Generating morphisms whose boundary has at most ``max_letters`` letters."""
        allowed = _ALLOWED[self.flavor]
        for g in self.base.morphism_generators:
            if max(len(g.dom), len(g.cod)) <= max_letters:
                yield self.Env(g)
        words = self.base.words(max_letters)
        if "J" in allowed:
            yield self.J()
        if "Q" in allowed:
            yield self.Q()
        for x in words:
            for z in words:
                if len(x) + len(z) <= max_letters:
                    if "L" in allowed:
                        yield self.L(x, z)
                    if "K" in allowed:
                        yield self.K(x, z)

    def __str__(self):
        return print_classifier(self)


def _w(x):
    from .presentation import word
    return word(x)


def build_lax(p: Presentation) -> ClassifierPresentation:
    return ClassifierPresentation(p, "lax")


def build_oplax(p: Presentation) -> ClassifierPresentation:
    return ClassifierPresentation(p, "oplax")


def build_frob(p: Presentation) -> ClassifierPresentation:
    return ClassifierPresentation(p, "frob")


def embed(p: Presentation, t: CTerm, flavor: str = "frob") -> Term:
    """The canonical functor from C into its classifier, on a single term."""
    infer_type(p, t)
    body = c_sliced(t)
    if body.is_identity():
        return Id((t.dom,), flavor=flavor)
    return Env(body, flavor=flavor)


def atoms(t: Term) -> Iterator[Term]:
    if isinstance(t, _Atom):
        yield t
    elif isinstance(t, Id):
        return
    elif isinstance(t, Tensor):
        yield from atoms(t.left)
        yield from atoms(t.right)
    elif isinstance(t, Compose):
        yield from atoms(t.inner)
        yield from atoms(t.outer)
    else:
        raise TypeError(t)


# ---------------------------------------------------------------------------
# relation schemas, instantiated on demand


def _env_or_id(t: CTerm, flavor):
    return Env(t, flavor=flavor) if not isinstance(t, CId) else Id((t.word,), flavor=flavor)


def base_morphisms(p: Presentation, max_letters: int):
    """Identities and generators of C with at most ``max_letters`` letters per side."""
    out = [CId(w) for w in p.words(max_letters)]
    out += [g for g in p.morphism_generators if max(len(g.dom), len(g.cod)) <= max_letters]
    return out


def relation_instances(cp: ClassifierPresentation, max_letters: int = 3) -> Iterator[tuple]:
    """Yield ``(name, params, lhs, rhs)`` for every defining relation.

    Word parameters range over all words whose combined length is at most
    ``max_letters``.
    """
    p, fl = cp.base, cp.flavor
    lax = fl in ("lax", "frob")
    oplax = fl in ("oplax", "frob")
    words = p.words(max_letters)
    triples = [(x, z, w) for x in words for z in words for w in words
               if len(x) + len(z) + len(w) <= max_letters]
    morphs = base_morphisms(p, max_letters)
    gens = [g for g in morphs if isinstance(g, CGen)]

    for x in words:
        yield "0:env-id", (x,), Env(CId(x), flavor=fl), Id((x,), flavor=fl)
    for f in gens:
        for g in gens:
            if f.cod == g.dom:
                yield "1:env-compose", (f.name, g.name), \
                    Compose(Env(g, flavor=fl), Env(f, flavor=fl)), Env(CCompose(g, f), flavor=fl)
    for f in morphs:
        for h in morphs:
            if max(len(f.dom) + len(h.dom), len(f.cod) + len(h.cod)) > max_letters:
                continue
            if isinstance(f, CId) and isinstance(h, CId):
                continue
            ef, eh, efh = _env_or_id(f, fl), _env_or_id(h, fl), _env_or_id(CTensor(f, h), fl)
            if lax:
                yield "2:naturality-l", (format_cterm(f), format_cterm(h)), \
                    Compose(L(f.cod, h.cod, flavor=fl), Tensor(ef, eh)), \
                    Compose(efh, L(f.dom, h.dom, flavor=fl))
            if oplax:
                yield "2op:naturality-k", (format_cterm(f), format_cterm(h)), \
                    Compose(K(f.cod, h.cod, flavor=fl), efh), \
                    Compose(Tensor(ef, eh), K(f.dom, h.dom, flavor=fl))
    for x, z, w in triples:
        ix, iw = Id((x,), flavor=fl), Id((w,), flavor=fl)
        if lax:
            yield "3:assoc-l", (x, z, w), \
                Compose(L(x + z, w, flavor=fl), Tensor(L(x, z, flavor=fl), iw)), \
                Compose(L(x, z + w, flavor=fl), Tensor(ix, L(z, w, flavor=fl)))
        if oplax:
            yield "3op:assoc-k", (x, z, w), \
                Compose(Tensor(K(x, z, flavor=fl), iw), K(x + z, w, flavor=fl)), \
                Compose(Tensor(ix, K(z, w, flavor=fl)), K(x, z + w, flavor=fl))
        if fl == "frob":
            yield "7:frobenius-left", (x, z, w), \
                Compose(K(x + z, w, flavor=fl), L(x, z + w, flavor=fl)), \
                Compose(Tensor(L(x, z, flavor=fl), iw), Tensor(ix, K(z, w, flavor=fl)))
            yield "8:frobenius-right", (x, z, w), \
                Compose(K(x, z + w, flavor=fl), L(x + z, w, flavor=fl)), \
                Compose(Tensor(ix, L(z, w, flavor=fl)), Tensor(K(x, z, flavor=fl), iw))
    for x in words:
        ix = Id((x,), flavor=fl)
        if lax:
            yield "4:unit-right-l", (x,), Compose(L(x, (), flavor=fl), Tensor(ix, J(flavor=fl))), ix
            yield "5:unit-left-l", (x,), Compose(L((), x, flavor=fl), Tensor(J(flavor=fl), ix)), ix
        if oplax:
            yield "4op:counit-right-k", (x,), Compose(Tensor(ix, Q(flavor=fl)), K(x, (), flavor=fl)), ix
            yield "5op:counit-left-k", (x,), Compose(Tensor(Q(flavor=fl), ix), K((), x, flavor=fl)), ix


# ---------------------------------------------------------------------------
# text syntax


def parse_laxword_tokens(ts: TokenStream) -> LaxWord:
    if ts.at("{"):
        ts.next()
        ts.expect("}")
        return ()
    segs = []
    while ts.at("["):
        ts.next()
        segs.append(parse_word_tokens(ts))
        ts.expect("]")
    if not segs:
        raise ts.error("expected a list of segments like [x.z][y] or {}")
    return tuple(segs)


def parse_laxword(text: str) -> LaxWord:
    ts = TokenStream(tokenize(text))
    lw = parse_laxword_tokens(ts)
    if ts.peek().kind != "eof":
        raise ts.error(f"unexpected {ts.peek().text!r}")
    return lw


def parse_term(text: str, cp: ClassifierPresentation) -> Term:
    """Parse a classifier term; ``;`` composes in diagrammatic order.

    >>> from laxcat.presentation import parse_presentation
    >>> cp = build_frob(parse_presentation("objects: x; morphisms: ;"))
    >>> str(parse_term("(id[x]*j);l[x,1]", cp).cod)
    "(('x',),)"
    """
    ts = TokenStream(tokenize(text))
    t = _comp(ts, cp)
    if ts.peek().kind != "eof":
        raise ts.error(f"unexpected {ts.peek().text!r}")
    return cp.check(t)


def _comp(ts, cp):
    t = _tens(ts, cp)
    while ts.at(";") or ts.at("∘"):
        op = ts.next()
        rhs = _tens(ts, cp)
        try:
            t = Compose(rhs, t) if op.text == ";" else Compose(t, rhs)
        except BoundaryMismatch as e:
            raise e.located(op.line, op.col) from None
    return t


def _tens(ts, cp):
    t = _atom(ts, cp)
    while ts.at("*"):
        ts.next()
        t = Tensor(t, _atom(ts, cp))
    return t


def _atom(ts, cp):
    tok = ts.peek()
    fl = cp.flavor
    if tok.text == "(":
        ts.next()
        t = _comp(ts, cp)
        ts.expect(")")
        return t
    if tok.kind != "name":
        raise ts.error(f"expected a term, found {tok.text or 'end of input'!r}")
    ts.next()
    name = tok.text
    try:
        if name == "id":
            if ts.at("("):
                ts.next()
                w = parse_word_tokens(ts)
                ts.expect(")")
                return Id((w,), flavor=fl)
            return Id(parse_laxword_tokens(ts), flavor=fl)
        if name in ("l", "k"):
            ts.expect("[")
            x = parse_word_tokens(ts)
            ts.expect(",")
            z = parse_word_tokens(ts)
            ts.expect("]")
            return (L if name == "l" else K)(x, z, flavor=fl)
        if name == "j":
            return J(flavor=fl)
        if name == "q":
            return Q(flavor=fl)
        if name == "env":
            ts.expect("(")
            body = parse_cterm_tokens(ts, cp.base)
            ts.expect(")")
            return Env(body, flavor=fl)
    except FlavorError as e:
        raise FlavorError(f"line {tok.line}, column {tok.col}: {e}") from None
    return Env(cp.base.generator(name), flavor=fl)


def format_term(t: Term) -> str:
    return _tf(t, 0)


def format_env(e: Env) -> str:
    body = e.body
    if len(body.slices) == 1 and body.slices[0][0] == 0 and body.slices[0][1].dom == body.dom:
        return body.slices[0][1].name
    return f"env({format_cterm(body.to_term())})"


def _tf(t, prec):
    if isinstance(t, Id):
        return "id" + format_laxword(t.word)
    if isinstance(t, Env):
        return format_env(t)
    if isinstance(t, L):
        return f"l[{format_word(t.x)},{format_word(t.z)}]"
    if isinstance(t, K):
        return f"k[{format_word(t.x)},{format_word(t.z)}]"
    if isinstance(t, J):
        return "j"
    if isinstance(t, Q):
        return "q"
    if isinstance(t, Tensor):
        s = f"{_tf(t.left, 1)}*{_tf(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Compose):
        s = f"{_tf(t.inner, 0)};{_tf(t.outer, 1)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(t)


def print_classifier(cp: ClassifierPresentation, max_letters: int = 1) -> str:
    """Serialize as ``.mcat`` text: the base followed by generator signatures.

    Relation schemas are infinite families; they are listed as comments with
    one representative instance each.
    """
    lines = [f"# {cp.flavor} classifier", print_presentation(cp.base).rstrip()]
    sigs = []
    for g in cp.generators(max_letters):
        sigs.append(f"{format_term(g)}: {format_laxword(g.dom)} -> {format_laxword(g.cod)}")
    lines.append("# generators: " + ", ".join(sigs))
    seen = set()
    for name, params, lhs, rhs in relation_instances(cp, max_letters):
        if name in seen:
            continue
        seen.add(name)
        lines.append(f"# relation {name}: {format_term(lhs)} = {format_term(rhs)}")
    return "\n".join(lines) + "\n"
