import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _gen as G
from laxcat.classifier import (
    ClassifierPresentation, Compose, Env, FlavorError, Id, J, K, L, Q, build_frob, build_lax,
    build_oplax, embed, format_laxword, parse_laxword, parse_term, relation_instances,
)
from laxcat.presentation import CCompose, CId, Presentation, parse_presentation
from laxcat.rewrite import Equal, check_equal, to_sliced

EMPTY = Presentation(())


def test_walking_monoid_generators():
    cp = build_lax(EMPTY)
    kinds = {type(g).__name__ for g in cp.generators(2)}
    assert kinds == {"L", "J"}
    assert L((), ()).dom == ((), ()) and L((), ()).cod == ((),)


def test_one_object_merges():
    cp = build_lax(parse_presentation("objects: x; morphisms:;"))
    ls = {(g.x, g.z) for g in cp.generators(2) if isinstance(g, L)}
    assert ls == {(a, b) for a in [(), ("x",), ("x", "x")] for b in [(), ("x",), ("x", "x")]
                  if len(a) + len(b) <= 2}


def test_env_typing():
    p = parse_presentation("objects: x, y; morphisms: f: x -> y;")
    e = embed(p, p.generator("f"))
    assert isinstance(e, Env)
    assert e.dom == (("x",),) and e.cod == (("y",),)


def test_oplax_typing():
    cp = build_oplax(EMPTY)
    assert {type(g).__name__ for g in cp.generators(1)} == {"K", "Q"}
    assert K(("x",), ("z",)).dom == (("x", "z"),)
    assert K(("x",), ("z",)).cod == (("x",), ("z",))
    assert Q().dom == ((),) and Q().cod == ()


def test_frob_fragment_consistency():
    p = parse_presentation(G.TWO)
    # flavor tags do not take part in term equality
    lax = {(n, a, b) for n, _, a, b in relation_instances(build_lax(p), 2)}
    frob = {(n, a, b) for n, _, a, b in relation_instances(build_frob(p), 2)
            if not set(a.kinds | b.kinds) & {"K", "Q"}}
    assert frob == lax


def test_flavor_gating():
    with pytest.raises(FlavorError):
        K((), (), flavor="lax")
    with pytest.raises(FlavorError):
        Q(flavor="lax")
    with pytest.raises(FlavorError):
        L((), (), flavor="oplax")
    with pytest.raises(FlavorError):
        J(flavor="oplax")
    cp = build_lax(EMPTY)
    with pytest.raises(FlavorError):
        parse_term("k[1,1]", cp)


def test_embed_identity():
    p = parse_presentation("objects: x; morphisms:;")
    assert embed(p, CId(("x",))) == Id((("x",),))


def test_embed_functorial_example():
    p = parse_presentation("objects: x, y; morphisms: f: x -> y, h: y -> x;")
    cp = build_frob(p)
    f, h = p.generator("f"), p.generator("h")
    lhs = embed(p, CCompose(h, f))
    rhs = Compose(embed(p, h), embed(p, f))
    assert isinstance(check_equal(cp, lhs, rhs), Equal)


def test_term_syntax_roundtrip():
    cp = G.classifier(G.TWO)
    for src in ["l[x,y];env(f*id(y))", "(id[x]*j);l[x,1]", "k[x,y];(f*h)", "q", "id{}", "j;k[1,1]"]:
        t = parse_term(src, cp)
        again = parse_term(str(to_sliced(t)), cp)
        assert to_sliced(again) == to_sliced(t)


def test_laxword_syntax():
    assert parse_laxword("[x.y][1]") == (("x", "y"), ())
    assert parse_laxword("{}") == ()
    assert format_laxword((("x", "y"), ())) == "[x.y][1]"


def test_generators_typecheck():
    cp = G.classifier(G.RICH)
    for g in cp.generators(2):
        assert len(g.dom) == g.n_in and len(g.cod) == g.n_out


def test_relation_instances_typed():
    for fl in ("lax", "oplax", "frob"):
        cp = G.classifier(G.TWO, fl)
        for name, params, lhs, rhs in relation_instances(cp, 2):
            assert (lhs.dom, lhs.cod) == (rhs.dom, rhs.cod), (name, params)


def test_classifier_rejects_unknown_flavor():
    with pytest.raises(Exception):
        ClassifierPresentation(EMPTY, "braided")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 4))
def test_embed_functorial(seed, cut):
    cp = G.classifier(G.RICH)
    p = cp.base
    start, layers = G.random_layers(G.rng(seed), p, max_gens=4)
    cut = min(cut, len(layers))
    first = G.chain(start, layers[:cut])
    second = G.chain(first.cod, layers[cut:])
    whole = G.chain(start, layers)
    v = check_equal(cp, embed(p, whole), Compose(embed(p, second), embed(p, first)))
    assert isinstance(v, Equal)
