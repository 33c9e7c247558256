from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _gen as G
from laxcat import matrix as mx
from laxcat.classifier import ClassifierPresentation, Compose, Id, J, K, L, Tensor, embed, parse_term
from laxcat.model import (
    DepthError, ModelError, default_models, evaluate, evaluate_diagram, extract_weak_structure,
    make_frobenius_algebra, random_model, read_model, strict_model, tabulated_model, twist_model,
    validate_model, write_model,
)
from laxcat.presentation import Presentation, parse_presentation
from laxcat.rewrite import to_sliced

EMPTY = Presentation(())
FROB1 = ClassifierPresentation(EMPTY, "frob")


def test_group_algebra_one_is_the_field():
    A = make_frobenius_algebra("group_algebra", 1)
    assert A.n == 1
    for k in ("unit", "mult", "counit", "comult"):
        assert getattr(A, k).tolist() == [[1]]


def test_group_algebra_two():
    A = make_frobenius_algebra("group_algebra", 2)
    assert mx.mat_eq(mx.matmul(A.mult, A.comult), mx.qmat([[2, 0], [0, 2]]))


def test_matrix_algebra_two():
    A = make_frobenius_algebra("matrix_algebra", 2)
    assert A.n == 4
    assert A.counit.tolist() == [[1, 0, 0, 1]]
    assert A.failures() == []


def test_direct_sum_and_bad_tables():
    A = make_frobenius_algebra("direct_sum", make_frobenius_algebra("group_algebra", 2),
                               make_frobenius_algebra("matrix_algebra", 1))
    assert A.n == 3 and A.failures() == []
    B = make_frobenius_algebra("group_algebra", 2)
    bad = B.mult.copy()
    bad[0, 0] = 5
    with pytest.raises(ModelError):
        make_frobenius_algebra("from_tables", B.unit, bad, B.counit, B.comult)


def test_conjugated_algebra_is_frobenius():
    A = make_frobenius_algebra("matrix_algebra", 2)
    P = mx.qmat([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, 1]])
    assert A.conjugate(P).failures() == []


def test_unit_under_trivial_twist():
    M = twist_model(EMPTY, make_frobenius_algebra("group_algebra", 1))
    assert evaluate(M, J()).tolist() == [[1]]


def test_merge_after_split_z2():
    M = twist_model(EMPTY, make_frobenius_algebra("group_algebra", 2))
    v = evaluate(M, Compose(L((), ()), K((), ())))
    assert v.tolist() == [[2, 0], [0, 2]]


def test_strict_models_validate():
    p = parse_presentation(G.TWO)
    M = strict_model(p, {"x": 2, "y": 1}, {"f": [[1, 2]], "h": [[3], [4]]})
    rep = validate_model(M, 3)
    assert rep.ok and rep.checked > 0


def test_z2_twist_validates_depth3():
    p = parse_presentation(G.TWO)
    M = twist_model(p, make_frobenius_algebra("group_algebra", 2), {"x": 1, "y": 2},
                    {"f": [[1], [2]], "h": [[1, -1]]})
    assert validate_model(M, 3).ok


def test_corrupted_merge_table_fails():
    p = parse_presentation("objects: x; morphisms:;")
    M = twist_model(p, make_frobenius_algebra("group_algebra", 2), {"x": 1}, {})
    ws = extract_weak_structure(M, "frob", 3)
    m = dict(ws.m)
    bad = m[(("x",), ("x",))].copy()
    bad[0, 0] += 1
    m[(("x",), ("x",))] = bad
    T = tabulated_model(replace(ws, m=m), "corrupt")
    rep = validate_model(T, 3)
    assert not rep.ok
    axiom, words, a, b = rep.failure
    assert axiom == "associativity" and "x" in words
    assert not mx.mat_eq(a, b)
    assert "FAIL associativity" in rep.to_text()


def test_strict_extraction_gives_identities():
    p = parse_presentation(G.TWO)
    M = strict_model(p, {"x": 2, "y": 1}, {"f": [[1, 2]], "h": [[3], [4]]})
    ws = extract_weak_structure(M, "frob", 2)
    for (x, z), a in list(ws.m.items()) + list(ws.c.items()):
        assert mx.mat_eq(a, mx.eye(M.gdim(x + z)))


def test_roundtrip_z2_depth2():
    p = parse_presentation(G.TWO)
    M = twist_model(p, make_frobenius_algebra("group_algebra", 2), {"x": 1, "y": 1},
                    {"f": [[3]], "h": [[-1]]})
    T = tabulated_model(extract_weak_structure(M, "frob", 2))
    for a in G.classifier(G.TWO).generators(2):
        assert mx.mat_eq(M.box(a), T.box(a))


def test_tabulated_depth_error():
    p = parse_presentation(G.TWO)
    M = twist_model(p, make_frobenius_algebra("group_algebra", 2))
    T = tabulated_model(extract_weak_structure(M, "frob", 1))
    with pytest.raises(DepthError):
        T.box(L(("x",), ("y",)))
    with pytest.raises(DepthError):
        extract_weak_structure(T, "frob", 2)


def test_random_model_deterministic():
    cp = G.classifier(G.TWO)
    a, b = random_model(0, cp, "group_algebra(<=4)"), random_model(0, cp, "group_algebra(<=4)")
    assert a.structure() == b.structure()
    assert validate_model(a, 2).ok
    assert random_model(1, cp, "group_algebra(<=4)").structure() != a.structure()
    for seed in range(5):
        assert validate_model(random_model(seed, cp, "strict"), 2).ok
    with pytest.raises(ModelError):
        random_model(0, cp, "braided(<=2)")


def test_model_file_roundtrip():
    cp = G.classifier(G.TWO)
    M = random_model(5, cp, "mixed(<=2)")
    text = write_model(M, {"tau[x]": mx.eye(2)})
    M2, extra = read_model(text, cp.base)
    assert M2.structure() == M.structure()
    assert mx.mat_eq(extra["tau[x]"], mx.eye(2))
    T = tabulated_model(extract_weak_structure(M, "frob", 2), "tab", M.obj_dims, M.morphisms)
    T2, _ = read_model(write_model(T), cp.base)
    for a in cp.generators(2):
        assert mx.mat_eq(T.box(a), T2.box(a))


def test_model_file_errors():
    p = parse_presentation(G.TWO)
    with pytest.raises(ModelError):
        read_model("kind: strict\nobject x: 1\nobject y: 1\nmatrix gen:f 1x1\n1 2\n", p)
    with pytest.raises(ModelError):
        read_model("kind: strict\nmatrix gen:f 2x1\n1\n", p)


def test_rational_entries_survive():
    p = parse_presentation("objects: x; morphisms: f: x -> x;")
    M = strict_model(p, {"x": 2}, {"f": [[Fraction(1, 2), 0], [0, 3]]})
    cp = ClassifierPresentation(p, "frob")
    v = evaluate(M, parse_term("f;f", cp))
    assert v[0, 0] == Fraction(1, 4) and v[1, 1] == 9


def test_default_models_are_valid():
    cp = G.classifier(G.RICH)
    for M in default_models(cp):
        assert validate_model(M, 2).ok, M.name


# ---------------------------------------------------------------------------
# properties

seeds = st.integers(0, 2**31 - 1)
profiles = st.sampled_from(["strict", "group_algebra(<=3)", "matrix_algebra(<=2)", "mixed(<=1)"])


@settings(max_examples=30, deadline=None)
@given(seeds, seeds, profiles)
def test_evaluate_is_strict_monoidal(s1, s2, profile):
    cp = G.classifier(G.TWO)
    M = random_model(s1, cp, profile)
    rng = G.rng(s2)
    a = G.random_diagram(rng, cp, n_slices=3, max_letters=2).to_term()
    b = G.random_diagram(rng, cp, n_slices=3, max_letters=2).to_term()
    size = M.dim(a.dom + b.dom) * M.dim(a.cod + b.cod)
    if size <= 4096:
        assert mx.mat_eq(evaluate(M, Tensor(a, b)), mx.kron(evaluate(M, a), evaluate(M, b)))
    c = G.random_diagram(rng, cp, n_slices=2, max_letters=2)
    d = G.random_diagram(rng, cp, n_slices=3, max_letters=2)
    if d.dom == c.cod:
        assert mx.mat_eq(evaluate(M, Compose(d.to_term(), c.to_term())),
                         mx.matmul(evaluate(M, d.to_term()), evaluate(M, c.to_term())))
    assert mx.mat_eq(evaluate(M, a), evaluate_diagram(M, to_sliced(a)))


@settings(max_examples=30, deadline=None)
@given(seeds, seeds, profiles)
def test_factorization_through_tables(s1, s2, profile):
    cp = G.classifier(G.RICH)
    M = random_model(s1, cp, profile)
    ws = extract_weak_structure(M, "frob", 3)
    from laxcat.model import weak_image
    t = G.random_cterm(G.rng(s2), cp.base)
    assert mx.mat_eq(evaluate(M, embed(cp.base, t)), weak_image(ws, t))


@settings(max_examples=20, deadline=None)
@given(seeds, profiles)
def test_identity_evaluates_to_identity(seed, profile):
    cp = G.classifier(G.TWO)
    M = random_model(seed, cp, profile)
    lw = ((), ("x",), ("y", "x"))
    assert mx.mat_eq(evaluate(M, Id(lw)), mx.eye(M.dim(lw)))
    assert isinstance(evaluate(M, Id(lw))[0, 0], (int, Fraction, np.integer))
