"""
Moving a dual pair into the Frobenius classifier
================================================

A dual pair (x, xs, eta, eps) in the base becomes a dual pair of one-segment
words after wrapping its unit with j and k, and its counit with l and q.
Evaluating the zigzags in twist models gives identity matrices, and the
transported data inverts monoidal transformations.
"""

import numpy as np

from laxcat import ClassifierPresentation, parse_presentation
from laxcat import constructions as cons
from laxcat import matrix as mx
from laxcat.model import evaluate, make_frobenius_algebra, random_unimodular, twist_model

p = parse_presentation("""
objects: x, xs;
morphisms: eta: 1 -> xs.x, eps: x.xs -> 1;
relations: (id(x)*eta);(eps*id(x)) = id(x), (eta*id(xs));(id(xs)*eps) = id(xs);
""")
cp = ClassifierPresentation(p, "frob")

d = cons.dual_pair(p, "x", "xs", "eta", "eps")
unit, counit = cons.transport_dual(cp, d)
print("unit:  ", unit)
print("counit:", counit)

# eps is a nondegenerate pairing B and eta the matching copairing
B = mx.qmat([[2, 1], [1, 1]])
C = mx.inverse(B)
eps = mx.qmat([[B[i, j] for i in range(2) for j in range(2)]])
eta = mx.qmat([[C[j, i]] for j in range(2) for i in range(2)])

A = make_frobenius_algebra("matrix_algebra", 2)
M = twist_model(p, A, {"x": 2, "xs": 2}, {"eta": eta, "eps": eps}, "m2")
for lhs, _ in cons.zigzag_terms(cp, unit, counit, d.x, d.x_star):
    print(evaluate(M, lhs).shape, mx.mat_eq(evaluate(M, lhs), mx.eye(8)))

# a change of algebra basis gives a transformation M -> M'; invert it through the dual
P = random_unimodular(np.random.default_rng(3), A.n)
M2 = twist_model(p, A.conjugate(P), M.obj_dims, M.morphisms, "m2'")
tau = cons.TransformationData(M, M2, {w: mx.kron(mx.inverse(P), mx.eye(M.gdim(w))) for w in p.words(2)})
inv = cons.invert_transformation(tau, {d.x: d}, words=[d.x])
print(mx.mat_eq(mx.matmul(inv[d.x], tau.component(d.x)), mx.eye(8)))
