"""
Split then merge is not the identity
====================================

In the Frobenius classifier the composite k[1,1];l[1,1] has the same type as
id[1].  No rewriting connects them and the twist model over the group algebra
of Z/2 tells them apart.
"""

from laxcat import ClassifierPresentation, Presentation, check_equal, parse_term
from laxcat.model import evaluate, make_frobenius_algebra, twist_model

cp = ClassifierPresentation(Presentation(()), "frob")
lhs = parse_term("k[1,1];l[1,1]", cp)
rhs = parse_term("id[1]", cp)

v = check_equal(cp, lhs, rhs)
print(v.to_text())

z2 = twist_model(cp.base, make_frobenius_algebra("group_algebra", 2))
print(evaluate(z2, lhs))    # twice the identity
print(evaluate(z2, rhs))

# the unit law on the other hand is a single oriented step
v = check_equal(cp, parse_term("(id[1]*j);l[1,1]", cp), rhs)
print(v.to_text())
