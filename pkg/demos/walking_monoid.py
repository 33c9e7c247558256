"""
Hom-sets of the lax classifier over one object
==============================================

With no morphisms and no objects the lax classifier is the walking monoid,
so counting its hom-sets should reproduce monotone maps between chains.
"""

from laxcat import ClassifierPresentation, Presentation
from laxcat.classifier import parse_laxword
from laxcat.constructions import enumerate_homs, monotone_maps

cp = ClassifierPresentation(Presentation(()), "lax")

# a lax word [1][1][1] has three segments; {} is the empty word
def lw(n):
    return parse_laxword("[1]" * n or "{}")

print("m n  classes  monotone")
for m in range(4):
    for n in range(4):
        rep = enumerate_homs(cp, lw(m), lw(n), 6)
        print(m, n, f"{rep.lower:>7}", f"{monotone_maps(m, n):>9}")

# representatives are normal forms; the two maps [1] -> [1][1] are the two unit placements
rep = enumerate_homs(cp, lw(1), lw(2), 4)
for d in rep.representatives:
    print(d)
