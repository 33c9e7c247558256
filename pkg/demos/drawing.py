"""
String diagrams as SVG
======================

Each slice becomes a horizontal band; segments of a lax word are grey frames
and the letters inside them are strands.  Files are written to the current
directory.
"""

from pathlib import Path

from laxcat import ClassifierPresentation, normalize, parse_presentation, parse_term, to_sliced
from laxcat.render import RenderStyle, render

p = parse_presentation("objects: x, y; morphisms: f: x -> y, g: x.y -> y;")
cp = ClassifierPresentation(p, "frob")

terms = {
    "merge": "l[x,y]",
    "split_merge": "k[x,y];l[x,y]",
    "pushed": "(f*id[y]);l[y,y]",
    "frobenius": "(k[x,1]*id[y]);(id[x]*l[1,y])",
}
for name, src in terms.items():
    d = to_sliced(parse_term(src, cp))
    Path(f"{name}.svg").write_text(render(d))
    print(name, len(d.slices), "slices")

# normalizing first pulls the envelope below the merge
d = normalize(to_sliced(parse_term(terms["pushed"], cp)), cp).diagram
print(d)
Path("pushed_normal.svg").write_text(render(d, RenderStyle(slice_height=60)))
