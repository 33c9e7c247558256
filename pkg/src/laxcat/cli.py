"""Command-line front end.

Exit status: 0 success or Equal, 1 Distinct or a failed check, 2 Unknown or an
exhausted budget, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import constructions as cons
from . import matrix as mx
from . import model as mdl
from . import render as rnd
from .classifier import ClassifierPresentation, format_laxword, parse_laxword, parse_term, print_classifier
from .presentation import LaxcatError, Presentation, format_word, parse_presentation, print_presentation
from .rewrite import Distinct, Equal, check_equal, default_budget, normalize, to_sliced

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _presentation(args, texts=()) -> Presentation:
    if getattr(args, "pres", None):
        return parse_presentation(Path(args.pres).read_text(encoding="utf-8"))
    # without a file, objects are whatever letters the terms mention
    letters = set()
    for t in texts:
        for m in re.finditer(r"\[([^\]]*)\]|id\(([^)]*)\)", t or ""):
            body = m.group(1) if m.group(1) is not None else m.group(2)
            letters.update(s for s in re.split(r"[.,\s]+", body) if s and s != "1")
    return Presentation(tuple(sorted(letters)))


def _classifier(args, texts=()) -> ClassifierPresentation:
    return ClassifierPresentation(_presentation(args, texts), args.flavor)


def _budget(args):
    return args.budget if args.budget is not None else default_budget()


def _models(args, cp):
    models = mdl.default_models(cp)
    for i in range(args.random_models):
        models.append(mdl.random_model(args.seed + i, cp, args.models))
    return models


def _verdict_code(v):
    if isinstance(v, Equal):
        return EXIT_OK
    if isinstance(v, Distinct):
        return EXIT_FAIL
    return EXIT_UNKNOWN


def _write(args, text):
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args):
    p = parse_presentation(Path(args.file).read_text(encoding="utf-8"))
    _write(args, print_presentation(p) + "\n")
    return EXIT_OK


def cmd_classify(args):
    p = parse_presentation(Path(args.file).read_text(encoding="utf-8"))
    cp = ClassifierPresentation(p, args.flavor)
    _write(args, print_classifier(cp, args.max_letters) + "\n")
    return EXIT_OK


def cmd_normalize(args):
    cp = _classifier(args, [args.term])
    t = parse_term(args.term, cp)
    res = normalize(to_sliced(t), cp, _budget(args))
    lines = [f"normal_form: {res.diagram}", f"complete: {str(res.complete).lower()}",
             f"steps: {len(res.steps)}"]
    lines += [f"step {i}: {s}" for i, s in enumerate(res.steps, 1)]
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if res.complete else EXIT_UNKNOWN


def cmd_eq(args):
    cp = _classifier(args, [args.lhs, args.rhs])
    s, t = parse_term(args.lhs, cp), parse_term(args.rhs, cp)
    v = check_equal(cp, s, t, budget=_budget(args), depth=args.depth, models=_models(args, cp))
    head = f"lhs: {args.lhs}\nrhs: {args.rhs}\n"
    _write(args, v.to_text().replace("\n", "\n" + head.rstrip("\n") + "\n", 1))
    return _verdict_code(v)


def _read_model(path, base):
    return mdl.read_model(Path(path).read_text(encoding="utf-8"), base)


def cmd_eval(args):
    cp = _classifier(args, [args.term])
    M, _ = _read_model(args.model, cp.base)
    t = parse_term(args.term, cp)
    _write(args, mx.format_matrix(mdl.evaluate(M, t)) + "\n")
    return EXIT_OK


def cmd_validate(args):
    base = _presentation(args)
    M, _ = _read_model(args.model, base)
    rep = mdl.validate_model(M, args.depth, args.flavor)
    _write(args, rep.to_text())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_enum(args):
    cp = _classifier(args, [args.dom, args.cod])
    dom, cod = parse_laxword(args.dom), parse_laxword(args.cod)
    rep = cons.enumerate_homs(cp, dom, cod, args.depth)
    _write(args, rep.to_text())
    return EXIT_OK if rep.exact else EXIT_UNKNOWN


def _dual_spec(spec, p):
    parts = [s.strip() for s in spec.split(",")]
    if len(parts) != 4:
        raise UsageError("--dual expects x,x_star,unit,counit")
    return cons.dual_pair(p, *parts)


def cmd_dualize(args):
    if not args.pres:
        raise UsageError("dualize needs --pres")
    cp = ClassifierPresentation(_presentation(args), "frob")
    d = _dual_spec(args.dual, cp.base)
    unit, counit = cons.transport_dual(cp, d)
    verdicts, confirmed = cons.check_zigzag(cp, unit, counit, d.x, d.x_star, budget=_budget(args))
    lines = [f"x: {format_word(d.x)}", f"x_star: {format_word(d.x_star)}",
             f"unit: {unit}", f"counit: {counit}",
             f"unit_type: {format_laxword(unit.dom)} -> {format_laxword(unit.cod)}",
             f"counit_type: {format_laxword(counit.dom)} -> {format_laxword(counit.cod)}"]
    for name, v in zip(("zigzag_x", "zigzag_x_star"), verdicts):
        lines.append(f"{name}: {v.kind}")
    lines.append(f"models_confirming: {', '.join(confirmed) if confirmed else 'none'}")
    _write(args, "\n".join(lines) + "\n")
    return max(_verdict_code(v) for v in verdicts)


def cmd_invert(args):
    if not args.pres:
        raise UsageError("invert-tau needs --pres")
    base = _presentation(args)
    G, _ = _read_model(args.g, base)
    K, _ = _read_model(args.k, base)
    _, mats = mdl.read_model(Path(args.tau).read_text(encoding="utf-8"), base)
    comps = {}
    for key, a in mats.items():
        m = re.fullmatch(r"tau\[(.*)\]", key)
        if m:
            comps[tuple(s for s in m.group(1).split(".") if s and s != "1")] = a
    tau = cons.TransformationData(G, K, comps)
    duals = {}
    for spec in args.dual or []:
        d = _dual_spec(spec, base)
        duals[d.x] = d
    try:
        inv = cons.invert_transformation(tau, duals, args.depth)
    except cons.InvalidTransformation as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAIL
    out = []
    for w, a in inv.items():
        out.append(f"matrix tauinv[{format_word(w)}] {a.shape[0]}x{a.shape[1]}")
        out.extend(" ".join(str(v) for v in row) for row in a)
    _write(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_render(args):
    cp = _classifier(args, [args.term])
    t = parse_term(args.term, cp)
    d = to_sliced(t)
    if args.normalize:
        d = normalize(d, cp, _budget(args)).diagram
    svg = rnd.render(d)
    Path(args.output).write_text(svg, encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="laxcat",
        description="Classifiers of lax, oplax and Frobenius monoidal functors. "
                    "Terms compose with ';' in diagrammatic order (left runs first).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, pres=True, flavor=True):
        if pres:
            p.add_argument("--pres", help="presentation file (.mcat); objects are inferred when omitted")
        if flavor:
            p.add_argument("--flavor", choices=("lax", "oplax", "frob"), default="frob")
        p.add_argument("--budget", type=int, default=None, help="oriented step budget (default LAXCAT_BUDGET or 10000)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-o", "--output", help="write output here instead of stdout")

    p = sub.add_parser("parse", help="parse and pretty-print a presentation")
    p.add_argument("file")
    common(p, pres=False, flavor=False)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", help="list the generators and relations of a classifier")
    p.add_argument("file")
    p.add_argument("--max-letters", type=int, default=1)
    common(p, pres=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("normalize", help="normal form under the oriented rules")
    p.add_argument("--term", required=True)
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("eq", help="compare two classifier morphisms")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--models", default="group_algebra(<=4)", help="profile for extra random models")
    p.add_argument("--random-models", type=int, default=0)
    p.add_argument("--depth", type=int, default=8, help="search depth")
    common(p)
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("eval", help="evaluate a term in a model")
    p.add_argument("--model", required=True)
    p.add_argument("--term", required=True)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate-model", help="check the axioms of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--depth", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enum", help="enumerate a hom-set up to a generator count")
    p.add_argument("--dom", required=True)
    p.add_argument("--cod", required=True)
    p.add_argument("--depth", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("dualize", help="transport a dual pair and check its zigzags")
    p.add_argument("--dual", required=True, help="x,x_star,unit,counit")
    common(p, flavor=False)
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("invert-tau", help="invert a lax and oplax monoidal transformation")
    p.add_argument("--g", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--dual", action="append", help="x,x_star,unit,counit (repeatable)")
    p.add_argument("--depth", type=int, default=2)
    common(p, flavor=False)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("render", help="draw a term as SVG")
    p.add_argument("--term", required=True)
    p.add_argument("--normalize", action="store_true")
    common(p)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.command == "render" and not args.output:
        ap.print_usage(sys.stderr)
        sys.stderr.write("render needs -o\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (LaxcatError, OSError, TypeError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
