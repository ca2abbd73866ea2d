"""Command-line front end.

Every command prints one JSON document (``--format json``, the default) tagged
``"schema": "invgen/1"``, or a short text rendering.  Exit status is 0 on
success, 1 on a domain error (the error is printed as JSON) and 2 on a usage
error.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import perm as P
from .errors import InvgenError
from .words import free_up_to, perm_ops

SCHEMA = "invgen/1"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input parsing


def _load_json(text: str):
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")) and path.exists():
        text = path.read_text()
    return json.loads(text)


def parse_group(text: str) -> P.FiniteGroup:
    try:
        return P.named_group(text)
    except ValueError:
        pass
    try:
        return P.group_from_json(_load_json(text))
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read group {text!r}: {e}") from None


def parse_perm_list(text: str, degree: int) -> list[P.Perm]:
    try:
        return [P.parse_perm(part, degree) for part in text.split(";") if part.strip()]
    except ValueError as e:
        raise UsageError(str(e)) from None


_NUMBER = re.compile(r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+)?")


def _scalar(token: str):
    if "/" in token or not any(ch in token for ch in ".eE"):
        q = Fraction(token)
        return int(q) if q.denominator == 1 else q
    return float(token)


def parse_matrices(text: str):
    """Nested lists of numbers; ``p/q`` tokens stay exact, decimals become doubles."""
    from .matgrp import Mat2

    try:
        quoted = _NUMBER.sub(lambda m: json.dumps(m.group(0)), text)
        doc = json.loads(quoted)
    except json.JSONDecodeError as e:
        raise UsageError(f"cannot read matrix {text!r}: {e}") from None

    def walk(x):
        if isinstance(x, str):
            return _scalar(x)
        return [walk(y) for y in x]

    doc = walk(doc)

    def is_matrix(x):
        return isinstance(x, list) and len(x) == 2 and all(isinstance(r, list) and len(r) == 2 for r in x) \
            and not isinstance(x[0][0], list)

    if is_matrix(doc):
        return Mat2.of(doc)
    if isinstance(doc, list) and all(is_matrix(m) for m in doc):
        return [Mat2.of(m) for m in doc]
    raise UsageError(f"expected a 2x2 matrix or a list of them: {text!r}")


def parse_one_matrix(text: str):
    m = parse_matrices(text)
    if isinstance(m, list):
        raise UsageError("expected a single matrix")
    return m


def _element(text: str, d: int):
    from .treeaut import element_from_json, parse_element

    try:
        path = Path(text)
        if text.endswith(".json") and path.exists():
            return element_from_json(json.loads(path.read_text()))
        return parse_element(text, d)
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read tree element {text!r}: {e}") from None


def _address(text: str, d: int) -> str:
    from .treeaut import addresses as A

    text = "" if text in ("", "-", "v0", "root") else text
    if not A.is_address(text, d):
        raise UsageError(f"{text!r} is not a vertex address for valence {d}")
    return text


# ---------------------------------------------------------------------------
# commands


def cmd_perm_ig_check(a):
    G = parse_group(a.group)
    S = parse_perm_list(a.set, G.degree)
    return {"result": P.invariably_generates(G, S, max_leaves=a.max_leaves), "order": G.order}


def cmd_perm_wiegold(a):
    G = parse_group(a.group)
    H = parse_perm_list(a.subgroup, G.degree)
    return {"result": P.is_wiegold(G, H), "subgroup_order": P.subgroup(G, H).order}


def cmd_perm_jordan(a):
    G = parse_group(a.group)
    if a.subgroup:
        H = P.subgroup(G, parse_perm_list(a.subgroup, G.degree))
        action = P.coset_action(G, H)
    else:
        action = P.natural_action(G)
    g = P.jordan_active_element(action)
    return {"element": None if g is None else P.format_perm(g), "degree": action.domain_size}


def cmd_words_free_cert(a):
    if a.perms:
        values = parse_perm_list(a.perms, a.degree)
        ops = perm_ops(a.degree)
    elif a.matrices:
        from .matgrp import mat_ops

        values = parse_matrices(a.matrices)
        if not isinstance(values, list):
            values = [values]
        ops = mat_ops(projective=a.projective)
    else:
        raise UsageError("give --perms or --matrices")
    cert = free_up_to(values, a.L, ops)
    return {"certificate": cert.to_json()}


def _class_json(cls):
    doc = cls.to_json()
    kind = doc.pop("kind")
    out = {"class": kind.lower()}
    for k, v in doc.items():
        out[k] = str(v) if k == "lambda" else v
    return out


def cmd_sl2_classify(a):
    from .matgrp import sl2_classify

    cls, X = sl2_classify(parse_one_matrix(a.matrix))
    out = _class_json(cls)
    out["conjugator"] = None if X is None else X.to_json()
    return out


def cmd_sl2_lie(a):
    from .matgrp import Sl2LieElem, lie_classify
    from .matgrp.mat2 import scalar_to_json

    m = parse_one_matrix(a.matrix)
    if m.a + m.d != 0:
        raise UsageError("matrix must be traceless")
    orbit = lie_classify(Sl2LieElem(m.a, m.b, m.c))
    doc = {"orbit": orbit.kind.lower()}
    o = orbit.orbit
    for name in ("t", "sign", "theta"):
        if hasattr(o, name):
            doc[name] = scalar_to_json(getattr(o, name))
    doc["conjugator"] = orbit.conjugator.to_json()
    return doc


def cmd_sl2_spectrum(a):
    from .matgrp import spectrum_of_words

    gens = parse_matrices(a.generators)
    if not isinstance(gens, list):
        gens = [gens]
    return {"spectrum": spectrum_of_words(gens, a.L, include_identity=not a.no_identity).to_json()}


def cmd_sl2_borel(a):
    from .matgrp import borel_conjugator
    from .matgrp.mat2 import scalar_to_json

    x, B = borel_conjugator(parse_one_matrix(a.matrix), a.backend)
    return {"x": x if isinstance(x, str) else scalar_to_json(x), "upper": B.to_json()}


def cmd_sl2_extend_free(a):
    from .matgrp import extend_free_tuple

    c_list = parse_matrices(a.c_list) if a.c_list else []
    if not isinstance(c_list, list):
        c_list = [c_list]
    g, cert = extend_free_tuple(c_list, parse_one_matrix(a.c), a.L, trials=a.trials, seed=a.seed)
    return {"g": g.to_json(), "certificate": cert.to_json(), "seed": a.seed}


def cmd_tree_classify(a):
    from .treeaut import classify

    return classify(_element(a.element, a.d), a.radius).to_json()


def cmd_tree_orbital(a):
    from .treeaut import orbital_type

    center = _address(a.center, a.d)
    return {"orbital_type": orbital_type(_element(a.element, a.d), a.radius, center).to_json()}


def cmd_tree_conjugacy(a):
    from .treeaut import conjugacy_test

    return conjugacy_test(_element(a.g, a.d), _element(a.h, a.d), a.radius).to_json()


def cmd_tree_gen_vertex(a):
    from .treeaut import make_hyperbolic_translation, make_spherically_transitive, vertex_transitivity_witness

    v = _address(a.v, a.d)
    x = _address(a.x, a.d)
    c = vertex_transitivity_witness(make_hyperbolic_translation(a.d), make_spherically_transitive(v, a.d), x, v)
    doc = c.to_json()
    doc.update({"generators": {"x1": "translation", "x2": f"odometer@{v}"}, "image": c.element.image(v)})
    return doc


def cmd_tree_gen_stab(a):
    from .treeaut import default_supply, make_spherically_transitive, random_stabilizer_element, stabilizer_approximation

    if a.element:
        k = _element(a.element, a.d)
    elif a.seed is not None:
        k = random_stabilizer_element(random.Random(a.seed), a.d, a.n)
    else:
        raise UsageError("give --element or --seed for a random stabilizer element")
    supply = default_supply(a.d, a.n)
    c = stabilizer_approximation(k, supply, a.n, make_spherically_transitive("", a.d))
    doc = c.to_json()
    specs = sorted(supply, key=lambda t: (t.n, t.blocks))
    doc["generators"] = {f"x{i + 1}": f"type{t}" for i, t in enumerate(specs)}
    doc["generators"][f"x{len(specs) + 1}"] = "odometer"
    doc["verified_radius"] = a.n
    return doc


def cmd_suite_acceptance(a):
    from .acceptance import run_all

    results = run_all(only=a.only)
    return {"results": [r.to_json() for r in results], "all_passed": all(r.passed for r in results)}


# ---------------------------------------------------------------------------
# grammar


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(prog="invgen", description=__doc__.splitlines()[0])
    root.add_argument("--format", choices=["json", "text"], default="json")
    top = root.add_subparsers(dest="area", required=True)

    def area(name, help):
        return top.add_parser(name, help=help).add_subparsers(dest="command", required=True)

    def command(group, name, func, help):
        p = group.add_parser(name, help=help)
        p.set_defaults(func=func, name=name)
        return p

    perm = area("perm", "finite permutation groups")
    p = command(perm, "ig-check", cmd_perm_ig_check, "does a set invariably generate the group")
    p.add_argument("--group", required=True, help="name such as S4, or JSON {degree, generators}")
    p.add_argument("--set", required=True, help='permutations separated by ";", e.g. "(0 1);(0 1 2)"')
    p.add_argument("--max-leaves", type=int)
    p = command(perm, "wiegold", cmd_perm_wiegold, "do the conjugates of a proper subgroup cover the group")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True, help="subgroup generators")
    p = command(perm, "jordan", cmd_perm_jordan, "fixed-point-free element of a transitive action")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", help="act on the cosets of this subgroup (default: natural action)")

    words = area("words", "free words")
    p = command(words, "free-cert", cmd_words_free_cert, "certify no relation up to length L")
    p.add_argument("--perms")
    p.add_argument("--degree", type=int)
    p.add_argument("--matrices")
    p.add_argument("--projective", action="store_true", help="treat -I as trivial")
    p.add_argument("--L", type=int, required=True)

    sl2 = area("sl2", "SL2 and sl2")
    p = command(sl2, "classify", cmd_sl2_classify, "conjugacy class with conjugator")
    p.add_argument("--matrix", required=True)
    p = command(sl2, "lie", cmd_sl2_lie, "adjoint orbit of a traceless matrix")
    p.add_argument("--matrix", required=True, help="traceless, e.g. [[1,2],[3,-1]]")
    p = command(sl2, "spectrum", cmd_sl2_spectrum, "eigenvalues of all reduced words up to length L")
    p.add_argument("--generators", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--no-identity", action="store_true")
    p = command(sl2, "borel", cmd_sl2_borel, "conjugate into upper triangular form")
    p.add_argument("--matrix", required=True)
    p.add_argument("--backend", choices=["real", "complex"], default="real")
    p = command(sl2, "extend-free", cmd_sl2_extend_free, "randomized search for a free extension")
    p.add_argument("--c-list", default="")
    p.add_argument("--c", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, required=True)

    tree = area("tree", "regular-tree automorphisms")

    def tree_cmd(name, func, help):
        p = command(tree, name, func, help)
        p.add_argument("--d", type=int, default=3)
        return p

    elem_help = "translation | flip | identity | odometer[@v] | type:<n>:<blocks>[@v][/u] | JSON"
    p = tree_cmd("classify", cmd_tree_classify, "elliptic / inversion / hyperbolic")
    p.add_argument("--element", required=True, help=elem_help)
    p.add_argument("--radius", type=int)
    p = tree_cmd("orbital", cmd_tree_orbital, "marked orbit tree")
    p.add_argument("--element", required=True, help=elem_help)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--center", default="")
    p = tree_cmd("conjugacy", cmd_tree_conjugacy, "conjugacy test up to a radius")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--radius", type=int, default=3)
    p = tree_cmd("gen-vertex", cmd_tree_gen_vertex, "word in translation and odometer moving v to x")
    p.add_argument("--x", required=True)
    p.add_argument("--v", default="")
    p = tree_cmd("gen-stab", cmd_tree_gen_stab, "approximate a stabilizer element by type elements")
    p.add_argument("--element")
    p.add_argument("--seed", type=int, help="build a random stabilizer element (required without --element)")
    p.add_argument("--n", type=int, default=4)

    suite = area("suite", "batch runners")
    p = command(suite, "acceptance", cmd_suite_acceptance, "run every acceptance criterion")
    p.add_argument("--only", type=int, nargs="*")
    return root


def _text(doc, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_text(item, indent + 1))
                lines.append("")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def _emit(doc, fmt, stream):
    if fmt == "text":
        print(_text(doc), file=stream)
    else:
        print(json.dumps(doc, sort_keys=True, ensure_ascii=False), file=stream)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    command = f"{args.area} {args.name}"
    try:
        result = args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"invgen: error: {e}", file=sys.stderr)
        return 2
    except InvgenError as e:
        _emit({"schema": SCHEMA, "command": command, **e.to_json()}, args.format, sys.stdout)
        return 1
    doc = {"schema": SCHEMA, "command": command, **result}
    _emit(doc, args.format, sys.stdout)
    if command == "suite acceptance" and not result["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
