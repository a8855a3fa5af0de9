"""Command-line surface.

Commands: enumerate-sequences, check-equivalence, is-unsteady,
reduce-integral, category-o-graph, monopole-mul, res-support, qhr,
relcheck, satake, render-diagram, suite.  All output is deterministic for
a fixed --seed.  KLRW_SHADOW_PRECISION sets the denominator used for
auto-declared shadows of sqrtN symbols.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction

from . import suites
from .coulomb import (MatterWeight, MonopoleElement, TorusTheory,
                      UniversalWeightModule, hamiltonian_reduce, mul,
                      res_support)
from .cover import build_cover, category_o_graph, integralize
from .diagrams import Engine
from .kacmoody import weyl_dimension, KMWeight
from .poly import HBAR, ONE_POLY, Polynomial, RationalFunction
from .quiver import dump_quiver_spec, load_quiver_spec
from .relations import format_report, verify_relations
from .render import render_diagram
from .scalars import (SymbolTable, as_scalar, format_scalar, parse_scalar)
from .sequences import (enumerate_orders, equivalent, format_sequence,
                        from_weight, is_unsteady, parse_sequence, validate)


def _shadow_precision():
    try:
        return int(os.environ.get("KLRW_SHADOW_PRECISION", "1000000"))
    except ValueError:
        return 1000000


def make_table():
    """Symbol table preloaded with shadows for sqrtN names at the precision
    from the environment."""
    table = SymbolTable()
    prec = _shadow_precision()
    for n in (2, 3, 5, 6, 7, 10):
        table.declare("sqrt%d" % n, Fraction(math.isqrt(n * prec * prec), prec))
    return table


def _parse_gamma(text, table):
    """'alpha=0,1/2;beta=2' -> {vertex: [scalars]}"""
    gamma = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vertex, vals = chunk.split("=", 1)
        gamma[vertex.strip()] = [parse_scalar(v, table)
                                 for v in vals.split(",") if v.strip()]
    return gamma


def _parse_intvec(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def parse_poly(text, rank):
    """Small polynomial literal parser: sums of products of rationals and
    variables x1..xr, h with optional ^exponent."""
    tokens = []
    i = 0
    spec = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*|[0-9]+|\^|\*|\+|\-|/|\(|\))")
    while i < len(text):
        m = spec.match(text, i)
        if not m:
            raise ValueError("bad polynomial literal near %r" % text[i:])
        tokens.append(m.group(1))
        i = m.end()
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def atom():
        tok = take()
        if tok == "(":
            p = expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return p
        if tok is None:
            raise ValueError("truncated polynomial literal")
        if tok.isdigit():
            num = Fraction(int(tok))
            if peek() == "/":
                take()
                den = take()
                num = Fraction(int(tok), int(den))
            base = Polynomial.constant(num)
        else:
            if tok == HBAR or re.fullmatch(r"x[0-9]+", tok):
                if tok != HBAR and not (1 <= int(tok[1:]) <= rank):
                    raise ValueError("variable %s out of rank %d" % (tok, rank))
                base = Polynomial.variable(tok)
            else:
                raise ValueError("unknown variable %r" % tok)
        if peek() == "^":
            take()
            base = base ** int(take())
        return base

    def product():
        p = atom()
        while peek() == "*":
            take()
            p = p * atom()
        return p

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        p = Fraction(sign) * product()
        while peek() in ("+", "-"):
            sgn = -1 if take() == "-" else 1
            p = p + Fraction(sgn) * product()
        return p

    out = expr()
    if pos[0] != len(tokens):
        raise ValueError("trailing junk in polynomial literal")
    return out


_RTERM = re.compile(r"r\[([0-9,\s\-]*)\]")


def parse_monopole(text, rank):
    """Element literal: terms like '3*x1*r[1,0] + r[-1,0]' joined by +/-."""
    total = MonopoleElement({})
    depth = 0
    terms = []
    cur = []
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "*^/([+-":
            terms.append("".join(cur))
            cur = [ch]
        else:
            cur.append(ch)
    terms.append("".join(cur))
    for term in terms:
        term = term.strip()
        if not term:
            continue
        m = _RTERM.search(term)
        if not m:
            raise ValueError("monopole term %r lacks an r[..] factor" % term)
        nu = tuple(int(v) for v in m.group(1).split(",")) if m.group(1).strip() \
            else ()
        if len(nu) != rank:
            raise ValueError("coweight %r has wrong rank" % (nu,))
        rest = (term[:m.start()] + term[m.end():]).strip().strip("*").strip()
        sign = Fraction(1)
        while rest.startswith(("+", "-")):
            if rest[0] == "-":
                sign = -sign
            rest = rest[1:].strip().strip("*").strip()
        coeff = parse_poly(rest, rank) if rest else ONE_POLY
        total = total + MonopoleElement({nu: RationalFunction.of(
            Fraction(sign) * coeff)})
    return total


def _parse_matter(specs, rank, table):
    matter = []
    for spec in specs:
        parts = spec.split(";")
        gauge = _parse_intvec(parts[0])
        if len(gauge) != rank:
            raise ValueError("gauge charge %r has wrong rank" % (gauge,))
        shift = parse_scalar(parts[1], table) if len(parts) > 1 and parts[1] \
            else as_scalar(0)
        hshift = Fraction(parts[2]) if len(parts) > 2 and parts[2] else Fraction(0)
        matter.append(MatterWeight(gauge, shift, hshift))
    return TorusTheory(rank, matter)


def _load(args, table):
    quiver, dims, completed, flavour, table = load_quiver_spec(args.quiver, table)
    override = getattr(args, "flavour", None)
    if override:
        if os.path.exists(override):
            with open(override) as fh:
                entries = json.load(fh).items()
        else:
            entries = (chunk.split("=", 1) for chunk in override.split(";")
                       if chunk.strip())
        for eid, lit in entries:
            if eid.strip() not in flavour.values:
                raise ValueError("flavour override for unknown edge %r" % eid)
            flavour.values[eid.strip()] = parse_scalar(str(lit), table)
    return quiver, dims, completed, flavour, table


def cmd_enumerate(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    gamma = _parse_gamma(args.gamma, table)
    seqs = enumerate_orders(None, gamma, completed, flavour, table,
                            up_to_equivalence=not args.all_orders)
    if args.format == "json":
        print(json.dumps([format_sequence(s) for s in seqs], indent=2))
        return 0
    for s in seqs:
        line = format_sequence(s)
        if args.table:
            longs = [s.longitude(it, flavour) for it in s.order]
            regime = []
            for (a, it1), (b, it2) in zip(zip(longs, s.order),
                                          zip(longs[1:], s.order[1:])):
                rel = "=" if a == b else "<="
                regime.append("Re(%s)%sRe(%s)" % (format_scalar(a), rel,
                                                  format_scalar(b)))
            line += "   regime: " + "  ".join(regime)
        print(line)
    return 0


def cmd_equivalence(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    s1 = parse_sequence(args.first, table)
    s2 = parse_sequence(args.second, table)
    for name, s in (("first", s1), ("second", s2)):
        bad = validate(s, completed, flavour, table)
        if bad:
            print("%s sequence invalid: %s" % (name, bad))
            return 2
    ok, sigma = equivalent(s1, s2, completed, flavour, table)
    if ok:
        print("equivalent via sigma = %s" % (sigma,))
        return 0
    print("not equivalent")
    return 1


def cmd_unsteady(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    s = parse_sequence(args.seq, table)
    bad = validate(s, completed, flavour, table)
    if bad:
        print("sequence invalid: %s" % bad)
        return 2
    flag, k = is_unsteady(s)
    print("unsteady k=%d" % k if flag else "steady")
    return 0


def cmd_reduce_integral(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    orbit = _parse_gamma(args.orbit, table)
    for x in quiver.old_vertices():
        orbit.setdefault(x, [])
    cover = build_cover(quiver, dims, completed, flavour, orbit, table)
    eta, phi_prime = integralize(cover)
    if args.format == "json":
        data = dump_quiver_spec(cover.quiver,
                                cover.dims, phi_prime)
        data["vertices"] = [str(v) for v in cover.quiver.vertices]
        data["edges"] = [{"id": e.id, "tail": str(e.tail), "head": str(e.head)}
                         for e in cover.quiver.edges]
        data["v"] = {str(k): v for k, v in cover.dims.v.items()}
        data["w"] = {str(k): v for k, v in cover.dims.w.items()}
        data["flavour"] = {eid: format_scalar(c)
                           for eid, c in phi_prime.values.items()}
        print(json.dumps(data, indent=2))
        return 0
    print("vertices (v-tilde / w-tilde):")
    for cv in cover.quiver.vertices:
        print("  %-24s v=%d w=%d" % (cv, cover.dims.v[cv], cover.dims.w[cv]))
    print("edges:")
    for e in cover.quiver.edges:
        print("  %-28s %s -> %s" % (e.id, e.tail, e.head))
    print("integralized flavour phi':")
    for e in cover.completed.edges:
        print("  %-28s %s" % (e.id, format_scalar(phi_prime[e.id])))
    return 0


def cmd_category_o(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    graph, wt = category_o_graph(quiver, dims, completed, flavour, table)
    print("category-O support graph:")
    for v in graph.vertices:
        tag = "  (framing x%d)" % wt[v] if wt.get(v) else ""
        print("  %s%s" % (v, tag))
    for e in graph.edges:
        print("  %-28s %s -> %s" % (e.id, e.tail, e.head))
    return 0


def cmd_monopole_mul(args):
    table = make_table()
    theory = _parse_matter(args.matter or [], args.rank, table)
    a = parse_monopole(args.first, args.rank)
    b = parse_monopole(args.second, args.rank)
    print(repr(mul(a, b, theory)))
    return 0


def _module_from_args(args, table):
    theory = _parse_matter(args.matter or [], args.rank, table)
    gamma0 = tuple(parse_scalar(v, table) for v in args.gamma0.split(","))
    if len(gamma0) != args.rank:
        raise ValueError("gamma0 has wrong rank")
    box = [()]
    for _ in range(args.rank):
        box = [b + (k,) for b in box for k in range(args.box)]
    return UniversalWeightModule(theory, gamma0, set(box))


def cmd_res_support(args):
    table = make_table()
    module = _module_from_args(args, table)
    xi = _parse_intvec(args.xi)
    support = res_support(module, xi)
    print("coset representative -> limit dimension")
    for key in sorted(support):
        print("  %-24s %d" % (",".join(str(q) for q in key), support[key]))
    return 0


def cmd_qhr(args):
    table = make_table()
    module = _module_from_args(args, table)
    xi = _parse_intvec(args.xi)
    formula, oracle = hamiltonian_reduce(module, xi)
    print("projected weight -> dimension (formula / linear algebra)")
    for key in sorted(formula):
        print("  %-24s %d / %d" % (",".join(str(q) for q in key),
                                   formula[key], oracle[key]))
    print("agreement:", formula == oracle)
    return 0 if formula == oracle else 1


def cmd_relcheck(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    if not flavour.is_integral():
        print("relcheck needs an integral flavour")
        return 2
    engine = Engine(completed, flavour, table)
    report = verify_relations(engine, degree_bound=args.bound,
                              n_random=args.random, seed=args.seed)
    print(format_report(report))
    return 0 if report["ok"] else 1


def cmd_satake(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    w = {k: int(v) for k, v in (kv.split("=") for kv in args.w.split(","))}
    if args.vmax:
        vmax = {k: int(v) for k, v in (kv.split("=") for kv in args.vmax.split(","))}
    else:
        vmax = {x: sum(w.values()) for x in quiver.old_vertices()}
    from .kacmoody import decat_chevalley
    res = decat_chevalley(quiver, w, vmax)
    verts = res["verts"]
    total = 0
    print("v -> dim V(lambda)_mu(v)   [vertices %s]" % (verts,))
    for v in sorted(res["table"]):
        m = res["table"][v]
        total += m
        if m:
            print("  %-16s %d" % (v, m))
    lam = KMWeight.make("fundamental", {x: w.get(x, 0) for x in verts})
    try:
        dim = weyl_dimension(quiver, lam)
        print("total: %d  (dim V(lambda) = %d)" % (total, dim))
    except Exception:
        print("total: %d" % total)
    print("decategorified e/f ranks:")
    for (i, v), r in sorted(res["ranks"].items()):
        print("  e_%s at %-12s rank e=%d f=%d" % (i, v, r["e"], r["f"]))
    return 0


def cmd_render(args):
    table = make_table()
    quiver, dims, completed, flavour, table = _load(args, table)
    engine = Engine(completed, flavour, table)
    bottom = parse_sequence(args.bottom, table)
    top = parse_sequence(args.top, table) if args.top else bottom
    for name, s in (("bottom", bottom), ("top", top)):
        bad = validate(s, completed, flavour, table)
        if bad:
            print("%s sequence invalid: %s" % (name, bad))
            return 2
    diagram = engine.straight_line(bottom, top)
    if args.dot:
        dots = []
        for spec in args.dot:
            k, h = spec.split("@")
            dots.append((int(k), Fraction(h)))
        diagram = engine.add_dots(diagram, dots)
    svg = render_diagram(engine, diagram, title=args.title)
    if args.output == "-":
        print(svg)
    else:
        with open(args.output, "w") as fh:
            fh.write(svg)
        print("wrote %s" % args.output)
    return 0


def cmd_suite(args):
    name = args.name
    if name == "relations":
        result = suites.suite_relations(seed=args.seed, degree_bound=args.bound)
        for data, rep in result["reports"].items():
            print("== %s ==" % data)
            print(format_report(rep))
    elif name == "monopole":
        result = suites.suite_monopole(seed=args.seed)
        print("rxi=%d assoc=%d inverse=%d hom=%d ok=%s"
              % (result["rxi"], result["assoc"], result["inverse"],
                 result["hom"], result["ok"]))
        el = suites.suite_elprime(seed=args.seed)
        print("elprime instances=%d ok=%s" % (el["instances"], el["ok"]))
        result["ok"] = result["ok"] and el["ok"]
    elif name == "restriction":
        result = suites.suite_restriction(seed=args.seed)
        print("restriction instances=%d ok=%s" % (result["instances"], result["ok"]))
        q = suites.suite_qhr(seed=args.seed)
        print("qhr instances=%d ok=%s" % (q["instances"], q["ok"]))
        result["ok"] = result["ok"] and q["ok"]
    elif name == "satake":
        result = suites.suite_satake()
        print("satake ok=%s" % result["ok"])
    else:
        print("unknown suite %r" % name)
        return 2
    for w in result.get("witnesses", [])[:5]:
        print("witness:", w)
    return 0 if result["ok"] else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="klrwcb",
        description="flavoured KLRW and abelian Coulomb branch calculators")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quiver_args(p):
        p.add_argument("--quiver", required=True)
        p.add_argument("--flavour",
                       help="override flavours: 'edge=lit;...' or a JSON file")

    p = sub.add_parser("enumerate-sequences",
                       help="all valid orders for a longitude assignment")
    add_quiver_args(p)
    p.add_argument("--gamma", required=True,
                   help="per-vertex longitudes, e.g. 'alpha=0;beta=2'")
    p.add_argument("--table", action="store_true")
    p.add_argument("--all-orders", action="store_true",
                   help="do not deduplicate up to equivalence")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check-equivalence")
    add_quiver_args(p)
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("is-unsteady")
    add_quiver_args(p)
    p.add_argument("seq")
    p.set_defaults(func=cmd_unsteady)

    p = sub.add_parser("reduce-integral")
    add_quiver_args(p)
    p.add_argument("--orbit", required=True,
                   help="orbit representative, e.g. 'alpha=0,1/3;beta=1/2'")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_reduce_integral)

    p = sub.add_parser("category-o-graph")
    add_quiver_args(p)
    p.set_defaults(func=cmd_category_o)

    p = sub.add_parser("monopole-mul")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--matter", action="append",
                   help="gauge[;shift[;hshift]], e.g. '1,0;1/2'")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_monopole_mul)

    for name, fn in (("res-support", cmd_res_support), ("qhr", cmd_qhr)):
        p = sub.add_parser(name)
        p.add_argument("--rank", type=int, required=True)
        p.add_argument("--matter", action="append")
        p.add_argument("--gamma0", required=True)
        p.add_argument("--box", type=int, default=4)
        p.add_argument("--xi", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("relcheck")
    add_quiver_args(p)
    p.add_argument("--bound", type=int, default=3,
                   help="monomial total-degree bound (weighted degree 2x)")
    p.add_argument("--random", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_relcheck)

    p = sub.add_parser("satake")
    add_quiver_args(p)
    p.add_argument("--w", required=True, help="framing, e.g. '1=1,2=1'")
    p.add_argument("--vmax", help="grid bound, e.g. '1=2,2=2'")
    p.set_defaults(func=cmd_satake)

    p = sub.add_parser("render-diagram")
    add_quiver_args(p)
    p.add_argument("--bottom", required=True)
    p.add_argument("--top")
    p.add_argument("--dot", action="append", help="strand@height, e.g. 1@1/3")
    p.add_argument("--title")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("suite")
    p.add_argument("name", choices=["relations", "monopole", "restriction",
                                    "satake"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=3)
    p.set_defaults(func=cmd_suite)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
