"""The local relation suite for the diagram calculus.

Every local relation is instantiated over concrete quiver data as a pair
of crossing/dot words on an explicit arrangement of strand items, and both
sides are applied to a family of polynomials (all monomials up to a degree
bound plus seeded random polynomials).  A relation instance passes when
the two sides agree exactly.

The correction signs of the two triple-point moves follow from the divided
difference convention fixed in the engine; the suite is the normative
record of the convention.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .poly import ONE_POLY, as_poly
from .scalars import as_scalar
from .sequences import FlavouredSequence, corporeal, ghost, red
from .diagrams import _test_polynomials, yvar


class Scenario:
    """An arrangement of items with labels and longitudes, not required to
    be a valid flavoured sequence; words of positional crossings and strand
    dots act on polynomials through the engine's local operators."""

    def __init__(self, engine, labels, longitudes, arrangement):
        self.engine = engine
        self.seq = FlavouredSequence(tuple(labels),
                                     tuple(as_scalar(a) for a in longitudes),
                                     tuple(arrangement))
        self.arrangement = list(arrangement)

    @property
    def n(self):
        return len(self.seq.labels)

    def apply(self, word, poly):
        order = list(self.arrangement)
        eng = self.engine
        for op in word:
            if op[0] == "dot":
                p = eng._corporeal_position(order, corporeal(op[1]))
                poly = poly * yvar(p)
                continue
            i = op[1]
            left, right = order[i], order[i + 1]
            poly = eng._crossing_operator(self.seq, order, left, right)(poly)
            order[i], order[i + 1] = order[i + 1], order[i]
        return poly, order

    def equal(self, lhs, rhs, polys):
        """lhs, rhs: lists of (coeff, word); equality on every test poly."""
        for f in polys:
            a = sum((as_poly(c) * self.apply(w, f)[0] for c, w in lhs),
                    ONE_POLY * 0)
            b = sum((as_poly(c) * self.apply(w, f)[0] for c, w in rhs),
                    ONE_POLY * 0)
            if a != b:
                return False, f
        return True, None


def cross(i):
    return ("cross", i)


def dot(k):
    return ("dot", k)


def _instances(engine):
    """Yield (name, scenario, lhs, rhs) covering every local relation over
    the engine's quiver data with at most 4 corporeal strands."""
    completed = engine.completed
    old_vertices = completed.old_vertices()
    old_edges = completed.old_edges()
    new_edges = completed.new_edges()
    zero = as_scalar(0)
    one = as_scalar(1)
    half = as_scalar(Fraction(1, 2))

    # (dots-1) and same-label sliding through transparent crossings
    for i, j in itertools.product(old_vertices, repeat=2):
        offsets = [(zero, one)] if i != j else [(zero, half)]
        for a, b in offsets:
            sc = Scenario(engine, (i, j), (a, b),
                          (corporeal(1), corporeal(2)))
            for k in (1, 2):
                yield ("dots-1", sc,
                       [(1, [dot(k), cross(0)])],
                       [(1, [cross(0), dot(k)])])

    # (dots-2): both dot positions, correction on the stated side
    for i in old_vertices:
        for a, b in [(zero, zero), (zero, one)]:
            sc = Scenario(engine, (i, i), (a, b), (corporeal(1), corporeal(2)))
            yield ("dots-2", sc,
                   [(1, [dot(1), cross(0)])],
                   [(1, [cross(0), dot(1)]), (1, [])])
            yield ("dots-2", sc,
                   [(1, [dot(2), cross(0)])],
                   [(1, [cross(0), dot(2)]), (-1, [])])

    # (strand-bigon)
    for i, j in itertools.product(old_vertices, repeat=2):
        for a, b in [(zero, zero), (zero, one), (zero, half)]:
            sc = Scenario(engine, (i, j), (a, b), (corporeal(1), corporeal(2)))
            same = (i == j) and (b - a).is_rational \
                and (b - a).rational.denominator == 1
            if same:
                yield ("strand-bigon", sc, [(1, [cross(0), cross(0)])], [])
            else:
                yield ("strand-bigon", sc,
                       [(1, [cross(0), cross(0)])], [(1, [])])

    # ghost bigons: strand k against the ghost of edge e on strand J
    for e in old_edges:
        for k in old_vertices:
            for off in (zero, half):
                owner_long = zero
                c_long = owner_long + as_scalar(engine.flavour[e.id]) + off
                sc = Scenario(engine, (k, e.head), (c_long, owner_long),
                              (corporeal(1), ghost(2, e.id), corporeal(2)))
                relevant = (k == e.tail) and (off == zero)
                if relevant:
                    rhs = [(1, [dot(2)]), (-1, [dot(1)])]
                    yield ("ghost-bigon2", sc,
                           [(1, [cross(0), cross(0)])], rhs)
                else:
                    yield ("ghost-bigon1", sc,
                           [(1, [cross(0), cross(0)])], [(1, [])])
                sc2 = Scenario(engine, (k, e.head), (c_long, owner_long),
                               (ghost(2, e.id), corporeal(1), corporeal(2)))
                if relevant:
                    yield ("ghost-bigon2a", sc2,
                           [(1, [cross(0), cross(0)])],
                           [(1, [dot(2)]), (-1, [dot(1)])])
                else:
                    yield ("ghost-bigon1a", sc2,
                           [(1, [cross(0), cross(0)])], [(1, [])])

    # (cost): red bigons
    for r in new_edges:
        for k in old_vertices:
            for off in (zero, half):
                c_long = as_scalar(engine.flavour[r.id]) + off
                sc = Scenario(engine, (k,), (c_long,),
                              (corporeal(1), red(r.id)))
                relevant = (k == r.tail) and (off == zero)
                if relevant:
                    yield ("cost", sc, [(1, [cross(0), cross(0)])],
                           [(1, [dot(1)])])
                    sc2 = Scenario(engine, (k,), (c_long,),
                                   (red(r.id), corporeal(1)))
                    yield ("cost-mirror", sc2, [(1, [cross(0), cross(0)])],
                           [(1, [dot(1)])])
                else:
                    yield ("cost-transparent", sc,
                           [(1, [cross(0), cross(0)])], [(1, [])])

    # (eq:triple-point1): strand of t(e) through the crossing of two e-ghosts
    for e in old_edges:
        if e.tail == e.head:
            continue
        for off_i, off_j in [(zero, zero), (half, zero), (zero, one)]:
            b1, b2 = zero, zero + (off_j if off_j != half else zero)
            b2 = off_j
            z = b1 + as_scalar(engine.flavour[e.id]) + off_i
            sc = Scenario(engine, (e.tail, e.head, e.head), (z, b1, b2),
                          (ghost(2, e.id), corporeal(1), ghost(3, e.id),
                           corporeal(2), corporeal(3)))
            w1 = [cross(0), cross(3), cross(1), cross(0)]
            w2 = [cross(1), cross(3), cross(0), cross(1)]
            aligned = (off_i == zero)
            if aligned:
                # with this divided-difference convention the correction
                # appears with a plus sign on the first side
                yield ("triple-point1", sc, [(1, w1)], [(1, w2), (1, [])])
            else:
                yield ("triple-point1-transparent", sc, [(1, w1)], [(1, w2)])

    # (eq:triple-point2): crossing of two t(e)-strands through an e-ghost
    for e in old_edges:
        if e.tail == e.head:
            continue
        for off in (zero, half):
            b = zero
            z = b + as_scalar(engine.flavour[e.id]) + off
            sc = Scenario(engine, (e.tail, e.tail, e.head), (z, z, b),
                          (corporeal(1), ghost(3, e.id), corporeal(2),
                           corporeal(3)))
            w1 = [cross(0), cross(1), cross(0)]
            w2 = [cross(1), cross(0), cross(1)]
            if off == zero:
                yield ("triple-point2", sc, [(1, w1)], [(1, w2), (-1, [])])
            else:
                yield ("triple-point2-transparent", sc, [(1, w1)], [(1, w2)])

    # red triple point, with delta only when all three labels agree
    for r in new_edges:
        for i, j in itertools.product(old_vertices, repeat=2):
            for off in (zero, half):
                phi = as_scalar(engine.flavour[r.id])
                sc = Scenario(engine, (j, i), (phi + off, phi + off),
                              (corporeal(1), red(r.id), corporeal(2)))
                w1 = [cross(0), cross(1), cross(0)]
                w2 = [cross(1), cross(0), cross(1)]
                delta = (i == j == r.tail) and off == zero
                if delta:
                    yield ("red-triple", sc, [(1, w1)], [(1, w2), (1, [])])
                else:
                    yield ("red-triple-slide", sc, [(1, w1)], [(1, w2)])

    # (dumb): dots slide freely over red crossings
    for r in new_edges:
        for i in old_vertices:
            sc = Scenario(engine, (i,), (as_scalar(engine.flavour[r.id]),),
                          (corporeal(1), red(r.id)))
            yield ("dumb-dot", sc, [(1, [dot(1), cross(0)])],
                   [(1, [cross(0), dot(1)])])


def verify_relations(engine, degree_bound=3, n_random=10, seed=0):
    """Run the whole relation suite; returns a report dict with per-relation
    instance counts and any failing witnesses."""
    rng = random.Random(seed)
    report = {}
    for name, sc, lhs, rhs in _instances(engine):
        polys = _test_polynomials(sc.n, degree_bound, n_random, rng)
        ok, witness = sc.equal(lhs, rhs, polys)
        entry = report.setdefault(name, {"instances": 0, "failures": []})
        entry["instances"] += 1
        if not ok:
            entry["failures"].append({
                "labels": tuple(map(str, sc.seq.labels)),
                "longitudes": tuple(map(str, sc.seq.longitudes)),
                "witness": repr(witness),
            })
    report["ok"] = all(not v["failures"] for k, v in report.items()
                       if isinstance(v, dict))
    return report


def format_report(report):
    lines = []
    for name in sorted(k for k in report if k != "ok"):
        entry = report[name]
        status = "pass" if not entry["failures"] else "FAIL"
        lines.append("%-28s %4d instances  %s" % (name, entry["instances"], status))
        for f in entry["failures"][:3]:
            lines.append("    witness: labels=%s longitudes=%s poly=%s"
                         % (f["labels"], f["longitudes"], f["witness"]))
    lines.append("overall: %s" % ("pass" if report["ok"] else "FAIL"))
    return "\n".join(lines)
