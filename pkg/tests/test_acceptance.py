"""The acceptance gate: one test per criterion, each printing a pass/fail
line with its runtime.  Every check uses exact arithmetic; the stated time
budgets are enforced."""

import random
import time
from fractions import Fraction

from klrwcb import suites
from klrwcb.cover import build_cover, integralize
from klrwcb.diagrams import Engine, PolyVector, yvar
from klrwcb.poly import ONE_POLY, Polynomial
from klrwcb.quiver import (DimensionData, Edge, Flavour, Quiver,
                           crawley_boevey, kronecker_quiver)
from klrwcb.relations import format_report
from klrwcb.scalars import SymbolTable, as_scalar, is_integral, parse_scalar
from klrwcb.sequences import (FlavouredSequence, corporeal, enumerate_orders,
                              equivalent, from_weight, ghost, is_unsteady,
                              parse_sequence, red)


def _report(num, label, ok, t0, limit):
    elapsed = time.time() - t0
    print("ACCEPTANCE %2d (%s): %s in %.2fs (limit %ds)"
          % (num, label, "PASS" if ok else "FAIL", elapsed, limit))
    assert ok, "criterion %d failed" % num
    assert elapsed < limit, "criterion %d exceeded %ds" % (num, limit)


def test_acceptance_01_kronecker_sequence_table():
    t0 = time.time()
    q = kronecker_quiver()
    dims = DimensionData({"alpha": 1, "beta": 1}, {"alpha": 0, "beta": 0})
    comp = crawley_boevey(q, dims)
    fl = Flavour({"e": as_scalar(1), "f": as_scalar(1)})

    def row(labels, order_tokens, a, b):
        text = "[(%s,%s),(%s,%s)] order=[%s]" % (
            labels[0], a, labels[1], b, ",".join(order_tokens))
        return parse_sequence(text)

    rng = random.Random(0)
    deltas = [Fraction(1, 3), Fraction(3, 4), 1, Fraction(8, 5), 3]
    ok = True
    # row 1: (alpha, e, beta, f) on Re(a+1) <= Re(b), sampled strictly inside
    for d in deltas:
        a = Fraction(rng.randint(-3, 3))
        b = a + 1 + d
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(b)]}, comp, fl)
        want = row(("alpha", "beta"), ("1", "e@1", "2", "f@2"), a, b)
        ok &= len(got) == 1 and equivalent(got[0], want, comp, fl)[0]
    # row 2: (alpha, beta, e, f) on Re(a) <= Re(b) < Re(a+1), strictly inside
    for d in [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3),
              Fraction(4, 5)]:
        a = Fraction(rng.randint(-3, 3))
        b = a + d
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(b)]}, comp, fl)
        want = row(("alpha", "beta"), ("1", "2", "e@1", "f@2"), a, b)
        ok &= len(got) == 1 and equivalent(got[0], want, comp, fl)[0]
    # rows 3 and 4 share the regime Re(a) = Re(b) and a single class
    for _ in range(5):
        a = Fraction(rng.randint(-3, 3), rng.choice([1, 2]))
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(a)]}, comp, fl)
        r3 = row(("alpha", "beta"), ("1", "2", "f@2", "e@1"), a, a)
        r4 = row(("beta", "alpha"), ("1", "2", "e@2", "f@1"), a, a)
        ok &= len(got) == 1
        ok &= equivalent(got[0], r3, comp, fl)[0]
        ok &= equivalent(got[0], r4, comp, fl)[0]
    # row 5: (beta, alpha, f, e) on Re(b) <= Re(a) < Re(b+1), strictly inside
    for d in [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3),
              Fraction(4, 5)]:
        b = Fraction(rng.randint(-3, 3))
        a = b + d
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(b)]}, comp, fl)
        want = row(("beta", "alpha"), ("1", "2", "f@1", "e@2"), b, a)
        ok &= len(got) == 1 and equivalent(got[0], want, comp, fl)[0]
    # row 6: (beta, f, alpha, e) on Re(b+1) <= Re(a), strictly inside
    for d in deltas:
        b = Fraction(rng.randint(-3, 3))
        a = b + 1 + d
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(b)]}, comp, fl)
        want = row(("beta", "alpha"), ("1", "f@1", "2", "e@2"), b, a)
        ok &= len(got) == 1 and equivalent(got[0], want, comp, fl)[0]
    # the six regimes cover the whole (a, b) plane: every sample above and
    # every fresh sample yields exactly one class, never zero or extra
    for _ in range(10):
        a = Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3]))
        b = Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3]))
        got = enumerate_orders(None, {"alpha": [as_scalar(a)],
                                      "beta": [as_scalar(b)]}, comp, fl)
        ok &= len(got) == 1
    _report(1, "Kronecker sequence table", ok, t0, 1)


def test_acceptance_02_covering_quiver():
    t0 = time.time()
    q = kronecker_quiver()
    dims = DimensionData({"alpha": 5, "beta": 6}, {"alpha": 2, "beta": 1})
    comp = crawley_boevey(q, dims)
    t = SymbolTable()
    fl = Flavour({"e": as_scalar(Fraction(1, 3)), "f": as_scalar(0),
                  "w[alpha]0": as_scalar(0),
                  "w[alpha]1": parse_scalar("sym:sqrt2~1.41421", t),
                  "w[beta]0": as_scalar(Fraction(1, 2))})
    orbit = {"alpha": [as_scalar(x) for x in (0, Fraction(1, 3),
                                              Fraction(1, 2), Fraction(2, 3),
                                              Fraction(2, 3))],
             "beta": [as_scalar(x) for x in (0, Fraction(1, 6),
                                             Fraction(1, 3), Fraction(1, 3),
                                             Fraction(1, 2), Fraction(2, 3))]}
    cov = build_cover(q, dims, comp, fl, orbit, t)
    v = {str(k): n for k, n in cov.dims.v.items() if n}
    w = {str(k): n for k, n in cov.dims.w.items() if n}
    ok = v == {"(alpha,[0])": 1, "(alpha,[1/3])": 1, "(alpha,[1/2])": 1,
               "(alpha,[2/3])": 2, "(beta,[0])": 1, "(beta,[1/6])": 1,
               "(beta,[1/3])": 2, "(beta,[1/2])": 1, "(beta,[2/3])": 1}
    ok &= w == {"(alpha,[0])": 1, "(beta,[1/2])": 1}
    ok &= sum(cov.dims.w.values()) == 2          # r' contributes nothing
    eta, phi_prime = integralize(cov)
    ok &= all(is_integral(val) for val in phi_prime.values.values())
    _report(2, "covering quiver", ok, t0, 1)


def test_acceptance_03_unsteadiness_goldens():
    t0 = time.time()
    r_id = "w[alpha]0"

    def mk(order):
        return FlavouredSequence(("beta", "alpha"),
                                 (as_scalar(-4), as_scalar(0)), order)

    s1 = mk((corporeal(1), ghost(1, "f"), red(r_id), corporeal(2),
             ghost(2, "e")))
    s2 = mk((red(r_id), corporeal(1), corporeal(2), ghost(1, "f"),
             ghost(2, "e")))
    s3 = mk((corporeal(1), red(r_id), corporeal(2), ghost(1, "f"),
             ghost(2, "e")))
    ok = is_unsteady(s1) == (True, 2)
    ok &= is_unsteady(s2) == (True, 4)
    ok &= is_unsteady(s3) == (False, None)
    _report(3, "unsteadiness golden triple", ok, t0, 1)


def test_acceptance_04_relation_suite():
    t0 = time.time()
    result = suites.suite_relations(seed=0, degree_bound=3, n_random=100)
    ok = result["ok"]
    if not ok:
        for name, rep in result["reports"].items():
            print("== %s ==" % name)
            print(format_report(rep))
    _report(4, "local relation suite", ok, t0, 300)


def test_acceptance_05_monopole_identities():
    t0 = time.time()
    result = suites.suite_monopole(seed=0, n_rxi=50, n_assoc=200, n_inv=50,
                                   n_hom=100)
    ok = result["ok"]
    if not ok:
        print(result["witnesses"][:5])
    _report(5, "monopole identities", ok, t0, 120)


def test_acceptance_06_restriction_theorem():
    t0 = time.time()
    result = suites.suite_restriction(seed=0, n=50, k_range=10)
    ok = result["ok"]
    if not ok:
        print(result["witnesses"][:5])
    _report(6, "restriction theorem", ok, t0, 120)


def test_acceptance_07_hamiltonian_reduction():
    t0 = time.time()
    result = suites.suite_qhr(seed=0, n=50)
    ok = result["ok"]
    if not ok:
        print(result["witnesses"][:5])
    _report(7, "hamiltonian reduction", ok, t0, 60)


def test_acceptance_08_elprime_identity():
    t0 = time.time()
    result = suites.suite_elprime(seed=0, n=20)
    ok = result["ok"]
    if not ok:
        print(result["witnesses"][:5])
    _report(8, "twisted scalar identity", ok, t0, 60)


def test_acceptance_09_decategorified_satake():
    t0 = time.time()
    result = suites.suite_satake()
    ok = result["ok"]
    if not ok:
        print(result["witnesses"][:5])
    # headline numbers stated explicitly
    from klrwcb.kacmoody import decat_chevalley
    a1 = Quiver(["x"], [])
    ok &= sum(decat_chevalley(a1, {"x": 2}, {"x": 2})["table"].values()) == 3
    a2 = Quiver(["1", "2"], [Edge("a", "1", "2")])
    ok &= sum(decat_chevalley(a2, {"1": 1, "2": 1},
                              {"1": 2, "2": 2})["table"].values()) == 8
    _report(9, "decategorified Satake", ok, t0, 10)


def test_acceptance_10_vanishing_certificate():
    t0 = time.time()
    q = kronecker_quiver()
    dims = DimensionData({"alpha": 2, "beta": 1}, {"alpha": 0, "beta": 0})
    comp = crawley_boevey(q, dims)
    eng = Engine(comp, Flavour({"e": as_scalar(1), "f": as_scalar(1)}))
    component = q.components()[0]
    rng = random.Random(0)
    ok = True
    for trial in range(10):
        gamma = {"alpha": [as_scalar(rng.randint(-4, 4)) for _ in range(2)],
                 "beta": [as_scalar(rng.randint(-4, 4))]}
        theta, theta_p, check = eng.vanishing_certificate(gamma, component,
                                                          checks=6, seed=trial)
        ok &= check
        ok &= is_unsteady(theta.top)[0]
    _report(10, "vanishing certificate", ok, t0, 30)


def test_acceptance_11_degree_homogeneity():
    t0 = time.time()
    q = kronecker_quiver()
    dims = DimensionData({"alpha": 2, "beta": 1}, {"alpha": 1, "beta": 1})
    comp = crawley_boevey(q, dims)
    eng = Engine(comp, Flavour({"e": as_scalar(1), "f": as_scalar(1),
                                "w[alpha]0": as_scalar(0),
                                "w[beta]0": as_scalar(2)}))
    rng = random.Random(0)
    ok = True
    checked = 0
    while checked < 100:
        base = {"alpha": [as_scalar(rng.randint(-3, 3)) for _ in range(2)],
                "beta": [as_scalar(rng.randint(-3, 3))]}
        shift = {v: [a + rng.randint(-2, 2) for a in vals]
                 for v, vals in base.items()}
        bottom = from_weight(base, comp, eng.flavour)
        top = from_weight(shift, comp, eng.flavour)
        d = eng.straight_line(bottom, top)
        if rng.random() < 0.6:
            d = eng.add_dots(d, [(rng.randint(1, 3), Fraction(1, 101))])
        deg = eng.degree(d)
        f = PolyVector(bottom, rng.choice(
            [ONE_POLY, yvar(1), yvar(2) * yvar(3), yvar(1) ** 2,
             yvar(1) * Polynomial.variable("h")]))
        out = eng.act(d, f)
        if not out.poly:
            continue
        checked += 1
        ok &= out.degree(eng) == f.degree(eng) + deg
    _report(11, "degree homogeneity", ok, t0, 30)
