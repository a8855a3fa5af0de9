import itertools
import random
from fractions import Fraction

import pytest

from klrwcb.quiver import DimensionData, Flavour, crawley_boevey, kronecker_quiver
from klrwcb.scalars import SymbolTable, as_scalar
from klrwcb.sequences import (FlavouredSequence, NonIntegralInputError,
                              ZCFlavouredSequence, ZCLongitude, build_cgr,
                              corporeal, enumerate_orders, equivalent,
                              format_sequence, from_weight, ghost, is_unsteady,
                              parse_sequence, red, to_loading_order, validate,
                              zc_concat, zc_is_unsteady, zc_split, zc_validate)


def kron2_data():
    """The Kronecker quiver with v = (2,1), w = (2,1) and the flavour
    e,f -> 1, r -> -4, r' -> 0, s -> 2."""
    q = kronecker_quiver()
    dims = DimensionData({"alpha": 2, "beta": 1}, {"alpha": 2, "beta": 1})
    comp = crawley_boevey(q, dims)
    fl = Flavour({"e": as_scalar(1), "f": as_scalar(1),
                  "w[alpha]0": as_scalar(-4), "w[alpha]1": as_scalar(0),
                  "w[beta]0": as_scalar(2)})
    return q, dims, comp, fl


R, RP, S = "w[alpha]0", "w[alpha]1", "w[beta]0"


def test_build_cgr_kronecker(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    items = build_cgr(("alpha", "beta"), comp)
    assert set(items) == {ghost(1, "e"), ghost(2, "f")}


def test_build_cgr_empty():
    q = kronecker_quiver()
    comp = crawley_boevey(q, DimensionData({"alpha": 0, "beta": 0},
                                           {"alpha": 0, "beta": 0}))
    assert build_cgr((), comp) == []


def test_build_cgr_kron2():
    q, dims, comp, fl = kron2_data()
    items = build_cgr(("alpha", "alpha", "beta"), comp)
    assert set(items) == {ghost(1, "e"), ghost(2, "e"), ghost(3, "f"),
                          red(R), red(RP), red(S)}


def test_validate_kronecker_row(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    good = parse_sequence("[(alpha,0),(beta,2)] order=[1,e@1,2,f@2]")
    assert validate(good, comp, fl) == []
    # corporeal before its own equal-longitude ghost breaks rule (ii):
    bad = FlavouredSequence(("alpha", "beta"), (as_scalar(-1), as_scalar(0)),
                            (corporeal(1), corporeal(2), ghost(1, "e"),
                             ghost(2, "f")))
    msgs = validate(bad, comp, fl)
    assert any("rule (ii)" in m for m in msgs)
    # ghost placed against the real-longitude order breaks rule (i):
    bad2 = parse_sequence("[(alpha,0),(beta,3)] order=[1,2,e@1,f@2]")
    msgs = validate(bad2, comp, fl)
    assert any("rule (i)" in m for m in msgs)


def test_from_weight_kron2_golden():
    # top data of the worked Kronecker example; the rule that ghost/red
    # items precede corporeals at equal real longitude puts r', e_2 before
    # the third strand
    q, dims, comp, fl = kron2_data()
    s = from_weight({"alpha": [as_scalar(-6), as_scalar(-1)],
                     "beta": [as_scalar(0)]}, comp, fl)
    assert s.labels == ("alpha", "alpha", "beta")
    assert tuple(a.rational for a in s.longitudes) == (-6, -1, 0)
    assert s.order == (corporeal(1), ghost(1, "e"), red(R), corporeal(2),
                       ghost(2, "e"), red(RP), corporeal(3), ghost(3, "f"),
                       red(S))
    assert validate(s, comp, fl) == []


def test_from_weight_bottom_kron2():
    q, dims, comp, fl = kron2_data()
    s = from_weight({"alpha": [as_scalar(-3), as_scalar(3)],
                     "beta": [as_scalar(-2)]}, comp, fl)
    # rule (ii) puts the e-ghost of the first strand before the -2 corporeal
    assert s.order == (red(R), corporeal(1), ghost(1, "e"), corporeal(2),
                       ghost(2, "f"), red(RP), red(S), corporeal(3),
                       ghost(3, "e"))
    assert validate(s, comp, fl) == []


def test_from_weight_roundtrip_and_validity(kronecker_framed):
    q, dims, comp, fl = kronecker_framed
    rng = random.Random(3)
    for _ in range(20):
        gamma = {"alpha": [as_scalar(Fraction(rng.randint(-4, 4),
                                              rng.choice([1, 2])))],
                 "beta": [as_scalar(Fraction(rng.randint(-4, 4),
                                             rng.choice([1, 2])))]}
        s = from_weight(gamma, comp, fl)
        assert validate(s, comp, fl) == []
        got = s.weight()
        for v in gamma:
            assert sorted(got.get(v, []), key=str) == sorted(gamma[v], key=str)


def test_from_weight_trivial_cases():
    q = kronecker_quiver()
    comp = crawley_boevey(q, DimensionData({"alpha": 0, "beta": 0},
                                           {"alpha": 1, "beta": 1}))
    fl = Flavour({"e": as_scalar(1), "f": as_scalar(1),
                  "w[alpha]0": as_scalar(2), "w[beta]0": as_scalar(0)})
    s = from_weight({"alpha": [], "beta": []}, comp, fl)
    assert s.order == (red("w[beta]0"), red("w[alpha]0"))


def test_from_weight_repeated_zero_single_vertex():
    from klrwcb.quiver import Quiver
    q = Quiver(["i"], [])
    comp = crawley_boevey(q, DimensionData({"i": 2}, {"i": 0}))
    fl = Flavour({})
    s = from_weight({"i": [as_scalar(0), as_scalar(0)]}, comp, fl)
    assert s.labels == ("i", "i")
    assert s.longitudes == (as_scalar(0), as_scalar(0))
    assert s.order == (corporeal(1), corporeal(2))


def test_equivalent_identity(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    s = parse_sequence("[(alpha,0),(beta,2)] order=[1,e@1,2,f@2]")
    ok, sigma = equivalent(s, s, comp, fl)
    assert ok and sigma == {1: 1, 2: 2}


def test_equivalent_kronecker_rows(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    r34a = parse_sequence("[(alpha,0),(beta,0)] order=[1,2,f@2,e@1]")
    r34b = parse_sequence("[(beta,0),(alpha,0)] order=[1,2,e@2,f@1]")
    ok, sigma = equivalent(r34a, r34b, comp, fl)
    assert ok and sigma == {1: 2, 2: 1}
    # different regimes are inequivalent: the alpha strand sits on opposite
    # sides of the f-ghost
    r1 = parse_sequence("[(alpha,0),(beta,2)] order=[1,e@1,2,f@2]")
    r2 = parse_sequence("[(alpha,0),(beta,1/2)] order=[1,2,e@1,f@2]")
    assert not equivalent(r1, r2, comp, fl)[0]


def test_equivalent_is_equivalence_relation(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    seqs = enumerate_orders(None, {"alpha": [as_scalar(0)],
                                   "beta": [as_scalar(0)]}, comp, fl,
                            up_to_equivalence=False)
    assert len(seqs) >= 3
    for a in seqs:
        assert equivalent(a, a, comp, fl)[0]
        for b in seqs:
            ab = equivalent(a, b, comp, fl)[0]
            assert ab == equivalent(b, a, comp, fl)[0]
            for c in seqs:
                if ab and equivalent(b, c, comp, fl)[0]:
                    assert equivalent(a, c, comp, fl)[0]


def test_unsteady_golden_triple(kronecker_framed):
    q, dims, comp, fl = kronecker_framed
    r_id = "w[alpha]0"
    mk = lambda order: FlavouredSequence(("beta", "alpha"),
                                         (as_scalar(-4), as_scalar(0)), order)
    s1 = mk((corporeal(1), ghost(1, "f"), red(r_id), corporeal(2),
             ghost(2, "e")))
    s2 = mk((red(r_id), corporeal(1), corporeal(2), ghost(1, "f"),
             ghost(2, "e")))
    s3 = mk((corporeal(1), red(r_id), corporeal(2), ghost(1, "f"),
             ghost(2, "e")))
    assert is_unsteady(s1) == (True, 2)
    assert is_unsteady(s2) == (True, 4)
    assert is_unsteady(s3) == (False, None)


def test_unsteady_whole_sequence_counts():
    # with no framing anywhere the whole order is an escaping group
    q = kronecker_quiver()
    comp = crawley_boevey(q, DimensionData({"alpha": 1, "beta": 0},
                                           {"alpha": 0, "beta": 0}))
    fl = Flavour({"e": as_scalar(1), "f": as_scalar(1)})
    s = from_weight({"alpha": [as_scalar(0)], "beta": []}, comp, fl)
    assert is_unsteady(s)[0]


def test_unsteady_invariant_under_equivalence(kronecker_framed):
    q, dims, comp, fl = kronecker_framed
    for a, b in [(as_scalar(0), as_scalar(0)), (as_scalar(0), as_scalar(-4))]:
        seqs = enumerate_orders(None, {"alpha": [a], "beta": [b]}, comp, fl,
                                up_to_equivalence=False)
        for s1, s2 in itertools.combinations(seqs, 2):
            if equivalent(s1, s2, comp, fl)[0]:
                assert is_unsteady(s1)[0] == is_unsteady(s2)[0]


def test_to_loading_order_kron2():
    q, dims, comp, fl = kron2_data()
    s = from_weight({"alpha": [as_scalar(-6), as_scalar(-1)],
                     "beta": [as_scalar(0)]}, comp, fl)
    loaded = to_loading_order(s, comp, fl)
    assert loaded.order == (corporeal(1), ghost(1, "e"), red(R), corporeal(2),
                            red(RP), ghost(2, "e"), corporeal(3),
                            ghost(3, "f"), red(S))


def test_to_loading_order_trivial_and_keys(a1_data):
    q, dims, comp, fl = a1_data
    s = from_weight({"x": [as_scalar(1)]}, comp, fl)
    assert to_loading_order(s, comp, fl).order == s.order


def test_to_loading_order_own_ghost(kronecker_unframed):
    # a corporeal at 0 precedes its own ghost at 1: keys 0 versus 1/2
    q, dims, comp, fl = kronecker_unframed
    s = from_weight({"alpha": [as_scalar(0)], "beta": []}, comp, fl)
    loaded = to_loading_order(s, comp, fl)
    assert loaded.order == (corporeal(1), ghost(1, "e"))


def test_to_loading_order_rejects_nonintegral(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    s = from_weight({"alpha": [as_scalar(Fraction(1, 2))], "beta": []},
                    comp, fl)
    with pytest.raises(NonIntegralInputError):
        to_loading_order(s, comp, fl)


def test_loading_order_is_equivalent(kronecker_framed):
    # the bridge lemma, machine checked on random integral data
    q, dims, comp, fl = kronecker_framed
    rng = random.Random(11)
    for _ in range(15):
        gamma = {"alpha": [as_scalar(rng.randint(-4, 4))],
                 "beta": [as_scalar(rng.randint(-4, 4))]}
        s = from_weight(gamma, comp, fl)
        loaded = to_loading_order(s, comp, fl)
        assert validate(loaded, comp, fl) == []
        assert equivalent(s, loaded, comp, fl)[0]


def test_enumerate_kronecker_table(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    def enum(a, b):
        return enumerate_orders(None, {"alpha": [as_scalar(a)],
                                       "beta": [as_scalar(b)]}, comp, fl)
    assert [s.order for s in enum(0, 2)] == \
        [(corporeal(1), ghost(1, "e"), corporeal(2), ghost(2, "f"))]
    assert [s.order for s in enum(0, Fraction(1, 2))] == \
        [(corporeal(1), corporeal(2), ghost(1, "e"), ghost(2, "f"))]
    assert len(enum(0, 0)) == 1
    assert len(enumerate_orders(None, {"alpha": [as_scalar(0)],
                                       "beta": [as_scalar(0)]}, comp, fl,
                                up_to_equivalence=False)) == 4


def test_sequence_literal_roundtrip():
    t = SymbolTable()
    s = parse_sequence("[(alpha,0),(beta,1/2+1i)] order=[1,2,e@1,f@2,!r]", t)
    s2 = parse_sequence(format_sequence(s), t)
    assert s == s2


# -- Z x C flavoured sequences ------------------------------------------------


def zc_kron(kron, levels):
    q, dims, comp, fl = kron
    labels, longs, order = [], [], []
    # build per-level sequences and concatenate
    parts = []
    for p, (a, b) in levels:
        s = from_weight({"alpha": [as_scalar(a)], "beta": [as_scalar(b)]},
                        comp, fl)
        parts.append((p, s))
    return zc_concat(parts)


def test_zc_validate_embeds_level_zero(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    z = zc_kron(kronecker_unframed, [(0, (0, 2))])
    assert zc_validate(z, comp, fl) == []


def test_zc_validate_level_order(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    z = zc_kron(kronecker_unframed, [(0, (0, 2)), (1, (0, 2))])
    assert zc_validate(z, comp, fl) == []
    bad = ZCFlavouredSequence(z.labels, z.longitudes, tuple(reversed(z.order)))
    assert zc_validate(bad, comp, fl)


def test_zc_split_concat_roundtrip(kronecker_unframed):
    q, dims, comp, fl = kronecker_unframed
    rng = random.Random(5)
    for _ in range(10):
        levels = sorted(rng.sample([-1, 0, 1, 2], rng.randint(1, 3)))
        z = zc_kron(kronecker_unframed,
                    [(p, (rng.randint(-3, 3), rng.randint(-3, 3)))
                     for p in levels])
        assert zc_validate(z, comp, fl) == []
        parts = zc_split(z)
        assert [p for p, _ in parts] == levels
        assert zc_concat(parts) == z


def test_zc_unsteady(kronecker_framed):
    q, dims, comp, fl = kronecker_framed
    # an item at level 1 with a red at level 0 escapes
    lvl0 = from_weight({"alpha": [as_scalar(0)], "beta": [as_scalar(0)]},
                       comp, fl)
    comp0 = crawley_boevey(kronecker_quiver(),
                           DimensionData({"alpha": 1, "beta": 1},
                                         {"alpha": 0, "beta": 0}))
    fl0 = Flavour({"e": as_scalar(1), "f": as_scalar(1)})
    lvl1 = from_weight({"alpha": [as_scalar(0)], "beta": []}, comp0, fl0)
    z = zc_concat([(0, lvl0), (1, lvl1)])
    assert zc_is_unsteady(z)[0]
    # all level zero, steady underneath: steady as a whole
    z0 = zc_concat([(0, lvl0)])
    assert zc_is_unsteady(z0)[0] == is_unsteady(lvl0)[0]
