import random
from fractions import Fraction

import pytest

from klrwcb.scalars import (EQ, GT, LT, AmbiguousOrderError, ExactScalar,
                            SymbolTable, as_scalar, format_scalar,
                            is_integral_difference, parse_scalar, real_compare)


def test_integral_difference_examples():
    assert is_integral_difference(Fraction(5, 2), Fraction(5, 2))
    assert is_integral_difference(parse_scalar("3+0i"), parse_scalar("1+0i"))
    assert not is_integral_difference(parse_scalar("3"), parse_scalar("3+1i"))
    t = SymbolTable()
    s = parse_scalar("sym:sqrt2~1.41421", t)
    assert not is_integral_difference(s, 0)


def test_real_compare_examples():
    t = SymbolTable()
    assert real_compare(0, 1) == LT
    assert real_compare(parse_scalar("1+7i"), parse_scalar("1-2i")) == EQ
    s = parse_scalar("sym:sqrt2~1.41421", t)
    assert real_compare(s, Fraction(3, 2), t) == LT
    assert real_compare(s, s, t) == EQ


def test_ambiguous_order():
    t = SymbolTable().declare("a", Fraction(1, 2)).declare("b", Fraction(1, 2))
    x = ExactScalar(0, 0, {"a": 1})
    y = ExactScalar(0, 0, {"b": 1})
    with pytest.raises(AmbiguousOrderError):
        real_compare(x, y, t)
    # refining a shadow resolves it
    t.declare("b", Fraction(501, 1000))
    assert real_compare(x, y, t) == LT


def test_parse_format_roundtrip():
    t = SymbolTable()
    cases = ["5/2", "3", "-1/3", "1/2+3/4i", "-2i", "sym:sqrt2~1.41421",
             "1-sym:sqrt2~1.41421", "0"]
    for lit in cases:
        a = parse_scalar(lit, t)
        b = parse_scalar(format_scalar(a), t)
        assert a == b, lit


def test_arithmetic():
    a = parse_scalar("1/2+1i")
    b = parse_scalar("1/2-1i")
    assert (a + b) == as_scalar(1)
    assert (a - a) == as_scalar(0)
    assert (a * 2).rational == 1
    assert as_scalar(3) / Fraction(3, 2) == as_scalar(2)


def test_integral_difference_is_equivalence():
    rng = random.Random(0)
    t = SymbolTable().declare("s", Fraction(7, 5))
    pool = []
    for _ in range(12):
        pool.append(ExactScalar(Fraction(rng.randint(-4, 4), rng.choice([1, 2])),
                                Fraction(rng.randint(-1, 1)),
                                {"s": rng.choice([0, 1])}))
    for a in pool:
        assert is_integral_difference(a, a)
        for b in pool:
            assert is_integral_difference(a, b) == is_integral_difference(b, a)
            for c in pool:
                if is_integral_difference(a, b) and is_integral_difference(b, c):
                    assert is_integral_difference(a, c)


def test_real_compare_total_preorder_on_rationals():
    rng = random.Random(1)
    pool = [as_scalar(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])))
            for _ in range(15)]
    for a in pool:
        for b in pool:
            c1 = real_compare(a, b)
            c2 = real_compare(b, a)
            assert c1 == -c2
            for c in pool:
                if c1 != GT and real_compare(b, c) != GT:
                    assert real_compare(a, c) != GT


def test_integral_difference_never_ambiguous():
    t = SymbolTable().declare("s", Fraction(3, 2))
    a = ExactScalar(Fraction(1, 3), 2, {"s": 2})
    b = a + 5
    assert is_integral_difference(a, b)
    # comparison of integrally-differing scalars needs no shadows at all
    assert real_compare(a, b, None) == LT
