"""Flavoured KLRW diagrams and their polynomial representation.

A diagram is a matched pair of flavoured sequences, a list of dotted
strands, and a time-ordered word of crossing events.  The algebra acts on
polynomial vectors (one polynomial in y_1..y_n, h per sequence, variables
positional in the corporeal order) by composing local operators:

  * dot on the strand at corporeal position p:  multiply by y_p;
  * same-label integral-difference corporeal crossing at positions r, r+1:
    the divided-difference operator f -> (f - s f)/(y_r - y_{r+1});
  * a t(e)-labelled corporeal passing rightward across an e-ghost with
    integral difference: multiply by (y_owner - y_self); leftward: nothing;
  * a t(e)-labelled corporeal passing rightward across an e-red with
    integral difference: multiply by y_self; leftward: nothing;
  * every other crossing: nothing.

All relations of the algebra hold for these operators; verify_relations
checks them exhaustively over given quiver data and is the normative
arbiter for the sign conventions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .poly import HBAR, ONE_POLY, Polynomial, as_poly
from .scalars import as_scalar, is_integral_difference
from .sequences import (FlavouredSequence, build_cgr, corporeal,
                        from_weight, ghost, is_unsteady, validate)


class NoMatchingError(ValueError):
    pass


class TagMismatchError(ValueError):
    pass


class ComposeMismatchError(ValueError):
    pass


class HTooSmallError(ValueError):
    pass


class FramedComponentError(ValueError):
    pass


def yvar(p):
    return Polynomial.variable("y%d" % p)


@dataclass(frozen=True)
class PolyVector:
    """A polynomial tagged by the flavoured sequence it lives over.

    The intrinsic degree adds the sequence shift (the number of interacting
    corporeal-before-ghost/red pairs) to the weighted polynomial degree
    with deg(y) = deg(h) = 2, so that every diagram raises it by exactly
    the diagram degree.
    """

    seq: FlavouredSequence
    poly: Polynomial

    def degree(self, engine):
        raw = self.poly.weighted_degree()
        if raw is None:
            return None
        return raw + engine.sequence_shift(self.seq)


@dataclass(frozen=True)
class Diagram:
    bottom: FlavouredSequence
    top: FlavouredSequence
    match: tuple                  # pairs (bottom k, top k')
    events: tuple                 # ("cross", left_item, right_item, time)
                                  # or ("dot", corporeal_item, time)

    def sigma(self):
        return dict(self.match)

    def dots(self):
        return tuple((ev[1].k, ev[2]) for ev in self.events if ev[0] == "dot")

    def crossings(self):
        return tuple(ev for ev in self.events if ev[0] == "cross")

    def item_map(self):
        """Bottom CGR item -> top CGR item along strands."""
        sig = self.sigma()
        out = {}
        for it in self.bottom.order:
            if it.is_corporeal():
                out[it] = corporeal(sig[it.k])
            elif it.is_ghost():
                out[it] = ghost(sig[it.k], it.edge)
            else:
                out[it] = it
        return out


class Engine:
    """Holds the quiver data and implements the diagram calculus."""

    def __init__(self, completed, flavour, table=None, demazure_sign=1):
        self.completed = completed
        self.flavour = flavour
        self.table = table
        self.demazure_sign = demazure_sign
        self.tails = {e.id: e.tail for e in completed.edges}

    # -- strand-pair classification ----------------------------------------

    def pair_kind(self, seq, a, b):
        """Classify the unordered interaction of two bottom items:
        "demazure" (same label, integral corporeal pair), "ghost"/"red"
        (corporeal against a relevant ghost or red), else "inert".
        Returns (kind, corporeal_item, other_item)."""
        if a.is_corporeal() and b.is_corporeal():
            la, lb = seq.labels[a.k - 1], seq.labels[b.k - 1]
            if la == lb and is_integral_difference(seq.longitudes[a.k - 1],
                                                   seq.longitudes[b.k - 1]):
                return "demazure", a, b
            return "inert", a, b
        if not a.is_corporeal() and not b.is_corporeal():
            return "inert", a, b
        c, g = (a, b) if a.is_corporeal() else (b, a)
        if self.tails[g.edge] != seq.labels[c.k - 1]:
            return "inert", c, g
        if not is_integral_difference(seq.longitude(c, self.flavour),
                                      seq.longitude(g, self.flavour)):
            return "inert", c, g
        return ("red" if g.is_red() else "ghost"), c, g

    def sequence_shift(self, seq):
        """Count interacting pairs with the corporeal left of the ghost/red."""
        shift = 0
        for i, a in enumerate(seq.order):
            if not a.is_corporeal():
                continue
            for b in seq.order[i + 1:]:
                if b.is_corporeal():
                    continue
                kind, _, _ = self.pair_kind(seq, a, b)
                if kind in ("ghost", "red"):
                    shift += 1
        return shift

    # -- construction -------------------------------------------------------

    def straight_line(self, bottom, top):
        """The minimal-crossing diagram between two sequences.

        The corporeal matching pairs strands with the same label and the
        same longitude class, in order; it must be a bijection on every
        class.  Events are read off a straight-line interpolation of the
        induced item positions, with deterministic tie-breaking.
        """
        return self._interpolate(bottom, top, self._minimal_matching(bottom, top))

    def permutation_diagram(self, bottom, top, sig):
        """Straight-line interpolation realizing a prescribed corporeal
        matching (labels and longitude classes must agree along it)."""
        for k, kt in sig.items():
            if bottom.labels[k - 1] != top.labels[kt - 1] or \
                    not is_integral_difference(bottom.longitudes[k - 1],
                                               top.longitudes[kt - 1]):
                raise NoMatchingError("matching %d -> %d breaks labels or "
                                      "longitude classes" % (k, kt))
        return self._interpolate(bottom, top, dict(sig))

    def _interpolate(self, bottom, top, sig):
        item_map = {}
        for it in bottom.order:
            if it.is_corporeal():
                item_map[it] = corporeal(sig[it.k])
            elif it.is_ghost():
                item_map[it] = ghost(sig[it.k], it.edge)
            else:
                item_map[it] = it
        top_pos = {it: i for i, it in enumerate(top.order)}
        start = {it: i for i, it in enumerate(bottom.order)}
        end = {it: top_pos[item_map[it]] for it in bottom.order}

        pending = []
        for u, v in itertools.combinations(bottom.order, 2):
            if (start[u] - start[v]) * (end[u] - end[v]) < 0:
                num = Fraction(start[v] - start[u])
                den = Fraction((start[v] - start[u]) - (end[v] - end[u]))
                pending.append((num / den, u, v))
        pending.sort(key=lambda tup: (tup[0], min(start[tup[1]], start[tup[2]]),
                                      max(start[tup[1]], start[tup[2]])))
        order = list(bottom.order)
        events = []
        while pending:
            for idx, (t, u, v) in enumerate(pending):
                iu, iv = order.index(u), order.index(v)
                if abs(iu - iv) == 1:
                    left, right = (u, v) if iu < iv else (v, u)
                    events.append(("cross", left, right, None))
                    li = min(iu, iv)
                    order[li], order[li + 1] = order[li + 1], order[li]
                    pending.pop(idx)
                    break
            else:
                raise NoMatchingError("could not schedule crossings")
        events = tuple(("cross", ev[1], ev[2], Fraction(i + 1, len(events) + 1))
                       for i, ev in enumerate(events))
        if [item_map[it] for it in order] != list(top.order):
            raise NoMatchingError("interpolation does not reach the top sequence")
        return Diagram(bottom, top, tuple(sorted(sig.items())), events)

    def _minimal_matching(self, bottom, top):
        if bottom.n != top.n:
            raise NoMatchingError("different numbers of corporeal strands")

        def classes(seq):
            out = {}
            for pos, it in enumerate(seq.order):
                if not it.is_corporeal():
                    continue
                a = seq.longitudes[it.k - 1]
                key = (str(seq.labels[it.k - 1]), a.imaginary, a.symbolic,
                       a.rational - (a.rational.numerator // a.rational.denominator))
                out.setdefault(key, []).append(it.k)
            return out

        cb, ct = classes(bottom), classes(top)
        if set(cb) != set(ct) or any(len(cb[k]) != len(ct[k]) for k in cb):
            raise NoMatchingError("label and longitude classes do not match")
        sig = {}
        for key in cb:
            for kb, kt in zip(cb[key], ct[key]):
                sig[kb] = kt
        return sig

    def identity(self, seq):
        return self.straight_line(seq, seq)

    def add_dots(self, diagram, dots):
        """New diagram with extra dots; dots is a list of (bottom corporeal
        index, height).  Dots may not sit on a crossing of their strand."""
        events = list(diagram.events)
        for k, t in dots:
            t = Fraction(t)
            if not 0 < t < 1:
                raise ValueError("dot height %s outside (0,1)" % t)
            for ev in diagram.events:
                if ev[0] == "cross" and ev[-1] == t and \
                        corporeal(k) in (ev[1], ev[2]):
                    raise ValueError("dot on strand %d sits on a crossing" % k)
            events.append(("dot", corporeal(k), t))
        events.sort(key=lambda ev: (ev[-1], ev[0]))
        return Diagram(diagram.bottom, diagram.top, diagram.match, tuple(events))

    # -- composition ---------------------------------------------------------

    def compose(self, d2, d1):
        """Stack d2 on top of d1; the sequences must agree exactly."""
        if d1.top != d2.bottom:
            raise ComposeMismatchError("top of the first factor differs from "
                                       "the bottom of the second")
        sig1 = d1.sigma()
        inv1 = {v: k for k, v in sig1.items()}
        sig2 = d2.sigma()

        def pull(item):
            if item.is_corporeal():
                return corporeal(inv1[item.k])
            if item.is_ghost():
                return ghost(inv1[item.k], item.edge)
            return item

        events = [(ev[0],) + ev[1:-1] + (ev[-1] / 2,) for ev in d1.events]
        for ev in d2.events:
            if ev[0] == "cross":
                events.append(("cross", pull(ev[1]), pull(ev[2]),
                               Fraction(1, 2) + ev[3] / 2))
            else:
                events.append(("dot", pull(ev[1]), Fraction(1, 2) + ev[2] / 2))
        match = tuple(sorted((k, sig2[v]) for k, v in sig1.items()))
        return Diagram(d1.bottom, d2.top, match, tuple(events))

    # -- the polynomial representation ----------------------------------------

    def act(self, diagram, vector):
        """Apply a diagram (or a list of (coeff, diagram)) to a PolyVector."""
        if isinstance(diagram, list):
            total = None
            for coeff, dia in diagram:
                piece = self.act(dia, vector)
                term = PolyVector(piece.seq, as_poly(coeff) * piece.poly)
                total = term if total is None else PolyVector(
                    total.seq, total.poly + term.poly)
            return total
        if vector.seq != diagram.bottom:
            raise TagMismatchError("vector tag differs from the diagram bottom")
        order = list(diagram.bottom.order)
        poly = vector.poly
        for ev in sorted(diagram.events, key=lambda e: e[-1]):
            if ev[0] == "dot":
                p = self._corporeal_position(order, ev[1])
                poly = poly * yvar(p)
                continue
            _, left, right, _ = ev
            il, ir = order.index(left), order.index(right)
            if (il, ir) != (ir - 1, il + 1):
                raise ValueError("event %r is not adjacent" % (ev,))
            poly = self._crossing_operator(diagram.bottom, order, left, right)(poly)
            order[il], order[ir] = order[ir], order[il]
        item_map = diagram.item_map()
        if [item_map[it] for it in order] != list(diagram.top.order):
            raise ValueError("event word does not realize the matching")
        return PolyVector(diagram.top, poly)

    def _corporeal_position(self, order, item):
        p = 0
        for it in order:
            if it.is_corporeal():
                p += 1
            if it == item:
                return p
        raise KeyError(item)

    def _crossing_operator(self, seq, order, left, right):
        kind, c, g = self.pair_kind(seq, left, right)
        if kind == "inert":
            if left.is_corporeal() and right.is_corporeal():
                # variables travel with strands: positionally this is the swap
                r = self._corporeal_position(order, left)
                return lambda f: f.swap_vars("y%d" % r, "y%d" % (r + 1))
            return lambda f: f
        if kind == "demazure":
            r = self._corporeal_position(order, left)
            return lambda f: self._demazure(f, r)
        p = self._corporeal_position(order, c)
        moving_right = (c == left)
        if kind == "ghost":
            if not moving_right:
                return lambda f: f
            q = self._corporeal_position(order, corporeal(g.k))
            return lambda f: f * (yvar(q) - yvar(p))
        if not moving_right:
            return lambda f: f
        return lambda f: f * yvar(p)

    def _demazure(self, f, r):
        a, b = "y%d" % r, "y%d" % (r + 1)
        denom = self.demazure_sign * (Polynomial.variable(a) - Polynomial.variable(b))
        return (f - f.swap_vars(a, b)).divide_exact(denom)

    # -- degree ---------------------------------------------------------------

    def degree(self, diagram):
        deg = 0
        for ev in diagram.events:
            if ev[0] == "dot":
                deg += 2
                continue
            kind, _, _ = self.pair_kind(diagram.bottom, ev[1], ev[2])
            if kind == "demazure":
                deg -= 2
            elif kind in ("ghost", "red"):
                deg += 1
        return deg

    # -- nilHecke and cyclotomic idempotents -----------------------------------

    def nilhecke_idempotent(self, gamma):
        """The primitive idempotent projecting along the stabilizer of the
        weight: staircase dots y_1^{k-1}...y_{k-1} on each block of equal
        (label, longitude) consecutive strands, followed by the block's
        longest-word crossings.  With trivial stabilizer this is e(gamma)."""
        seq = gamma if isinstance(gamma, FlavouredSequence) else \
            from_weight(gamma, self.completed, self.flavour, self.table)
        blocks = self._stabilizer_blocks(seq)
        sig = {k: k for k in range(1, seq.n + 1)}
        for block in blocks:
            for a, b in zip(block, reversed(block)):
                sig[a] = b
        word = self.permutation_diagram(seq, seq, sig)
        dots = []
        t = Fraction(0)
        step = (word.events[0][-1] if word.events else Fraction(1)) \
            / (1 + sum(len(b) * (len(b) - 1) // 2 for b in blocks))
        for block in blocks:
            k = len(block)
            for i, strand in enumerate(block):
                for _ in range(k - 1 - i):
                    t += step
                    dots.append((strand, t))
        return self.add_dots(word, dots)

    def _stabilizer_blocks(self, seq):
        blocks = []
        current = []
        for k in range(1, seq.n + 1):
            if current and seq.labels[k - 1] == seq.labels[current[-1] - 1] \
                    and seq.longitudes[k - 1] == seq.longitudes[current[-1] - 1]:
                current.append(k)
            else:
                if len(current) > 1:
                    blocks.append(current)
                current = [k]
        if len(current) > 1:
            blocks.append(current)
        return blocks

    def cyclotomic_idempotent(self, word, sign, H):
        """e(word, +-H): the straight-line idempotent whose k-th strand
        (left to right) has label word[k] and longitude kH (sign +) or
        (k - n - 1)H (sign -)."""
        n = len(word)
        bound = max([abs(_real_int(as_scalar(self.flavour[e.id])))
                     for e in self.completed.edges] + [0])
        if H <= bound + n:
            raise HTooSmallError("H must exceed %d" % (bound + n))
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        longs = [k * H if sign > 0 else (k - n - 1) * H for k in range(1, n + 1)]
        seq0 = FlavouredSequence(tuple(word), tuple(as_scalar(a) for a in longs), ())
        items = [corporeal(k) for k in range(1, n + 1)]
        items += build_cgr(word, self.completed)
        import functools

        def cmp(u, v):
            from .scalars import EQ, real_compare
            au = seq0.longitude(u, self.flavour)
            av = seq0.longitude(v, self.flavour)
            c = real_compare(au, av, self.table)
            if c != EQ:
                return c
            tu = (1, "", u.k) if u.is_corporeal() else (0, str(u.edge), u.k)
            tv = (1, "", v.k) if v.is_corporeal() else (0, str(v.edge), v.k)
            return -1 if tu < tv else (0 if tu == tv else 1)

        items.sort(key=functools.cmp_to_key(cmp))
        seq = FlavouredSequence(seq0.labels, seq0.longitudes, tuple(items))
        bad = validate(seq, self.completed, self.flavour, self.table)
        if bad:
            raise ValueError("cyclotomic sequence invalid: %s" % bad)
        return self.identity(seq)

    # -- vanishing certificates --------------------------------------------------

    def vanishing_certificate(self, gamma, component, H=None, checks=20, seed=0):
        """Certificate that e(gamma) dies in the steadied quotient when the
        connected component carries no framing: the straight-line diagrams
        theta: e(gamma) -> e(gamma_H) and back compose to e(gamma), while
        e(gamma_H) is unsteady.

        Returns (theta, theta_prime, check) with check True iff the exact
        operator identity act(theta' theta) = act(e(gamma)) holds on the
        test family and e(gamma_H) is unsteady.
        """
        comp_set = set(component)
        for e in self.completed.new_edges():
            if e.tail in comp_set:
                raise FramedComponentError("component %r carries framing"
                                           % (sorted(map(str, comp_set)),))
        if H is None:
            spread = 0
            for vals in gamma.values():
                for a in vals:
                    spread = max(spread, abs(_real_int(as_scalar(a))) + 1)
            bound = max([abs(_real_int(as_scalar(self.flavour[e.id])))
                         for e in self.completed.edges] + [0])
            H = 2 * (spread + bound) + len(gamma) + 2
        gamma_H = {v: [as_scalar(a) + (H if v in comp_set else 0) for a in vals]
                   for v, vals in gamma.items()}
        s = from_weight(gamma, self.completed, self.flavour, self.table)
        s_H = from_weight(gamma_H, self.completed, self.flavour, self.table)
        theta = self.straight_line(s, s_H)
        theta_prime = self.straight_line(s_H, s)
        loop = self.compose(theta_prime, theta)
        ident = self.identity(s)
        ok = is_unsteady(s_H)[0]
        rng = random.Random(seed)
        for f in _test_polynomials(s.n, 4, checks, rng):
            vec = PolyVector(s, f)
            if self.act(loop, vec).poly != self.act(ident, vec).poly:
                ok = False
                break
        return theta, theta_prime, ok


def _real_int(a):
    q = a.rational
    return q.numerator // q.denominator if q.denominator == 1 else \
        int(q.numerator / q.denominator)


def _test_polynomials(n, degree_bound, extra_random, rng):
    """All y/h monomials of weighted degree <= 2*degree_bound plus random
    polynomials."""
    vars_ = ["y%d" % k for k in range(1, n + 1)] + [HBAR]
    monos = [ONE_POLY]
    frontier = [ONE_POLY]
    for _ in range(degree_bound):
        nxt = []
        for m in frontier:
            for v in vars_:
                nxt.append(m * Polynomial.variable(v))
        monos.extend(nxt)
        frontier = nxt
    seen = set()
    out = []
    for m in monos:
        key = tuple(sorted(m.terms))
        if key not in seen:
            seen.add(key)
            out.append(m)
    for _ in range(extra_random):
        p = sum((Fraction(rng.randint(-3, 3)) * m
                 for m in rng.sample(out, min(4, len(out)))), ONE_POLY * 0)
        out.append(p if p else ONE_POLY)
    return out
