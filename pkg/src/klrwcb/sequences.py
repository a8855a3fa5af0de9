"""Flavoured sequences over C and over Z x C.

A flavoured sequence is a triple (labels, longitudes, total order) on the
set of corporeal, ghostly and red items.  Corporeal item k carries the
longitude a_k, the ghost (k,e) carries a_k + phi_e, and the red item of a
new edge e carries phi_e.  Validity demands weakly increasing real
longitudes along the order, with ghost/red items preceding corporeal items
at equal real longitude.  Corporeal indices are 1-based.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .scalars import (EQ, GT, LT, ExactScalar, as_scalar, format_scalar,
                      is_integral, parse_scalar, real_compare)

CORPOREAL, GHOST, RED = "C", "G", "R"


class NonIntegralInputError(ValueError):
    pass


@dataclass(frozen=True)
class CgrItem:
    kind: str
    k: int = 0          # owning corporeal index (1-based); 0 for red
    edge: str = None    # edge id for ghosts and reds

    def is_corporeal(self):
        return self.kind == CORPOREAL

    def is_ghost(self):
        return self.kind == GHOST

    def is_red(self):
        return self.kind == RED

    def token(self):
        if self.kind == CORPOREAL:
            return str(self.k)
        if self.kind == GHOST:
            return "%s@%d" % (self.edge, self.k)
        return "!%s" % self.edge


def corporeal(k):
    return CgrItem(CORPOREAL, k)


def ghost(k, edge_id):
    return CgrItem(GHOST, k, edge_id)


def red(edge_id):
    return CgrItem(RED, 0, edge_id)


def build_cgr(labels, completed):
    """Ghost and red items for a label word over the completed quiver:
    one ghost (k,e) per old edge e with head label i_k, one red per new edge."""
    items = []
    old = {e.id: e for e in completed.old_edges()}
    for k, lab in enumerate(labels, start=1):
        for e in completed.old_edges():
            if e.head == lab:
                items.append(ghost(k, e.id))
    for e in completed.new_edges():
        items.append(red(e.id))
    return items


@dataclass(frozen=True)
class FlavouredSequence:
    labels: tuple
    longitudes: tuple       # of ExactScalar
    order: tuple            # of CgrItem, the total order left to right

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "longitudes",
                           tuple(as_scalar(a) for a in self.longitudes))
        object.__setattr__(self, "order", tuple(self.order))

    @property
    def n(self):
        return len(self.labels)

    def longitude(self, item, flavour):
        if item.kind == CORPOREAL:
            return self.longitudes[item.k - 1]
        if item.kind == GHOST:
            return self.longitudes[item.k - 1] + as_scalar(flavour[item.edge])
        return as_scalar(flavour[item.edge])

    def label(self, item, completed=None):
        """Vertex label of a corporeal item, edge label of a ghost/red."""
        if item.kind == CORPOREAL:
            return self.labels[item.k - 1]
        return item.edge

    def position(self, item):
        return self.order.index(item)

    def weight(self):
        """Per-vertex longitude multisets gamma_i."""
        gamma = {}
        for lab, a in zip(self.labels, self.longitudes):
            gamma.setdefault(lab, []).append(a)
        return gamma

    def describe(self, flavour=None):
        toks = [it.token() for it in self.order]
        body = "[%s] order=[%s]" % (
            ",".join("(%s,%s)" % (lab, format_scalar(a))
                     for lab, a in zip(self.labels, self.longitudes)),
            ",".join(toks))
        return body


def validate(seq, completed, flavour, table=None):
    """Empty list iff the order is a flavoured sequence; otherwise one
    violation string per offending pair or structural defect."""
    violations = []
    expect = set(build_cgr(seq.labels, completed)) | {corporeal(k)
                                                      for k in range(1, seq.n + 1)}
    if set(seq.order) != expect:
        missing = expect - set(seq.order)
        extra = set(seq.order) - expect
        violations.append("item set mismatch: missing %s extra %s"
                          % (sorted(i.token() for i in missing),
                             sorted(i.token() for i in extra)))
        return violations
    corp = [it.k for it in seq.order if it.is_corporeal()]
    if corp != sorted(corp):
        violations.append("corporeal items out of index order: %s" % (corp,))
    longs = [seq.longitude(it, flavour) for it in seq.order]
    for (i1, it1), (i2, it2) in zip(enumerate(seq.order), enumerate(seq.order[1:], 1)):
        if real_compare(longs[i1], longs[i2], table) == GT:
            violations.append("rule (i): %s at %s precedes %s at %s"
                              % (it1.token(), longs[i1], it2.token(), longs[i2]))
    for i1, it1 in enumerate(seq.order):
        if not it1.is_corporeal():
            continue
        for i2 in range(i1 + 1, len(seq.order)):
            it2 = seq.order[i2]
            if it2.is_corporeal():
                continue
            if real_compare(longs[i1], longs[i2], table) == EQ:
                violations.append("rule (ii): corporeal %s precedes %s at equal "
                                  "real longitude" % (it1.token(), it2.token()))
    return violations


def _real_sort(values, table, key=lambda x: x):
    import functools

    def cmp(u, v):
        c = real_compare(key(u), key(v), table)
        return c

    return sorted(values, key=functools.cmp_to_key(cmp))


def from_weight(gamma, completed, flavour, table=None):
    """The flavoured sequence of a per-vertex longitude multiset, with the
    deterministic tie-breaking: at equal real longitude, ghost/red items are
    sorted by (edge id, owner index) and corporeal items by (vertex id,
    imaginary part, multiset position).
    """
    entries = []
    for vertex in sorted(gamma, key=str):
        for pos, a in enumerate(gamma[vertex]):
            entries.append((as_scalar(a), str(vertex), pos, vertex))
    import functools

    def cmp_entry(u, v):
        c = real_compare(u[0], v[0], table)
        if c != EQ:
            return c
        ku = (u[1], u[0].imaginary, u[2])
        kv = (v[1], v[0].imaginary, v[2])
        return -1 if ku < kv else (0 if ku == kv else 1)

    entries.sort(key=functools.cmp_to_key(cmp_entry))
    labels = tuple(e[3] for e in entries)
    longitudes = tuple(e[0] for e in entries)
    seq0 = FlavouredSequence(labels, longitudes, ())
    items = [corporeal(k) for k in range(1, len(labels) + 1)]
    items += build_cgr(labels, completed)

    def cmp_item(u, v):
        au = seq0.longitude(u, flavour)
        av = seq0.longitude(v, flavour)
        c = real_compare(au, av, table)
        if c != EQ:
            return c
        tu = (1, "", u.k) if u.is_corporeal() else (0, str(u.edge), u.k)
        tv = (1, "", v.k) if v.is_corporeal() else (0, str(v.edge), v.k)
        return -1 if tu < tv else (0 if tu == tv else 1)

    items.sort(key=functools.cmp_to_key(cmp_item))
    seq = FlavouredSequence(labels, longitudes, items)
    bad = validate(seq, completed, flavour, table)
    if bad:
        raise ValueError("from_weight produced an invalid sequence: %s" % bad)
    return seq


def equivalent(s1, s2, completed, flavour, table=None):
    """Decide equivalence of two valid flavoured sequences.

    Returns (True, sigma) with sigma a dict on corporeal indices, or
    (False, None).  sigma must preserve labels, preserve the relative order
    of each corporeal against every ghost/red item whose edge has tail equal
    to the corporeal's label, and preserve the strict real-longitude order
    inside each label class.
    """
    if sorted(map(str, s1.labels)) != sorted(map(str, s2.labels)):
        return False, None
    if len(s1.order) != len(s2.order):
        return False, None

    pos1 = {it: i for i, it in enumerate(s1.order)}
    pos2 = {it: i for i, it in enumerate(s2.order)}
    tails = {e.id: e.tail for e in completed.edges}

    # condition (3) splits each label class into blocks by strict real order;
    # sigma must match blocks in order, so enumerate block bijections only.
    def blocks(seq):
        out = {}
        for lab in set(seq.labels):
            ks = [k for k in range(1, seq.n + 1) if seq.labels[k - 1] == lab]
            ks = _real_sort(ks, table, key=lambda k: seq.longitudes[k - 1])
            grouped = []
            for k in ks:
                if grouped and real_compare(seq.longitudes[grouped[-1][-1] - 1],
                                            seq.longitudes[k - 1], table) == EQ:
                    grouped[-1].append(k)
                else:
                    grouped.append([k])
            out[lab] = grouped
        return out

    b1, b2 = blocks(s1), blocks(s2)
    for lab in b1:
        if [len(g) for g in b1[lab]] != [len(g) for g in b2.get(lab, [])]:
            return False, None

    def check(sigma):
        for m in range(1, s1.n + 1):
            i_m = s1.labels[m - 1]
            for it in s1.order:
                if it.is_corporeal():
                    continue
                if tails[it.edge] != i_m:
                    continue
                it2 = ghost(sigma[it.k], it.edge) if it.is_ghost() else it
                before1 = pos1[corporeal(m)] < pos1[it]
                before2 = pos2[corporeal(sigma[m])] < pos2[it2]
                if before1 != before2:
                    return False
        return True

    labs = sorted(b1, key=str)
    per_label_choices = []
    for lab in labs:
        choices = []
        for assignment in itertools.product(
                *[itertools.permutations(g2) for g2 in b2[lab]]):
            mapping = {}
            for g1, g2perm in zip(b1[lab], assignment):
                mapping.update(dict(zip(g1, g2perm)))
            choices.append(mapping)
        per_label_choices.append(choices)

    for combo in itertools.product(*per_label_choices):
        sigma = {}
        for mapping in combo:
            sigma.update(mapping)
        if check(sigma):
            return True, sigma
    return False, None


def is_unsteady(seq):
    """Detect an unsteady sequence: some suffix of the order is a nonempty
    set of corporeal items together with exactly all of their ghosts, with
    no red item and no ghost of an outside corporeal.  Returns
    (True, k) with the smallest witness suffix length, else (False, None).

    The suffix may be the whole order (needed for totally unframed data,
    where every strand group can escape together).
    """
    total = len(seq.order)
    all_ghosts = {}
    for it in seq.order:
        if it.is_ghost():
            all_ghosts.setdefault(it.k, set()).add(it)
    for k in range(1, total + 1):
        suffix = seq.order[total - k:]
        group = set(suffix)
        corps = {it.k for it in suffix if it.is_corporeal()}
        if not corps:
            continue
        if any(it.is_red() for it in suffix):
            continue
        ok = True
        for it in suffix:
            if it.is_ghost() and it.k not in corps:
                ok = False
                break
        if ok:
            for c in corps:
                if not all_ghosts.get(c, set()) <= group:
                    ok = False
                    break
        if ok:
            return True, k
    return False, None


def to_loading_order(seq, completed, flavour, table=None):
    """The order induced by reading the sequence as a loading.

    Corporeal k sits at a_k + k*epsilon, a ghost or red item at its
    longitude minus one half (plus the owner's epsilon for ghosts).
    Realized combinatorially with doubled integer keys: corporeal k gets
    (2 a_k, 1, k), ghost (k,e) gets (2 a_g - 1, 0, k), red e gets
    (2 phi_e - 1, 0, 0); ties between reds fall back to the edge id.
    Input flavours and longitudes must be integral.
    """
    keys = {}
    for it in seq.order:
        a = seq.longitude(it, flavour)
        if not is_integral(a):
            raise NonIntegralInputError("longitude %s of %s is not an integer"
                                        % (a, it.token()))
        v = int(a.rational)
        if it.is_corporeal():
            keys[it] = (2 * v, 1, it.k, "")
        else:
            keys[it] = (2 * v - 1, 0, it.k, str(it.edge))
    new_order = sorted(seq.order, key=lambda it: keys[it])
    return FlavouredSequence(seq.labels, seq.longitudes, new_order)


def enumerate_orders(labels_multiset, gamma, completed, flavour, table=None,
                     up_to_equivalence=True):
    """All valid flavoured sequences with the given per-vertex longitude
    multisets, optionally deduplicated up to equivalence.

    gamma maps vertex -> list of longitudes; all label arrangements that
    weakly increase in real longitude are explored, and all admissible
    tie-breaking orders on CGR.
    """
    entries = []
    for vertex in sorted(gamma, key=str):
        for a in gamma[vertex]:
            entries.append((as_scalar(a), vertex))

    results = []
    seen = []
    produced = set()
    for perm in sorted(set(itertools.permutations(range(len(entries))))):
        seq_entries = [entries[i] for i in perm]
        longs = [e[0] for e in seq_entries]
        ok = True
        for u, v in zip(longs, longs[1:]):
            if real_compare(u, v, table) == GT:
                ok = False
                break
        if not ok:
            continue
        labels = tuple(e[1] for e in seq_entries)
        longitudes = tuple(longs)
        base = FlavouredSequence(labels, longitudes, ())
        items = [corporeal(k) for k in range(1, len(labels) + 1)]
        items += build_cgr(labels, completed)
        for order in _admissible_orders(base, items, completed, flavour, table):
            seq = FlavouredSequence(labels, longitudes, order)
            if seq in produced:
                continue
            if validate(seq, completed, flavour, table):
                continue
            produced.add(seq)
            if up_to_equivalence:
                if any(equivalent(seq, s, completed, flavour, table)[0]
                       for s in seen):
                    continue
                seen.append(seq)
            results.append(seq)
    return results


def _admissible_orders(base, items, completed, flavour, table):
    """All total orders compatible with rule (i) and (ii): sort into weak
    real-longitude classes, then permute ghost/red items within a class
    (corporeal items keep index order and come last in the class)."""
    import functools

    def cmp(u, v):
        return real_compare(base.longitude(u, flavour),
                            base.longitude(v, flavour), table)

    items = sorted(items, key=functools.cmp_to_key(cmp))
    classes = []
    for it in items:
        if classes and cmp(classes[-1][-1], it) == EQ:
            classes[-1].append(it)
        else:
            classes.append([it])
    per_class = []
    for cls in classes:
        gr = [it for it in cls if not it.is_corporeal()]
        corp = sorted([it for it in cls if it.is_corporeal()], key=lambda it: it.k)
        per_class.append([list(p) + corp for p in itertools.permutations(gr)])
    for combo in itertools.product(*per_class):
        yield tuple(itertools.chain.from_iterable(combo))


# -- Z x C flavoured sequences ---------------------------------------------


@dataclass(frozen=True)
class ZCLongitude:
    level: int
    value: ExactScalar

    def __post_init__(self):
        object.__setattr__(self, "value", as_scalar(self.value))

    def shift(self, c):
        return ZCLongitude(self.level, self.value + as_scalar(c))


@dataclass(frozen=True)
class ZCFlavouredSequence:
    labels: tuple
    longitudes: tuple       # of ZCLongitude
    order: tuple

    @property
    def n(self):
        return len(self.labels)

    def longitude(self, item, flavour):
        if item.kind == CORPOREAL:
            return self.longitudes[item.k - 1]
        if item.kind == GHOST:
            return self.longitudes[item.k - 1].shift(flavour[item.edge])
        return ZCLongitude(0, as_scalar(flavour[item.edge]))


def zc_compare(a, b, table=None):
    """Lexicographic preorder on Z x C: LT/EQ/GT with EQ meaning equal level
    and equal real part."""
    if a.level != b.level:
        return LT if a.level < b.level else GT
    return real_compare(a.value, b.value, table)


def zc_validate(seq, completed, flavour, table=None):
    violations = []
    expect = set(build_cgr(seq.labels, completed)) | {corporeal(k)
                                                      for k in range(1, seq.n + 1)}
    if set(seq.order) != expect:
        violations.append("item set mismatch")
        return violations
    corp = [it.k for it in seq.order if it.is_corporeal()]
    if corp != sorted(corp):
        violations.append("corporeal items out of index order")
    longs = [seq.longitude(it, flavour) for it in seq.order]
    for i in range(len(longs) - 1):
        if zc_compare(longs[i], longs[i + 1], table) == GT:
            violations.append("rule (i): %s precedes %s" %
                              (seq.order[i].token(), seq.order[i + 1].token()))
    for i1, it1 in enumerate(seq.order):
        if not it1.is_corporeal():
            continue
        for i2 in range(i1 + 1, len(seq.order)):
            it2 = seq.order[i2]
            if not it2.is_corporeal() and zc_compare(longs[i1], longs[i2], table) == EQ:
                violations.append("rule (ii): corporeal %s precedes %s"
                                  % (it1.token(), it2.token()))
    return violations


def zc_is_unsteady(seq):
    plain = FlavouredSequence(seq.labels, tuple(as_scalar(0) for _ in seq.labels),
                              seq.order)
    return is_unsteady(plain)


def zc_split(seq):
    """Split a valid sequence into its level components, levels increasing.

    Returns a list of (level, FlavouredSequence); corporeal indices are
    renumbered within each level preserving relative order."""
    item_level = {}
    for it in seq.order:
        if it.is_red():
            item_level[it] = 0
        else:
            item_level[it] = seq.longitudes[it.k - 1].level
    levels = sorted(set(item_level.values()))
    out = []
    for p in levels:
        sub_items = [it for it in seq.order if item_level[it] == p]
        corp_ks = [it.k for it in sub_items if it.is_corporeal()]
        renumber = {k: i + 1 for i, k in enumerate(sorted(corp_ks))}
        labels = tuple(seq.labels[k - 1] for k in sorted(corp_ks))
        longitudes = tuple(seq.longitudes[k - 1].value for k in sorted(corp_ks))
        new_items = []
        for it in sub_items:
            if it.is_corporeal():
                new_items.append(corporeal(renumber[it.k]))
            elif it.is_ghost():
                new_items.append(ghost(renumber[it.k], it.edge))
            else:
                new_items.append(it)
        out.append((p, FlavouredSequence(labels, longitudes, new_items)))
    return out


def zc_concat(parts):
    """Inverse of zc_split: levels must be strictly increasing."""
    labels, longitudes, order = [], [], []
    offset = 0
    for p, seq in parts:
        remap = {k: k + offset for k in range(1, seq.n + 1)}
        labels.extend(seq.labels)
        longitudes.extend(ZCLongitude(p, a) for a in seq.longitudes)
        for it in seq.order:
            if it.is_corporeal():
                order.append(corporeal(remap[it.k]))
            elif it.is_ghost():
                order.append(ghost(remap[it.k], it.edge))
            else:
                order.append(it)
        offset += seq.n
    return ZCFlavouredSequence(tuple(labels), tuple(longitudes), tuple(order))


# -- sequence literals ------------------------------------------------------
#
#   [(label,longitude),...] order=[tok,tok,...]
# with corporeal tokens 1..n, ghost tokens e@k, red tokens !e.

_SEQ_RE = re.compile(r"^\s*\[(.*)\]\s*order=\[(.*)\]\s*$")


def parse_sequence(text, table=None):
    m = _SEQ_RE.match(text)
    if not m:
        raise ValueError("bad sequence literal %r" % text)
    pairs_part, order_part = m.group(1), m.group(2)
    labels, longitudes = [], []
    depth = 0
    cur = []
    chunks = []
    for ch in pairs_part:
        if ch == "(":
            depth += 1
            if depth == 1:
                cur = []
                continue
        if ch == ")":
            depth -= 1
            if depth == 0:
                chunks.append("".join(cur))
                continue
        if depth >= 1:
            cur.append(ch)
    for chunk in chunks:
        lab, lit = chunk.split(",", 1)
        labels.append(lab.strip())
        longitudes.append(parse_scalar(lit.strip(), table))
    order = []
    for tok in [t.strip() for t in order_part.split(",") if t.strip()]:
        if tok.startswith("!"):
            order.append(red(tok[1:]))
        elif "@" in tok:
            eid, k = tok.split("@")
            order.append(ghost(int(k), eid))
        else:
            order.append(corporeal(int(tok)))
    return FlavouredSequence(tuple(labels), tuple(longitudes), tuple(order))


def format_sequence(seq):
    return seq.describe()
