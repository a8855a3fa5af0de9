"""Reduction to the integral case via the covering quiver.

The cover lives in Gamma x (C/Z).  An edge e: i -> j of the base lifts to
(i, [w + phi_e]) -> (j, [w]); this pairing is what makes a lifted ghost
interact with exactly the strands that interacted with it downstairs.  A
new edge at i attaches to the coset [phi_e].  Subtracting the canonical
coset representative from every longitude (and correcting the flavour by
the corresponding coboundary) lands all data in the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quiver import (INFINITY, DimensionData, Edge, Flavour, Quiver,
                     crawley_boevey, new_edge_id)
from .scalars import (EQ, ExactScalar, as_scalar, format_scalar, is_integral,
                      real_compare)
from .sequences import (FlavouredSequence, build_cgr, corporeal, ghost,
                        validate)


class NonTrivializableError(ValueError):
    pass


class CoverMismatchError(ValueError):
    pass


class EdgeLoopInCoverError(ValueError):
    pass


class InfiniteCoverError(ValueError):
    pass


@dataclass(frozen=True)
class CoverVertex:
    base: object
    coset: ExactScalar  # canonical representative, rational part in [0,1)

    def __str__(self):
        return "(%s,[%s])" % (self.base, format_scalar(self.coset))


def coset_rep(a):
    """Canonical representative: rational part reduced into [0,1),
    imaginary and symbolic parts untouched."""
    a = as_scalar(a)
    q = a.rational
    frac = q - Fraction(q.numerator // q.denominator)
    return ExactScalar(frac, a.imaginary, dict(a.symbolic))


def cover_vertex(base, longitude):
    return CoverVertex(base, coset_rep(longitude))


def lift_edge_id(edge_id, head_coset):
    return "%s|[%s]" % (edge_id, format_scalar(head_coset))


@dataclass
class CoverData:
    quiver: Quiver            # old part of the cover
    dims: DimensionData       # v-tilde, w-tilde on the cover
    completed: Quiver         # Crawley-Boevey completion of the cover
    flavour: Flavour          # pulled-back flavour on the completed cover
    base_edge: dict           # cover edge id -> base edge id
    orbit: dict               # the defining orbit representative

    def vtilde(self):
        return self.dims.v

    def wtilde(self):
        return self.dims.w


def build_cover(quiver, dims, completed, flavour, orbit, table=None):
    """Covering quiver of an orbit representative.

    orbit maps old vertex -> list of longitudes (length v_i).  Vertices are
    the occupied (i, [z]); an old edge lifts wherever both endpoints are
    occupied; a new edge survives iff its flavour's coset is occupied at its
    tail, giving w-tilde.
    """
    occupied = {}
    for i, coords in orbit.items():
        if len(coords) != dims.v.get(i, 0):
            raise CoverMismatchError("orbit at %r has %d coordinates, v=%d"
                                     % (i, len(coords), dims.v.get(i, 0)))
        for a in coords:
            cv = cover_vertex(i, a)
            occupied[cv] = occupied.get(cv, 0) + 1

    vertices = sorted(occupied, key=str)
    vset = set(vertices)
    edges = []
    base_edge = {}
    values = {}
    for e in completed.old_edges():
        phi = as_scalar(flavour[e.id])
        for cv in vertices:
            if cv.base != e.head:
                continue
            tail_cv = cover_vertex(e.tail, cv.coset + phi)
            if tail_cv in vset:
                eid = lift_edge_id(e.id, cv.coset)
                edges.append(Edge(eid, tail_cv, cv))
                base_edge[eid] = e.id
                values[eid] = phi

    wtilde = {cv: 0 for cv in vertices}
    new_lifts = {cv: [] for cv in vertices}
    for e in sorted(completed.new_edges(), key=lambda e: e.id):
        phi = as_scalar(flavour[e.id])
        cv = cover_vertex(e.tail, phi)
        if cv in vset:
            wtilde[cv] += 1
            new_lifts[cv].append(e)

    cover_quiver = Quiver(vertices, edges)
    cover_dims = DimensionData({cv: occupied[cv] for cv in vertices}, wtilde)
    cover_completed = crawley_boevey(cover_quiver, cover_dims)
    for cv in vertices:
        for k, e in enumerate(new_lifts[cv]):
            eid = new_edge_id(cv, k)
            values[eid] = as_scalar(flavour[e.id])
            base_edge[eid] = e.id
    cflavour = Flavour(values)
    cflavour.check_total(cover_completed)
    return CoverData(cover_quiver, cover_dims, cover_completed, cflavour,
                     base_edge, {i: list(c) for i, c in orbit.items()})


def eta_of(vertex):
    """The 0-cochain trivializing the flavour cocycle: the canonical coset
    representative at each cover vertex, zero at the framing vertex."""
    if vertex == INFINITY:
        return as_scalar(0)
    return vertex.coset


def integralize(cover):
    """Subtract the coboundary of eta from the pulled-back flavour:
    phi'_e = phi_e - (eta(tail) - eta(head)); every value must land in Z."""
    values = {}
    for e in cover.completed.edges:
        phi = as_scalar(cover.flavour[e.id])
        corrected = phi - (eta_of(e.tail) - eta_of(e.head))
        if not is_integral(corrected):
            raise NonTrivializableError(
                "edge %s keeps non-integral flavour %s" % (e.id, corrected))
        values[e.id] = corrected
    eta = {cv: eta_of(cv) for cv in cover.quiver.vertices}
    return eta, Flavour(values)


def transport(seq, cover, table=None):
    """Lift a flavoured sequence over the base to the cover with integral
    longitudes: labels become (i, [a_k]), longitudes drop by eta, and the
    order is re-sorted only where the shifts force it."""
    eta, phi_prime = integralize(cover)
    vset = set(cover.quiver.vertices)
    new_labels = []
    new_longs = []
    for lab, a in zip(seq.labels, seq.longitudes):
        cv = cover_vertex(lab, a)
        if cv not in vset:
            raise CoverMismatchError("longitude %s at %r is not a cover vertex"
                                     % (format_scalar(a), lab))
        new_labels.append(cv)
        new_longs.append(as_scalar(a) - eta[cv])

    lifted = FlavouredSequence(tuple(new_labels), tuple(new_longs), ())
    items = [corporeal(k) for k in range(1, len(new_labels) + 1)]
    items += build_cgr(new_labels, cover.completed)
    original_pos = {}
    for it in items:
        original_pos[it] = _matching_base_position(it, seq, cover)

    import functools

    def cmp(u, v):
        au = lifted.longitude(u, phi_prime)
        av = lifted.longitude(v, phi_prime)
        c = real_compare(au, av, table)
        if c != EQ:
            return c
        cu = 1 if u.is_corporeal() else 0
        cv_ = 1 if v.is_corporeal() else 0
        if cu != cv_:
            return -1 if cu < cv_ else 1
        pu, pv = original_pos[u], original_pos[v]
        return -1 if pu < pv else (0 if pu == pv else 1)

    order = tuple(sorted(items, key=functools.cmp_to_key(cmp)))
    out = FlavouredSequence(tuple(new_labels), tuple(new_longs), order)
    bad = validate(out, cover.completed, phi_prime, table)
    if bad:
        raise CoverMismatchError("transport produced an invalid sequence: %s" % bad)
    return out


def untransport(seq, cover, table=None):
    """Inverse of transport: restore base labels and longitudes, resorting
    by the base real order with the transported order breaking ties."""
    eta, _ = integralize(cover)
    base_labels = tuple(cv.base for cv in seq.labels)
    base_longs = tuple(a + eta[cv] for a, cv in zip(seq.longitudes, seq.labels))
    # the base quiver data is recoverable through the recorded edge mapping
    base_completed = _base_completed_from(cover, seq)
    base_flavour = _base_flavour_from(cover)
    lifted_pos = {it: i for i, it in enumerate(seq.order)}
    base = FlavouredSequence(base_labels, base_longs, ())
    items = [corporeal(k) for k in range(1, len(base_labels) + 1)]
    items += build_cgr(base_labels, base_completed)

    def transported_pos(it):
        # items correspond one-to-one when the cover drops nothing
        for jt in seq.order:
            if jt.kind == it.kind and jt.k == it.k:
                if it.is_corporeal():
                    return lifted_pos[jt]
                if cover.base_edge.get(jt.edge) == it.edge:
                    return lifted_pos[jt]
        return len(seq.order)

    import functools

    def cmp(u, v):
        c = real_compare(base.longitude(u, base_flavour),
                         base.longitude(v, base_flavour), table)
        if c != EQ:
            return c
        cu = 1 if u.is_corporeal() else 0
        cv_ = 1 if v.is_corporeal() else 0
        if cu != cv_:
            return -1 if cu < cv_ else 1
        pu, pv = transported_pos(u), transported_pos(v)
        return -1 if pu < pv else (0 if pu == pv else 1)

    order = tuple(sorted(items, key=functools.cmp_to_key(cmp)))
    return FlavouredSequence(base_labels, base_longs, order)


def _matching_base_position(item, base_seq, cover):
    for i, it in enumerate(base_seq.order):
        if it.kind == item.kind and it.k == item.k:
            if item.is_corporeal():
                return i
            if cover.base_edge.get(item.edge, item.edge) == it.edge:
                return i
    return len(base_seq.order)


def _base_completed_from(cover, seq):
    # reconstruct enough of the base completed quiver for ghost building
    from .quiver import Quiver as Q
    verts = sorted({cv.base for cv in cover.quiver.vertices}, key=str) + [INFINITY]
    edges = {}
    for ce in cover.completed.edges:
        bid = cover.base_edge.get(ce.id)
        if bid is None:
            continue
        tail = ce.tail.base if ce.tail != INFINITY else INFINITY
        head = ce.head.base if ce.head != INFINITY else INFINITY
        edges[bid] = Edge(bid, tail, head)
    return Q(verts, list(edges.values()))


def _base_flavour_from(cover):
    values = {}
    for ce in cover.completed.edges:
        bid = cover.base_edge.get(ce.id)
        if bid is not None:
            values[bid] = as_scalar(cover.flavour[ce.id])
    return Flavour(values)


def category_o_graph(quiver, dims, completed, flavour, table=None,
                     max_vertices=4096):
    """The support graph for category O: the part of Gamma x (C/Z) connected
    to a framing coset (i, [phi_e]) for some new edge e at i.

    Built by breadth-first search from those seeds along the lifted
    adjacency; raises when the reachable set keeps growing past
    ``max_vertices`` (irrational flavours on cycles give infinite covers).
    """
    seeds = []
    wt = {}
    for e in completed.new_edges():
        cv = cover_vertex(e.tail, flavour[e.id])
        seeds.append(cv)
        wt[cv] = wt.get(cv, 0) + 1
    seen = set(seeds)
    frontier = list(seen)
    old_edges = completed.old_edges()
    while frontier:
        nxt = []
        for cv in frontier:
            for e in old_edges:
                phi = as_scalar(flavour[e.id])
                if e.tail == e.head and cv.base == e.tail and is_integral(phi):
                    raise EdgeLoopInCoverError(
                        "edge %s lifts to a loop at %s" % (e.id, cv))
                if e.tail == cv.base:
                    nb = cover_vertex(e.head, cv.coset - phi)
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append(nb)
                if e.head == cv.base:
                    nb = cover_vertex(e.tail, cv.coset + phi)
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append(nb)
        if len(seen) > max_vertices:
            raise InfiniteCoverError("cover exceeded %d vertices" % max_vertices)
        frontier = nxt

    vertices = sorted(seen, key=str)
    edges = []
    for e in old_edges:
        phi = as_scalar(flavour[e.id])
        for cv in vertices:
            if cv.base != e.head:
                continue
            tail_cv = cover_vertex(e.tail, cv.coset + phi)
            if tail_cv in seen:
                edges.append(Edge(lift_edge_id(e.id, cv.coset), tail_cv, cv))
    return Quiver(vertices, edges), wt
