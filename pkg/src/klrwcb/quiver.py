"""Quivers, dimension vectors, flavours and the Crawley-Boevey completion.

A quiver is a directed multigraph with loops allowed.  Framing data w is
realized by a new vertex INFINITY and w_i extra edges i -> INFINITY; the
flavour assigns an exact scalar to every edge of the completed quiver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .scalars import ExactScalar, SymbolTable, as_scalar, format_scalar, parse_scalar

INFINITY = "oo"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: object
    head: object


class QuiverError(ValueError):
    pass


class Quiver:
    """Vertices plus a list of edges; edge ids are unique keys."""

    def __init__(self, vertices, edges):
        self.vertices = list(vertices)
        self.edges = []
        self._by_id = {}
        vset = set(self.vertices)
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.id in self._by_id:
                raise QuiverError("duplicate edge id %r" % (e.id,))
            if e.tail not in vset or e.head not in vset:
                raise QuiverError("edge %r has endpoint outside the vertex set" % (e.id,))
            self.edges.append(e)
            self._by_id[e.id] = e

    def edge(self, edge_id):
        return self._by_id[edge_id]

    def has_vertex(self, v):
        return v in set(self.vertices)

    def edges_with_head(self, v):
        return [e for e in self.edges if e.head == v]

    def edges_with_tail(self, v):
        return [e for e in self.edges if e.tail == v]

    def has_loops(self):
        return any(e.tail == e.head for e in self.edges)

    def old_vertices(self):
        return [v for v in self.vertices if v != INFINITY]

    def old_edges(self):
        """Edges not touching the framing vertex."""
        return [e for e in self.edges if e.head != INFINITY and e.tail != INFINITY]

    def new_edges(self):
        return [e for e in self.edges if e.head == INFINITY]

    def components(self):
        """Connected components (undirected) of the full vertex set."""
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(adj[u] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def __repr__(self):
        return "Quiver(%r, %d edges)" % (self.vertices, len(self.edges))


@dataclass
class DimensionData:
    """Gauge and framing dimension vectors, given on every old vertex."""

    v: dict
    w: dict

    def check_against(self, quiver):
        for x in quiver.old_vertices():
            if x not in self.v or x not in self.w:
                raise QuiverError("dimension data missing vertex %r" % (x,))
            if self.v[x] < 0 or self.w[x] < 0:
                raise QuiverError("negative dimension at %r" % (x,))


@dataclass
class Flavour:
    """Scalar per edge of the completed quiver."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, edge_id):
        return self.values[edge_id]

    def check_total(self, completed):
        missing = [e.id for e in completed.edges if e.id not in self.values]
        if missing:
            raise QuiverError("flavour missing edges %r" % (missing,))

    def is_integral(self):
        from .scalars import is_integral
        return all(is_integral(c) for c in self.values.values())


def new_edge_id(vertex, k):
    return "w[%s]%d" % (vertex, k)


def crawley_boevey(quiver, dims):
    """Adjoin the framing vertex and w_i new edges i -> INFINITY.

    Old edges and their ids are preserved; new edges get fresh ids.
    """
    if quiver.has_vertex(INFINITY):
        raise QuiverError("quiver already has a framing vertex")
    dims.check_against(quiver)
    vertices = list(quiver.vertices) + [INFINITY]
    edges = list(quiver.edges)
    for x in quiver.old_vertices():
        for k in range(dims.w.get(x, 0)):
            edges.append(Edge(new_edge_id(x, k), x, INFINITY))
    return Quiver(vertices, edges)


# -- quiver spec files -----------------------------------------------------
#
# JSON shape:
#   {"vertices": [...], "edges": [{"id":..,"tail":..,"head":..}],
#    "v": {...}, "w": {...}, "flavour": {"edgeid": "scalar-literal", ...}}
#
# Flavour keys may name old edges or the generated new-edge ids; new edges
# without an explicit entry default to 0.


def load_quiver_spec(path_or_dict, table=None):
    """Read a quiver spec; returns (quiver, dims, completed, flavour, table)."""
    if table is None:
        table = SymbolTable()
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            data = json.load(fh)
    quiver = Quiver(data["vertices"],
                    [Edge(e["id"], e["tail"], e["head"]) for e in data.get("edges", [])])
    v = {x: int(n) for x, n in data.get("v", {}).items()}
    w = {x: int(n) for x, n in data.get("w", {}).items()}
    for x in quiver.old_vertices():
        v.setdefault(x, 0)
        w.setdefault(x, 0)
    dims = DimensionData(v, w)
    completed = crawley_boevey(quiver, dims)
    values = {}
    for eid, lit in data.get("flavour", {}).items():
        values[eid] = lit if isinstance(lit, ExactScalar) else parse_scalar(str(lit), table)
    for e in completed.edges:
        values.setdefault(e.id, as_scalar(0))
    flavour = Flavour(values)
    flavour.check_total(completed)
    return quiver, dims, completed, flavour, table


def dump_quiver_spec(quiver, dims, flavour=None):
    data = {
        "vertices": list(quiver.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in quiver.edges],
        "v": dict(dims.v),
        "w": dict(dims.w),
    }
    if flavour is not None:
        data["flavour"] = {eid: format_scalar(c) for eid, c in flavour.values.items()}
    return data


def kronecker_quiver():
    """The cyclically oriented two-vertex quiver used throughout the tests:
    f: alpha -> beta and e: beta -> alpha."""
    return Quiver(["alpha", "beta"],
                  [Edge("e", "beta", "alpha"), Edge("f", "alpha", "beta")])


def jordan_quiver():
    return Quiver(["x"], [Edge("t", "x", "x")])
