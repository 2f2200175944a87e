"""Homology graphs, edge classes and obstruction cycles."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import islice

import networkx as nx

from .arrangement import Arrangement, SharpFrame, build_lattice
from .polar import Polar
from .reduction import Families, removable_set, vertex_point

VARIANTS = ("full", "reduced", "last", "lastmin")
DEFAULT_FAMILY = {"last": "0", "lastmin": "0p"}
MAX_CYCLES = 10 ** 6


class TooCyclic(RuntimeError):
    pass


class UnclassifiedEdge(RuntimeError):
    pass


@dataclass(frozen=True)
class Edge:
    u: tuple[int, int]  # (line, point)
    v: tuple[int, int]
    order: str  # "<" if line(u) comes first, ">" otherwise
    cls: str | None = None


@dataclass
class HomologyGraph:
    variant: str
    frame: SharpFrame
    vertices: list[tuple[int, int]]
    edges: list[Edge]
    family: str | None = None
    membership: str = "reduced"
    orphans: list[int] = field(default_factory=list)  # family lines without a vertex point
    stats: dict = field(default_factory=dict)

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.u, e.v, order=e.order, cls=e.cls)
        return g

    def unclassified(self) -> list[Edge]:
        return [e for e in self.edges if e.cls == "unclassified"]

    def vertex_label(self, v: tuple[int, int]) -> str:
        return f"{self.frame.label(v[0])}@{self.frame.point_label(v[1])}"

    def edge_labels(self) -> list[tuple[str, str, str, str | None]]:
        fr = self.frame
        return [(fr.label(e.u[0]), fr.label(e.v[0]), e.order, e.cls) for e in self.edges]

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "family": self.family,
            "membership": self.membership,
            "vertices": [self.vertex_label(v) for v in self.vertices],
            "orphans": [self.frame.label(h) for h in self.orphans],
            "edges": [{"from": a, "to": b, "order": o, "class": c} for a, b, o, c in self.edge_labels()],
        }

    def to_dot(self, cycles: list["ObstructionCycle"] = ()) -> str:
        hot = {v for c in cycles for v in c.vertices}
        names = {v: f"v{i}" for i, v in enumerate(self.vertices)}
        out = [f'digraph "{self.variant}" {{']
        for v in self.vertices:
            style = ", style=filled, fillcolor=orange" if v in hot else ""
            out.append(f'  {names[v]} [label="{self.vertex_label(v)}"{style}];')
        for e in self.edges:
            sym = "⊲" if e.order == "<" else "⊳"
            lab = sym if e.cls is None else f"{sym} {e.cls}"
            out.append(f'  {names[e.u]} -> {names[e.v]} [label="{lab}"];')
        out.append("}")
        return "\n".join(out)


def targets(polar: Polar, pid: int, membership: str) -> set[int]:
    """Lines H' with an edge out of any vertex at pid."""
    fr = polar.frame
    S = set(fr.points[pid].lines)
    d = polar.data(pid)
    if membership == "full":
        return S | set(d.upper_cone)
    return S | set(d.upper_cone_max) | set(d.neighbor)


def _coords(frame: SharpFrame, h: int) -> tuple[int, int]:
    k = frame.p0_index(h)
    if k is not None:
        return 0, k
    return frame.anchor_of(h)


def _m(frame: SharpFrame, i: int) -> int:
    return frame.m0 if i == 0 else frame.anchor_m(i)


def classify(frame: SharpFrame, variant: str, u: int, v: int) -> str:
    """Class label of an edge u -> v of the last or lastmin graphs."""
    (j, k), (i, h) = _coords(frame, u), _coords(frame, v)
    asc = frame.before(u, v)
    mi = _m(frame, i)
    if variant == "last":
        rules = [
            ("E1", asc and h == 2 and j < i),
            ("E2", not asc and k == 2 and h == mi - 1 and i < j),
            ("E3", not asc and i == 0 and h == mi - 1 and j != 0),
            ("E4", not asc and i == j and h == k - 1 and j > 0),
            ("E5", not asc and h == mi - 1 and 0 < i < j),
            ("E6", not asc and k == 2 and h == mi - 2 and 0 < i < j),
        ]
    elif variant == "lastmin":
        rules = [
            ("E7", not asc and k == 2 and h == 2 and i < j),
            ("E8", asc and k == 2 and h == mi - 1 and j < i),
            ("E1", asc and k != 2 and h == 2 and j < i),
            ("E3", not asc and k != 2 and i == 0 and h == mi - 1 and i < j),
            ("E5", not asc and k != 2 and i > 0 and h == mi - 1 and i < j),
            ("E4", not asc and i == j and h == k - 1 and j > 0),
        ]
    else:
        raise ValueError(f"no edge table for variant {variant}")
    for name, ok in rules:
        if ok:
            return name
    return "unclassified"


def build(variant: str, frame: SharpFrame, polar: Polar | None = None, family: str | None = None,
          membership: str = "reduced", strict: bool = False,
          families: Families | None = None) -> HomologyGraph:
    """Homology graph of a frame.

    full: all couples (H, P), P on H, with the unreduced edge rule S u Û.
    reduced: couples over A' and non-anchor points with the rule S u Û_Max u N.
    last / lastmin: one vertex per line of the chosen family.
    With strict=True an edge outside the published tables raises UnclassifiedEdge.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant}")
    polar = polar if polar is not None else Polar(frame)
    orphans: list[int] = []
    if variant == "full":
        membership = "full"
        vertices = [(h, pid) for h in frame.order for pid in frame.line_points[h]]
    elif variant == "reduced":
        fam = families or removable_set(frame)
        vertices = [(h, pid) for h in frame.order if h in fam.prime
                    for pid in frame.line_points[h] if not frame.points[pid].anchor]
    else:
        family = family or DEFAULT_FAMILY[variant]
        lines = (families or removable_set(frame)).get(family)
        vertices = []
        for h in frame.order:
            if h not in lines:
                continue
            pid = vertex_point(frame, h, variant)
            if pid is None:
                orphans.append(h)
            else:
                vertices.append((h, pid))
    tcache: dict[int, set[int]] = {}
    edges = []
    for u in vertices:
        pid = u[1]
        if pid not in tcache:
            tcache[pid] = targets(polar, pid, membership)
        for v in vertices:
            if v[0] == u[0] or v[0] not in tcache[pid]:
                continue
            order = "<" if frame.before(u[0], v[0]) else ">"
            cls = classify(frame, variant, u[0], v[0]) if variant in ("last", "lastmin") else None
            if strict and cls == "unclassified":
                raise UnclassifiedEdge(f"{frame.label(u[0])} -> {frame.label(v[0])} is not in the edge table")
            edges.append(Edge(u, v, order, cls))
    return HomologyGraph(variant, frame, vertices, edges, family, membership, orphans=orphans)


@dataclass(frozen=True)
class Designation:
    H: tuple[int, int]  # peak
    Htilde: tuple[int, int]  # successor of the peak
    Hprime: tuple[int, int]  # source of the closing edge
    Hbar: tuple[int, int]  # target of the closing edge
    relation: str  # "<" if Hbar comes before Hprime

    def as_labels(self, frame: SharpFrame) -> dict:
        return {"H": frame.label(self.H[0]), "Htilde": frame.label(self.Htilde[0]),
                "Hprime": frame.label(self.Hprime[0]), "Hbar": frame.label(self.Hbar[0]),
                "relation": self.relation}


@dataclass
class ObstructionCycle:
    vertices: list[tuple[int, int]]  # starts at the peak H
    orders: list[str]  # order label of the edge leaving each vertex
    designations: list[Designation]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def H(self) -> tuple[int, int]:
        return self.vertices[0]

    def labels(self, frame: SharpFrame) -> list[str]:
        return [frame.label(v[0]) for v in self.vertices]

    def to_json(self, frame: SharpFrame) -> dict:
        return {"vertices": self.labels(frame), "length": self.length,
                "designations": [d.as_labels(frame) for d in self.designations]}


def bimonotone(cycle: list[tuple[int, int]], orders: list[str]) -> ObstructionCycle | None:
    """Match a cycle against the bi-monotone pattern: one run of ⊲ edges up to the peak H,
    one run of ⊳ edges from H, where the closing edge H' -> H̄ may have either label.

    Equivalently the cyclic label word has exactly one maximal run of each kind.
    """
    l = len(cycle)
    runs = sum(1 for a in range(l) if orders[a] != orders[a - 1])
    if runs != 2:
        return None
    # the peak is where the ⊲ run ends and the ⊳ run starts
    top = next(a for a in range(l) if orders[a] == ">" and orders[a - 1] == "<")
    verts = cycle[top:] + cycle[:top]
    ords = orders[top:] + orders[:top]
    p = sum(1 for o in ords if o == ">")
    H, Ht = verts[0], verts[1 % l]
    des = []
    # closing edge = first ⊲ edge
    des.append(Designation(H, Ht, verts[p], verts[(p + 1) % l], ">"))
    if p >= 2:
        # closing edge = last ⊳ edge
        des.append(Designation(H, Ht, verts[p - 1], verts[p], "<"))
    return ObstructionCycle(verts, ords, des)


def max_cycles() -> int:
    return int(os.environ.get("SHARPMILNOR_MAX_CYCLES", MAX_CYCLES))


def find_obstruction_cycles(graph: HomologyGraph, limit: int | None = None) -> list[ObstructionCycle]:
    """All bi-monotone simple cycles; other cycles are counted in graph.stats."""
    limit = max_cycles() if limit is None else limit
    g = graph.digraph()
    found, total = [], 0
    for cyc in islice(nx.simple_cycles(g), limit + 1):
        total += 1
        if total > limit:
            raise TooCyclic("graph too cyclic")
        orders = [g.edges[cyc[a], cyc[(a + 1) % len(cyc)]]["order"] for a in range(len(cyc))]
        oc = bimonotone(cyc, orders)
        if oc is not None:
            found.append(oc)
    graph.stats = {"cycles": total, "obstructions": len(found), "discarded": total - len(found)}
    return found


def designation_is_bad(d: Designation, l: int) -> bool:
    return (d.relation == ">" and l % 2 == 1) or (d.relation == "<" and l % 2 == 0)


def bad_cycle_predicate(cycle: ObstructionCycle, variant: str) -> bool:
    """last: every obstruction counts. lastmin: parity rule, bad if any designation is bad."""
    if variant == "last":
        return True
    return any(designation_is_bad(d, cycle.length) for d in cycle.designations)


@dataclass
class DoublePointGraph:
    graph: nx.Graph
    connected: bool


def double_point_graph(obj: SharpFrame | Arrangement) -> DoublePointGraph:
    """Γ: affine lines joined along their double points."""
    g = nx.Graph()
    if isinstance(obj, SharpFrame):
        g.add_nodes_from(obj.affine)
        for p in obj.points:
            if p.m == 2:
                g.add_edge(*p.lines)
    else:
        if obj.mode != "affine":
            raise ValueError("double point graph needs an affine arrangement")
        g.add_nodes_from(range(1, obj.size))
        for p in build_lattice(obj):
            if p.multiplicity == 2 and not p.at_infinity:
                g.add_edge(*p.incident)
    connected = g.number_of_nodes() > 0 and nx.is_connected(g)
    return DoublePointGraph(g, connected)
