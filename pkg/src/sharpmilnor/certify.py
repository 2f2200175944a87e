"""Certification pipeline: quick checks, condition on last points, graph rules, oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .arrangement import Arrangement, SharpFrame, all_frames, find_sharp_pairs
from .graphs import (TooCyclic, bad_cycle_predicate, build, double_point_graph,
                     find_obstruction_cycles)
from .polar import Polar
from .reduction import (BettiTable, Families, column_search, graph_reduce, milnor_betti,
                        prepare, removable_set, vertex_point)


@dataclass
class Certificate:
    frame_id: str
    allowed: frozenset[int]
    baseline: frozenset[int]
    status: str  # proven | inconclusive
    provenance: list[dict] = field(default_factory=list)

    @property
    def rules_fired(self) -> list[str]:
        return [p["rule"] for p in self.provenance if p.get("fired")]

    def to_json(self) -> dict:
        return {"frame_id": self.frame_id, "rules_fired": self.rules_fired,
                "allowed": sorted(self.allowed), "status": self.status,
                "witnesses": [p for p in self.provenance if p.get("witness") is not None]}


def baseline_orders(frame: SharpFrame) -> frozenset[int]:
    g = gcd(frame.n + 1, frame.m0)
    return frozenset(d for d in range(2, g + 1) if g % d == 0)


def quick_checks(frame: SharpFrame) -> tuple[frozenset[int], str | None]:
    """(baseline, name of the rule giving the empty set or None)."""
    base = baseline_orders(frame)
    if not base:
        return base, "baseline"
    n1 = frame.n + 1
    shared = [i for i in range(1, len(frame.anchors) + 1) if gcd(frame.anchor_m(i), n1) != 1]
    if not shared:
        return base, "coprime-anchors"
    if len(shared) == 1:
        return base, "single-anchor"
    return base, None


def _lines(frame: SharpFrame, family, families: Families | None) -> set[int]:
    if isinstance(family, str):
        return (families or removable_set(frame)).get(family)
    return set(family)


def cond_last(frame: SharpFrame, family="0", families: Families | None = None) -> bool:
    """last(H_{m(Pi)-1}^{Pi}) != last(H_2^{Pj}) for 0 <= i < j, both lines in the family.

    A family line whose last point is its anchor makes the condition fail.
    """
    lines = _lines(frame, family, families)
    if any(vertex_point(frame, h, "last") is None for h in lines):
        return False
    tops = {0: frame.p0_line(frame.m0 - 1) if frame.m0 >= 3 else None}
    seconds = {}
    for i in range(1, len(frame.anchors) + 1):
        m = frame.anchor_m(i)
        if m >= 3:
            tops[i] = frame.anchor_line(i, m - 1)
        if m >= 2:
            seconds[i] = frame.anchor_line(i, 2)
    for i, hi in tops.items():
        if hi is None or hi not in lines:
            continue
        for j, hj in seconds.items():
            if j > i and hj in lines and hj != hi and frame.last(hi) == frame.last(hj):
                return False
    return True


def _graph_rule(frame, polar, variant, family, families, check_bad):
    """(clear, witness) for the graph rule of a variant on a family."""
    g = build(variant, frame, polar, family, families=families)
    w = {"variant": variant, "family": family, "vertices": len(g.vertices), "edges": len(g.edges)}
    if g.orphans:
        w["orphans"] = [frame.label(h) for h in g.orphans]
        return False, w, g
    if g.unclassified():
        w["unclassified"] = [(frame.label(e.u[0]), frame.label(e.v[0])) for e in g.unclassified()]
        return False, w, g
    try:
        cycles = find_obstruction_cycles(g)
    except TooCyclic:
        w["too_cyclic"] = True
        return False, w, g
    bad = [c for c in cycles if check_bad(c)]
    if bad:
        w["cycles"] = [c.to_json(frame) for c in bad[:5]]
        w["bad_cycles"] = len(bad)
        return False, w, g
    return True, w, g


def _triangularizes(frame, polar, mode, families, g) -> bool:
    """Run the pivoted elimination on the vertex block as a check of a forest verdict."""
    if len({v[1] for v in g.vertices}) != len(g.vertices):
        return False
    st = prepare(frame, mode, polar, families)
    graph_reduce(st, g.vertices)
    return st.blocked is None


def certify_frame(frame: SharpFrame, polar: Polar | None = None, gamma: bool = True,
                  verify: bool = True, search: bool = True) -> Certificate:
    polar = polar if polar is not None else Polar(frame)
    fam = removable_set(frame)
    prov: list[dict] = []
    base, quick = quick_checks(frame)
    prov.append({"rule": "baseline", "frame": frame.frame_id, "fired": True,
                 "witness": {"n+1": frame.n + 1, "m(P0)": frame.m0, "orders": sorted(base)}})
    if quick is not None:
        if quick != "baseline":
            prov.append({"rule": quick, "frame": frame.frame_id, "fired": True, "witness": None})
        return Certificate(frame.frame_id, frozenset(), base, "proven", prov)
    allowed = set(base)

    def fire(rule, witness, new):
        nonlocal allowed
        allowed &= set(new)
        prov.append({"rule": rule, "frame": frame.frame_id, "fired": True, "witness": witness})

    def skip(rule, witness):
        prov.append({"rule": rule, "frame": frame.frame_id, "fired": False, "witness": witness})

    # rule 2: last graph on A_0
    if cond_last(frame, "0", fam):
        ok, w, g = _graph_rule(frame, polar, "last", "0", fam, lambda c: bad_cycle_predicate(c, "last"))
        if ok and verify and not _triangularizes(frame, polar, "last", fam, g):
            ok, w["blocked"] = False, True
        fire("last-forest", w, ()) if ok else skip("last-forest", w)
    else:
        skip("last-forest", {"condition": "last points collide on A_0"})
    # rule 3: condition on the (0,3) family
    if allowed:
        if cond_last(frame, "03", fam):
            fire("last-03", {"family": "03"}, {3})
        else:
            skip("last-03", {"condition": "last points collide on A_(0,3)"})
    # rule 4: last/min graph, only for m(P0) > 3
    if allowed and frame.m0 > 3:
        bad = lambda c: bad_cycle_predicate(c, "lastmin")
        ok, w, g = _graph_rule(frame, polar, "lastmin", "0p", fam, bad)
        if ok and verify and not _triangularizes(frame, polar, "lastmin", fam, g):
            ok, w["blocked"] = False, True
        if ok:
            fire("lastmin-forest", w, ())
        else:
            skip("lastmin-forest", w)
            ok, w, g = _graph_rule(frame, polar, "lastmin", "034", fam, bad)
            fire("lastmin-034", w, {3, 4}) if ok else skip("lastmin-034", w)
    # mixed last/min columns on the rows left after the structured reductions
    if allowed and search:
        mode, name = ("last", "0") if frame.m0 == 3 else ("lastmin", "0p")
        lines = fam.get(name)
        found = column_search(prepare(frame, mode, polar, fam), lines) if lines else []
        if found is not None:
            fire("column-search", {"mode": mode, "columns": [
                f"{frame.label(h)}@{frame.point_label(p)}" for h, p in found]}, ())
        else:
            skip("column-search", {"mode": mode})
    # rule 5: double point graph
    if gamma and allowed and (allowed <= {3} or allowed <= {3, 4}):
        if any(p.get("fired") for p in prov[1:]):
            dp = double_point_graph(frame)
            if dp.connected:
                fire("double-points-connected", {"lines": dp.graph.number_of_nodes()}, ())
            else:
                skip("double-points-connected", {"connected": False})
    narrowed = any(p.get("fired") for p in prov[1:])
    status = "proven" if narrowed or not allowed else "inconclusive"
    return Certificate(frame.frame_id, frozenset(allowed), base, status, prov)


@dataclass
class MonodromyReport:
    arr: Arrangement
    sharp_pairs: list[tuple[int, int]]
    frames: list[tuple[tuple[int, int], Certificate]]
    combined: frozenset[int]
    betti: BettiTable
    gamma_connected: dict[str, bool]

    @property
    def consistent(self) -> bool:
        return all(d in self.combined for d, b in self.betti.betas.items() if b > 0)

    def to_json(self) -> dict:
        names = self.arr.names
        return {
            "n": self.arr.n,
            "sharp_pairs": [[names[i], names[j]] for i, j in self.sharp_pairs],
            "frames": [dict(c.to_json(), pair=[names[p[0]], names[p[1]]]) for p, c in self.frames],
            "combined_allowed": sorted(self.combined),
            "betti": {str(d): b for d, b in sorted(self.betti.betas.items())},
            "b1_fiber": self.betti.b1_fiber,
            "oracle_flags": self.betti.flags,
            "double_points_connected": self.gamma_connected,
            "consistent": self.consistent,
        }


def certify(arr: Arrangement, gamma: bool = True, verify: bool = True, search: bool = True,
            frames: list[SharpFrame] | None = None) -> MonodromyReport:
    """Certify every frame of every sharp pair and intersect; attach the rank oracle."""
    pairs = find_sharp_pairs(arr)
    if not pairs:
        raise ValueError("not a sharp arrangement")
    frames = frames if frames is not None else all_frames(arr)
    out = []
    combined: set[int] | None = None
    gam = {}
    for fr in frames:
        cert = certify_frame(fr, gamma=gamma, verify=verify, search=search)
        out.append((fr.pair, cert))
        combined = set(cert.allowed) if combined is None else combined & cert.allowed
        gam[f"{arr.names[fr.pair[0]]},{arr.names[fr.pair[1]]}:{fr.frame_id}"] = double_point_graph(fr).connected
    betti = milnor_betti(frames[0])
    return MonodromyReport(arr, pairs, out, frozenset(combined or ()), betti, gam)
