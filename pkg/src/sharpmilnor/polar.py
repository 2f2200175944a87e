"""Generic polar origin for a sharp frame and the upper sets U, Û, Û_Max, N."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .arrangement import AffLine, SharpFrame


@dataclass
class PolarSystem:
    v0: tuple[Fraction, Fraction]
    lam: Fraction
    R: Fraction
    xstar: Fraction
    ylow: Fraction
    validated: bool = False


@dataclass
class PointPolarData:
    pid: int
    upper: frozenset[int]
    upper_cone: frozenset[int]
    upper_cone_max: frozenset[int]
    neighbor: frozenset[int]
    cone_boundary: tuple[int, int]


def _cross2(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def ray_parameter(line: AffLine, v0, p) -> Fraction | None:
    """s with line through v0 + s (p - v0); None when parallel."""
    dx, dy = p[0] - v0[0], p[1] - v0[1]
    den = line.a * dx + line.b * dy
    if den == 0:
        return None
    return (line.c - line.a * v0[0] - line.b * v0[1]) / den


def _genericity_failures(frame: SharpFrame, v0) -> list[str]:
    bad = []
    for h, l in frame.affine.items():
        if l.vertical:
            if not v0[0] < l.xint:
                bad.append(f"V0 not left of {frame.label(h)}")
        elif not v0[1] < l.at_x(v0[0]):
            bad.append(f"V0 not below {frame.label(h)}")
    for p, q in combinations(frame.points, 2):
        u = (p.xy[0] - v0[0], p.xy[1] - v0[1])
        w = (q.xy[0] - v0[0], q.xy[1] - v0[1])
        if _cross2(u, w) == 0:
            bad.append(f"points {p.pid},{q.pid} collinear with V0")
    for p in frame.points:
        for h, l in frame.affine.items():
            if h in p.lines:
                continue
            s = ray_parameter(l, v0, p.xy)
            if s is not None and s <= 0:
                bad.append(f"{frame.label(h)} crosses V0 P{p.pid} behind V0")
    return bad


def choose_polar(frame: SharpFrame) -> PolarSystem:
    slopes = [l.slope for l in frame.affine.values() if not l.vertical]
    lam = (max(slopes) if slopes else Fraction(0)) + 1
    # every V0 lies on y = lam x; two points on that line defeat the R search
    while any(_cross2((1, lam), (q.xy[0] - p.xy[0], q.xy[1] - p.xy[1])) == 0
              and _cross2(p.xy, q.xy) == 0
              for p, q in combinations(frame.points, 2)):
        lam += 1
    xs = [p.xy[0] for p in frame.points]
    ys = [p.xy[1] for p in frame.points]
    R = (max(xs) - min(xs)) + (max(ys) - min(ys)) + 1
    while True:
        v0 = (-R, -lam * R)
        if not _genericity_failures(frame, v0):
            break
        R *= 2
    return PolarSystem(v0, lam, R, max(xs) + 1, min(ys) - 1, True)


class Polar:
    """Polar data of a frame, computed lazily per point."""

    def __init__(self, frame: SharpFrame, sys: PolarSystem | None = None):
        self.frame = frame
        self.sys = sys if sys is not None else choose_polar(frame)
        self._cache: dict[int, PointPolarData] = {}

    def f(self, h: int) -> tuple[Fraction, Fraction]:
        """Representative of the V1-facet of h: east probe, or bottom ray for verticals."""
        l = self.frame.affine[h]
        if l.vertical:
            return (l.xint, self.sys.ylow)
        return (self.sys.xstar, l.at_x(self.sys.xstar))

    def upper_set(self, pid: int) -> frozenset[int]:
        p = self.frame.points[pid]
        out = set()
        for h, l in self.frame.affine.items():
            if h in p.lines:
                continue
            s = ray_parameter(l, self.sys.v0, p.xy)
            if s is None:
                out.add(h)
                continue
            if s <= 0:
                raise RuntimeError("polar origin not generic")
            if s > 1:
                out.add(h)
        return frozenset(out)

    def cone_membership(self, pid: int, q) -> bool:
        p = self.frame.points[pid]
        f1, f2 = self.f(p.lines[0]), self.f(p.lines[-1])
        r1 = (f1[0] - p.xy[0], f1[1] - p.xy[1])
        r2 = (f2[0] - p.xy[0], f2[1] - p.xy[1])
        w = (q[0] - p.xy[0], q[1] - p.xy[1])
        det = _cross2(r1, r2)
        # w = alpha r1 + beta r2 with alpha, beta >= 0 (Cramer)
        alpha = _cross2(w, r2) / det
        beta = _cross2(r1, w) / det
        return alpha >= 0 and beta >= 0

    def vertical_rule(self, pid: int) -> set[int]:
        fr = self.frame
        ks = [fr.p0_index(h) for h in fr.points[pid].lines if fr.p0_index(h) is not None]
        if not ks:
            return set()
        top = max(ks)
        return {fr.p0_line(k) for k in range(1, top)}

    def upper_cone(self, pid: int) -> frozenset[int]:
        return self.data(pid).upper_cone

    def data(self, pid: int) -> PointPolarData:
        if pid in self._cache:
            return self._cache[pid]
        fr = self.frame
        p = fr.points[pid]
        U = self.upper_set(pid)
        if p.anchor:
            d = PointPolarData(pid, U, frozenset(), frozenset(), frozenset(), (p.lines[0], p.lines[-1]))
            self._cache[pid] = d
            return d
        uc = {h for h in U if not fr.affine[h].vertical and self.cone_membership(pid, self.f(h))}
        uc |= self.vertical_rule(pid)
        uc = frozenset(uc)
        d = PointPolarData(pid, U, uc, self._upper_cone_max(p, uc), self._neighbor(p),
                           (p.lines[0], p.lines[-1]))
        self._cache[pid] = d
        return d

    def _upper_cone_max(self, p, uc) -> frozenset[int]:
        fr = self.frame
        out = set()
        for a in fr.anchors:
            cand = [h for h in fr.anchor_lines[a][1:] if h in uc]
            if cand:
                out.add(max(cand, key=lambda h: fr.pos[h]))
        top = fr.m0 - 1
        if top >= 2 and fr.p0_line(top) not in p.lines:
            out |= {fr.p0_line(k) for k in range(2, top) if fr.p0_line(k) in uc}
        return frozenset(out)

    def _neighbor(self, p) -> frozenset[int]:
        fr = self.frame
        first = p.lines[0]
        for a in fr.anchors:
            ls = fr.anchor_lines[a]
            if first in ls[1:]:
                return frozenset({ls[ls.index(first) - 1]})
        return frozenset()

    def upper_cone_max(self, pid: int) -> frozenset[int]:
        return self.data(pid).upper_cone_max

    def neighbor(self, pid: int) -> frozenset[int]:
        return self.data(pid).neighbor

    def validate(self) -> list[str]:
        return validate(self.frame, self.sys)


def validate(frame: SharpFrame, sys: PolarSystem) -> list[str]:
    """Consistency report of the polar data against the frame's combinatorial orders."""
    bad = list(_genericity_failures(frame, sys.v0))
    if bad:
        return bad
    v0 = sys.v0
    pol = Polar(frame, sys)

    def ang_less(p, q) -> bool:
        u = (p[0] - v0[0], p[1] - v0[1])
        w = (q[0] - v0[0], q[1] - v0[1])
        return _cross2(u, w) > 0

    for h, pids in frame.line_points.items():
        for a, b in zip(pids, pids[1:]):
            if not ang_less(frame.points[a].xy, frame.points[b].xy):
                bad.append(f"point order on {frame.label(h)} is not the angular order")
    for p in frame.points:
        if p.anchor:
            continue
        for h in p.lines[1:-1]:
            if not pol.cone_membership(p.pid, pol.f(h)):
                bad.append(f"interior line {frame.label(h)} outside the cone at {p.pid}")
    for h, pids in frame.line_points.items():
        for k, pid in enumerate(pids):
            U = pol.upper_set(pid)
            for h2 in frame.order:
                if h2 == h or not frame.before(h2, h) or h2 in frame.points[pid].lines:
                    continue
                meets_earlier = any(h2 in frame.points[q].lines for q in pids[:k])
                if (h2 in U) != meets_earlier:
                    bad.append(f"U({pid}) and {frame.label(h2)} disagree with the lattice")
    return bad
