"""Exact rational line geometry, intersection lattice, sharp pairs and sharp frames."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

Vec = tuple[Fraction, Fraction, Fraction]


def _normalize(v: Sequence) -> Vec:
    v = tuple(Fraction(x) for x in v)
    for x in v:
        if x:
            return tuple(y / x for y in v)
    raise ValueError("zero vector")


def cross(u: Sequence, v: Sequence) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence, v: Sequence) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


@dataclass(frozen=True)
class ProjLine:
    """Line a x + b y + c z = 0, normalized so the first nonzero coordinate is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def make(cls, a, b, c) -> "ProjLine":
        return cls(*_normalize((a, b, c)))

    @property
    def vec(self) -> Vec:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class AffLine:
    """Line a x + b y = c with (a, b) normalized so the first nonzero entry is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def make(cls, a, b, c) -> "AffLine":
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if not a and not b:
            raise ValueError("degenerate affine line")
        s = a if a else b
        return cls(a / s, b / s, c / s)

    @classmethod
    def from_proj(cls, v: Sequence) -> "AffLine":
        return cls.make(v[0], v[1], -v[2])

    @property
    def vertical(self) -> bool:
        return self.b == 0

    @property
    def slope(self) -> Fraction | None:
        return None if self.vertical else -self.a / self.b

    @property
    def xint(self) -> Fraction:
        """x coordinate of a vertical line."""
        return self.c / self.a

    def at_x(self, x: Fraction) -> Fraction:
        return (self.c - self.a * x) / self.b

    def value(self, p: Sequence) -> Fraction:
        return self.a * p[0] + self.b * p[1] - self.c

    def contains(self, p: Sequence) -> bool:
        return self.value(p) == 0

    @property
    def proj(self) -> ProjLine:
        return ProjLine.make(self.a, self.b, -self.c)

    def __str__(self) -> str:
        if self.vertical:
            return f"x = {self.xint}"
        m, q = self.slope, self.c / self.b
        return f"y = {m}*x + {q}"


def intersect(l1: AffLine, l2: AffLine) -> tuple[Fraction, Fraction] | None:
    """Affine intersection point, or None for parallel lines."""
    if l1 == l2:
        raise ValueError("duplicate line")
    det = l1.a * l2.b - l1.b * l2.a
    if det == 0:
        return None
    x = (l1.c * l2.b - l1.b * l2.c) / det
    y = (l1.a * l2.c - l1.c * l2.a) / det
    return (x, y)


@dataclass(frozen=True)
class LatticePoint:
    """Rank-two intersection point; `proj` is the normalized homogeneous vector."""

    proj: Vec
    incident: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident)

    @property
    def at_infinity(self) -> bool:
        return self.proj[2] == 0

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        x, y, z = self.proj
        return (x / z, y / z)


def _point_key(v: Sequence) -> Vec:
    if v[2]:
        return (v[0] / v[2], v[1] / v[2], Fraction(1))
    return _normalize(v)


@dataclass
class Arrangement:
    """Projective arrangement; affine input is closed with the line at infinity as index 0."""

    lines: list[ProjLine]
    names: list[str]
    mode: str = "projective"

    def __post_init__(self):
        if len(set(self.lines)) != len(self.lines):
            raise ValueError("duplicate line")
        if len(self.names) != len(self.lines):
            raise ValueError("names and lines differ in length")

    @classmethod
    def affine(cls, lines: Sequence[AffLine | tuple], names: Sequence[str] | None = None) -> "Arrangement":
        affs = [l if isinstance(l, AffLine) else AffLine.make(*l) for l in lines]
        if names is None:
            names = [f"L{i + 1}" for i in range(len(affs))]
        return cls(
            [ProjLine.make(0, 0, 1)] + [l.proj for l in affs],
            ["inf"] + list(names),
            "affine",
        )

    @classmethod
    def projective(cls, lines: Sequence[ProjLine | tuple], names: Sequence[str] | None = None) -> "Arrangement":
        pls = [l if isinstance(l, ProjLine) else ProjLine.make(*l) for l in lines]
        if names is None:
            names = [f"L{i + 1}" for i in range(len(pls))]
        return cls(pls, list(names), "projective")

    @property
    def size(self) -> int:
        """Number of projective lines, that is n + 1."""
        return len(self.lines)

    @property
    def n(self) -> int:
        return len(self.lines) - 1

    def index(self, name: str) -> int:
        return self.names.index(name)


def build_lattice(arr: Arrangement) -> list[LatticePoint]:
    """All intersection points of the projective closure with their incident lines."""
    if arr.size < 2:
        raise ValueError("need at least two lines")
    groups: dict[Vec, set[int]] = {}
    for i, j in combinations(range(arr.size), 2):
        p = _point_key(cross(arr.lines[i].vec, arr.lines[j].vec))
        groups.setdefault(p, set()).update((i, j))
    pts = [LatticePoint(p, tuple(sorted(s))) for p, s in groups.items()]
    pts.sort(key=lambda q: (q.at_infinity, q.proj))
    return pts


def _transform_rows(k: Vec, s: Vec) -> list[list[Fraction]]:
    """Rows (s, e_i, k) with the standard vector giving the smallest nonzero determinant."""
    best = None
    for i in range(3):
        e = [Fraction(0)] * 3
        e[i] = Fraction(1)
        det = dot(s, cross(e, k))
        if det and (best is None or abs(det) < best[0]):
            best = (abs(det), e)
    if best is None:
        raise ValueError("lines coincide")
    rows = [list(s), best[1], list(k)]
    out = []
    for r in rows:
        m = lcm(*(x.denominator for x in r))
        out.append([x * m for x in r])
    return out


def _side_in_chart(k: Vec, s: Vec, p: Vec) -> int:
    """Sign of the line s at p, in the affine chart where k is at infinity."""
    rows = _transform_rows(k, s)
    q = [dot(r, p) for r in rows]
    val = q[0] / q[2]  # s maps to the first coordinate of the chart
    return (val > 0) - (val < 0)


def is_sharp_pair(arr: Arrangement, i: int, j: int, lattice: list[LatticePoint] | None = None) -> bool:
    lattice = lattice if lattice is not None else build_lattice(arr)
    k, s = arr.lines[i].vec, arr.lines[j].vec
    sides = set()
    for p in lattice:
        if i in p.incident or j in p.incident:
            continue
        sides.add(_side_in_chart(k, s, p.proj))
    return len(sides) <= 1


def find_sharp_pairs(arr: Arrangement) -> list[tuple[int, int]]:
    """Unordered sharp pairs (i < j) of the projective closure."""
    if arr.size < 3:
        raise ValueError("need at least three lines")
    lat = build_lattice(arr)
    return [(i, j) for i, j in combinations(range(arr.size), 2) if is_sharp_pair(arr, i, j, lat)]


def _inv3(m: list[list[Fraction]]) -> list[list[Fraction]]:
    a = [[Fraction(x) for x in r] for r in m]
    det = dot(a[0], cross(a[1], a[2]))
    if not det:
        raise ValueError("singular transform")
    cols = [cross(a[1], a[2]), cross(a[2], a[0]), cross(a[0], a[1])]
    # inverse has columns equal to the cross products divided by det
    return [[cols[j][i] / det for j in range(3)] for i in range(3)]


def _matvec(m, v) -> Vec:
    return tuple(dot(r, v) for r in m)


def _vecmat(v, m) -> Vec:
    return tuple(sum(v[i] * m[i][j] for i in range(3)) for j in range(3))


@dataclass
class FramePoint:
    """Affine lattice point of a frame with S(P) ordered by the hyperplane order."""

    pid: int
    xy: tuple[Fraction, Fraction]
    lines: tuple[int, ...]
    anchor: bool = False

    @property
    def m(self) -> int:
        return len(self.lines)

    def H(self, a: int) -> int:
        """Line H_a^P (1-based)."""
        return self.lines[a - 1]

    def pos(self, line: int) -> int:
        """a such that line = H_a^P."""
        return self.lines.index(line) + 1


@dataclass
class SharpFrame:
    arr: Arrangement
    pair: tuple[int, int]
    at_infinity: int
    sharp: int
    orientation: int
    transform: list[list[Fraction]]
    affine: dict[int, AffLine]
    order: list[int]
    points: list[FramePoint]
    parallels: list[int]  # H_2^{P0}, ..., H_{m0-1}^{P0}
    anchors: list[int]  # point ids, ascending y
    anchor_lines: dict[int, list[int]]  # anchor pid -> H_1 (sharp), H_2, ..., H_m
    line_points: dict[int, list[int]]  # line -> point ids in the order along the line
    frame_id: str = ""
    pos: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.pos = {h: i for i, h in enumerate(self.order)}

    @property
    def n(self) -> int:
        return self.arr.n

    @property
    def m0(self) -> int:
        return len(self.parallels) + 2

    def p0_line(self, k: int) -> int:
        """H_k^{P0}, k = 1 is the sharp line."""
        return self.sharp if k == 1 else self.parallels[k - 2]

    def p0_index(self, h: int) -> int | None:
        if h == self.sharp:
            return 1
        if h in self.parallels:
            return self.parallels.index(h) + 2
        return None

    def anchor_of(self, h: int) -> tuple[int, int] | None:
        """(anchor position i >= 1, a) such that h = H_a^{P_i}, for slanted lines."""
        for i, pid in enumerate(self.anchors, start=1):
            ls = self.anchor_lines[pid]
            if h in ls[1:]:
                return i, ls.index(h) + 1
        return None

    def anchor_line(self, i: int, a: int) -> int:
        return self.anchor_lines[self.anchors[i - 1]][a - 1]

    def anchor_m(self, i: int) -> int:
        return len(self.anchor_lines[self.anchors[i - 1]])

    def last(self, h: int) -> int:
        return self.line_points[h][-1]

    def min(self, h: int) -> int | None:
        """Second point of h, counting P0 as the first point of the lines through it."""
        pts = self.line_points[h]
        if self.p0_index(h) is not None:
            return pts[0] if pts else None
        return pts[1] if len(pts) >= 2 else None

    def before(self, h1: int, h2: int) -> bool:
        return self.pos[h1] < self.pos[h2]

    def label(self, h: int) -> str:
        if h == self.sharp:
            return "H1^P0"
        k = self.p0_index(h)
        if k is not None:
            return f"H{k}^P0"
        i, a = self.anchor_of(h)
        return f"H{a}^P{i}"

    def line_by_label(self, lab: str) -> int:
        for h in self.order:
            if self.label(h) == lab:
                return h
        raise KeyError(lab)

    def point_label(self, pid: int) -> str:
        p = self.points[pid]
        if p.anchor:
            return f"P{self.anchors.index(pid) + 1}"
        return f"({p.xy[0]},{p.xy[1]})"

    def point_at(self, x, y) -> int:
        key = (Fraction(x), Fraction(y))
        for p in self.points:
            if p.xy == key:
                return p.pid
        raise KeyError(key)

    @property
    def vertical_lines(self) -> list[int]:
        return [self.sharp] + self.parallels


def build_frame(arr: Arrangement, pair: tuple[int, int], which_at_infinity: int = 1,
                orientation: int = 1, lattice: list[LatticePoint] | None = None) -> SharpFrame:
    """Sharp frame for the pair; `which_at_infinity` 1 or 2 selects pair[0] or pair[1]."""
    lattice = lattice if lattice is not None else build_lattice(arr)
    p, q = sorted(pair)
    if not is_sharp_pair(arr, p, q, lattice):
        raise ValueError("pair is not sharp")
    if which_at_infinity not in (1, 2) or orientation not in (1, -1):
        raise ValueError("bad frame selector")
    inf, sharp = (p, q) if which_at_infinity == 1 else (q, p)
    k, s = arr.lines[inf].vec, arr.lines[sharp].vec
    M = _transform_rows(k, s)
    off = [pt for pt in lattice if inf not in pt.incident and sharp not in pt.incident]
    if off:
        img = _matvec(M, off[0].proj)
        if img[0] / img[2] > 0:
            M[0] = [-x for x in M[0]]
    if orientation == -1:
        M[1] = [-x for x in M[1]]
    Minv = _inv3(M)
    affine = {}
    for h, line in enumerate(arr.lines):
        if h == inf:
            continue
        affine[h] = AffLine.from_proj(_vecmat(line.vec, Minv))
    assert affine[sharp] == AffLine.make(1, 0, 0)

    # affine points of the frame
    pts = []
    for pt in lattice:
        if inf in pt.incident:
            continue
        img = _matvec(M, pt.proj)
        pts.append((img[0] / img[2], img[1] / img[2], pt.incident))
    for x, y, _ in pts:
        if x > 0:
            raise AssertionError("frame is not sharp")

    verts = [h for h, l in affine.items() if l.vertical]
    parallels = sorted((h for h in verts if h != sharp), key=lambda h: -affine[h].xint)
    anchor_raw = sorted((pt for pt in pts if pt[0] == 0), key=lambda pt: pt[1])
    anchor_lines = []
    for x, y, inc in anchor_raw:
        slanted = sorted((h for h in inc if h != sharp), key=lambda h: affine[h].slope)
        anchor_lines.append([sharp] + slanted)
    order = sorted(parallels, key=lambda h: affine[h].xint) + [sharp]
    for ls in anchor_lines:
        order += ls[1:]
    if sorted(order) != sorted(affine):
        raise AssertionError("a slanted line misses every anchor")
    pos = {h: i for i, h in enumerate(order)}

    points = []
    for x, y, inc in sorted(pts, key=lambda pt: (pt[0], pt[1])):
        lines = tuple(sorted(inc, key=lambda h: pos[h]))
        points.append(FramePoint(len(points), (x, y), lines, x == 0))
    anchors = [p.pid for p in sorted((p for p in points if p.anchor), key=lambda p: p.xy[1])]
    anchor_map = {pid: ls for pid, ls in zip(anchors, anchor_lines)}
    for pid in anchors:
        assert list(points[pid].lines) == anchor_map[pid]

    line_points: dict[int, list[int]] = {h: [] for h in affine}
    for pt in points:
        for h in pt.lines:
            line_points[h].append(pt.pid)
    for h, plist in line_points.items():
        if not plist:
            raise ValueError("isolated line")
        if affine[h].vertical:
            plist.sort(key=lambda pid: points[pid].xy[1])
        else:
            plist.sort(key=lambda pid: -points[pid].xy[0])
    fid = f"{which_at_infinity}.{'i' if orientation == 1 else 'ii'}"
    return SharpFrame(arr, (p, q), inf, sharp, orientation, M, affine, order, points,
                      parallels, anchors, anchor_map, line_points, fid)


def all_frames(arr: Arrangement) -> list[SharpFrame]:
    lat = build_lattice(arr)
    out = []
    for pair in find_sharp_pairs(arr):
        for w in (1, 2):
            for o in (1, -1):
                out.append(build_frame(arr, pair, w, o, lat))
    return out


def frame_orders(frame: SharpFrame):
    """(hyperplane order, per-line point orders, last, min)."""
    last = {h: frame.last(h) for h in frame.order}
    mins = {h: frame.min(h) for h in frame.order}
    return list(frame.order), {h: list(v) for h, v in frame.line_points.items()}, last, mins
