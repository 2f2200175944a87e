"""Built-in arrangements with exact rational coordinates and combinatorial signatures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .arrangement import AffLine, Arrangement, SharpFrame, build_frame, build_lattice


class SignatureMismatch(ValueError):
    pass


@dataclass
class Fixture:
    name: str
    arr: Arrangement
    signature: frozenset[frozenset[str]]  # line sets of the points of multiplicity >= 3
    frame_spec: tuple[str, str, int] | None = None  # (line at infinity, sharp line, orientation)
    note: str = ""

    def frame(self, orientation: int | None = None) -> SharpFrame:
        """The documented frame; orientation overrides the default one."""
        inf, sharp, o = self.frame_spec
        i, j = self.arr.index(inf), self.arr.index(sharp)
        pair = (min(i, j), max(i, j))
        which = 1 if pair[0] == i else 2
        return build_frame(self.arr, pair, which, o if orientation is None else orientation)


def signature_of(arr: Arrangement) -> frozenset[frozenset[str]]:
    return frozenset(frozenset(arr.names[i] for i in p.incident)
                     for p in build_lattice(arr) if p.multiplicity >= 3)


def _affine(spec: list[tuple[str, tuple]]) -> Arrangement:
    return Arrangement.affine([AffLine.make(*abc) for _, abc in spec], [n for n, _ in spec])


def _slanted(y0, s) -> tuple:
    """y = s x + y0 as a x + b y = c."""
    return (-Q(s), 1, Q(y0))


def _sig(*groups: str) -> frozenset[frozenset[str]]:
    return frozenset(frozenset(g.split()) for g in groups)


def t1() -> Fixture:
    arr = _affine([("A", (1, 0, -1)), ("S", (1, 0, 0)), ("D1", (-1, 1, 0)), ("D2", (-2, 1, 0))])
    return Fixture("t1", arr, _sig("inf A S", "S D1 D2"), ("inf", "S", 1),
                   "x=-1, x=0, y=x, y=2x")


def generic3() -> Fixture:
    arr = Arrangement.projective([(1, 0, 0), (0, 1, 0), (0, 0, 1)], ["X", "Y", "Z"])
    return Fixture("generic3", arr, frozenset(), ("Z", "X", 1), "three generic lines")


def braid6() -> Fixture:
    arr = Arrangement.projective(
        [(1, 0, 0), (0, 1, 0), (1, 0, -1), (0, 1, -1), (1, -1, 0), (1, 1, -1)],
        ["x", "y", "x-z", "y-z", "x-y", "x+y-z"])
    sig = _sig("x y x-y", "x y-z x+y-z", "x-z y x+y-z", "x-z y-z x-y")
    return Fixture("braid6", arr, sig, ("x", "y", 1), "braid arrangement, six lines")


def example0() -> Fixture:
    # three triple points on H2^P4 at x = -2, -3/2, -1 and anchors at y = 3/2, 5/2, 7/2, 5, 6, 7
    arr = _affine([
        ("S", (1, 0, 0)),
        ("V", (1, 0, Q(-3, 2))),
        ("A1", _slanted(Q(3, 2), -2)),
        ("A2", _slanted(Q(5, 2), Q(-1, 4))),
        ("A3", _slanted(Q(7, 2), Q(-1, 4))),
        ("A4a", _slanted(5, Q(-1, 4))),
        ("A4b", _slanted(5, Q(1, 3))),
        ("A5", _slanted(6, Q(3, 4))),
        ("A6a", _slanted(7, Q(3, 4))),
        ("A6b", _slanted(7, Q(13, 12))),
        ("A6c", _slanted(7, Q(7, 4))),
    ])
    return Fixture("example0", arr, EXAMPLE0_SIG, ("inf", "S", 1),
                   "m(P0)=3, anchor multiplicities 2,2,2,3,2,4")


def example4() -> Fixture:
    arr = _affine([
        ("S", (1, 0, 0)),
        ("V2", (1, 0, -1)),
        ("V3", (1, 0, -2)),
        ("y2", _slanted(2, 0)),
        ("y3", _slanted(3, 0)),
        ("y4", _slanted(4, 0)),
        ("d4", _slanted(4, 1)),
        ("d5", _slanted(5, 1)),
        ("d6", _slanted(6, 1)),
        ("m1", _slanted(2, -1)),
        ("m2", _slanted(2, -2)),
    ])
    return Fixture("example4", arr, EXAMPLE4_SIG, ("inf", "S", 1),
                   "twelve lines, m(P0)=4, anchor multiplicities 4,2,3,2,2")


def simplicial18() -> Fixture:
    names, lines = [], []
    for a in range(-2, 3):
        names += [f"v{a}", f"h{a}", f"d{a}"]
        lines += [(1, 0, -a), (0, 1, -a), (-1, 1, -a)]
    names += ["s0", "s1", "z"]
    lines += [(1, 1, 0), (1, 1, -1), (0, 0, 1)]
    arr = Arrangement.projective(lines, names)
    return Fixture("simplicial18", arr, SIMPLICIAL18_SIG, ("s1", "s0", 1),
                   "grid model: 5 vertical, 5 horizontal, 5 diagonal lines, x+y=0, x+y=1 and infinity")


def figure1like() -> Fixture:
    arr = _affine([
        ("S", (1, 0, 0)),
        ("Va", (1, 0, Q(-3, 2))),
        ("Vb", (1, 0, Q(-7, 2))),
        ("B1", _slanted(3, Q(-4, 3))),
        ("T1", _slanted(3, Q(-2, 3))),
        ("B2", _slanted(Q(11, 2), 0)),
        ("T2", _slanted(Q(11, 2), Q(1, 3))),
        ("B3", _slanted(Q(17, 2), 1)),
        ("T3", _slanted(Q(17, 2), 2)),
    ])
    return Fixture("figure1like", arr, FIGURE1_SIG, ("inf", "S", 1),
                   "three parallels and three anchors with two lines each")


EXAMPLE0_SIG = _sig(
    "A1 A4a A6a",
    "A1 A4b V",
    "A2 A3 A4a inf",
    "A4a A4b S",
    "A4a A5 A6c",
    "A4a A6b V",
    "A5 A6a inf",
    "A6a A6b A6c S",
    "S V inf",
)
EXAMPLE4_SIG = _sig(
    "S V2 V3 inf",
    "S d4 y4",
    "S m1 m2 y2",
    "V2 d4 m1 y3",
    "V2 d5 m2 y4",
    "V3 d4 y2",
    "V3 d5 y3",
    "V3 d6 m1 y4",
    "d4 d5 d6 inf",
    "inf y2 y3 y4",
)
SIMPLICIAL18_SIG = _sig(
    "d-1 d-2 d0 d1 d2 z",
    "d-1 h-1 v0",
    "d-1 h-2 v-1",
    "d-1 h0 s1 v1",
    "d-1 h1 v2",
    "d-2 h-1 s0 v1",
    "d-2 h-2 v0",
    "d-2 h0 v2",
    "d0 h-1 v-1",
    "d0 h-2 v-2",
    "d0 h0 s0 v0",
    "d0 h1 v1",
    "d0 h2 v2",
    "d1 h-1 v-2",
    "d1 h0 v-1",
    "d1 h1 s1 v0",
    "d1 h2 v1",
    "d2 h0 v-2",
    "d2 h1 s0 v-1",
    "d2 h2 v0",
    "h-1 h-2 h0 h1 h2 z",
    "h-1 s1 v2",
    "h-2 s0 v2",
    "h2 s0 v-2",
    "h2 s1 v-1",
    "s0 s1 z",
    "v-1 v-2 v0 v1 v2 z",
)
FIGURE1_SIG = _sig(
    "B1 S T1",
    "B1 T2 Va",
    "B2 S T2",
    "B2 T3 Va",
    "B3 S T3",
    "S Va Vb inf",
)

CATALOG = {
    "t1": t1,
    "generic3": generic3,
    "braid6": braid6,
    "example0": example0,
    "example4": example4,
    "simplicial18": simplicial18,
    "figure1like": figure1like,
}


def fixture(name: str, check: bool = True) -> Fixture:
    """Build a catalog fixture and check its signature against the lattice."""
    if name not in CATALOG:
        raise KeyError(f"unknown fixture {name}")
    fx = CATALOG[name]()
    if check:
        got = signature_of(fx.arr)
        if got != fx.signature:
            raise SignatureMismatch(f"{name}: lattice does not match the stored signature")
    return fx
