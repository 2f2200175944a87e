"""Structured reductions of the boundary matrix and the cyclotomic rank oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .arrangement import SharpFrame
from .complex import BoundaryMatrix, assemble, good_column, is_unit_times_one_minus_t
from .laurent import (ONE, T, CycloField, LaurentPoly, div_exact, divisors, euler_phi,
                      one_minus_t_pow, t_pow)
from .polar import Polar


class ReductionError(AssertionError):
    """A postcondition of a structured reduction failed."""


@dataclass
class Blocked:
    H: int
    Hp: int
    P: int
    Pp: int
    submatrix: list[list[LaurentPoly]]


@dataclass
class ReductionState:
    frame: SharpFrame
    polar: Polar
    matrix: BoundaryMatrix
    removed_rows: set[int] = field(default_factory=set)
    log: list[dict] = field(default_factory=list)
    blocked: Blocked | None = None
    stage: set[str] = field(default_factory=set)

    @classmethod
    def start(cls, frame: SharpFrame, polar: Polar | None = None) -> "ReductionState":
        polar = polar if polar is not None else Polar(frame)
        M, _ = assemble(frame, polar)
        return cls(frame, polar, M)

    @property
    def active_rows(self) -> list[int]:
        return [h for h in self.matrix.rows if h not in self.removed_rows]

    def row_op(self, target: int, source: int, phi: LaurentPoly, note: str = "") -> None:
        """target <- target - phi * source."""
        M = self.matrix
        for c, v in list(M.entries[source].items()):
            M.set(target, c, M.get(target, c) - phi * v)
        fr = self.frame
        self.log.append({"op": "row", "target": fr.label(target), "source": fr.label(source),
                         "phi": str(phi), "note": note})

    def col_op(self, target: int, source: int, phi: LaurentPoly, note: str = "") -> None:
        """column target <- column target - phi * column source."""
        M = self.matrix
        for h in M.rows:
            v = M.get(h, source)
            if v:
                M.set(h, target, M.get(h, target) - phi * v)
        self.log.append({"op": "col", "target": target, "source": source, "phi": str(phi), "note": note})

    def clone(self) -> "ReductionState":
        return ReductionState(self.frame, self.polar, self.matrix.copy(), set(self.removed_rows),
                              list(self.log), self.blocked, set(self.stage))

    def to_json(self) -> dict:
        out = {"removed": [self.frame.label(h) for h in sorted(self.removed_rows, key=self.frame.pos.get)],
               "log": self.log}
        if self.blocked:
            b = self.blocked
            fr = self.frame
            out["blocked"] = {"H": fr.label(b.H), "H'": fr.label(b.Hp), "P": fr.point_label(b.P),
                              "P'": fr.point_label(b.Pp),
                              "submatrix": [[str(x) for x in r] for r in b.submatrix]}
        return out


def drop_sharp_row(state: ReductionState) -> ReductionState:
    state.removed_rows.add(state.frame.sharp)
    state.stage.add("sharp")
    return state


TINV = t_pow(-1)


def diagonalize_M1(state: ReductionState, check: bool = True) -> ReductionState:
    """Operations H_a <- H_a - t^-1 H_{a+1} at every anchor, then column cleanup."""
    if "sharp" not in state.stage:
        raise ReductionError("drop the sharp row first")
    fr, M = state.frame, state.matrix
    before = M.copy()
    for pid in fr.anchors:
        ls = fr.anchor_lines[pid]
        m = len(ls)
        for a in range(2, m):
            state.row_op(ls[a - 1], ls[a], TINV, f"anchor {fr.point_label(pid)}")
    for pid in fr.anchors:
        ls = fr.anchor_lines[pid]
        m = len(ls)
        cols = M.block(pid)
        last = ls[-1]
        piv = M.get(last, cols[0])
        for j in range(2, m):
            e = M.get(last, cols[j - 1])
            if e:
                state.col_op(cols[j - 1], cols[0], div_exact(e, piv), f"anchor {fr.point_label(pid)}")
    state.stage.add("M1")
    if check:
        bad = check_M1(state) + check_block_postconditions(state, before)
        if bad:
            raise ReductionError("; ".join(bad[:5]))
    return state


def check_M1(state: ReductionState) -> list[str]:
    fr, M = state.frame, state.matrix
    bad = []
    for pid in fr.anchors:
        ls = fr.anchor_lines[pid]
        m = len(ls)
        cols = M.block(pid)
        for h in state.active_rows:
            row = [M.get(h, c) for c in cols]
            if h in ls[1:]:
                a = ls.index(h) + 1
                want = a if a < m else 1
                target = one_minus_t_pow(m) if a < m else ONE - T
                for j, e in enumerate(row, start=1):
                    if j == want:
                        if not e.associate(target):
                            bad.append(f"anchor {fr.point_label(pid)} row {fr.label(h)} pivot {e}")
                    elif e:
                        bad.append(f"anchor {fr.point_label(pid)} row {fr.label(h)} off-diagonal {e}")
            elif any(row):
                bad.append(f"anchor {fr.point_label(pid)} row {fr.label(h)} not zero")
    return bad


def check_block_postconditions(state: ReductionState, before: BoundaryMatrix) -> list[str]:
    """Entrywise check of the non-anchor column blocks after the anchor operations: S rows and last anchor rows unchanged, non-maximal Û rows zeroed, N entries equal -t^-1 times the successor row."""
    fr, M, pol = state.frame, state.matrix, state.polar
    bad = []
    for p in fr.points:
        if p.anchor:
            continue
        cols = M.block(p.pid)
        data = pol.data(p.pid)
        S, Uh = set(p.lines), data.upper_cone
        new = {h: [M.get(h, c) for c in cols] for h in state.active_rows}
        old = {h: [before.get(h, c) for c in cols] for h in fr.order}
        for h in state.active_rows:
            loc = fr.anchor_of(h)
            if loc is None or h in S:
                if new[h] != old[h]:
                    bad.append(f"row {fr.label(h)} changed on block {p.pid}")
                continue
            i, a = loc
            m = fr.anchor_m(i)
            if a == m:
                if new[h] != old[h]:
                    bad.append(f"last anchor row {fr.label(h)} changed on block {p.pid}")
                continue
            succ = fr.anchor_line(i, a + 1)
            if h in Uh:
                chain = [g for g in fr.anchor_lines[fr.anchors[i - 1]][1:] if g in Uh]
                if h != max(chain, key=fr.pos.get) and any(new[h]):
                    bad.append(f"Û row {fr.label(h)} not zeroed on block {p.pid}")
            else:
                fires = succ == p.lines[0]
                if fires:
                    want = [-(TINV * x) for x in old[succ]]
                    if new[h] != want or not any(new[h]):
                        bad.append(f"N entry of {fr.label(h)} wrong on block {p.pid}")
                elif any(new[h]):
                    bad.append(f"row {fr.label(h)} gained entries on block {p.pid}")
    return bad


def parallel_phi(frame: SharpFrame, k: int) -> LaurentPoly:
    return t_pow(frame.m0 - k - 2) * (ONE - T)


def eliminate_p0_rows(state: ReductionState, mode: str = "last", families=None) -> ReductionState:
    """Clear the middle parallels against the top parallel, then remove them through their last points."""
    if mode not in ("last", "lastmin"):
        raise ValueError("mode must be last or lastmin")
    fr, M = state.frame, state.matrix
    top = fr.m0 - 1
    Htop = fr.p0_line(top) if top >= 2 else None
    for k in range(2, top):
        state.row_op(fr.p0_line(k), Htop, -parallel_phi(fr, k), "parallel clearing")
    # rows H_k vanish on every good column at points of H_top
    bad = []
    if Htop is not None:
        for pid in fr.line_points[Htop]:
            p = fr.points[pid]
            for h in p.lines:
                c = M.col_index[good_column(fr, pid, h)]
                for k in range(2, top):
                    if fr.p0_line(k) != h and M.get(fr.p0_line(k), c):
                        bad.append(f"H{k}^P0 nonzero on c_{fr.label(h)}^{fr.point_label(pid)}")
    if bad:
        raise ReductionError("; ".join(bad[:5]))

    fam = families if families is not None else removable_set(fr)
    protected = protected_columns(fr, fam, mode, M)
    snap = {c: {h: M.get(h, c) for h in M.rows} for c in protected}
    lo = 2 if mode == "last" else 3
    for k in range(top - 1, lo - 1, -1):
        h = fr.p0_line(k)
        pid = fr.last(h)
        c = M.col_index[good_column(fr, pid, h)]
        piv = M.get(h, c)
        if not is_unit_times_one_minus_t(piv):
            raise ReductionError(f"pivot of {fr.label(h)} is {piv}")
        for g in state.active_rows:
            if g == h or not M.get(g, c):
                continue
            if fr.before(g, h):
                raise ReductionError(f"row {fr.label(g)} before {fr.label(h)} is nonzero on its column")
            state.row_op(g, h, div_exact(M.get(g, c), piv), f"remove {fr.label(h)}")
        state.removed_rows.add(h)
    for c in protected:
        now = {h: M.get(h, c) for h in M.rows if h not in state.removed_rows}
        if any(now[h] != snap[c][h] for h in now):
            raise ReductionError(f"protected column {c} changed")
    state.stage.add(mode)
    return state


@dataclass
class Families:
    removable: set[int]
    prime: set[int]
    zero: set[int]
    zero_prime: set[int]
    f03: set[int]
    f034: set[int]

    def get(self, name: str) -> set[int]:
        return {"0": self.zero, "03": self.f03, "0p": self.zero_prime, "034": self.f034,
                "prime": self.prime}[name]


def removable_set(frame: SharpFrame) -> Families:
    n1 = frame.n + 1
    m0 = frame.m0
    rem = set()
    by_m: dict[int, int] = {}
    for i, pid in enumerate(frame.anchors, start=1):
        ls = frame.anchor_lines[pid]
        m = len(ls)
        for a, h in enumerate(ls[1:], start=2):
            by_m[h] = m
            if gcd(m, n1) == 1 or gcd(m, m0) == 1 or a == m:
                rem.add(h)
    prime = set(frame.affine) - rem - {frame.sharp}
    mid = {frame.p0_line(k) for k in range(2, m0 - 1)}
    mid2 = {frame.p0_line(k) for k in range(3, m0 - 1)}
    zero = prime - mid
    zero_prime = prime - mid2
    f03 = {h for h in zero if by_m.get(h) != 3}
    f034 = {h for h in zero_prime if by_m.get(h) not in (3, 4)}
    return Families(rem, prime, zero, zero_prime, f03, f034)


def vertex_point(frame: SharpFrame, h: int, mode: str) -> int | None:
    """Point attached to the vertex of line h in the last or lastmin graphs.

    None when that point is missing or is an anchor (h then has no affine point off the sharp line).
    """
    pid = frame.min(h) if mode == "lastmin" and is_h2(frame, h) else frame.last(h)
    if pid is None or frame.points[pid].anchor:
        return None
    return pid


def is_h2(frame: SharpFrame, h: int) -> bool:
    if h == frame.sharp:
        return False
    k = frame.p0_index(h)
    if k is not None:
        return k == 2
    return frame.anchor_of(h)[1] == 2


def protected_columns(frame: SharpFrame, fam: Families, mode: str, M: BoundaryMatrix) -> list[int]:
    lines = fam.zero if mode == "last" else fam.zero_prime
    out = []
    for h in lines:
        pid = vertex_point(frame, h, mode)
        if pid is not None:
            out.append(M.col_index[good_column(frame, pid, h)])
    return out


def prepare(frame: SharpFrame, mode: str = "last", polar: Polar | None = None,
            families: Families | None = None, check: bool = True) -> ReductionState:
    st = ReductionState.start(frame, polar)
    drop_sharp_row(st)
    diagonalize_M1(st, check=check)
    eliminate_p0_rows(st, mode, families)
    return st


def graph_reduce(state: ReductionState, vertices: list[tuple[int, int]]) -> ReductionState:
    """Triangularize the vertex block along the hyperplane order, or record a blocking pair."""
    fr, M = state.frame, state.matrix
    vs = sorted(vertices, key=lambda v: fr.pos[v[0]])
    if len({v[0] for v in vs}) != len(vs) or len({v[1] for v in vs}) != len(vs):
        raise ValueError("vertices must have distinct lines and points")
    cols = [M.col_index[good_column(fr, pid, h)] for h, pid in vs]
    for i, (h, pid) in enumerate(vs):
        piv = M.get(h, cols[i])
        if not is_unit_times_one_minus_t(piv):
            raise ReductionError(f"pivot of {fr.label(h)} is {piv}")
        for j in range(i + 1, len(vs)):
            g, gpid = vs[j]
            e = M.get(g, cols[i])
            if not e:
                continue
            if M.get(h, cols[j]):
                sub = [[M.get(h, cols[i]), M.get(h, cols[j])], [M.get(g, cols[i]), M.get(g, cols[j])]]
                state.blocked = Blocked(g, h, gpid, pid, sub)
                return state
            state.row_op(g, h, div_exact(e, piv), "graph")
    state.stage.add("graph")
    return state


def column_choices(frame: SharpFrame, lines) -> list[list[tuple[int, int]]]:
    """Candidate vertices per line: the last point, and the min point for H_2 lines."""
    out = []
    for h in sorted(lines, key=frame.pos.get):
        opts = []
        for pid in (frame.last(h), frame.min(h) if is_h2(frame, h) else None):
            if pid is not None and not frame.points[pid].anchor and (h, pid) not in opts:
                opts.append((h, pid))
        out.append(opts)
    return out


def column_search(state: ReductionState, lines, limit: int = 4096) -> list[tuple[int, int]] | None:
    """First choice of last/min columns on which graph_reduce succeeds, or None."""
    choices = column_choices(state.frame, lines)
    if any(not c for c in choices):
        return None
    for k, combo in enumerate(product(*choices)):
        if k >= limit:
            return None
        if len({v[1] for v in combo}) != len(combo):
            continue
        st = state.clone()
        try:
            graph_reduce(st, list(combo))
        except ReductionError:
            continue
        if st.blocked is None:
            return list(combo)
    return None


def block_matrix(state: ReductionState, vertices: list[tuple[int, int]]) -> list[list[LaurentPoly]]:
    fr, M = state.frame, state.matrix
    vs = sorted(vertices, key=lambda v: fr.pos[v[0]])
    cols = [M.col_index[good_column(fr, pid, h)] for h, pid in vs]
    return [[M.get(h, c) for c in cols] for h, _ in vs]


def rank_mod_cyclotomic(matrix: list[list[LaurentPoly]], d: int) -> int:
    """Rank over Q[t]/Phi_d by Gaussian elimination with exact field arithmetic."""
    F = CycloField(d)
    rows = [[F.from_laurent(e) for e in r] for r in matrix]
    rows = [r for r in rows if any(any(x) for x in r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if any(rows[i][c])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][c])
        prow = [F.mul(inv, x) if any(x) else x for x in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if any(f):
                rows[i] = [F.sub(x, F.mul(f, y)) if any(y) else x for x, y in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


@dataclass
class BettiTable:
    n: int
    betas: dict[int, int]
    b1_fiber: int
    flags: list[str] = field(default_factory=list)

    def nonzero(self) -> dict[int, int]:
        return {d: b for d, b in self.betas.items() if b}


def milnor_betti(frame: SharpFrame, polar: Polar | None = None) -> BettiTable:
    M, _ = assemble(frame, polar)
    rows = M.dense()
    n = frame.n
    betas = {}
    flags = []
    for d in divisors(n + 1):
        if d == 1:
            continue
        b = n - 1 - rank_mod_cyclotomic(rows, d)
        if b < 0:
            raise ReductionError("negative Betti number")
        if b > 1:
            flags.append(f"beta_(1,{d}) = {b} exceeds 1")
        betas[d] = b
    b1 = n + sum(b * euler_phi(d) for d, b in betas.items())
    return BettiTable(n, betas, b1, flags)
