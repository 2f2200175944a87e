"""Critical cells and boundary matrices of the minimal complex of a sharp frame."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arrangement import SharpFrame
from .laurent import ONE, T, ZERO, LaurentPoly, divides, t_pow
from .polar import Polar

ONE_MINUS_T = ONE - T


@dataclass(frozen=True)
class Cell2:
    """Critical 2-cell [C_j^P < P]."""

    pid: int
    j: int


@dataclass
class BoundaryMatrix:
    frame: SharpFrame
    rows: list[int]  # lines in hyperplane order
    cols: list[Cell2]
    entries: dict[int, dict[int, LaurentPoly]] = field(default_factory=dict)  # row -> col -> entry

    def __post_init__(self):
        self.col_index = {c: i for i, c in enumerate(self.cols)}
        for h in self.rows:
            self.entries.setdefault(h, {})

    def get(self, h: int, c: int) -> LaurentPoly:
        return self.entries[h].get(c, ZERO)

    def set(self, h: int, c: int, v: LaurentPoly) -> None:
        if v.is_zero():
            self.entries[h].pop(c, None)
        else:
            self.entries[h][c] = v

    def col(self, pid: int, j: int) -> int:
        return self.col_index[Cell2(pid, j)]

    def block(self, pid: int) -> list[int]:
        m = self.frame.points[pid].m
        return [self.col(pid, j) for j in range(1, m)]

    def copy(self) -> "BoundaryMatrix":
        out = BoundaryMatrix(self.frame, list(self.rows), list(self.cols))
        out.entries = {h: dict(r) for h, r in self.entries.items()}
        return out

    def dense(self, rows: list[int] | None = None) -> list[list[LaurentPoly]]:
        rows = self.rows if rows is None else rows
        return [[self.get(h, c) for c in range(len(self.cols))] for h in rows]

    def column_sum(self, c: int) -> LaurentPoly:
        s = ZERO
        for h in self.rows:
            s = s + self.get(h, c)
        return s

    def to_json(self) -> str:
        fr = self.frame
        return json.dumps({
            "rows": [fr.label(h) for h in self.rows],
            "cols": [[fr.point_label(c.pid), c.j] for c in self.cols],
            "entries": [[str(self.get(h, c)) for c in range(len(self.cols))] for h in self.rows],
        }, indent=1)


def boundary2_entry(frame: SharpFrame, polar: Polar, h: int, cell: Cell2) -> LaurentPoly:
    """Entry of d2 in row h and column [C_j^P < P], all local-system variables set to t."""
    p = frame.points[cell.pid]
    j, m = cell.j, p.m
    data = polar.data(cell.pid)
    U = data.upper
    A = sum(1 for g in U if frame.before(g, h))
    if h in p.lines:
        a = p.pos(h)
        C = a - 1
        B = a - 1 - j if a >= j + 1 else (a - 1) + (m - j)
        return t_pow(A) * (t_pow(B) - t_pow(C))
    if h in data.upper_cone:
        lower = p.lines[:j]
        upper = p.lines[j:]
        L = sum(1 for g in lower if frame.before(g, h))
        Ub = sum(1 for g in upper if frame.before(g, h))
        return t_pow(A) * (ONE - t_pow(L)) * (t_pow(Ub) - t_pow(m - j))
    return ZERO


def assemble(frame: SharpFrame, polar: Polar | None = None) -> tuple[BoundaryMatrix, list[LaurentPoly]]:
    """Full d2 (rows = all affine lines incl. the sharp line) and d1."""
    polar = polar if polar is not None else Polar(frame)
    cols = [Cell2(p.pid, j) for p in frame.points for j in range(1, p.m)]
    M = BoundaryMatrix(frame, list(frame.order), cols)
    for ci, cell in enumerate(cols):
        p = frame.points[cell.pid]
        cand = set(p.lines) | polar.data(cell.pid).upper_cone
        for h in cand:
            M.set(h, ci, boundary2_entry(frame, polar, h, cell))
    d1 = [ONE_MINUS_T for _ in frame.order]
    return M, d1


def good_column(frame: SharpFrame, pid: int, h: int) -> Cell2:
    """c_H^P: last column if h = H_1^P, first column otherwise."""
    p = frame.points[pid]
    if h not in p.lines:
        raise ValueError("line does not pass through the point")
    return Cell2(pid, p.m - 1 if h == p.lines[0] else 1)


def is_unit_times_one_minus_t(e: LaurentPoly) -> bool:
    return e.associate(ONE_MINUS_T)


def chain_violations(M: BoundaryMatrix) -> list[str]:
    bad = []
    for c in range(len(M.cols)):
        if not M.column_sum(c).is_zero():
            bad.append(f"column {c} does not sum to zero")
        for h in M.rows:
            e = M.get(h, c)
            if e and not divides(ONE_MINUS_T, e):
                bad.append(f"entry ({h},{c}) not divisible by 1-t")
    return bad
