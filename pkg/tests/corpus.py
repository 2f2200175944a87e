"""Random sharp arrangements built directly in a sharp chart."""

import random
from fractions import Fraction

from sharpmilnor.arrangement import AffLine, Arrangement


def random_sharp(seed: int, max_lines: int = 12) -> Arrangement:
    """Affine arrangement with the sharp line x = 0 and small integer data.

    Slopes never decrease from one anchor to the next, so every crossing of
    lines through different anchors has x <= 0.
    """
    rng = random.Random(seed)
    while True:
        n_par = rng.randint(0, 3)
        n_anch = rng.randint(1, 4)
        ys = sorted(rng.sample(range(-3, 5), n_anch))
        budget = max_lines - 1 - n_par
        groups = []
        pool = sorted(rng.choice([-2, -1, 0, 1, 2, Fraction(1, 2), Fraction(-1, 2), 3])
                      for _ in range(rng.randint(n_anch + 1, max(n_anch + 1, budget))))
        # split the sorted slopes into consecutive runs of distinct values
        cur, last = [], None
        for s in pool:
            if s in cur or (len(groups) < n_anch - 1 and len(cur) >= 1 and rng.random() < 0.4):
                groups.append(cur)
                cur = []
            if s not in cur:
                cur.append(s)
        groups.append(cur)
        groups = [g for g in groups if g][:n_anch]
        lines = [AffLine.make(1, 0, 0)]
        for y, g in zip(ys, groups):
            for s in g:
                lines.append(AffLine.make(-s, 1, y))
        for x in rng.sample([-1, -2, -3, Fraction(-1, 2), Fraction(-3, 2)], n_par):
            lines.append(AffLine.make(1, 0, x))
        lines = list(dict.fromkeys(lines))
        if 3 <= len(lines) + 1 <= max_lines and any(not l.vertical for l in lines):
            return Arrangement.affine(lines, [f"L{i}" for i in range(len(lines))])


def corpus(count: int = 24, max_lines: int = 12) -> list[Arrangement]:
    return [random_sharp(s, max_lines) for s in range(count)]
