"""Command line interface, ArrFile format and renderers."""

from __future__ import annotations

import json
import re
import sys
from fractions import Fraction

import click

from .arrangement import (AffLine, Arrangement, ProjLine, SharpFrame, all_frames, build_frame,
                          build_lattice, find_sharp_pairs)
from .certify import certify as run_certify
from .complex import assemble
from .fixtures import CATALOG, fixture
from .graphs import DEFAULT_FAMILY, TooCyclic, build, find_obstruction_cycles
from .reduction import milnor_betti, prepare

HEADER = "arr v1"
_RAT = re.compile(r"[+-]?\d+(?:/[+-]?\d+)?")


class ArrFileError(ValueError):
    def __init__(self, lineno: int, col: int, msg: str):
        super().__init__(f"line {lineno}, column {col}: {msg}")
        self.lineno, self.col = lineno, col


def _rational(tok: str, lineno: int, col: int) -> Fraction:
    if not _RAT.fullmatch(tok):
        raise ArrFileError(lineno, col, f"not a rational: {tok!r}")
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise ArrFileError(lineno, col, "zero denominator")
    return Fraction(tok)


def parse(text: str) -> Arrangement:
    """ArrFile text to an Arrangement; affine lines read a x + b y = c, projective a x + b y + c z = 0."""
    header = mode = None
    names, coeffs = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if not toks:
            continue
        word, col = toks[0]
        if header is None:
            if body.strip() != HEADER:
                raise ArrFileError(lineno, col, f"expected header {HEADER!r}")
            header = HEADER
        elif word == "mode":
            if mode is not None:
                raise ArrFileError(lineno, col, "mode given twice")
            if len(toks) != 2 or toks[1][0] not in ("affine", "projective"):
                raise ArrFileError(lineno, col, "expected 'mode affine' or 'mode projective'")
            mode = toks[1][0]
        elif word == "line":
            if mode is None:
                raise ArrFileError(lineno, col, "line before mode")
            if len(toks) != 5:
                raise ArrFileError(lineno, col, "expected 'line <name> <a> <b> <c>'")
            name = toks[1][0]
            if name in names or (mode == "affine" and name == "inf"):
                raise ArrFileError(lineno, toks[1][1], f"duplicate line name {name!r}")
            abc = tuple(_rational(t, lineno, c) for t, c in toks[2:])
            if not abc[0] and not abc[1] and (mode == "affine" or not abc[2]):
                raise ArrFileError(lineno, toks[2][1], "degenerate line")
            key = AffLine.make(*abc) if mode == "affine" else ProjLine.make(*abc)
            if key in coeffs:
                raise ArrFileError(lineno, col, f"line {name!r} repeats an earlier line")
            names.append(name)
            coeffs.append(key)
        else:
            raise ArrFileError(lineno, col, f"unknown directive {word!r}")
    if header is None:
        raise ArrFileError(1, 1, "empty file")
    if mode is None:
        raise ArrFileError(1, 1, "missing mode")
    if mode == "affine":
        return Arrangement.affine(coeffs, names)
    return Arrangement.projective(coeffs, names)


def dump(arr: Arrangement) -> str:
    out = [HEADER, f"mode {arr.mode}"]
    if arr.mode == "affine":
        for name, pl in zip(arr.names[1:], arr.lines[1:]):
            l = AffLine.from_proj(pl.vec)
            out.append(f"line {name} {l.a} {l.b} {l.c}")
    else:
        for name, pl in zip(arr.names, arr.lines):
            out.append(f"line {name} {pl.a} {pl.b} {pl.c}")
    return "\n".join(out) + "\n"


def load(source: str) -> Arrangement:
    if source.startswith("catalog:"):
        name = source.split(":", 1)[1]
        if name not in CATALOG:
            raise click.ClickException(f"unknown fixture {name!r}")
        return fixture(name).arr
    try:
        text = sys.stdin.read() if source == "-" else open(source).read()
        return parse(text)
    except (OSError, ValueError) as e:
        raise click.ClickException(f"{source}: {e}")


def select_frame(arr: Arrangement, spec: str | None) -> SharpFrame:
    """'A,B:1.i' picks a frame of the pair (A, B); '1.i' uses the first sharp pair."""
    pairs = find_sharp_pairs(arr)
    if not pairs:
        raise click.ClickException("not a sharp arrangement")
    spec = spec or "1.i"
    pair = pairs[0]
    if ":" in spec:
        names, spec = spec.rsplit(":", 1)
        try:
            a, b = (arr.index(s.strip()) for s in names.split(","))
        except ValueError:
            raise click.BadParameter(f"unknown pair {names!r}", param_hint="--frame")
        pair = (min(a, b), max(a, b))
        if pair not in pairs:
            raise click.BadParameter(f"{names} is not a sharp pair", param_hint="--frame")
    m = re.fullmatch(r"([12])\.(i|ii)", spec)
    if not m:
        raise click.BadParameter("frame id must be 1.i, 1.ii, 2.i or 2.ii", param_hint="--frame")
    return build_frame(arr, pair, int(m.group(1)), 1 if m.group(2) == "i" else -1)


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=1, default=str))


def frame_summary(fr: SharpFrame) -> dict:
    names = fr.arr.names
    return {
        "frame_id": fr.frame_id,
        "pair": [names[fr.pair[0]], names[fr.pair[1]]],
        "at_infinity": names[fr.at_infinity],
        "sharp": names[fr.sharp],
        "m(P0)": fr.m0,
        "anchor_multiplicities": [fr.anchor_m(i) for i in range(1, len(fr.anchors) + 1)],
        "labels": {fr.label(h): names[h] for h in fr.order},
    }


_input = click.argument("source", metavar="FILE")
_frame = click.option("--frame", "frame_spec", default=None,
                      help="A,B:ID or ID with ID in 1.i 1.ii 2.i 2.ii; default 1.i of the first sharp pair.")


@click.group()
def main():
    """Monodromy certificates for sharp real line arrangements."""


@main.command()
@_input
def lattice(source):
    """Intersection points and multiplicities."""
    arr = load(source)
    out = []
    for p in build_lattice(arr):
        where = [str(x) for x in p.proj] if p.at_infinity else [str(x) for x in p.xy]
        out.append({"lines": [arr.names[i] for i in p.incident], "multiplicity": p.multiplicity,
                    "at_infinity": p.at_infinity, "point": where})
    _emit({"mode": arr.mode, "n": arr.n, "points": out})


@main.command()
@_input
def frames(source):
    """Sharp pairs and their four frames."""
    arr = load(source)
    _emit({"sharp_pairs": [[arr.names[i], arr.names[j]] for i, j in find_sharp_pairs(arr)],
           "frames": [frame_summary(fr) for fr in all_frames(arr)]})


@main.command()
@_input
@_frame
@click.option("--reduced", is_flag=True, help="Apply the structured reductions first.")
@click.option("--mode", type=click.Choice(["last", "lastmin"]), default=None,
              help="Reduction mode, only with --reduced.")
def boundary(source, frame_spec, reduced, mode):
    """Boundary matrix dump."""
    if mode and not reduced:
        raise click.UsageError("--mode needs --reduced")
    fr = select_frame(load(source), frame_spec)
    if not reduced:
        M, _ = assemble(fr)
        click.echo(M.to_json())
        return
    st = prepare(fr, mode or "last")
    M = st.matrix
    rows = st.active_rows
    _emit({"frame": frame_summary(fr), "rows": [fr.label(h) for h in rows],
           "cols": [[fr.point_label(c.pid), c.j] for c in M.cols],
           "entries": [[str(M.get(h, c)) for c in range(len(M.cols))] for h in rows],
           "reduction": st.to_json()})


@main.command()
@_input
@_frame
def homology(source, frame_spec):
    """Exact Betti numbers of the Milnor fiber eigenspaces."""
    fr = select_frame(load(source), frame_spec)
    b = milnor_betti(fr)
    _emit({"n": b.n, "betti": {str(d): v for d, v in sorted(b.betas.items())},
           "b1_fiber": b.b1_fiber, "flags": b.flags})


@main.command()
@_input
@_frame
@click.option("--variant", type=click.Choice(["last", "lastmin", "reduced", "full"]), default="last")
@click.option("--family", type=click.Choice(["0", "03", "034", "0p"]), default=None)
@click.option("--membership", type=click.Choice(["reduced", "full"]), default="reduced",
              help="Edge rule: S u Û_Max u N (reduced) or S u Û (full).")
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False), default=None)
def graphs(source, frame_spec, variant, family, membership, dot_path):
    """Homology graph with obstruction cycles."""
    if family and variant not in DEFAULT_FAMILY:
        raise click.UsageError("--family applies to the last and lastmin variants only")
    fr = select_frame(load(source), frame_spec)
    g = build(variant, fr, family=family, membership=membership)
    out = g.to_json()
    try:
        cycles = find_obstruction_cycles(g)
        out["cycles"] = [c.to_json(fr) for c in cycles]
        out["cycle_stats"] = g.stats
    except TooCyclic as e:
        cycles = []
        out["cycles"] = None
        out["error"] = str(e)
    if dot_path:
        with open(dot_path, "w") as f:
            f.write(g.to_dot(cycles))
    _emit(out)


@main.command()
@_input
@click.option("--gamma/--no-gamma", default=True, help="Use the double point graph strengthening.")
@click.option("--search/--no-search", default=True, help="Try mixed last/min column choices.")
def certify(source, gamma, search):
    """Full report; exit status 0 iff the certificate agrees with the rank oracle."""
    arr = load(source)
    if not find_sharp_pairs(arr):
        raise click.ClickException("not a sharp arrangement")
    rep = run_certify(arr, gamma=gamma, search=search)
    _emit(rep.to_json())
    sys.exit(0 if rep.consistent else 1)


@main.command()
@_input
@_frame
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), required=True)
def plot(source, frame_spec, svg_path):
    """Static SVG of a frame: lines, anchors, last and min markers."""
    fr = select_frame(load(source), frame_spec)
    with open(svg_path, "w") as f:
        f.write(render_svg(fr))


@main.command()
@click.argument("name", required=False)
def catalog(name):
    """Print a built-in fixture as an ArrFile, or list the names."""
    if name is None:
        for k in CATALOG:
            click.echo(k)
        return
    if name not in CATALOG:
        raise click.BadParameter(f"unknown fixture {name!r}; choose from {', '.join(CATALOG)}")
    click.echo(dump(fixture(name).arr), nl=False)


def _clip(l: AffLine, box) -> list[tuple[float, float]]:
    x0, x1, y0, y1 = box
    if l.vertical:
        return [(float(l.xint), y0), (float(l.xint), y1)]
    pts = []
    for x in (x0, x1):
        y = float(l.at_x(Fraction(x)))
        if y0 <= y <= y1:
            pts.append((x, y))
    if l.slope:
        for y in (y0, y1):
            x = float((Fraction(l.c) - Fraction(l.b) * Fraction(y)) / l.a)
            if x0 < x < x1:
                pts.append((x, y))
    return pts[:2]


def render_svg(fr: SharpFrame, size: int = 600) -> str:
    xs = [float(p.xy[0]) for p in fr.points]
    ys = [float(p.xy[1]) for p in fr.points]
    pad = 1.0
    box = (min(xs) - pad, max(1.0, max(xs)) + pad, min(ys) - pad, max(ys) + pad)
    sx = size / (box[1] - box[0])
    sy = size / (box[3] - box[2])

    def px(x, y):
        return (x - box[0]) * sx, size - (y - box[2]) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">', '<rect width="100%" height="100%" fill="white"/>']
    for h in fr.order:
        seg = _clip(fr.affine[h], box)
        if len(seg) < 2:
            continue
        (a, b), (c, d) = px(*seg[0]), px(*seg[1])
        width = 2 if h == fr.sharp else 1
        out.append(f'<line x1="{a:.2f}" y1="{b:.2f}" x2="{c:.2f}" y2="{d:.2f}" stroke="black" '
                   f'stroke-width="{width}"><title>{fr.label(h)} {fr.arr.names[h]}</title></line>')
    for p in fr.points:
        a, b = px(float(p.xy[0]), float(p.xy[1]))
        color = "red" if p.anchor else "gray"
        out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{3 + p.m}" fill="{color}">'
                   f'<title>{fr.point_label(p.pid)} m={p.m}</title></circle>')
    marks = {}
    for h in fr.order:
        if h == fr.sharp:
            continue
        marks.setdefault(fr.last(h), []).append(f"last {fr.label(h)}")
        mn = fr.min(h)
        if mn is not None:
            marks.setdefault(mn, []).append(f"min {fr.label(h)}")
    for pid, labs in marks.items():
        a, b = px(float(fr.points[pid].xy[0]), float(fr.points[pid].xy[1]))
        out.append(f'<rect x="{a - 2:.2f}" y="{b - 2:.2f}" width="4" height="4" fill="blue">'
                   f'<title>{"; ".join(labs)}</title></rect>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    main()
