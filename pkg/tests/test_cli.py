import json
from fractions import Fraction as Q

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from corpus import random_sharp
from sharpmilnor.arrangement import build_lattice
from sharpmilnor.cli import ArrFileError, dump, main, parse
from sharpmilnor.fixtures import CATALOG, fixture, signature_of

T1_FILE = """arr v1
mode affine   # x = -1, x = 0, y = x, y = 2x
line A 1 0 -1
line S 1 0 0
line D1 -1 1 0
line D2 -2 1 0
"""


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args, input=None):
    return runner.invoke(main, list(args), input=input, catch_exceptions=False)


def test_parse_t1():
    arr = parse(T1_FILE)
    assert arr.mode == "affine" and arr.names == ["inf", "A", "S", "D1", "D2"]
    assert signature_of(arr) == fixture("t1").signature


def test_parse_rational_line():
    arr = parse("arr v1\nmode affine\nline L1 1 0 -1\nline L2 0 1/2 3/4\n")
    assert len(arr.names) == 3
    assert any(p.xy == (Q(-1), Q(3, 2)) for p in build_lattice(arr) if not p.at_infinity)


@pytest.mark.parametrize("text,lineno,msg", [
    ("arr v1\nmode affine\nline L1 1/0 0 0\n", 3, "zero denominator"),
    ("arr v1\nmode affine\npoint P 0 0\n", 3, "unknown directive"),
    ("arr v2\n", 1, "expected header"),
    ("arr v1\nline L 1 0 0\n", 2, "line before mode"),
    ("arr v1\nmode affine\nline L 1 0 0\nline L 0 1 0\n", 4, "duplicate"),
    ("arr v1\nmode affine\nline L 1 0 0\nline M 2 0 0\n", 4, "repeats"),
    ("arr v1\nmode affine\nline L 0 0 1\n", 3, "degenerate"),
    ("arr v1\nmode affine\nline L 1 x 0\n", 3, "not a rational"),
])
def test_parse_errors(text, lineno, msg):
    with pytest.raises(ArrFileError) as e:
        parse(text)
    assert e.value.lineno == lineno and msg in str(e.value)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_round_trip(name):
    arr = fixture(name).arr
    back = parse(dump(arr))
    assert back.names == arr.names and back.mode == arr.mode
    assert signature_of(back) == signature_of(arr)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_round_trip_random(seed):
    """dump then parse gives back the same lines."""
    arr = random_sharp(seed)
    back = parse(dump(arr))
    assert [l.vec for l in back.lines] == [l.vec for l in arr.lines]


def test_catalog_command(runner):
    res = run(runner, "catalog")
    assert res.output.split() == list(CATALOG)
    res = run(runner, "catalog", "t1")
    assert parse(res.output).names == fixture("t1").arr.names


def test_lattice_from_stdin(runner):
    res = run(runner, "lattice", "-", input=T1_FILE)
    data = json.loads(res.output)
    assert data["n"] == 4
    assert sorted(p["multiplicity"] for p in data["points"]) == [2, 2, 2, 2, 3, 3]


def test_lattice_file_error(runner, tmp_path):
    p = tmp_path / "bad.arr"
    p.write_text("arr v1\nmode affine\nline L 1/0 0 0\n")
    res = runner.invoke(main, ["lattice", str(p)])
    assert res.exit_code != 0 and "line 3, column" in res.output


def test_frames_command(runner):
    data = json.loads(run(runner, "frames", "catalog:t1").output)
    assert ["inf", "S"] in data["sharp_pairs"]
    assert len(data["frames"]) == 4 * len(data["sharp_pairs"])


def test_homology_command(runner):
    data = json.loads(run(runner, "homology", "catalog:braid6").output)
    assert data["betti"] == {"2": 0, "3": 1, "6": 0} and data["b1_fiber"] == 7


def test_boundary_commands(runner):
    data = json.loads(run(runner, "boundary", "catalog:t1").output)
    assert len(data["rows"]) == 4 and len(data["cols"]) == 4
    data = json.loads(run(runner, "boundary", "catalog:example4", "--reduced", "--mode", "lastmin").output)
    assert "H2^P0" in data["rows"]
    res = runner.invoke(main, ["boundary", "catalog:t1", "--mode", "last"])
    assert res.exit_code == 2


def test_graphs_full_membership_dot(runner, tmp_path):
    dot = tmp_path / "g.dot"
    res = run(runner, "graphs", "catalog:example4", "--variant", "lastmin", "--membership", "full",
              "--dot", str(dot))
    data = json.loads(res.output)
    assert ["H3^P1", "H3^P0", "H2^P0"] in [c["vertices"] for c in data["cycles"]]
    assert "fillcolor=orange" in dot.read_text()


def test_graphs_family_usage_error(runner):
    res = runner.invoke(main, ["graphs", "catalog:t1", "--variant", "full", "--family", "0"])
    assert res.exit_code == 2


def test_frame_selection(runner):
    data = json.loads(run(runner, "graphs", "catalog:example4", "--frame", "inf,S:1.ii").output)
    assert data["cycles"] == []
    res = runner.invoke(main, ["graphs", "catalog:example4", "--frame", "3.i"])
    assert res.exit_code == 2


def test_certify_exit_codes(runner):
    res = runner.invoke(main, ["certify", "catalog:braid6"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["combined_allowed"] == [3] and data["consistent"]
    res = runner.invoke(main, ["certify", "-"],
                        input="arr v1\nmode projective\nline a 1 0 0\nline b 0 1 0\nline c 0 0 1\n"
                              "line d 1 1 1\nline e 1 2 3\nline f 2 1 5\n")
    assert res.exit_code == 1 and "not a sharp arrangement" in res.output


def test_unknown_catalog_source(runner):
    res = runner.invoke(main, ["lattice", "catalog:nope"])
    assert res.exit_code == 1 and "unknown fixture" in res.output


def test_plot(runner, tmp_path):
    svg = tmp_path / "f.svg"
    run(runner, "plot", "catalog:figure1like", "--svg", str(svg))
    text = svg.read_text()
    assert text.startswith("<svg") and "</svg>" in text
