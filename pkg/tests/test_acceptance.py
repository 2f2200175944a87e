"""Acceptance suite: one test per criterion, summarized at the end of the run."""

import time

import pytest

from sharpmilnor.certify import certify, cond_last, quick_checks
from sharpmilnor.complex import ONE_MINUS_T, assemble, chain_violations, good_column
from sharpmilnor.graphs import build, double_point_graph, find_obstruction_cycles
from sharpmilnor.laurent import ONE, T, one_minus_t_pow, t_pow
from sharpmilnor.polar import Polar
from sharpmilnor.reduction import (ReductionState, check_block_postconditions, check_M1,
                                   column_search, diagonalize_M1, drop_sharp_row, graph_reduce,
                                   milnor_betti, prepare, removable_set)


def report(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.mark.criterion(1, "closed-form entries at the points of the top parallel")
def test_criterion_1_closed_forms(corpus_frames):
    checked = failed = 0
    for fr in corpus_frames:
        if fr.m0 < 3:
            continue
        M, _ = assemble(fr)
        top = fr.p0_line(fr.m0 - 1)
        for pid in fr.line_points[top]:
            m = fr.points[pid].m
            for h in fr.points[pid].lines:
                c = M.col_index[good_column(fr, pid, h)]
                if h == top:
                    want = {top: T - ONE}
                    want.update({fr.p0_line(k): t_pow(fr.m0 - k - 2) * ONE_MINUS_T * ONE_MINUS_T
                                 for k in range(2, fr.m0 - 1)})
                else:
                    want = {top: t_pow(m - 1) - ONE}
                    want.update({fr.p0_line(k): t_pow(fr.m0 - k - 2) * ONE_MINUS_T * one_minus_t_pow(m - 1)
                                 for k in range(2, fr.m0 - 1)})
                for r, w in want.items():
                    checked += 1
                    failed += not M.get(r, c).associate(w)
    report(1, len(corpus_frames) >= 20 and checked > 0 and failed == 0,
           f"{len(corpus_frames)} frames, {checked} entries, {failed} mismatches")


@pytest.mark.criterion(2, "chain condition on every assembled boundary")
def test_criterion_2_chain_condition(corpus_frames, catalog):
    frames = corpus_frames + [fx.frame() for fx in catalog.values()]
    bad = sum(len(chain_violations(assemble(fr)[0])) for fr in frames)
    report(2, bad == 0, f"{len(frames)} frames, {bad} violations")


@pytest.mark.criterion(3, "anchor block postconditions after diagonalize_M1")
def test_criterion_3_block_postconditions(corpus_frames):
    bad = []
    for fr in corpus_frames:
        st = drop_sharp_row(ReductionState.start(fr))
        before = st.matrix.copy()
        diagonalize_M1(st, check=False)
        bad += check_M1(st) + check_block_postconditions(st, before)
    report(3, not bad, f"{len(corpus_frames)} frames, {len(bad)} violations")


@pytest.mark.criterion(4, "rank oracle on generic lines and braid6")
def test_criterion_4_oracle_classics(catalog):
    t0 = time.perf_counter()
    g = milnor_betti(catalog["generic3"].frame())
    b = milnor_betti(catalog["braid6"].frame())
    dt = time.perf_counter() - t0
    ok = (all(v == 0 for v in g.betas.values()) and g.b1_fiber == 2
          and b.betas == {2: 0, 3: 1, 6: 0} and b.b1_fiber == 7 and dt < 5)
    report(4, ok, f"generic3 {g.betas} b1={g.b1_fiber}; braid6 {b.betas} b1={b.b1_fiber}; {dt:.2f}s")


@pytest.mark.criterion(5, "example0: empty certificate by the forest rule")
def test_criterion_5_example0(catalog):
    fx = catalog["example0"]
    fr = fx.frame()
    g = build("last", fr)
    rep = certify(fx.arr)
    first = next(c for p, c in rep.frames if c.frame_id == fr.frame_id and p == fr.pair)
    ok = (rep.combined == frozenset() and "last-forest" in first.rules_fired
          and find_obstruction_cycles(g) == [] and not double_point_graph(fx.arr).connected
          and rep.betti.nonzero() == {})
    report(5, ok, f"combined {sorted(rep.combined)}, rules {first.rules_fired}")


@pytest.mark.criterion(6, "example4: obstruction 3-cycle, 1.ii condition, empty certificate")
def test_criterion_6_example4(catalog):
    fx = catalog["example4"]
    fr1, fr2 = fx.frame(), fx.frame(-1)
    g = build("lastmin", fr1, membership="full")
    cycles = [set(c.labels(fr1)) for c in find_obstruction_cycles(g)]
    rep = certify(fx.arr)
    ok = (fr1.frame_id == "1.i" and fr2.frame_id == "1.ii"
          and {"H3^P0", "H3^P1", "H2^P0"} in cycles
          and cond_last(fr2, "03") and cond_last(fr2, "0")
          and 3 not in quick_checks(fr1)[0]
          and rep.combined == frozenset() and rep.betti.nonzero() == {})
    report(6, ok, f"cycles {cycles}, combined {sorted(rep.combined)}")


@pytest.mark.xfail(strict=True, reason="with the reduced edge rule the 1.i lastmin graph is acyclic; see ledger")
def test_example4_cycle_with_reduced_edges(catalog):
    fr = catalog["example4"].frame()
    cycles = [set(c.labels(fr)) for c in find_obstruction_cycles(build("lastmin", fr))]
    assert {"H3^P0", "H3^P1", "H2^P0"} in cycles


@pytest.mark.xfail(strict=True, reason="the 1.i lastmin block triangularizes; see ledger")
def test_example4_reduction_blocks(catalog):
    fr = catalog["example4"].frame()
    g = build("lastmin", fr)
    st = graph_reduce(prepare(fr, "lastmin"), g.vertices)
    assert st.blocked is not None


@pytest.mark.criterion(7, "simplicial18: three-row block reduces, empty certificate")
def test_criterion_7_simplicial18(catalog):
    t0 = time.perf_counter()
    fx = catalog["simplicial18"]
    fr = fx.frame()
    fam = removable_set(fr)
    labels = {fr.label(h) for h in fam.zero}
    cols = column_search(prepare(fr, "last", families=fam), fam.zero)
    reduced = cols is not None and graph_reduce(prepare(fr, "last", families=fam), cols).blocked is None
    rep = certify(fx.arr)
    dt = time.perf_counter() - t0
    ok = (labels == {"H2^P0", "H2^P1", "H2^P7"} and reduced and len(cols) == 3
          and rep.combined == frozenset() and rep.betti.nonzero() == {} and dt < 60)
    report(7, ok, f"A_0 {sorted(labels)}, columns {len(cols or [])}, {dt:.1f}s")


@pytest.mark.criterion(8, "soundness sweep over corpus and catalog")
def test_criterion_8_soundness(corpus_arrs, catalog):
    arrs = corpus_arrs + [fx.arr for fx in catalog.values()]
    bad = quick_bad = 0
    for arr in arrs:
        rep = certify(arr)
        bad += not rep.consistent
        nonzero = rep.betti.nonzero()
        for _, cert in rep.frames:
            if quick_checks_fire(cert) and nonzero:
                quick_bad += 1
    report(8, bad == 0 and quick_bad == 0,
           f"{len(arrs)} arrangements, {bad} inconsistent, {quick_bad} quick-check contradictions")


def quick_checks_fire(cert):
    return bool({"coprime-anchors", "single-anchor"} & set(cert.rules_fired)) or not cert.baseline


@pytest.mark.criterion(9, "a blocked reduction always has an obstruction cycle")
def test_criterion_9_blocking_cycles(corpus_frames):
    blocks = missing = 0
    for fr in corpus_frames:
        pol = Polar(fr)
        fam = removable_set(fr)
        for variant in ("last", "lastmin"):
            if variant == "lastmin" and fr.m0 <= 3:
                continue
            g = build(variant, fr, pol, families=fam)
            if g.orphans or len({v[1] for v in g.vertices}) != len(g.vertices):
                continue
            st = graph_reduce(prepare(fr, variant, pol, fam), g.vertices)
            if st.blocked is not None:
                blocks += 1
                missing += not find_obstruction_cycles(g)
    report(9, blocks > 0 and missing == 0, f"{blocks} blocked reductions, {missing} without a cycle")
