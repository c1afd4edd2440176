"""The ten acceptance checks, each timed against its budget.

Every test prints one ``[criterion k] PASS|FAIL`` line straight to the terminal
(bypassing capture) and then asserts both correctness and runtime.
"""

import random
import time


from generators import (
    classifier_cases,
    random_aligned_graph,
    random_cornered_series,
    random_generator_map,
    random_graph,
    random_seed,
    random_split,
    random_t_cartier,
    random_trait,
    small_corpus,
)
from neron_align.cli import main
from neron_align.divisors import (
    ThicknessGraph,
    TraitSpec,
    decompose_cartier,
    extend_vertex_labelling,
    induced_labelling,
    is_pre_achievable,
    is_T_cartier,
)
from neron_align.errors import NeronAlignError
from neron_align.graph import LabelledGraph, is_aligned, is_strictly_aligned, pullback, regularise
from neron_align.neron import blowup_family_orders, component_group, component_group_of, subdivide
from neron_align.newton import (
    classify_generic_unit,
    crude_inverse,
    crude_inverse_slopes,
    fitted_slopes,
    torsion_slopes,
    verify_inverse,
)
from neron_align.oracles import brute_invariant_factors


def report(capsys, k, title, ok, seconds, bound, detail=""):
    verdict = "PASS" if ok and seconds < bound else "FAIL"
    line = f"[criterion {k}] {verdict}  {title}: {seconds:.2f}s (bound {bound}s){'  ' + detail if detail else ''}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert seconds < bound, line


def cli(*argv):
    import io
    import json

    out = io.StringIO()
    code = main([*argv, "--json"], stdout=out, stderr=io.StringIO())
    return code, json.loads(out.getvalue())


def two_gon(a, b):
    return LabelledGraph.build(["v0", "v1"], [("e0", ("v0", "v1"), a), ("e1", ("v0", "v1"), b)])


def test_criterion_1_gallery(capsys):
    start = time.perf_counter()
    c1, r1 = cli("check-align", "@c1")
    c2, r2 = cli("check-align", "@c2")
    ok = (c1, r1["verdicts"]["aligned"], c2, r2["verdicts"]["aligned"]) == (0, True, 3, False)
    ok = ok and r2["witnesses"]["aligned"]["edges"] == ["e0", "e1"]
    report(capsys, 1, "C1 aligned, C2 not aligned", ok, time.perf_counter() - start, 1)


def test_criterion_2_strict(capsys):
    start = time.perf_counter()
    code, rep = cli("check-align", "@uv_2gon")
    reg = rep["witnesses"]["regularisation"]
    labels = sorted(tuple(sorted(e["label"].items())) for e in reg["edges"])
    verts = reg["vertices"]
    # a 4-gon: four vertices, each of degree 2, labels u,u,v,v
    deg = {v: 0 for v in verts}
    for e in reg["edges"]:
        for v in e["ends"]:
            deg[v] += 1
    ok = (
        code == 0
        and rep["verdicts"] == {"aligned": True, "strictly_aligned": False}
        and labels == [(("u", 1),), (("u", 1),), (("v", 1),), (("v", 1),)]
        and len(verts) == 4
        and set(deg.values()) == {2}
    )
    report(capsys, 2, "uv 2-gon aligned, not strictly; regularisation is a u,u,v,v 4-gon", ok,
           time.perf_counter() - start, 1)


def _orders(rng, G):
    out = {}
    for e in G.edges:
        seq = [g for g, k in e.label.items for _ in range(k)]
        rng.shuffle(seq)
        out[e.id] = seq
    return out


def test_criterion_3_regularisation_invariance(capsys):
    rng = random.Random(3)
    start = time.perf_counter()
    bad = 0
    graphs = 500
    for _ in range(graphs):
        G = random_aligned_graph(rng) if rng.random() < 0.5 else random_graph(rng)
        verdicts = {bool(is_aligned(regularise(G, _orders(rng, G)))) for _ in range(10)}
        verdicts.add(bool(is_strictly_aligned(G)))
        bad += len(verdicts) != 1
    report(capsys, 3, f"{graphs} graphs x 10 orderings", bad == 0, time.perf_counter() - start, 60,
           f"{bad} order-dependent")


def test_criterion_4_pullback(capsys):
    rng = random.Random(4)
    start = time.perf_counter()
    bad = 0
    for _ in range(500):
        G = random_aligned_graph(rng)
        assert is_aligned(G)
        bad += not is_aligned(pullback(G, random_generator_map(rng)))
    report(capsys, 4, "500 pullbacks of aligned graphs", bad == 0, time.perf_counter() - start, 30,
           f"{bad} unaligned")


def test_criterion_5_decomposition(capsys):
    rng = random.Random(5)
    start = time.perf_counter()
    bad = 0
    for _ in range(200):
        G = random_aligned_graph(rng, max_vertices=6, max_edges=8, connected=True)
        T = random_trait(rng)
        TG = ThicknessGraph.from_trait(G, T)
        m = random_t_cartier(rng, G, T)
        good = induced_labelling(extend_vertex_labelling(G, T, m), T, G.vertices) == m
        parts = decompose_cartier(TG, m)
        good = good and {v: sum(p.labelling[v] for p in parts) for v in G.vertices} == m
        good = good and all(is_T_cartier(TG, p.labelling) and is_pre_achievable(G, p.labelling, p.B)
                            for p in parts)
        bad += not good
    report(capsys, 5, "200 extend / decompose round trips", bad == 0, time.perf_counter() - start, 60,
           f"{bad} failures")


def test_criterion_6_component_groups(capsys):
    start = time.perf_counter()
    corpus = small_corpus()
    bad = 0
    for G, T in corpus:
        S = subdivide(ThicknessGraph.from_trait(G, T))
        bad += component_group_of(S).invariant_factors != brute_invariant_factors(S)
    for n in range(1, 9):
        G = two_gon({"x": 1}, {"y": n})
        T = TraitSpec({"x": 1, "y": 1})
        S = subdivide(ThicknessGraph.from_trait(G, T))
        want = (n + 1,)
        bad += not (component_group(G, T).invariant_factors == brute_invariant_factors(S) == want)
    report(capsys, 6, f"SNF vs sandpile on {len(corpus)} corpus graphs + 8 two-gons", bad == 0,
           time.perf_counter() - start, 120, f"{bad} mismatches")


def test_criterion_7_blowup(capsys):
    start = time.perf_counter()
    orders = blowup_family_orders(two_gon({"x": 1}, {"y": 1}), "x", "y", 10)
    ok = orders == list(range(2, 12))
    report(capsys, 7, "section orders for i = 1..10", ok, time.perf_counter() - start, 10, str(orders))


def test_criterion_8_crude_inverse(capsys):
    rng = random.Random(8)
    start = time.perf_counter()
    bad_identity = bad_slopes = 0
    for _ in range(200):
        f, N = random_cornered_series(rng)
        ci = crude_inverse(f, N)
        ok, checked = verify_inverse(f, ci.series)
        bad_identity += not (ok and checked > 0)
        declared = crude_inverse_slopes(f, N, "t")
        span = ci.series.window[1] + N
        doubled = crude_inverse(f, N, (-N - 2 * span, -N + 2 * span))
        bad_identity += not verify_inverse(f, doubled.series)[0]
        bad_slopes += fitted_slopes(doubled.series, "t") != declared
    ok = bad_identity == 0 and bad_slopes == 0
    report(capsys, 8, "200 crude inverses", ok, time.perf_counter() - start, 60,
           f"{bad_identity} identity failures, {bad_slopes} slope mismatches")


def test_criterion_9_torsion(capsys):
    rng = random.Random(9)
    start = time.perf_counter()
    bad = 0
    for k in range(100):
        f, ss = random_split(rng, 1 + k % 3)
        try:
            res = torsion_slopes(f, random_seed(rng, f.width()), "t")
        except NeronAlignError:
            bad += 1
            continue
        bad += not (res.matches_f and res.ordered and set(res.f_slopes) == {-s for s in ss})
    report(capsys, 9, "100 split f", bad == 0, time.perf_counter() - start, 60, f"{bad} failures")


def _certified(res, branch):
    if res.branch != branch:
        return False
    if branch == "monomial":
        return (res.reconstructs and res.u.coeff(0).is_unit_in_R() and verify_inverse(res.u, res.inverse)[0]
                and all(v.holds for v in res.inverse_in_A.values()))
    return res.verified


def test_criterion_10_classifier(capsys):
    start = time.perf_counter()
    cases = classifier_cases()
    wrong = [name for name, a, branch in cases if not _certified(classify_generic_unit(a), branch)]
    ok = len(cases) == 20 and not wrong
    report(capsys, 10, "20 curated classifier inputs", ok, time.perf_counter() - start, 30,
           f"wrong: {wrong}" if wrong else "")
