import io as stdio
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neron_align import io
from neron_align.cli import main
from neron_align.errors import SchemaError


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    return code, json.loads(out) if out.strip() else None, err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


# -- check-align -----------------------------------------------------------------


def test_c1_aligned():
    code, rep, _ = run_json("check-align", "@c1")
    assert code == 0
    assert rep["verdicts"] == {"aligned": True, "strictly_aligned": True}


def test_c2_not_aligned_with_witness():
    code, rep, _ = run_json("check-align", "@c2")
    assert code == 3
    assert rep["verdicts"]["aligned"] is False
    assert rep["witnesses"]["aligned"]["edges"] == ["e0", "e1"]


def test_uv_two_gon_regularisation():
    code, rep, _ = run_json("check-align", "@uv_2gon", "--oracle")
    assert code == 0
    assert rep["verdicts"] == {"aligned": True, "strictly_aligned": False, "oracle": rep["verdicts"]["oracle"]}
    labels = sorted(json.dumps(e["label"]) for e in rep["witnesses"]["regularisation"]["edges"])
    assert labels == ['{"u": 1}', '{"u": 1}', '{"v": 1}', '{"v": 1}']
    assert all(v["agree"] for v in rep["verdicts"]["oracle"].values())


def test_human_output():
    code, out, _ = run("check-align", "@c2")
    assert code == 3
    assert "aligned: no" in out


# -- component-group ----------------------------------------------------------------


def test_sec8_family():
    code, rep, _ = run_json("component-group", "@sec8", "--trait", "@sec8_trait", "--family", "y", "5", "--oracle")
    assert code == 0
    assert rep["verdicts"]["family_orders"] == [2, 3, 4, 5, 6]


def test_tree_is_trivial():
    code, rep, _ = run_json("component-group", "@tree", "--trait", "@st1", "--oracle")
    assert code == 0
    assert rep["verdicts"]["order"] == 1 and rep["verdicts"]["invariant_factors"] == []


def test_c1_section_order():
    code, rep, _ = run_json("component-group", "@c1", "--trait", "@t1", "--section", "v0", "v1", "--oracle")
    assert code == 0
    assert rep["verdicts"]["section_order"] == 2


def test_zero_order_edges_are_contracted_with_notice(tmp_path):
    trait = write(tmp_path, "trait.json", {"s": 0, "t": 1})
    code, out, _ = run("component-group", "@c2", "--trait", trait)
    assert code == 0
    assert "contract" in out.lower()


def test_trait_missing_generator(tmp_path):
    trait = write(tmp_path, "trait.json", {"s": 1})
    code, _, err = run("component-group", "@c2", "--trait", trait)
    assert code == 2 and "t" in err


# -- decompose ------------------------------------------------------------------


def test_decompose_c1():
    code, rep, _ = run_json("decompose", "@c1", "--trait", "@t1", "--labelling", "@c1_m01", "--oracle")
    assert code == 0
    assert rep["verdicts"]["reconstructs"] is True
    assert rep["witnesses"]["descriptors"] == [{"H": ["v1"], "a": {"t": 1}, "coeff": 1}]


def test_decompose_zero_labelling():
    code, rep, _ = run_json("decompose", "@c1", "--trait", "@t1", "--labelling", "@c1_zero")
    assert code == 0
    assert rep["witnesses"]["descriptors"] == []


def test_decompose_not_aligned():
    code, rep, _ = run_json("decompose", "@c2", "--trait", "@st1", "--labelling", "@c1_zero")
    assert code == 3
    assert rep["verdicts"]["reason"] == "not_aligned"
    assert rep["witnesses"]["obstruction"]["identity_holds"] is False


def test_decompose_not_t_cartier(tmp_path):
    lab = write(tmp_path, "m.json", {"v0": 0, "v1": 1})
    trait = write(tmp_path, "t.json", {"t": 2})
    code, rep, _ = run_json("decompose", "@c1", "--trait", trait, "--labelling", lab)
    assert code == 3
    assert rep["verdicts"]["reason"] == "not_T_cartier"


def test_decompose_no_zero_vertex(tmp_path):
    lab = write(tmp_path, "m.json", {"v0": 1, "v1": 2})
    code, rep, _ = run_json("decompose", "@c1", "--trait", "@t1", "--labelling", lab)
    assert code == 3


# -- newton ---------------------------------------------------------------------


def test_classify_monomial():
    code, rep, _ = run_json("newton", "@tT2", "classify")
    assert code == 0
    c = rep["witnesses"]["classification"]
    assert (c["branch"], c["n"], c["m"], c["s"]) == ("monomial", 2, 0, [[{"t": 1}, "1"]])


def test_classify_not_a_unit():
    code, rep, _ = run_json("newton", "@x_plus_y", "classify")
    assert code == 3
    assert rep["witnesses"]["classification"]["certificate"]["gradient"] == "-1/2"


def test_cinv_geometric():
    code, rep, _ = run_json("newton", "@one_minus_tT", "cinv", "0")
    assert code == 0 and rep["verdicts"]["identity_holds"]
    coeffs = rep["witnesses"]["crude_inverse"]["series"]["coeffs"]
    assert coeffs["3"] == [[{"t": 3}, "1"]]


def test_cinv_no_corner():
    code, rep, _ = run_json("newton", "@no_corner", "cinv", "0")
    assert code == 3 and rep["verdicts"]["corner"] is False


def test_polygon():
    code, rep, _ = run_json("newton", "@x_plus_y", "polygon")
    assert code == 0


def test_window_env_override(monkeypatch):
    monkeypatch.setenv("NERON_ALIGN_WINDOW", "4")
    _, rep, _ = run_json("newton", "@one_minus_tT", "cinv", "0")
    assert max(int(k) for k in rep["witnesses"]["crude_inverse"]["series"]["coeffs"]) == 4


def test_not_in_A(tmp_path):
    f = write(tmp_path, "f.json", {"r": [[{"t": 1}, "1"]], "coeffs": {"-2": [[{"t": 1}, "1"]], "0": [[{}, "1"]]}})
    code, _, _ = run_json("newton", f, "classify")
    assert code == 3


# -- errors and exit codes ---------------------------------------------------------


@pytest.mark.parametrize(
    "doc,ptr",
    [
        ({"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "a"], "label": {"s": 0}}]}, "/edges/0/label/s"),
        ({"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "b"], "label": {"s": 1}}]}, "/edges/0/ends/1"),
        ({"vertices": ["a"], "edges": [{"id": "e", "ends": ["a"], "label": {"s": 1}}]}, "/edges/0/ends"),
        ({"vertices": ["a"]}, ""),
        ({"vertices": ["a"], "edges": [], "extra": 1}, ""),
        (
            {"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "a"], "label": {"s": 1}},
                                          {"id": "e", "ends": ["a", "a"], "label": {"s": 1}}]},
            "/edges/1/id",
        ),
    ],
)
def test_schema_errors_carry_pointers(tmp_path, doc, ptr):
    path = write(tmp_path, "g.json", doc)
    code, _, err = run("check-align", path)
    assert code == 2
    if ptr:
        assert err.startswith(f"input error: {ptr}: ")
    with pytest.raises(SchemaError) as info:
        io.parse_graph(doc)
    assert info.value.pointer == ptr


def test_unreadable_inputs(tmp_path):
    assert run("check-align", str(tmp_path / "missing.json"))[0] == 2
    assert run("check-align", write(tmp_path, "bad.json", "{not json"))[0] == 2
    assert run("check-align", "@no_such_entry")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2


def test_series_schema_errors(tmp_path):
    bad = [
        {"r": [[{}, "x"]], "coeffs": {}},
        {"r": [[{"t": 1}, "1"]], "coeffs": {"a": []}},
        {"r": [], "coeffs": {"0": [[{}, "1"]]}},
        {"r": [[{"t": 1}, "1"]], "coeffs": {"5": [[{}, "1"]]}, "window": [0, 2]},
        {"r": [[{"t": 1}, "1"]], "coeffs": {}, "kind": "truncated"},
    ]
    for doc in bad:
        assert run("newton", write(tmp_path, "s.json", doc), "polygon")[0] == 2


def test_pointer_escaping():
    assert io.pointer(["a/b", "c~d", 3]) == "/a~1b/c~0d/3"
    assert io.pointer([]) == ""


def test_flags_before_or_after_subcommand():
    a = run_json("check-align", "@c1")[1]
    out, err = stdio.StringIO(), stdio.StringIO()
    main(["--json", "check-align", "@c1"], stdout=out, stderr=err)
    b = json.loads(out.getvalue())
    a.pop("timing"), b.pop("timing")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["check-align", "@c1"],
        ["check-align", "@uv_2gon"],
        ["component-group", "@sec8", "--trait", "@sec8_trait", "--family", "y", "5"],
        ["decompose", "@triangle", "--trait", "@t1", "--labelling", "@triangle_m"],
        ["newton", "@x_plus_t", "classify"],
        ["newton", "@one_minus_tT", "cinv", "0"],
    ],
)
def test_gallery_determinism(argv):
    outs = []
    for _ in range(2):
        _, rep, _ = run_json(*argv)
        rep.pop("timing")
        outs.append(json.dumps(rep, sort_keys=True, indent=2))
    assert outs[0] == outs[1]


_json = st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=5),
    lambda kids: st.lists(kids, max_size=3) | st.dictionaries(st.text(max_size=4), kids, max_size=3),
    max_leaves=10,
)


@settings(max_examples=100)
@given(st.text(max_size=8), st.text(max_size=8), st.dictionaries(st.text(max_size=4), _json, max_size=3),
       st.dictionaries(st.text(max_size=4), _json, max_size=3))
def test_report_round_trip(command, digest, verdicts, witnesses):
    rep = io.Report(command, digest, verdicts, witnesses, {"seconds": 0.5})
    again = io.Report.from_json(json.loads(rep.dumps()))
    assert again == rep
    assert again.dumps() == rep.dumps()


def test_digest_ignores_key_order():
    assert io.digest({"a": 1, "b": 2}) == io.digest({"b": 2, "a": 1})
    assert io.digest({"a": 1}) != io.digest({"a": 2})


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "neron_align", "check-align", "@c2"], capture_output=True, text=True)
    assert proc.returncode == 3
    assert "aligned: no" in proc.stdout
