import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from projpairs import catalog, cli, io
from projpairs.dep import solve_weak_prescribed, wreath_obstruction_dep
from projpairs.groups import FinitePair, subgroup_closure
from projpairs.homs import HomConstraints, first_hom

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def call(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_solve_first_and_all(capsys):
    code, one, _ = call(capsys, "solve", INPUTS / "dep_sign.json")
    assert code == 0 and one["status"] == "ok" and len(one["payload"]) == 1
    code, every, _ = call(capsys, "solve", INPUTS / "dep_sign.json", "--all")
    assert code == 0 and len(every["payload"]) >= 1
    assert one["payload"][0] in every["payload"]
    assert all(s["verified"] for s in every["payload"])


def test_solve_identity(capsys):
    code, out, _ = call(capsys, "solve", INPUTS / "dep_identity.json", "--all")
    assert code == 0
    labels = [s["theta"]["labels"] for s in out["payload"]]
    assert ["(0 1)", "(0 1 2)"] in labels  # the identity map
    assert len(labels) == len({tuple(x) for x in labels})


def test_prescribed_and_fiber_agree(capsys):
    dep = INPUTS / "dep_sign.json"
    eta = INPUTS / "eta_sign.json"
    _, a, _ = call(capsys, "solve", dep, "--prescribe", eta)
    _, b, _ = call(capsys, "solve", dep, "--prescribe", eta, "--via-fiber")
    assert a["status"] == b["status"] == "ok"
    assert a["payload"][0]["eta"] == b["payload"][0]["eta"]
    assert a["payload"][0]["eta"]["gen_images"] == [[1], []]


def test_via_fiber_needs_eta(capsys):
    code, out, _ = call(capsys, "solve", INPUTS / "dep_sign.json", "--via-fiber")
    assert code == 2 and out["status"] == "invalid_input"
    assert out["payload"]["path"] == "--via-fiber"


def test_dominate(capsys):
    code, out, _ = call(capsys, "dominate", INPUTS / "dep_sign.json",
                        "--theta", INPUTS / "theta_sign.json", "--eta", INPUTS / "eta_sign.json")
    assert code == 0
    p = out["payload"]
    assert p["is_split"] is True
    assert p["canonical_solution"] is not None
    assert p["dominating"]["format_version"] == 1


def test_split_and_complement(capsys):
    code, out, _ = call(capsys, "split", INPUTS / "pair_s3.json", "--N", "[]")
    assert code == 0 and out["payload"]["order"] == 3
    code, out, _ = call(capsys, "complement", INPUTS / "pair_s3.json")
    assert code == 0 and out["payload"]["order"] == 3
    code, out, _ = call(capsys, "complement", INPUTS / "pair_c4.json")
    assert code == 0 and out["status"] == "unsolvable" and out["payload"] == "none"
    code, out, _ = call(capsys, "complement", INPUTS / "pair_v4.json")
    assert out["status"] == "ok" and out["payload"]["order"] == 2


def test_split_rejects_outside_n(capsys):
    code, out, _ = call(capsys, "split", INPUTS / "pair_s3.json", "--N", "[[2]]")
    assert code == 2 and out["payload"]["path"] == "--N"
    code, out, _ = call(capsys, "split", INPUTS / "pair_s3.json", "--N", "[[")
    assert code == 2 and "invalid JSON" in out["payload"]["error"]


def test_h1_levels(capsys):
    action = INPUTS / "action_c4_c2.json"
    for level in ("cocycle", "class"):
        code, out, _ = call(capsys, "h1", action, "--subgroup", "[[1, 1]]", "--level", level)
        assert code == 0
        assert out["payload"]["level"] == level
    code, full, _ = call(capsys, "h1", action, "--subgroup", "[[1]]")
    assert full["payload"]["surjective"] is True


def test_h1_trivial_action_false(tmp_path, capsys):
    p = write(tmp_path, "a.json", {"format_version": 1, "actor": "C4", "space": "C2", "act": "trivial"})
    code, out, _ = call(capsys, "h1", p, "--subgroup", "[[1, 1]]")
    assert code == 0
    assert out["payload"]["surjective"] is False
    assert out["payload"]["witness"] == [0, 1]


def test_wreath_and_sylow(capsys):
    code, out, _ = call(capsys, "wreath-test", INPUTS / "pair_c4.json", "--A", "C2", "--G", "C2")
    assert code == 0 and out["status"] == "unsolvable" and out["payload"]["agree"]
    for p in (2, 3, 5):
        code, out, _ = call(capsys, "sylow-test", "A5", "--p", p)
        assert code == 0 and out["payload"]["obstructed"] is True
    code, out, _ = call(capsys, "sylow-test", "S4", "--p", 2)
    assert code == 2


def test_sample_and_forced_cap(tmp_path, capsys, monkeypatch):
    code, out, _ = call(capsys, "--threads", 1, "sample", INPUTS / "experiment_calibration.json")
    assert code == 0
    assert out["payload"]["exact_fraction"] == "26/27"
    assert "elapsed_ms" not in out["payload"]
    _, again, _ = call(capsys, "--threads", 4, "sample", INPUTS / "experiment_calibration.json")
    assert again == out
    from projpairs import sampler
    monkeypatch.setattr(sampler, "EXHAUSTIVE_LIMIT", 10)
    code, out, _ = call(capsys, "sample", INPUTS / "experiment_calibration.json", "--exhaustive", "force")
    assert code == 3 and out["status"] == "cap_exceeded"


def test_order_cap(capsys):
    code, out, _ = call(capsys, "--cap", 10, "complement", INPUTS / "pair_s3.json")
    assert code == 0
    code, out, _ = call(capsys, "--cap", 10, "sylow-test", "A5", "--p", 5)
    assert code == 3 and out["status"] == "cap_exceeded"


@pytest.mark.parametrize("kind,extra,member", [
    ("all", [], True),
    ("solvable", [], True),
    ("p_group", ["--p", "2"], False),
    ("p_group", ["--p", "3"], False),
    ("composition", ["--factors", "C2,C3"], True),
    ("composition", ["--factors", "C2"], False),
])
def test_formation(capsys, kind, extra, member):
    code, out, _ = call(capsys, "formation", "S3", "--kind", kind, *extra)
    assert code == 0 and out["payload"]["member"] is member
    assert out["payload"]["composition_factor_orders"] == [2, 3]


def test_formation_missing_p(capsys):
    code, out, _ = call(capsys, "formation", "S3", "--kind", "p_group")
    assert code == 2 and out["payload"]["path"] == "--p"


def test_validate_kinds(capsys):
    expect = {"dep_sign.json": "dep", "action_c4_c2.json": "action", "pair_v4.json": "pair",
              "group_klein.json": "group"}
    for name, kind in expect.items():
        code, out, _ = call(capsys, "validate", INPUTS / name)
        assert code == 0 and out["payload"]["kind"] == kind
    _, out, _ = call(capsys, "validate", INPUTS / "group_klein.json")
    assert out["payload"]["order"] == 4 and out["payload"]["abelian"]


def test_validate_bad_dep(tmp_path, capsys):
    data = json.loads((INPUTS / "dep_sign.json").read_text())
    data["nu"] = {"gen_images": [[], []]}  # no longer hits B
    p = write(tmp_path, "bad.json", data)
    code, out, _ = call(capsys, "validate", p)
    assert code == 2 and out["status"] == "invalid_input"
    assert out["payload"]["diagnostics"]
    code, out, _ = call(capsys, "solve", p)
    assert code == 2 and out["payload"]["diagnostics"]


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d["beta"].update(gen_images=[[7], []]), "$.beta.gen_images[0]"),
    (lambda d: d["beta"].update(gen_images=[[1]]), "$.beta.gen_images"),
    (lambda d: d.update(format_version=2), "$.format_version"),
    (lambda d: d.update(H="S9"), "$.H"),
    (lambda d: d.pop("nu"), "$.nu"),
])
def test_malformed_dep_reports_path(tmp_path, capsys, mutate, path):
    data = json.loads((INPUTS / "dep_sign.json").read_text())
    mutate(data)
    p = write(tmp_path, "bad.json", data)
    code, out, _ = call(capsys, "solve", p)
    assert code == 2 and out["status"] == "invalid_input"
    assert out["payload"]["path"].startswith(path)


def test_bad_action_permutation(tmp_path, capsys):
    p = write(tmp_path, "a.json", {"format_version": 1, "actor": "C4", "space": "C2",
                                   "act": {"gen_images": [[0, 0]]}})
    code, out, _ = call(capsys, "validate", p)
    assert code == 2 and out["payload"]["path"] == "$.act.gen_images[0]"


def test_missing_file(tmp_path, capsys):
    code, out, _ = call(capsys, "solve", tmp_path / "nope.json")
    assert code == 2 and out["status"] == "invalid_input"


def test_relative_group_reference(tmp_path, capsys):
    shutil.copy(INPUTS / "group_klein.json", tmp_path / "klein.json")
    p = write(tmp_path, "pair.json", {"format_version": 1, "ambient": "klein.json",
                                      "distinguished": [[1]]})
    code, out, _ = call(capsys, "complement", p)
    assert code == 0 and out["payload"]["order"] == 2


def test_output_file_and_timing(tmp_path, capsys):
    target = tmp_path / "out.json"
    code = cli.main(["--output", str(target), "--timing", "complement", str(INPUTS / "pair_s3.json")])
    assert code == 0 and capsys.readouterr().out == ""
    data = json.loads(target.read_text())
    assert isinstance(data["elapsed_ms"], int)


def test_byte_identical_runs(capsys):
    argvs = [
        ["solve", INPUTS / "dep_sign.json", "--all"],
        ["dominate", INPUTS / "dep_sign.json", "--theta", INPUTS / "theta_sign.json",
         "--eta", INPUTS / "eta_sign.json"],
        ["h1", INPUTS / "action_c4_c2.json", "--subgroup", "[[1, 1]]"],
        ["sample", INPUTS / "experiment_calibration.json"],
    ]
    for argv in argvs:
        texts = {call(capsys, *argv)[2] for _ in range(3)}
        assert len(texts) == 1


def test_console_entry_point():
    exe = shutil.which("projpairs")
    cmd = [exe] if exe else [sys.executable, "-m", "projpairs.cli"]
    a = subprocess.run(cmd + ["complement", str(INPUTS / "pair_s3.json")], capture_output=True, text=True)
    b = subprocess.run(cmd + ["complement", str(INPUTS / "pair_s3.json")], capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert json.loads(a.stdout)["status"] == "ok"


def test_wreath_dep_file_round_trip(tmp_path, capsys):
    L = catalog.get("C4")
    pair = FinitePair(L, subgroup_closure(L, [2]))
    C2 = catalog.get("C2")
    eta = first_hom(pair.distinguished.group, C2, surjective_only=True)
    nu = first_hom(L, C2, HomConstraints(image_in=(pair.distinguished, C2.trivial_subgroup)),
                   surjective_only=True)
    dep, eta1 = wreath_obstruction_dep(pair, eta, nu)
    assert solve_weak_prescribed(dep, eta1) is None
    dep_file = write(tmp_path, "wreath.json", io.dep_to_json(dep))
    dd = io.load_dep(dep_file)
    assert dd.dep.H.order == 8 and dd.dep.G.order == 2
    ys = [int(dep.G.array[eta1(int(dep.Gm.local_index[x]))]) for x in dd.pair.elements]
    eta_file = write(tmp_path, "eta.json", {"format_version": 1, "eta": {"gen_images": ys}})
    for extra in ([], ["--via-fiber"]):
        code, out, _ = call(capsys, "solve", dep_file, "--prescribe", eta_file, *extra)
        assert code == 0 and out["status"] == "unsolvable"
    code, out, _ = call(capsys, "solve", dep_file)
    assert out["status"] == "ok"


def test_group_json_round_trip(tmp_path):
    for name in ("S3", "D4", "Q8", "A4"):
        g = catalog.get(name)
        p = write(tmp_path, f"{name}.json", io.group_to_json(g))
        h = io.Loader().group(str(p), "$")
        assert (h.mul == g.mul).all()
        assert io.listed_generators(h) == io.listed_generators(g)


def test_word_round_trip():
    for name in ("S3", "D4", "Q8", "C6"):
        g = catalog.get(name)
        for x in range(g.order):
            assert io.element(g, io.word(g, x), "$") == x


def test_dumps_deterministic():
    assert io.dumps({"b": 1, "a": [2, 3]}) == '{\n  "a": [\n    2,\n    3\n  ],\n  "b": 1\n}\n'
