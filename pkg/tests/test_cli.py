import json
import subprocess
import sys

import pytest

from ellpar import cli

TAU = [0.3, 1.1]


def ok(command, payload, tol=None):
    resp, code = cli.run({"command": command, "payload": payload}, tol)
    assert code == cli.EXIT_OK, resp
    assert resp["ok"]
    return resp["result"]


def test_classify_bundle_roundtrip():
    res = ok("classify-bundle", {
        "tau": TAU,
        "triple": [[1, 5, 0, 1], [0, 1, 1, 7], [4, 5, 6, 7]],
    })
    assert res["label"] == "T1"
    assert [1, 5, 0, 1] in res["triple"]


def test_graded_and_tu_line_agree_with_library():
    cls = {"label": "T21", "point": [1, 5, 0, 1]}
    g = ok("graded", {"tau": TAU, "class": cls})
    assert len(g["triple"]) == 3
    line = ok("tu-line", {"tau": TAU, "class": cls})["line"]
    pts = ok("intersect-line", {"tau": TAU, "line": line})
    assert sorted(pts["multiplicities"]) == [1, 2]


def test_type_facts_and_subbundles():
    tf = ok("type-facts", {"label": "T22"})
    assert tf == {"endo_dim": 5, "admits_stable": False, "sigma_count": None}
    cfg = ok("subbundles", {"tau": TAU, "class": {"label": "T33", "point": [1, 3, 0, 1]}})
    assert cfg["rank1"][0]["dim"] == 2


def test_classify_monodromy():
    A = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    B = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    res = ok("classify-monodromy", {"tau": TAU, "A": A, "B": B})
    assert res["label"] == "T31"
    assert res["point"] == [0, 1, 0, 1]


def test_universal_family():
    res = ok("universal-family", {"tau": TAU, "b1": [0.7, 0.2], "b2": [1.3, -0.1]})
    assert res["class"]["label"] == "T1"
    assert "config" in res
    assert len(res["config"]["rank1"]) == 3


def test_weights_accept_fraction_strings():
    res = ok("weights", {"raw": ["1/5", "1/10", "-3/10"]})
    assert res["chamber"] == "Pplus"
    assert res["weights"] == [0.2, 0.1, -0.3]


def test_stability_and_locus():
    payload = {
        "tau": TAU,
        "class": {"label": "T1", "triple": [[1, 5, 0, 1], [0, 1, 1, 7], [4, 5, 6, 7]]},
        "flag": {"P": [1, 1, 0], "L": [1, -1, -1]},
    }
    res = ok("stability", dict(payload, weights=["1/5", "-1/10", "-1/10"]))
    assert res["verdict"] == "Unstable"
    assert res["witness"]["rank"] == 2
    res = ok("stability", dict(payload, weights=["1/5", "1/10", "-3/10"]))
    assert res["verdict"] == "Stable" and "witness" not in res
    assert ok("locus", payload)["locus"] == "SigmaPlus"


def test_normalize_flag_and_flip():
    payload = {
        "tau": TAU,
        "class": {"label": "T1", "triple": [[1, 5, 0, 1], [0, 1, 1, 7], [4, 5, 6, 7]]},
        "flag": {"P": [1, 1, 1], "L": [-2, 1, 1]},
        "chamber": "Pminus",
    }
    res = ok("normalize-flag", payload)
    assert res["coord"] == [2.0, 1.0]
    assert ok("flip", {"t": 1})["lambda"] == "inf"
    assert ok("flip", {"t": "inf"})["lambda"] == [1.0, 1.0]
    assert ok("flip", {"t": [2, 1]})["lambda"] == [2.0, 1.0]


def test_psi_plus_and_sigma_count():
    line = ok("tu-line", {
        "tau": TAU,
        "class": {"label": "T1", "triple": [[1, 5, 0, 1], [0, 1, 1, 7], [4, 5, 6, 7]]},
    })["line"]
    assert ok("sigma-count", {"tau": TAU, "line": line})["count"] == 3


def test_covering_abel_torelli():
    res = ok("covering", {"z1": "2", "z2": "2"})
    assert res == {"F2": 12.0, "F3": 16.0, "on_cusp": True}
    res = ok("abel", {"tau": TAU, "pair": [[1, 5, 0, 1], [4, 5, 0, 1]]})
    assert res["point"] == [0, 1, 0, 1]
    assert ok("torelli", {"tau1": TAU, "tau2": [1.3, 1.1]})["isomorphic"]
    assert not ok("torelli", {"tau1": [0, 1], "tau2": [0, 2]})["isomorphic"]


def test_aut_commands():
    els = ok("aut-elements", {"tau": TAU})["elements"]
    assert len(els) == 18
    g = {"shift": [0, 1, 0, 1], "dual": True}
    res = ok("aut-act", {"tau": TAU, "g": g,
                         "target": {"class": {"label": "T21", "point": [1, 5, 0, 1]}}})
    assert res["class"] == {"label": "T21", "point": [4, 5, 0, 1]}
    res = ok("aut-act", {"tau": TAU, "g": g, "target": "plane"})
    assert len(res["matrix"]) == 3
    res = ok("aut-act", {"tau": TAU, "g": g,
                         "target": {"class": {"label": "T21", "point": [1, 5, 0, 1]},
                                    "coord": [2, 1], "chamber": "Pminus"}})
    assert res["coord"] == [2.0, 1.0] and res["chamber"] == "Pminus"


def test_schema_errors_exit_3():
    for req in [
        {"payload": {}},
        {"command": "no-such-command", "payload": {}},
        {"command": "classify-bundle", "payload": {"tau": TAU}},
        {"command": "classify-bundle", "payload": {"tau": TAU, "triple": [[1, 5]]}},
        {"command": "flip", "payload": {"t": "nope"}},
    ]:
        resp, code = cli.run(req)
        assert code == cli.EXIT_SCHEMA
        assert not resp["ok"]


def test_domain_errors_exit_2():
    # T21 requires a non-torsion point
    resp, code = cli.run({"command": "graded",
                          "payload": {"tau": TAU,
                                      "class": {"label": "T31", "point": [1, 5, 0, 1]}}})
    assert code == cli.EXIT_DOMAIN and not resp["ok"]
    resp, code = cli.run({"command": "classify-monodromy",
                          "payload": {"tau": TAU,
                                      "A": [[2, 0, 0], [0, 1, 0], [0, 0, 1]],
                                      "B": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}})
    assert code == cli.EXIT_DOMAIN


def test_output_is_canonical_json():
    resp, _ = cli.run({"command": "type-facts", "payload": {"label": "T1"}})
    text = cli._dump(resp)
    assert text == cli._dump(json.loads(text))
    assert " " not in text


def run_cli(args, stdin_text):
    return subprocess.run([sys.executable, "-m", "ellpar.cli", *args],
                          input=stdin_text, capture_output=True, text=True)


def test_executable_stdin_roundtrip():
    proc = run_cli([], json.dumps({"command": "type-facts", "payload": {"label": "T31"}}))
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["ok"] and out["result"]["sigma_count"] == 1


def test_executable_exit_codes():
    proc = run_cli([], "not json")
    assert proc.returncode == 3
    proc = run_cli([], json.dumps({"command": "bogus", "payload": {}}))
    assert proc.returncode == 3
    proc = run_cli([], json.dumps({"command": "graded",
                                   "payload": {"tau": TAU,
                                               "class": {"label": "T31",
                                                         "point": [1, 5, 0, 1]}}}))
    assert proc.returncode == 2


def test_batch_file_mode(tmp_path):
    reqs = [{"command": "type-facts", "payload": {"label": "T1"}},
            {"command": "type-facts", "payload": {"label": "T99"}}]
    f = tmp_path / "batch.json"
    f.write_text(json.dumps(reqs))
    proc = run_cli(["--file", str(f)], "")
    assert proc.returncode == 3  # worst exit code of the batch
    out = json.loads(proc.stdout)
    assert out[0]["ok"] and not out[1]["ok"]


def test_tol_env_var(monkeypatch):
    req = json.dumps({"command": "type-facts", "payload": {"label": "T1"}})
    proc = subprocess.run([sys.executable, "-m", "ellpar.cli"], input=req,
                          capture_output=True, text=True,
                          env={"TOL": "1e-9", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["diagnostics"] == ["tol=1e-09"]
    proc = subprocess.run([sys.executable, "-m", "ellpar.cli"], input=req,
                          capture_output=True, text=True,
                          env={"TOL": "abc", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 3
