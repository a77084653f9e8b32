"""CLI surface: reference resolution, report formats, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from twistcech.cli import main
from twistcech.errors import InputError
from twistcech.fixtures import gamma_nerve, group
from twistcech.serialize import (
    cocycle_from_dict,
    cocycle_to_dict,
    group_from_dict,
    nerve_from_dict,
    twisted_data_from_dict,
)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_group_classes_s3(capsys):
    code, out = run_cli(["group", "classes", "S3"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["checks"][0]["sizes"] == [1, 2, 3]


def test_group_aut_c4(capsys):
    code, out = run_cli(["group", "aut", "C4"], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["aut_order"] == 2


def test_group_info_bad_table(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    table = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    table[1][2] = 1
    bad.write_text(json.dumps({"order": 3, "mul": table}))
    code, out = run_cli(["group", "info", str(bad)], capsys)
    assert code == 2
    payload = json.loads(out)
    assert payload["checks"][0]["status"] == "fail"
    assert payload["checks"][0]["witness"]


def test_extensions_classify(capsys):
    code, out = run_cli(["extensions", "classify", "C2", "C4", "--action", "inversion"], capsys)
    assert code == 0
    rows = json.loads(out)["checks"][0]["classes"]
    assert [r["product_isomorphic_to"] for r in rows] == ["D4", "Q8"]
    code, out = run_cli(["extensions", "classify", "C2", "C2"], capsys)
    rows = json.loads(out)["checks"][0]["classes"]
    assert sorted(r["product_isomorphic_to"] for r in rows) == ["C2xC2", "C4"]


def test_h1_counts(capsys):
    code, out = run_cli(["h1", "X_HEX", "X_HEX/C4,inversion,trivial", "--reduced"], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["count"] == 2
    code, out = run_cli(["h1", "Y_TRI", "circle/S3"], capsys)
    assert json.loads(out)["checks"][0]["count"] == 3


def test_h1_empty_is_pass(capsys):
    code, out = run_cli(["h1", "Y_TRI_TRIVC2", "X_HEX/C4,inversion,square"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["checks"][0]["count"] == 0
    assert payload["checks"][0]["status"] == "pass"


def test_verify_only_subset(capsys):
    code, out = run_cli(
        ["verify", "les", "--only", "X_HEX/C4,inversion,square", "--format", "tsv"], capsys
    )
    assert code == 0
    assert "fail" not in out


def test_verify_budget_exit(capsys):
    code, out = run_cli(["verify", "les", "--only", "X_HEX/Q8,q8_swap,square", "--budget-enum", "2"], capsys)
    assert code == 3


def test_verify_fault_injection_exit(capsys):
    code, out = run_cli(
        ["verify", "les", "--only", "X_HEX/S3,trivial,trivial", "--fault", "flip-gauge"], capsys
    )
    assert code == 1
    assert "fail" in out


def test_verify_unknown_instance(capsys):
    code, out = run_cli(["verify", "les", "--only", "nope"], capsys)
    assert code == 2


def test_reports_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for target in (out1, out2):
        code = main(["verify", "all", "--out", str(target), "--seed", "11"])
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_console_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "twistcech.cli", "group", "info", "Q8"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"][0]["order"] == 8


def test_serialize_roundtrips(tmp_path):
    g = group("Q8")
    payload = {"label": "Q8", "order": 8, "mul": [list(r) for r in g.mul]}
    loaded = group_from_dict(payload)
    assert loaded.mul == g.mul

    nerve_payload = {"vertices": 3, "simplices": [[0, 1], [1, 2], [0, 2]]}
    n = nerve_from_dict(nerve_payload)
    assert n.edges == ((0, 1), (0, 2), (1, 2))

    data_payload = {
        "gamma": "C2",
        "g": "C4",
        "theta": [[0, 1, 2, 3], [0, 3, 2, 1]],
        "c": [[0, 0], [0, 2]],
    }
    data = twisted_data_from_dict(data_payload)
    assert data.c(1, 1) == 2

    from twistcech.cech import h1_twisted, system_from_data

    system = system_from_data(gamma_nerve("X_HEX"), data)
    x = h1_twisted(system).representative(1)
    blob = cocycle_to_dict(x)
    back = cocycle_from_dict(gamma_nerve("X_HEX"), data, blob)
    assert back.a == x.a and back.phi == x.phi


def test_h1_from_json_files(tmp_path, capsys):
    data_file = tmp_path / "data.json"
    data_file.write_text(
        json.dumps(
            {
                "gamma": "C2",
                "g": "C4",
                "theta": [[0, 1, 2, 3], [0, 3, 2, 1]],
                "c": [[0, 0], [0, 2]],
            }
        )
    )
    space_file = tmp_path / "space.json"
    space_file.write_text(
        json.dumps(
            {
                "vertices": 6,
                "simplices": [[i, (i + 1) % 6] for i in range(6)],
                "gamma": "C2",
                "act": [list(range(6)), [(v + 3) % 6 for v in range(6)]],
            }
        )
    )
    code, out = run_cli(["h1", str(space_file), str(data_file)], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["count"] == 2


def test_serialize_rejects_bad_cocycle():
    data_payload = {
        "gamma": "C2",
        "g": "C4",
        "theta": [[0, 1, 2, 3], [0, 3, 2, 1]],
        "c": [[0, 0], [0, 2]],
    }
    data = twisted_data_from_dict(data_payload)
    with pytest.raises(InputError):
        cocycle_from_dict(gamma_nerve("X_HEX"), data, {"a": {"0,1": 1}, "phi": {}})
