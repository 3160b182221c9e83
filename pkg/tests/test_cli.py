import csv
import io
import json
import math
import subprocess
import sys

import pytest

from syzkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    data = json.loads(out)
    assert data["schema"] == 1
    return code, data


def test_classify(capsys):
    code, data = run_json(capsys, "classify", "--rays", "0,1;1,1;2,1")
    assert code == 0
    assert data["results"]["m"] == 2 and data["results"]["nu"] == [0, 1]


def test_classify_not_cy(capsys):
    code, data = run_json(capsys, "classify", "--rays", "1,0;0,1;-1,-1")
    assert code == 2
    assert data["results"]["reason"] == "NotCY" and data["pass"] is False


@pytest.mark.parametrize("rays", ["", "1,a", "1,2,3"])
def test_classify_malformed(capsys, rays):
    assert run(capsys, "classify", "--rays", rays)[0] == 1


def test_classify_non_primitive_is_input_error(capsys):
    assert run(capsys, "classify", "--rays", "0,2;1,1")[0] == 1


def test_classify_from_file(capsys, tmp_path):
    path = tmp_path / "fan.json"
    path.write_text(json.dumps({"rays": [[1, 0], [1, 1], [1, 2], [1, 3]]}))
    code, data = run_json(capsys, "classify", "--input", str(path))
    assert code == 0 and data["results"]["m"] == 3
    assert data["results"]["self_intersections"] == [-2, -2]


def test_invariants(capsys):
    code, data = run_json(capsys, "invariants", "--m", "3", "--l", "2")
    r = data["results"]
    assert code == 0 and r["count"] == 3 and r["delta"] == "q2 + q1*q2"
    _, data = run_json(capsys, "invariants", "--m", "2", "--l", "1")
    assert data["results"]["sequences"] == [[0], [1]]
    _, data = run_json(capsys, "invariants", "--m", "5", "--l", "5")
    assert data["results"]["delta"] == "0" and "note" in data["results"]


def test_invariants_all_centers_and_degree_cap(capsys):
    _, data = run_json(capsys, "invariants", "--m", "4", "--max-degree", "1")
    counts = [c["count"] for c in data["results"]["centers"]]
    assert counts == [2, 2, 2, 1]


def test_invariants_bad_center(capsys):
    assert run(capsys, "invariants", "--m", "3", "--l", "7")[0] == 1


def test_verify(capsys):
    code, data = run_json(capsys, "verify", "--m-max", "8")
    assert code == 0 and data["pass"] is True
    assert [r["m"] for r in data["results"]["per_m"]] == list(range(1, 9))
    code, data = run_json(capsys, "verify", "--m-max", "1")
    assert code == 0 and data["pass"] is True


def test_verify_mutant(capsys):
    code, data = run_json(capsys, "verify", "--mutate", "drop-cond-4", "--m-max", "4")
    assert code == 2 and data["pass"] is False
    assert data["results"]["first_mismatch"]["m"] == 2


def test_verify_timing_table(capsys):
    code, out, _ = run(capsys, "verify", "--m-max", "3", "--format", "pretty")
    assert code == 0 and "seconds" in out


def test_periods(capsys):
    code, data = run_json(capsys, "periods", "--m", "2", "--q", "0.25")
    cyc = data["results"]["cycles"][0]
    assert code == 0 and data["pass"] is True
    assert cyc["period"][0] == pytest.approx(-1.386294, abs=1e-6)
    assert cyc["closed_form"][0] == pytest.approx(-1.386294, abs=1e-6)
    code, data = run_json(capsys, "periods", "--m", "3", "--q", "0.5,0.3", "--l", "2")
    assert code == 0
    assert data["results"]["cycles"][0]["period"][0] == pytest.approx(math.log(0.3), abs=1e-6)


def test_periods_degenerate(capsys):
    code, data = run_json(capsys, "periods", "--m", "2", "--q", "1.0")
    assert code == 2 and data["results"]["reason"] == "DegenerateInterval"


@pytest.mark.parametrize("argv", [
    ["periods", "--m", "2", "--q", "1.5"],
    ["periods", "--m", "3", "--q", "0.5"],
    ["periods", "--m", "2"],
    ["periods", "--m", "2", "--q", "0.5", "--tolerance", "-1"],
])
def test_periods_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_mirror_map(capsys):
    code, data = run_json(capsys, "mirror-map", "--m", "2", "--q", "0.5")
    assert code == 0 and data["results"]["C"] == [1.0, 1.5, 0.5]
    code, data = run_json(capsys, "mirror-map", "--m", "2", "--C", "1,1.5,0.5", "--invert")
    assert code == 0 and data["results"]["q"] == [0.5]


def test_mirror_map_sweep_csv(capsys):
    code, out, _ = run(capsys, "mirror-map", "--m", "2", "--sweep", "q1=0.1:0.9:9", "--csv")
    assert code == 0
    assert "\r\n" in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    c1 = [float(r["C_1"]) for r in rows]
    assert all(a < b for a, b in zip(c1, c1[1:]))


def test_mirror_map_from_offsets(capsys):
    code, data = run_json(capsys, "mirror-map", "--m", "3", "--offsets", "0,0,-1,-3")
    assert code == 0
    assert data["results"]["q"] == pytest.approx([math.exp(-1)] * 2)


def test_check_all(capsys):
    code, data = run_json(capsys, "check-all", "--m-max", "5")
    assert code == 0 and data["pass"] is True
    assert {s["stage"] for s in data["results"]["stages"]} == {"verify", "periods", "hyperkahler", "mirror-map"}


def test_output_is_byte_identical(capsys):
    argv = ["check-all", "--m-max", "4", "--seed", "3"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ["mirror-map", "--m", "3", "--sweep", "q2=0.2:0.8:7"]
    single = run(capsys, *argv)[1]
    monkeypatch.setenv("SYZKIT_THREADS", "4")
    assert run(capsys, *argv)[1] == single
    monkeypatch.setenv("SYZKIT_THREADS", "lots")
    assert run(capsys, *argv)[0] == 1


def test_float_formatting(capsys):
    _, out, _ = run(capsys, "mirror-map", "--m", "2", "--q", "0.1")
    data = json.loads(out)
    for x in data["results"]["C"]:
        assert len(repr(x).replace(".", "").lstrip("0")) <= 16


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "verify", "--m-max", "zero")[0] == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "syzkit", "invariants", "--m", "2", "--l", "1",
                           "--format", "pretty"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "delta: q1" in proc.stdout
