import io
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import jsonschema
import pytest

from bk2stieltjes.cli import REPORT_SCHEMA, RunConfig, cmd_verify_cm, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bk2_table_matches_listed_values(capsys):
    code, out, _ = run(capsys, "bk2", "--max-n", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,exact,decimal,quadrature,abs_diff"
    assert [l.split(",")[1] for l in lines[1:]] == ["1/1", "1/2", "-1/12", "1/24", "-19/720", "3/160"]


def test_bk2_single_row(capsys):
    code, out, _ = run(capsys, "bk2", "--max-n", "0")
    assert code == 0
    assert out.splitlines()[1] == "0,1/1,1.0,,"


def test_bk2_quadrature_column(capsys):
    code, out, _ = run(capsys, "bk2", "--max-n", "20")
    assert code == 0
    for line in out.splitlines()[2:]:
        n, exact, dec, quad, diff = line.split(",")
        q = Fraction(exact)
        assert abs(float(quad) - float(q)) <= 1e-10 * abs(float(q))


def test_bk2_json(capsys):
    code, out, _ = run(capsys, "bk2", "--max-n", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rows"][2]["exact"] == "-1/12"


def test_bk2_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "bk2", "--max-n", "2", "--out", str(tmp_path / "no" / "such" / "f.csv"))
    assert code == 2
    assert "cannot write" in err


def test_out_path_written(capsys, tmp_path):
    path = tmp_path / "b.csv"
    assert main(["bk2", "--max-n", "2", "--out", str(path)]) == 0
    assert path.read_text().startswith("n,exact,")


def test_verify_cm_default(capsys):
    code, out, _ = run(capsys, "verify-cm", "--max-n", "50", "--max-k", "25")
    assert code == 0
    assert out.splitlines()[1].startswith("50,25,true")


def test_verify_cm_large(capsys):
    code, out, _ = run(capsys, "verify-cm", "--max-n", "100", "--max-k", "50", "--format", "json")
    assert code == 0 and json.loads(out)["holds"] is True


def test_verify_cm_injected_increasing_sequence():
    buf = io.StringIO()
    code = cmd_verify_cm(RunConfig(max_k=1), stdout=buf, sequence=[0, 1])
    assert code == 1
    assert buf.getvalue().splitlines()[1] == "1,1,false,1,0,1/1"


def test_verify_cm_bad_bounds(capsys):
    code, _, err = run(capsys, "verify-cm", "--max-n", "10", "--max-k", "10")
    assert code == 2


def test_eval_f_real(capsys):
    code, out, _ = run(capsys, "eval-f", "1", "0")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[1].startswith("0.721347520444")
    assert float(row[3]) <= 1e-8


def test_eval_f_imaginary_unit(capsys):
    code, out, _ = run(capsys, "eval-f", "0", "1", "--format", "json")
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["passed"] and float(rec["abs_error"]) <= 1e-8


# exponent-form negatives need "--" so argparse does not read them as flags
@pytest.mark.parametrize("point", [("-1", "0"), ("-0.3", "0"), ("--", "-1e6", "0")])
def test_eval_f_on_cut(capsys, point):
    code, _, err = run(capsys, "eval-f", *point)
    assert code == 2 and "cut" in err


def test_density_csv(capsys):
    code, out, _ = run(capsys, "density", "--t-min", "1.25", "--t-max", "3.2", "--points", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,rho"
    t, rho = map(float, lines[2].split(","))
    assert t == pytest.approx(2.0) and rho == pytest.approx(2 / math.pi**2, rel=1e-14)


def test_density_positive_and_fast(capsys):
    start = time.perf_counter()
    code, out, _ = run(capsys, "density", "--t-min", "1.000001", "--t-max", "1e6", "--points", "10000")
    elapsed = time.perf_counter() - start
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 10_000
    assert all(float(r.split(",")[1]) > 0 for r in rows)
    assert elapsed < 1.0


@pytest.mark.parametrize("args", [
    ("--t-min", "1.0"), ("--t-min", "3", "--t-max", "2"), ("--points", "1"),
])
def test_density_bad_bounds(capsys, args):
    assert run(capsys, "density", *args)[0] == 2


def test_unknown_flag_is_usage_error(capsys):
    assert run(capsys, "bk2", "--bogus")[0] == 2
    assert run(capsys, "bk2", "--jobs", "0")[0] == 2


def test_selftest_json_schema_and_exit(capsys):
    code, out, err = run(capsys, "selftest")
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert code == 0
    assert doc["summary"]["all_passed"] and doc["summary"]["failed"] == 0
    names = [r["check_name"] for r in doc["records"]]
    assert names == sorted(names)
    assert err.count("PASS") == len(names)


def test_selftest_loose_tolerance_still_passes(capsys):
    assert run(capsys, "selftest", "--rel-tol", "1e-6")[0] == 0


def test_selftest_failures_listed_first(monkeypatch, capsys):
    from bk2stieltjes import checks
    from bk2stieltjes.records import VerificationRecord

    bad = VerificationRecord("zz-broken", "1", "2", 1.0, 1.0, 0.0, False, "none", "abs")
    monkeypatch.setitem(checks.ALL_CHECKS, "zz-broken", lambda scale: bad)
    code, out, _ = run(capsys, "selftest", "--format", "json")
    doc = json.loads(out)
    assert code == 1
    assert doc["records"][0]["check_name"] == "zz-broken"


@pytest.mark.parametrize("argv", [
    ["selftest", "--format", "json"],
    ["selftest", "--format", "csv"],
    ["bk2", "--max-n", "8"],
    ["density", "--points", "50"],
])
def test_determinism(capsys, argv):
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_parallel_matches_serial(capsys):
    main(["bk2", "--max-n", "12"])
    serial = capsys.readouterr().out
    main(["bk2", "--max-n", "12", "--jobs", "2"])
    assert capsys.readouterr().out == serial


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bk2stieltjes", "bk2", "--max-n", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[2] == "1,1/2,0.5,0.5,0.0"


def test_selftest_csv_round_trips(capsys):
    import csv

    code, out, _ = run(capsys, "selftest", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 12
    assert all(len(r) == 9 and r["passed"] == "true" for r in rows)
    assert rows[0]["expected"] == "1/1,1/2,-1/12,1/24,-19/720,3/160"
