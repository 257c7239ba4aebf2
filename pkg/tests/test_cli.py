import json
import subprocess
import sys

import pytest

from cli_cases import CASES, FIXTURES, check_case, run
from logiso.cli import main


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    assert check_case(name, argv, code) == []


def test_reflexive_decision_payload():
    code, out = run(["decide-iso", "rows_01.json", "rows_01.json"])
    payload = json.loads(out)
    assert code == 0 and payload["decision"] == "yes" and payload["sup_ratios"] == [1, 1]


def test_ratio_witness_payload():
    code, out = run(["decide-iso", "geo_half.json", "geo_third.json"])
    payload = json.loads(out)
    assert code == 1 and payload["reason"] == "RatioUnbounded" and payload["witness"]["index"] == 36


def test_counterexample_payload():
    _, out = run(["counterexample", "atoms_geo.json", "atoms_geo_lin.json", "--K", "10"])
    assert abs(json.loads(out)["mu_partials"][9] - 1.549768) < 1e-6


def test_schema_error_names_field():
    _, out = run(["decide-iso", "bad_tau.json", "rows_01.json"])
    payload = json.loads(out)
    assert payload["path"] == "$.rows[1].tau" and "tau strictly increasing" in payload["message"]
    assert payload["file"] == "bad_tau.json"


def test_usage_errors_exit_2(capsys):
    for argv in ([], ["bogus"], ["norm", "only_one.json"], ["include", "a.json", "b.json", "--K", "0"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2
    capsys.readouterr()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "logiso.cli", "decide-iso", "rows_01.json", "rows_02.json"],
        cwd=FIXTURES,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["reason"] == "RowMismatch"
