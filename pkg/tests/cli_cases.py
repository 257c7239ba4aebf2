"""CLI golden corpus: (name, argv relative to tests/fixtures, expected exit code).

Regenerate the golden files with ``LOGISO_REGEN_GOLDEN=1 pytest tests/test_cli.py``
after an intended output change, then review the diff.
"""

from __future__ import annotations

import contextlib
import io
import os
from pathlib import Path

from logiso.cli import main

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

CASES = [
    ("norm_two_atoms", ["norm", "two_atoms.json", "f_two_atoms.json"], 0),
    ("norm_base2", ["norm", "two_atoms.json", "f_two_atoms.json", "--base", "2"], 0),
    ("norm_dsl", ["norm", "atoms_geo.json", "f_dsl.json", "--terms", "20"], 0),
    ("member_dsl", ["member", "atoms_geo.json", "f_dsl.json", "--terms", "20"], 0),
    ("member_divergent", ["member", "heavy.json", "f_const.json", "--terms", "20"], 1),
    ("rn_bounded", ["rn", "atoms_geo.json", "atoms_geo_third.json"], 0),
    ("rn_unbounded", ["rn", "atoms_geo.json", "atoms_geo_lin.json"], 0),
    ("include_yes", ["include", "atoms_geo.json", "atoms_geo_third.json"], 0),
    ("include_no", ["include", "atoms_geo_third.json", "atoms_geo.json", "--K", "5"], 1),
    ("equal_yes", ["equal", "mu_rows.json", "mu_rows.json"], 0),
    ("equal_no", ["equal", "atoms_geo.json", "atoms_geo_third.json"], 1),
    ("passport", ["passport", "nu_rows.json"], 0),
    ("passport_ramp", ["passport", "ramp_prefix.json"], 0),
    ("decide_iso_reflexive", ["decide-iso", "rows_01.json", "rows_01.json"], 0),
    ("decide_iso_ratio", ["decide-iso", "geo_half.json", "geo_third.json"], 1),
    ("decide_iso_prefix", ["decide-iso", "geo_half.json", "prefix_tail.json"], 0),
    ("decide_iso_rows", ["decide-iso", "rows_01.json", "rows_02.json"], 1),
    ("decide_iso_spaces", ["decide-iso", "mu_rows.json", "nu_rows.json"], 0),
    ("decide_iso_measure_yes", ["decide-iso", "--measure", "rows_01.json", "mu_rows.json"], 0),
    ("decide_iso_measure_no", ["decide-iso", "--measure", "mu_rows.json", "nu_rows.json"], 1),
    ("build_iso_rows", ["build-iso", "mu_rows.json", "nu_rows.json"], 0),
    ("build_iso_ramp", ["build-iso", "ramp_half.json", "ramp_prefix.json"], 0),
    ("build_iso_no", ["build-iso", "ramp_half.json", "ramp_third.json"], 1),
    ("counterexample", ["counterexample", "atoms_geo.json", "atoms_geo_lin.json", "--K", "10"], 0),
    ("counterexample_bounded", ["counterexample", "atoms_geo.json", "atoms_geo_third.json"], 2),
    ("verify_prop2", ["verify-prop2", "mu_rows.json", "nu_rows.json", "f_rows.json"], 0),
    ("verify_transport", ["verify-transport", "mu_rows.json", "nu_rows.json", "f_rows.json"], 0),
    (
        "verify_transport_pairing",
        ["verify-transport", "mu_rows.json", "nu_rows.json", "f_rows.json", "--pairing", "pairing.json"],
        0,
    ),
    ("error_bad_tau", ["decide-iso", "bad_tau.json", "rows_01.json"], 2),
    ("error_broken_json", ["norm", "two_atoms.json", "broken.json"], 2),
    ("error_missing_file", ["passport", "no_such_file.json"], 2),
    ("error_algebra_mismatch", ["rn", "two_atoms.json", "atoms_geo.json"], 2),
]


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process from the fixtures directory; returns (exit code, stdout)."""
    out = io.StringIO()
    cwd = os.getcwd()
    os.chdir(FIXTURES)
    try:
        with contextlib.redirect_stdout(out):
            code = main(list(argv))
    finally:
        os.chdir(cwd)
    return code, out.getvalue()


def golden_path(name: str) -> Path:
    return GOLDEN / f"{name}.json"


def check_case(name, argv, expected_code) -> list[str]:
    """Problems with one case: exit code, determinism across two runs, golden match."""
    problems = []
    code1, out1 = run(argv)
    code2, out2 = run(argv)
    if code1 != expected_code:
        problems.append(f"{name}: exit {code1}, expected {expected_code}")
    if (code1, out1) != (code2, out2):
        problems.append(f"{name}: output differs between runs")
    path = golden_path(name)
    if os.environ.get("LOGISO_REGEN_GOLDEN"):
        path.write_text(out1, encoding="utf-8")
    elif not path.exists():
        problems.append(f"{name}: golden file missing")
    elif path.read_text(encoding="utf-8") != out1:
        problems.append(f"{name}: output differs from golden file")
    return problems
