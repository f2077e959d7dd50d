import json
import subprocess
import sys
from fractions import Fraction

import pytest

from constructive_measure.cli import format_real, main
from constructive_measure.reals import ModulatedReal, real_from_rational
from constructive_measure.report import Report

DIRAC = {"ground_set": ["a", "b", "c"], "measure": {"type": "dirac", "point": "a"}}


@pytest.fixture
def space_file(tmp_path):
    def write(doc, name="space.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_integrate_simple(space_file, capsys):
    assert run(capsys, "integrate", space_file(DIRAC), "--simple", '[["2","100"],["3","010"]]') == (0, "2\n", "")


def test_integrate_empty(space_file, capsys):
    assert run(capsys, "integrate", space_file(DIRAC), "--simple", "[]") == (0, "0\n", "")


def test_integrate_geometric(space_file, capsys):
    rep = '{"geometric": {"base": [["1","111"]], "ratio": "1/2"}}'
    code, out, _ = run(capsys, "integrate", space_file(DIRAC), "--rep", rep)
    assert (code, out) == (0, "1 ± 2⁻¹⁶\n")
    code, out, _ = run(capsys, "integrate", space_file(DIRAC), "--rep", rep, "--precision", "5")
    assert out == "1 ± 2⁻⁵\n"


def test_integrate_support_rep_is_exact(space_file, capsys):
    rep = '{"support": [[["1/3","100"]], [["-1","110"]]]}'
    assert run(capsys, "integrate", space_file(DIRAC), "--rep", rep)[1] == "-2/3\n"


def test_norm(space_file, capsys):
    assert run(capsys, "norm", space_file(DIRAC), "--rep", '{"support": []}')[1] == "0\n"
    assert run(capsys, "norm", space_file(DIRAC), "--rep", '{"support": [[["-3/2","101"]]]}')[1] == "3/2\n"


def test_pair(capsys):
    assert run(capsys, "pair", "4", "1") == (0, "7\n", "")
    assert run(capsys, "pair", "--inverse", "1") == (0, "(1, 1)\n", "")
    assert run(capsys, "pair", "--inverse", "9")[1] == "(2, 3)\n"


@pytest.mark.parametrize(
    "argv",
    [["pair", "0", "1"], ["pair", "1"], ["pair", "--inverse", "0"], ["pair", "2", "2", "--inverse", "3"], ["bogus"]],
)
def test_pair_bad_input(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        {"ground_set": ["a"]},
        {"ground_set": [], "measure": {"type": "dirac", "point": "a"}},
        {"ground_set": ["a", "a"], "measure": {"type": "dirac", "point": "a"}},
        {"ground_set": ["a", "b"], "measure": {"type": "dirac", "point": "z"}},
        {"ground_set": ["a", "b"], "measure": {"type": "weighted", "weights": {"a": "-1", "b": "1"}}},
        {"ground_set": ["a", "b"], "measure": {"type": "weighted", "weights": {"a": "x"}}},
        {"ground_set": ["a", "b"], "measure": {"type": "gaussian"}},
    ],
)
def test_broken_space_files_exit_2(space_file, capsys, doc):
    code, out, err = run(capsys, "check", space_file(doc), "--suite", "pms")
    assert code == 2
    assert err.startswith("error: ")


def test_missing_file_exits_2(tmp_path, capsys):
    assert run(capsys, "check", str(tmp_path / "nope.json"))[0] == 2


@pytest.mark.parametrize("literal", ['[["1","10"]]', '[["1/0","100"]]', '[[0.5, "100"]]', '{"a": 1}', "[["])
def test_bad_simple_literal_exits_2(space_file, capsys, literal):
    assert run(capsys, "integrate", space_file(DIRAC), "--simple", literal)[0] == 2


@pytest.mark.parametrize(
    "literal",
    ['{"geometric": {"base": [["1","111"]], "ratio": "1"}}', '{"geometric": {"base": []}}', '{"other": 1}', '{"support": 3}'],
)
def test_bad_rep_literal_exits_2(space_file, capsys, literal):
    assert run(capsys, "norm", space_file(DIRAC), "--rep", literal)[0] == 2


def test_negative_precision_exits_2(space_file, capsys):
    assert run(capsys, "integrate", space_file(DIRAC), "--simple", "[]", "--precision", "-1")[0] == 2


def test_max_ground_is_enforced(space_file, capsys):
    big = {"ground_set": list("abcde"), "measure": {"type": "dirac", "point": "a"}}
    code, _, err = run(capsys, "check", space_file(big), "--suite", "algebra")
    assert code == 2 and "max-ground" in err
    assert run(capsys, "check", space_file(big), "--suite", "algebra", "--max-ground", "5")[0] == 0


def test_modularity_mutant_exits_1(space_file, capsys):
    values = {format(m, "03b"): "1" for m in range(1, 8)}
    mutant = {"ground_set": ["a", "b", "c"], "measure": {"type": "table", "values": values}}
    code, out, err = run(capsys, "check", space_file(mutant), "--suite", "pms")
    assert code == 1
    assert "FAIL pms.PMS1: counterexample" in err
    report = Report.from_json(out)
    assert report.get("pms.PMS1").status == "fail"


def test_check_report_roundtrip_and_determinism(space_file, capsys, tmp_path):
    path = space_file(DIRAC)
    out_file = tmp_path / "report.json"
    code, first, _ = run(capsys, "check", path, "--suite", "pis-simple", "--seed", "5", "--samples", "40", "--out", str(out_file))
    assert code == 0
    _, second, _ = run(capsys, "check", path, "--suite", "pis-simple", "--seed", "5", "--samples", "40")
    assert first == second
    assert out_file.read_text() == first
    report = Report.from_json(first)
    assert report.to_json() + "\n" == first
    assert all(e.status in ("pass", "sampled-pass") for e in report.entries)


def test_check_algebra_suite(space_file, capsys):
    code, out, _ = run(capsys, "check", space_file(DIRAC), "--suite", "algebra")
    assert code == 0
    assert [e.id for e in Report.from_json(out).entries] == ["laws", "apartness"]


def test_format_real():
    assert format_real(real_from_rational(Fraction(3, 4)), 16) == "3/4"
    third = ModulatedReal(lambda n: Fraction(round(Fraction(2**n, 3)), 2**n), lambda p: p + 1)
    assert format_real(third, 4) == "5/16 ± 2⁻⁴"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "constructive_measure", "pair", "3", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "8\n"
