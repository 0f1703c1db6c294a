"""Command-line behavior: decisions, trailers, exit codes, CSV schema."""

import csv
import subprocess
import sys
from pathlib import Path

import pytest

from catsim.cli import CSV_HEADER, main
from catsim.reduction import sweep_row
from catsim.machine import parse_machine_file

ROOT = Path(__file__).resolve().parent.parent
MACHINES = ROOT / "machines"
INSTANCES = ROOT / "instances"


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---- run ----

def test_run_accept(capsys):
    code, out, _ = run_cli(capsys, "run", MACHINES / "parity.tm", "11")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "accept"
    assert "steps=3" in lines[1] and "halted=True" in lines[1]


def test_run_empty_input(capsys):
    code, out, _ = run_cli(capsys, "run", MACHINES / "parity.tm", "")
    assert code == 0 and out.splitlines()[0] == "accept"


def test_run_timeout_exits_nonzero(capsys):
    code, out, _ = run_cli(capsys, "run", MACHINES / "right_scanner.tm", "111",
                           "--max-steps", "5")
    assert code == 1 and out.splitlines()[0] == "timeout"


def test_run_missing_file(capsys):
    code, _, err = run_cli(capsys, "run", MACHINES / "no_such.tm", "1")
    assert code == 1 and err.startswith("error:")


def test_run_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.tm"
    bad.write_text("tapes 1\nalphabet _ 1\n")
    code, _, err = run_cli(capsys, "run", bad, "1")
    assert code == 1 and err.startswith("error:")


# ---- simulate ----

def test_simulate_parity(capsys):
    code, out, _ = run_cli(capsys, "simulate", MACHINES / "parity.tm", "11")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "accept"
    trailer = dict(kv.split("=", 1) for kv in lines[1].split())
    assert trailer["solver_used"] == "naive-memo"
    assert trailer["cm_mode"] == "multilinear"
    assert int(trailer["t_found"]) >= 1
    assert int(trailer["B"]) * int(trailer["c"]) == int(trailer["horizon"])
    assert int(trailer["catalytic_bits"]) > 0
    assert int(trailer["cm_total_bits"]) > int(trailer["encoding_bits"])


@pytest.mark.parametrize("name,inp", [
    ("parity", "0110"),
    ("div3", "101"),
    ("flip", "0101"),
    ("copy2", "0110"),
    ("palindrome2", "01"),
    ("accept_all", "01"),
    ("reject_all", ""),
])
def test_simulate_decision_equals_run(capsys, name, inp):
    run_code, run_out, _ = run_cli(capsys, "run", MACHINES / f"{name}.tm", inp)
    sim_code, sim_out, _ = run_cli(capsys, "simulate", MACHINES / f"{name}.tm", inp,
                                   "--t-max", "64")
    assert run_out.splitlines()[0] == sim_out.splitlines()[0]
    assert run_code == sim_code == 0


def test_simulate_timeout(capsys):
    code, out, _ = run_cli(capsys, "simulate", MACHINES / "right_scanner.tm", "111",
                           "--t-max", "8")
    lines = out.splitlines()
    assert code == 1 and lines[0] == "timeout"
    assert "decided=False" in lines[1]


def test_simulate_tiny_enumeration_budget(capsys):
    code, out, _ = run_cli(capsys, "simulate", MACHINES / "parity.tm", "0110",
                           "--t-max", "64", "--enum", "1")
    lines = out.splitlines()
    assert code == 1 and lines[0] == "timeout"
    assert "budget_hit=True" in lines[1]


def test_simulate_oracle_guided(capsys):
    code, out, _ = run_cli(capsys, "simulate", MACHINES / "palindrome2.tm", "0110",
                           "--oracle-guided")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "accept"
    assert "oracle_guided=True" in lines[1]


def test_simulate_cm_refusal_reported(capsys):
    code, out, err = run_cli(capsys, "simulate", MACHINES / "parity.tm", "11",
                             "--solver", "cm", "--oracle-guided", "--t-max", "2")
    assert code == 1 and out == ""
    assert err.startswith("error:") and "budget" in err


def test_simulate_fixed_block_policy(capsys):
    code, out, _ = run_cli(capsys, "simulate", MACHINES / "parity.tm", "0110",
                           "--block-policy", "fixed:3", "--t-max", "64")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "accept"
    assert "c=3" in lines[1].split()


# ---- treeval ----

def test_treeval_xor_tower(capsys):
    code, out, _ = run_cli(capsys, "treeval", INSTANCES / "xor_tower.tree")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "1"
    trailer = dict(kv.split("=", 1) for kv in lines[1].split())
    assert trailer["solver"] == "naive" and trailer["nodes_visited"] == "7"


def test_treeval_single_leaf(capsys):
    code, out, _ = run_cli(capsys, "treeval", INSTANCES / "single_leaf.tree")
    assert code == 0 and out.splitlines()[0] == "101"


@pytest.mark.parametrize("name", [
    "xor_tower", "max_pair", "vote", "single_leaf",
])
@pytest.mark.parametrize("mode", ["multilinear", "packed"])
def test_treeval_cm_equals_naive(capsys, name, mode):
    _, naive_out, _ = run_cli(capsys, "treeval", INSTANCES / f"{name}.tree")
    code, cm_out, _ = run_cli(capsys, "treeval", INSTANCES / f"{name}.tree",
                              "--solver", "cm", "--mode", mode)
    assert code == 0
    assert cm_out.splitlines()[0] == naive_out.splitlines()[0]
    trailer = dict(kv.split("=", 1) for kv in cm_out.splitlines()[1].split())
    assert trailer["solver"] == "cm" and int(trailer["catalytic_bits"]) > 0


def test_treeval_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("2 1 2\nnode r inner a b table 0 1 1\n")
    code, _, err = run_cli(capsys, "treeval", bad)
    assert code == 1 and err.startswith("error:")


# ---- sweep ----

def test_sweep_schema_and_recomputation(capsys):
    code, out, _ = run_cli(capsys, "sweep", MACHINES / "right_scanner.tm", "111",
                           "--t-list", "16,32")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 3
    machine = parse_machine_file(MACHINES / "right_scanner.tm")
    for row, t in zip(rows[1:], (16, 32)):
        expect = sweep_row(machine, "111", t)
        assert row[0] == "right_scanner"
        assert [int(x) for x in row[1:5]] == [3, t, expect["c"], expect["B"]]
        assert row[5] == "multilinear"
        assert [int(x) for x in row[6:10]] == [
            expect["catalytic_bits"], expect["local_bits_peak"],
            expect["scratch_bits_peak"], expect["naive_space_bits"],
        ]
        assert float(row[10]) >= 0


def test_sweep_empty_t_list(capsys):
    code, out, _ = run_cli(capsys, "sweep", MACHINES / "right_scanner.tm", "111",
                           "--t-list", "")
    assert code == 0
    assert out.splitlines() == [",".join(CSV_HEADER)]


def test_sweep_multiple_inputs(capsys):
    code, out, _ = run_cli(capsys, "sweep", MACHINES / "parity.tm", "11", "0110",
                           "--t-list", "8", "--mode", "packed")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and len(rows) == 3
    assert [r[1] for r in rows[1:]] == ["2", "4"]
    assert all(r[5] == "packed" for r in rows[1:])


# ---- packaging ----

def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "catsim.cli", "run", str(MACHINES / "parity.tm"), "11"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "accept"
