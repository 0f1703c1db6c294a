"""Direct simulator and block-annotation tests.

Expected step counts and decisions were frozen from hand traces of the
corpus machines; block logs are checked against a brute-force recomputation
from recorded head paths.
"""

import random
from pathlib import Path

import pytest

from catsim.machine import (
    MachineFormatError,
    annotate_blocks,
    block_of,
    parse_machine,
    parse_machine_file,
    run_direct,
)

MACHINES = Path(__file__).resolve().parent.parent / "machines"


def load(name):
    return parse_machine_file(MACHINES / f"{name}.tm")


# ---- decisions and runtimes ----

CASES = [
    ("parity", "11", "accept", 3),
    ("parity", "1", "reject", 2),
    ("parity", "", "accept", 1),
    ("parity", "0110", "accept", 5),
    ("accept_all", "01", "accept", 1),
    ("reject_all", "", "reject", 1),
    ("unary_increment", "111", "accept", 4),
    ("flip", "0101", "accept", 5),
    ("div3", "110", "accept", 4),
    ("div3", "101", "reject", 4),
    ("div3", "", "accept", 1),
    ("hop4", "10", "accept", 4),
    ("copy2", "0110", "accept", 5),
    ("bounded_counter", "11", "accept", 4),
    ("bounded_counter", "", "accept", 1),
    ("palindrome2", "", "accept", 1),
    ("palindrome2", "0", "accept", 5),
    ("palindrome2", "01", "reject", 6),
]


@pytest.mark.parametrize("name,inp,decision,steps", CASES)
def test_corpus_decisions(name, inp, decision, steps):
    tr = run_direct(load(name), inp, 1000)
    assert (tr.decision, tr.steps) == (decision, steps)


def test_palindrome_against_python():
    m = load("palindrome2")
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randrange(0, 9)
        s = "".join(rng.choice("01") for _ in range(n))
        want = "accept" if s == s[::-1] else "reject"
        tr = run_direct(m, s, 500)
        assert tr.decision == want, s
        assert tr.steps <= 3 * n + 6


def test_div3_against_python():
    m = load("div3")
    for v in range(64):
        s = bin(v)[2:]
        tr = run_direct(m, s, 100)
        want = "accept" if v % 3 == 0 else "reject"
        assert tr.decision == want, s


def test_timeout():
    tr = run_direct(load("right_scanner"), "", 50)
    assert tr.decision == "timeout" and not tr.halted and tr.steps == 50


def test_left_move_at_cell_zero_stays():
    text = """
tapes 1
alphabet _ 1
states s t acc rej
start s
accept acc
reject rej
s _ -> t _ L
s 1 -> t 1 L
t _ -> acc _ S
t 1 -> acc 1 S
"""
    tr = run_direct(parse_machine(text), "", 10)
    assert tr.head_paths[0] == [0, 0, 0]


def test_input_validation():
    m = load("parity")
    with pytest.raises(ValueError):
        run_direct(m, "012", 10)  # 2 not in alphabet
    with pytest.raises(ValueError):
        run_direct(m, "0_1", 10)  # blank not allowed in input


# ---- block annotation ----


def test_annotation_right_scan():
    # head at position s after s steps; c=4 over 8 steps gives blocks 1,2,3
    tr = run_direct(load("right_scanner"), "", 8)
    ann = annotate_blocks(tr, 4)
    assert ann.B == 2
    assert ann.headlog[0] == [1, 2, 3]
    assert ann.activelog[0] == [{1, 2}, {2, 3}]


def test_annotation_pads_halted_runs():
    tr = run_direct(load("parity"), "11", 100)  # 3 steps, head ends at 2
    ann = annotate_blocks(tr, 2)
    assert ann.B == 2
    assert ann.headlog[0] == [1, 2, 2]
    assert ann.activelog[0] == [{1, 2}, {2}]


def test_annotation_rejects_ragged_timeout():
    tr = run_direct(load("right_scanner"), "", 7)
    with pytest.raises(ValueError):
        annotate_blocks(tr, 4)


@pytest.mark.parametrize("name,inp,c", [
    ("bounded_counter", "010", 2),
    ("palindrome2", "0110", 3),
    ("hop4", "1", 2),
    ("flip", "00110", 4),
])
def test_annotation_matches_bruteforce(name, inp, c):
    tr = run_direct(load(name), inp, 500)
    ann = annotate_blocks(tr, c)
    total = ann.B * c
    for h in range(tr.p):
        path = tr.head_paths[h] + [tr.head_paths[h][-1]] * total
        for i in range(ann.B):
            seg = path[i * c : (i + 1) * c + 1]
            assert ann.activelog[h][i] == {block_of(q, c) for q in seg}
            assert ann.headlog[h][i] == block_of(path[i * c], c)
            # blocks active together are at most two and adjacent
            assert len(ann.activelog[h][i]) <= 2
            assert max(ann.activelog[h][i]) - min(ann.activelog[h][i]) <= 1
        assert ann.headlog[h][ann.B] == block_of(path[total], c)


def test_annotation_consistent_with_prefix_sums():
    # headlog must equal 1 + running sum of observed block movements
    tr = run_direct(load("bounded_counter"), "0010", 500)
    for c in (1, 2, 3, 5):
        ann = annotate_blocks(tr, c)
        for h in range(tr.p):
            acc = 1
            for i in range(ann.B):
                assert ann.headlog[h][i] == acc
                acc += ann.headlog[h][i + 1] - ann.headlog[h][i]


# ---- parser errors ----


def test_parse_rejects_nontotal_table():
    text = """
tapes 1
alphabet _ 1
states s acc rej
start s
accept acc
reject rej
s 1 -> acc 1 S
"""
    with pytest.raises(MachineFormatError, match="undefined transition"):
        parse_machine(text)


def test_parse_rejects_nonabsorbing_halt():
    text = """
tapes 1
alphabet _ 1
states s acc rej
start s
accept acc
reject rej
s 1 -> acc 1 S
s _ -> acc _ S
acc _ -> s _ R
"""
    with pytest.raises(MachineFormatError, match="non-absorbing"):
        parse_machine(text)


def test_parse_rejects_bad_rows():
    base = "tapes 1\nalphabet _ 1\nstates s acc rej\nstart s\naccept acc\nreject rej\n"
    for bad in ["s 1 -> acc 1", "s 1 -> acc 1 X", "s 2 -> acc 1 S", "q 1 -> acc 1 S"]:
        with pytest.raises(MachineFormatError):
            parse_machine(base + bad + "\ns _ -> acc _ S\n")
    with pytest.raises(MachineFormatError, match="duplicate"):
        parse_machine(base + "s 1 -> acc 1 S\ns 1 -> rej 1 S\ns _ -> acc _ S\n")


def test_parse_requires_blank():
    with pytest.raises(MachineFormatError, match="blank"):
        parse_machine("tapes 1\nalphabet 0 1\nstates s a r\nstart s\naccept a\nreject r\n")


def test_all_corpus_files_parse():
    names = {f.stem for f in MACHINES.glob("*.tm")}
    assert len(names) >= 10
    for f in MACHINES.glob("*.tm"):
        parse_machine_file(f)
