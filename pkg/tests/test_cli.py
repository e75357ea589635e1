import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from covchain.bounds import Control
from covchain.cli import (
    EXIT_COVERABLE,
    EXIT_ERROR,
    EXIT_NOT_COVERABLE,
    EXIT_OK,
    EXIT_RESOURCE,
    Instance,
    ParseError,
    format_instance,
    load_instance,
    main,
    parse_instance,
    run,
)
from covchain.models import AffineNet, AffineTransition, Vas, identity
from covchain.trace import CSV_COLUMNS, decode_downset, decode_upset, read_jsonl

from conftest import DOUBLING_NET, HALVING, HALVING_CHAIN, TRANSFER_NET, affine_transitions

INSTANCES = Path(__file__).resolve().parent.parent / "instances"
HALVING_TEXT = "vas\ndim 2\naction -2 1\ntarget 0 5\nsource 10 0\n"
DOUBLING_TEXT = """affine
dim 2
trans
a 0 0
A 1 1 ; 2 0
b 0 0
target 0 1
"""


class TestParse:
    def test_halving(self):
        inst = parse_instance(HALVING_TEXT)
        assert inst.model == HALVING and inst.target == (0, 5) and inst.source == (10, 0)
        assert inst.control is None

    def test_affine(self):
        inst = parse_instance(DOUBLING_TEXT)
        assert inst.model == DOUBLING_NET and inst.source is None

    def test_defaults_and_comments(self):
        inst = parse_instance("affine  # net\ndim 2\ntrans\nb 1 0\n\ntarget 1 1\ncontrol 1 4\n")
        assert inst.model.transitions == (AffineTransition((0, 0), identity(2), (1, 0)),)
        assert inst.control == Control.affine(1, 4)

    def test_empty_action_list(self):
        inst = parse_instance("vas\ndim 3\ntarget 0 0 1\n")
        assert inst.model == Vas(3, ())

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("vas\ndim 2\naction -2 x\ntarget 0 5\n", 3, "integers"),
            ("vas\ndim 2\naction -2 1 4\ntarget 0 5\n", 3, "expected dim 2"),
            ("vas\naction 1 1\n", 2, "'dim' must come before"),
            ("affine\ndim 2\ntrans\nA 1 0\ntarget 0 0\n", 4, "rows"),
            ("affine\ndim 2\na 1 0\n", 3, "must follow a 'trans'"),
            ("affine\ndim 2\ntrans\na 1 -1\ntarget 0 0\n", 4, "non-negative"),
            ("vas\ndim 2\nfoo 1\n", 3, "unknown keyword"),
            ("petri\n", 1, "first line"),
            ("vas\ndim 2\ntarget 1 1\ntarget 1 1\n", 4, "duplicate"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, fragment):
        with pytest.raises(ParseError) as e:
            parse_instance(text)
        assert e.value.line == line and fragment in str(e.value)
        assert str(e.value).startswith(f"line {line}:")

    def test_missing_target(self):
        with pytest.raises(ParseError, match="missing 'target'"):
            parse_instance("vas\ndim 2\n")

    def test_files(self):
        assert load_instance(INSTANCES / "halving.cov").model == HALVING
        assert load_instance(INSTANCES / "transfer.cov").model == TRANSFER_NET
        assert load_instance(INSTANCES / "doubling.cov").model == DOUBLING_NET

    @given(
        st.integers(1, 3).flatmap(
            lambda d: st.tuples(
                st.lists(affine_transitions(d), max_size=3),
                st.tuples(*[st.integers(0, 9)] * d),
                st.one_of(st.none(), st.tuples(*[st.integers(0, 9)] * d)),
            )
        )
    )
    def test_round_trip_affine(self, case):
        trans, t, s = case
        inst = Instance(AffineNet(len(t), tuple(trans)), t, s, Control.affine(2, 3))
        assert parse_instance(format_instance(inst)) == inst

    @given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), max_size=4))
    def test_round_trip_vas(self, acts):
        inst = Instance(Vas(2, tuple(acts)), (0, 5))
        assert parse_instance(format_instance(inst)) == inst


class TestRun:
    def test_check(self):
        text, code = run("check", parse_instance(HALVING_TEXT))
        assert code == EXIT_COVERABLE
        assert "length = 5" in text and "D_5 = {(1,4), (3,3), (5,2), (7,1), (9,0)}" in text

    def test_source_override(self):
        _, code = run("dual", parse_instance(HALVING_TEXT), {"source": (9, 0)})
        assert code == EXIT_NOT_COVERABLE

    def test_no_source(self):
        _, code = run("check", parse_instance(DOUBLING_TEXT))
        assert code == EXIT_OK

    def test_classify(self):
        text, code = run("classify", load_instance(INSTANCES / "transfer.cov"))
        assert code == EXIT_OK
        assert "transfer             yes" in text and "invertible           no" in text

    def test_bounds(self):
        text, _ = run("bounds", None, {"d": 2, "step": 2, "n0": 2})
        assert "N = (2,4,24)" in text and "L = (0,10,260)" in text
        js, _ = run("bounds", None, {"d": 2, "step": 2, "n0": 2, "json": True})
        assert json.loads(js) == {"d": 2, "N": ["2", "4", "24"], "L": ["0", "10", "260"]}

    def test_bounds_from_instance(self):
        text, _ = run("bounds", parse_instance(HALVING_TEXT))
        assert "x + 2, n0 = 5" in text

    def test_both(self):
        text, code = run("both", parse_instance(HALVING_TEXT))
        assert code == EXIT_COVERABLE and "agree on all 6 steps" in text

    def test_monitor(self):
        text, code = run("monitor", parse_instance(HALVING_TEXT), {"view": "dual"})
        assert code == EXIT_COVERABLE
        assert "FAIL" not in text and "(5 <= 657)" in text

    def test_monitor_control_override(self):
        text, _ = run("monitor", parse_instance(HALVING_TEXT), {"control_step": 1, "control_n0": 4})
        assert "x + 1, n0 = 4" in text and "controlled          ok" in text

    def test_witness(self):
        text, code = run("witness", parse_instance(HALVING_TEXT))
        assert code == EXIT_COVERABLE
        assert "(0,5), (2,4), (4,3), (6,2), (8,1), (10,0)" in text
        assert "(10,0), (8,1), (6,2), (4,3), (2,4), (0,5)" in text
        _, code = run("witness", parse_instance(HALVING_TEXT), {"source": (9, 0)})
        assert code == EXIT_NOT_COVERABLE

    def test_oracle(self):
        text, code = run("oracle", parse_instance(HALVING_TEXT))
        assert code == EXIT_COVERABLE and "Karp-Miller" in text
        text, code = run("oracle", load_instance(INSTANCES / "doubling.cov"))
        assert code == EXIT_COVERABLE and "yes" in text

    def test_resource_limit(self):
        text, code = run("check", parse_instance(HALVING_TEXT), {"max_iterations": 2})
        assert code == EXIT_RESOURCE and "iteration limit 2" in text

    def test_unknown_command(self):
        with pytest.raises(ValueError):
            run("frobnicate", parse_instance(HALVING_TEXT))


class TestTraces:
    def test_jsonl_reproduces_chain(self, tmp_path, halving_downsets):
        path = tmp_path / "trace.jsonl"
        run("dual", parse_instance(HALVING_TEXT), {"trace": str(path)})
        recs = read_jsonl(path)
        assert [r["step"] for r in recs] == list(range(6))
        assert [decode_downset(r, 2) for r in recs] == halving_downsets
        assert recs[1]["decomposition"] == [[1, 4], ["w", 3]]
        assert recs[0]["proper"] == [["w", 4]] and recs[-1]["proper"] == []
        assert all(r["view"] == "dual" and all(r["monitors"].values()) for r in recs)
        assert decode_upset(recs[-1], 2).basis == {(0, 5), (2, 4), (4, 3), (6, 2), (8, 1), (10, 0)}

    def test_csv(self, tmp_path):
        path = tmp_path / "steps.csv"
        run("check", parse_instance(HALVING_TEXT), {"csv": str(path)})
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == CSV_COLUMNS
        assert [r[1] for r in rows[1:]] == [str(len(D)) for D in HALVING_CHAIN]
        assert [r[2] for r in rows[1:]] == ["4", "4", "4", "5", "7", "9"]
        assert all(r[4] == "1" and r[5] == "1" for r in rows[1:])


class TestMain:
    def test_exit_codes(self, capsys):
        halving = str(INSTANCES / "halving.cov")
        assert main(["check", halving]) == EXIT_COVERABLE
        assert main(["check", halving, "--source", "9 0"]) == EXIT_NOT_COVERABLE
        assert main(["classify", str(INSTANCES / "doubling.cov")]) == EXIT_OK
        assert main(["bounds", "--d", "2", "--step", "2", "--n0", "2"]) == EXIT_OK
        assert "N = (2,4,24)" in capsys.readouterr().out

    def test_bad_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.cov"
        bad.write_text("vas\ndim 2\naction 1\ntarget 0 0\n")
        assert main(["check", str(bad)]) == EXIT_ERROR
        assert "line 3" in capsys.readouterr().err
        assert main(["check", str(tmp_path / "missing.cov")]) == EXIT_ERROR

    def test_usage_error(self):
        with pytest.raises(SystemExit) as e:
            main(["bounds", "--d", "2"])
        assert e.value.code == EXIT_ERROR

    def test_module_entry_point(self):
        out = subprocess.run(
            [sys.executable, "-m", "covchain", "dual", str(INSTANCES / "halving.cov")],
            capture_output=True,
            text=True,
        )
        assert out.returncode == EXIT_COVERABLE
        assert "D_2 = {(1,4), (3,3), (w,2)}" in out.stdout
