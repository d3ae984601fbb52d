import dataclasses
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from privask.cli import main
from privask.datasets import hiring_instance, hiring_solution_tree
from privask.model import (
    Ask,
    LEAF,
    parse_instance,
    parse_tree,
    serialize_instance,
    serialize_tree,
)
from privask.reduction import ScInstance, serialize_sc
from privask.verify import verify_gcopc

FIXTURE = str(Path(__file__).parent / "data" / "benchmark_goodness_50.csv")


@pytest.fixture
def hiring_file(tmp_path):
    p = tmp_path / "hiring.json"
    p.write_text(serialize_instance(hiring_instance()))
    return str(p)


@pytest.fixture
def solution_file(tmp_path):
    p = tmp_path / "solution.json"
    p.write_text(serialize_tree(hiring_solution_tree()))
    return str(p)


class TestRoundTrips:
    def test_generate_solve_verify(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        tree = tmp_path / "tree.json"
        assert (
            main(
                [
                    "generate",
                    "--types",
                    "12:18",
                    "--questions",
                    "5:6",
                    "--answers",
                    "2:3",
                    "--private",
                    "1:2",
                    "--limit",
                    "3",
                    "--fitness-mode",
                    "binary",
                    "--slack",
                    "1/4",
                    "--seed",
                    "9",
                    "-o",
                    str(inst),
                ]
            )
            == 0
        )
        parse_instance(inst.read_text())
        assert main(["solve", "-i", str(inst), "-o", str(tree)]) == 0
        assert "goodness: " in capsys.readouterr().out
        assert main(["verify", "-i", str(inst), "-t", str(tree)]) == 0
        out = capsys.readouterr().out
        assert "feasible: yes" in out

    def test_generate_planted_mode(self, tmp_path):
        inst = tmp_path / "inst.json"
        rc = main(
            [
                "generate",
                "--types",
                "30",
                "--questions",
                "8",
                "--private",
                "1:2",
                "--limit",
                "4",
                "--fitness-mode",
                "planted",
                "--relevant",
                "2",
                "--bias",
                "2/3",
                "--slack",
                "1/4",
                "--seed",
                "3",
                "-o",
                str(inst),
            ]
        )
        assert rc == 0
        doc = json.loads(inst.read_text())
        fits = {t["fitness"] for t in doc["candidate_types"]}
        assert fits <= {"0/1", "1/1"} and len(fits) == 2

    def test_solve_stdout_tree_report_on_stderr(self, hiring_file, capsys):
        assert main(["solve", "-i", hiring_file, "--algo", "greedy"]) == 0
        cap = capsys.readouterr()
        parsed = parse_tree(cap.out)
        assert isinstance(parsed, Ask)
        assert "goodness: 1/1 = 1.0000" in cap.err

    def test_solve_algos_agree_on_hiring(self, hiring_file, tmp_path, capsys):
        for algo in ("exact", "ga", "ga-reinforced"):
            out = tmp_path / f"{algo}.json"
            rc = main(
                [
                    "solve",
                    "-i",
                    hiring_file,
                    "--algo",
                    algo,
                    "--seed",
                    "1",
                    "--iters",
                    "30",
                    "-o",
                    str(out),
                ]
            )
            assert rc == 0
            assert "goodness: 1/1" in capsys.readouterr().out
            tree = parse_tree(out.read_text())
            assert verify_gcopc(tree, hiring_instance()).goodness == 1


class TestVerify:
    def test_infeasible_tree_exits_1(self, hiring_file, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(
            serialize_tree(Ask("Nationality", {"local": LEAF, "foreign": LEAF}))
        )
        assert main(["verify", "-i", hiring_file, "-t", str(bad)]) == 1
        out = capsys.readouterr().out
        assert "feasible: no" in out
        assert "violation: " in out and "Nationality" in out

    def test_cdpc_flag(self, tmp_path, solution_file, capsys):
        inst = dataclasses.replace(
            hiring_instance(),
            cdpc_thresholds=(Fraction(1, 5), Fraction(4, 5)),
        )
        f = tmp_path / "cdpc.json"
        f.write_text(serialize_instance(inst))
        assert main(["verify", "-i", str(f), "-t", solution_file, "--cdpc"]) == 0
        assert "decision witness: accepted" in capsys.readouterr().out

    def test_redundant_ask_reported(self, tmp_path, capsys):
        doc = {
            "questions": [
                {"id": "q1", "answers": ["a", "b"]},
                {"id": "q2", "answers": ["x", "y"]},
            ],
            "candidate_types": [
                {"answers": {"q1": "a", "q2": "x"}, "fitness": "1", "quantity": 1},
                {"answers": {"q1": "b", "q2": "x"}, "fitness": "0", "quantity": 1},
            ],
            "privacy_rules": [],
            "question_limit": 2,
        }
        inst = tmp_path / "inst.json"
        inst.write_text(json.dumps(doc))
        tree = tmp_path / "tree.json"
        tree.write_text(serialize_tree(Ask("q2", {"x": LEAF})))
        assert main(["verify", "-i", str(inst), "-t", str(tree)]) == 0
        assert "redundant ask" in capsys.readouterr().out


class TestDecide:
    def test_positive_with_witness(self, tmp_path, capsys):
        sc = tmp_path / "sc.json"
        sc.write_text(serialize_sc(ScInstance((1, 2), ((1, 2), (1,)), 1)))
        cdpc = tmp_path / "cdpc.json"
        assert main(["reduce-sc", "-i", str(sc), "-o", str(cdpc)]) == 0
        witness = tmp_path / "witness.json"
        assert main(["decide", "-i", str(cdpc), "-o", str(witness)]) == 0
        assert "positive" in capsys.readouterr().out
        tree = parse_tree(witness.read_text())
        inst = parse_instance(cdpc.read_text())
        assert main(["verify", "-i", str(cdpc), "-t", str(witness), "--cdpc"]) == 0
        assert verify_gcopc(tree, inst).feasible

    def test_negative_exits_1(self, tmp_path, capsys):
        sc = tmp_path / "sc.json"
        sc.write_text(serialize_sc(ScInstance((1, 2, 3), ((1,), (2,), (3,)), 2)))
        cdpc = tmp_path / "cdpc.json"
        assert main(["reduce-sc", "-i", str(sc), "-o", str(cdpc)]) == 0
        assert main(["decide", "-i", str(cdpc)]) == 1
        assert "negative" in capsys.readouterr().out

    def test_missing_thresholds_is_usage_error(self, hiring_file):
        assert main(["decide", "-i", hiring_file]) == 2


class TestReductionCommands:
    def test_gcopc_from_cdpc(self, tmp_path, capsys):
        sc = tmp_path / "sc.json"
        sc.write_text(serialize_sc(ScInstance((1, 2), ((1, 2),), 1)))
        cdpc = tmp_path / "cdpc.json"
        main(["reduce-sc", "-i", str(sc), "-o", str(cdpc)])
        assert main(["gcopc-from-cdpc", "-i", str(cdpc)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert "cdpc_thresholds" not in doc or doc["cdpc_thresholds"] is None
        assert doc["meta"]["cdpc_x"] == "0/1"

    def test_reduce_rejects_non_cover(self, tmp_path):
        sc = tmp_path / "sc.json"
        sc.write_text(json.dumps({"universe": ["1", "2"], "sets": [["1"]], "k": 1}))
        assert main(["reduce-sc", "-i", str(sc)]) == 2


class TestBench:
    def test_csv_to_file_and_determinism(self, hiring_file, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = [
            "bench",
            hiring_file,
            "--algos",
            "greedy,ga",
            "--runs",
            "2",
            "--seed",
            "3",
            "--no-timing",
        ]
        assert main(argv + ["-o", str(a)]) == 0
        assert main(argv + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        rows = a.read_text().splitlines()
        assert rows[0].startswith("instance_id,algorithm,")
        assert rows[1].startswith("hiring,greedy,1/1,1.0000")
        assert rows[-1].startswith("average,")

    def test_json_format(self, hiring_file, capsys):
        rc = main(
            ["bench", hiring_file, "--algos", "greedy", "--format", "json"]
        )
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["rows"][0]["algorithm"] == "greedy"

    def test_unknown_algo_usage_error(self, hiring_file):
        assert main(["bench", hiring_file, "--algos", "tabu"]) == 2


class TestSignTest:
    def test_fixture_reject(self, capsys):
        rc = main(
            [
                "signtest",
                "-i",
                FIXTURE,
                "--col-a",
                "basic_ga",
                "--col-b",
                "reinforced_ga",
                "--alpha",
                "0.1",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "statistic: 26 of 42" in out
        assert "ties dropped: 8" in out
        assert "p_value: 180484175953/2199023255552 = 0.082075" in out
        assert "H0 rejected at alpha = 0.1000" in out

    def test_all_ties_exits_1(self, tmp_path, capsys):
        f = tmp_path / "tie.csv"
        f.write_text("a,b\n0.5,0.5\n0.7,0.7\n")
        assert main(["signtest", "-i", str(f)]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_column(self, tmp_path):
        f = tmp_path / "s.csv"
        f.write_text("a,b\n1,2\n")
        assert main(["signtest", "-i", str(f), "--col-a", "nope"]) == 2


class TestConduct:
    def test_full_walk(self, hiring_file, solution_file, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("Yes\nHigh\n"))
        assert main(["conduct", "-i", hiring_file, "-t", solution_file]) == 0
        out = capsys.readouterr().out
        assert "Experience? [Yes/No]" in out
        assert "Programming? [High/Low]" in out
        assert "fit ratio: 1/1 = 1.0000" in out
        assert "privacy (Nationality, local):" in out

    def test_reprompt_on_bad_answer(self, hiring_file, solution_file, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("Maybe\nNo\nNone\n"))
        assert main(["conduct", "-i", hiring_file, "-t", solution_file]) == 0
        out = capsys.readouterr().out
        assert "please answer one of: Yes, No" in out

    def test_eof_aborts(self, hiring_file, solution_file, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO(""))
        assert main(["conduct", "-i", hiring_file, "-t", solution_file]) == 2
        assert "interview aborted" in capsys.readouterr().err

    def test_implied_answer_skips_prompt(self, tmp_path, capsys, monkeypatch):
        doc = {
            "questions": [
                {"id": "q1", "answers": ["a", "b"]},
                {"id": "q2", "answers": ["x", "y"]},
            ],
            "candidate_types": [
                {"answers": {"q1": "a", "q2": "x"}, "fitness": "1", "quantity": 1},
                {"answers": {"q1": "b", "q2": "y"}, "fitness": "0", "quantity": 1},
            ],
            "privacy_rules": [],
            "question_limit": 2,
        }
        inst = tmp_path / "inst.json"
        inst.write_text(json.dumps(doc))
        tree = tmp_path / "tree.json"
        tree.write_text(
            serialize_tree(Ask("q1", {"a": Ask("q2", {"x": LEAF}), "b": LEAF}))
        )
        monkeypatch.setattr(sys, "stdin", io.StringIO("a\n"))
        assert main(["conduct", "-i", str(inst), "-t", str(tree)]) == 0
        out = capsys.readouterr().out
        assert "q2: x (implied)" in out
        assert "q2? [" not in out


class TestErrorsAndSeeds:
    def test_missing_file_exits_2(self, capsys):
        assert main(["solve", "-i", "/nonexistent/file.json"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_instance_exits_2(self, tmp_path, capsys):
        f = tmp_path / "junk.json"
        f.write_text("{not json")
        assert main(["verify", "-i", str(f), "-t", str(f)]) == 2

    def test_bad_range_exits_2(self, capsys):
        assert main(["generate", "--types", "ten"]) == 2
        assert "use N or LO:HI" in capsys.readouterr().err

    def test_unknown_subcommand_exits_2(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_infeasible_root_exits_1(self, tmp_path, capsys):
        doc = {
            "questions": [{"id": "q1", "answers": ["a", "b"]}],
            "candidate_types": [
                {"answers": {"q1": "a"}, "fitness": "1", "quantity": 1},
                {"answers": {"q1": "b"}, "fitness": "0", "quantity": 1},
            ],
            "privacy_rules": [
                {"question": "q1", "answer": "a", "low": "0", "high": "1/10"}
            ],
            "question_limit": 1,
        }
        f = tmp_path / "inst.json"
        with pytest.warns(UserWarning):
            f.write_text(json.dumps(doc))
            assert main(["solve", "-i", str(f)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_seed_env_var(self, tmp_path, monkeypatch):
        args = ["generate", "--types", "10", "--questions", "4:5", "--private", "1", "--limit", "2", "--slack", "1/4"]
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        c = tmp_path / "c.json"
        monkeypatch.setenv("PRIVASK_SEED", "41")
        assert main(args + ["-o", str(a)]) == 0
        monkeypatch.delenv("PRIVASK_SEED")
        assert main(args + ["--seed", "41", "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        monkeypatch.setenv("PRIVASK_SEED", "41")
        assert main(args + ["--seed", "99", "-o", str(c)]) == 0
        assert c.read_bytes() != a.read_bytes()

    def test_bad_seed_env_exits_2(self, monkeypatch, capsys):
        monkeypatch.setenv("PRIVASK_SEED", "pi")
        assert main(["generate", "--types", "10", "--questions", "4"]) == 2
        assert "PRIVASK_SEED" in capsys.readouterr().err


def test_console_script_smoke(hiring_file, tmp_path):
    out = tmp_path / "t.json"
    proc = subprocess.run(
        [sys.executable, "-m", "privask.cli", "solve", "-i", hiring_file, "-o", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "goodness: 1/1 = 1.0000" in proc.stdout
    parse_tree(out.read_text())
