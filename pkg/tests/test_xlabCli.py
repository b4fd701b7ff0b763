import csv
import json
from collections import Counter
from fractions import Fraction
from unittest.mock import patch

import pytest
import typer
import yaml
from typer.testing import CliRunner

from src.adversary import AdversaryParams, ObliviousStats, run_strategy
from src.harness import Transcript
from src.refAlgos import GreedyFirstFit
from src.xlabCli import EXIT_BUDGET, EXIT_FAILED, app, parse_range, parse_theta
from tests.test_buildSweepCSV import fake_row


@pytest.fixture
def config_file(tmp_path):
    config = {
        "game": {"T": 1, "budget": 500000, "grid_side": 65536},
        "adversary": {"kappa": 6, "L0": 64, "L1": 4096, "trials": 1},
        "directories": {"data": str(tmp_path / "data"), "output": "output"},
        "paths": {"transcript_suffix": ".jsonl", "sweep_suffix": "-sweep.csv"},
        "csv": {"delimiter": ","},
        "logging": {"level": "WARNING"},
    }
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(config))
    return path


@pytest.fixture
def invoke(config_file, monkeypatch):
    monkeypatch.setenv("GRIDLOCAL_BACKDOOR", "0")
    runner = CliRunner(mix_stderr=False)

    def _invoke(*args):
        return runner.invoke(app, ["--config", str(config_file), *args])

    return _invoke


@pytest.fixture
def row_transcript(invoke, tmp_path):
    out = tmp_path / "row.jsonl"
    result = invoke("run", "--strategy", "log-boost", "--algo", "greedy", "--kappa", "2", "--out", str(out))
    assert result.exit_code == 0, result.stderr
    return out


class TestParsing:
    @pytest.mark.parametrize("text, theta", [("1/2", Fraction(1, 2)), ("-2", Fraction(-2)), ("0/1", Fraction(0))])
    def test_theta(self, text, theta):
        assert parse_theta(text) == theta

    @pytest.mark.parametrize("text", ["1/0", "1/-2", "a/b", "0.5"])
    def test_bad_theta(self, text):
        with pytest.raises(typer.BadParameter):
            parse_theta(text)

    def test_ranges(self):
        assert parse_range("2..5") == [2, 3, 4, 5]
        assert parse_range("1,2") == [1, 2]
        assert parse_range("") == []
        with pytest.raises(typer.BadParameter):
            parse_range("x..y")


class TestRun:
    def test_missing_algorithm_is_usage_error(self, invoke):
        result = invoke("run", "--strategy", "log-boost")
        assert result.exit_code == 2

    def test_bad_theta_is_usage_error(self, invoke):
        result = invoke("run", "--algo", "greedy", "--theta", "1/0")
        assert result.exit_code == 2

    def test_log_boost_run(self, row_transcript, invoke):
        transcript = Transcript.read(row_transcript)
        assert transcript.certificate.kind.value == "survived"
        assert transcript.header["config"]["strategy"] == "log-boost"
        assert transcript.peak_potential == 2

    def test_run_writes_summary_csv(self, row_transcript):
        summary = row_transcript.with_name("row-summary.csv")
        with open(summary, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 1
        assert rows[0]["kind"] == "survived"
        assert rows[0]["achieved_potential"] == "2"
        assert rows[0]["strategy"] == "log-boost"

    def test_run_output_line(self, invoke, tmp_path):
        out = tmp_path / "again.jsonl"
        result = invoke("run", "--strategy", "log-boost", "--algo", "greedy", "--kappa", "2", "--out", str(out),
                        "--verify")
        assert result.exit_code == 0, result.stderr
        assert result.stdout.startswith("survived nodes=")
        assert "peak|p|=2" in result.stdout
        assert "transcript verified" in result.stdout

    def test_slope_boost_geometry(self, invoke, tmp_path):
        out = tmp_path / "slope.jsonl"
        result = invoke("run", "--strategy", "slope-boost", "--algo", "greedy", "--theta", "1/2",
                        "--kappa", "3", "--T", "1", "--out", str(out))
        assert result.exit_code == 0, result.stderr
        transcript = Transcript.read(out)
        slopes = [ev for ev in transcript.events if ev.get("kind") == "slope"]
        if slopes:
            assert "width 28, height 4" in result.stdout
            assert slopes[-1]["slope"] == [1, 2]
        else:
            assert transcript.certificate.is_win

    def test_invalid_parameters(self, invoke):
        result = invoke("run", "--algo", "greedy", "--L0", "5")
        assert result.exit_code == EXIT_FAILED
        assert "base row fits" in result.stderr

    def test_oracle_refused_without_backdoor(self, invoke, tmp_path):
        result = invoke("run", "--strategy", "log-boost", "--algo", "oracle", "--out", str(tmp_path / "o.jsonl"))
        assert result.exit_code == EXIT_FAILED
        assert "GRIDLOCAL_BACKDOOR" in result.stderr

    def test_budget_exhausted_exit_code(self, invoke, tmp_path):
        out = tmp_path / "small.jsonl"
        result = invoke("run", "--strategy", "log-boost", "--algo", "greedy", "--kappa", "4", "--budget", "20",
                        "--out", str(out))
        assert result.exit_code == EXIT_BUDGET
        assert result.stdout.startswith("budget_exhausted")
        assert out.exists()

    def test_oblivious_batch_without_wins_writes_summary(self, invoke, tmp_path):
        params = AdversaryParams(T=1, n_budget=500000, kappa=2, L0=64, L1=4096)
        last = run_strategy("log-boost", GreedyFirstFit(), params)
        stats = ObliviousStats(trials=3, kinds=Counter(survived=3), last=last)
        out = tmp_path / "batch.jsonl"
        with patch("src.xlabCli.run_oblivious_lb", return_value=stats):
            result = invoke("run", "--strategy", "full-oblivious", "--algo", "greedy", "--trials", "3",
                            "--out", str(out))
        assert result.exit_code == 0, result.stderr
        assert "0/3 wins" in result.stdout
        assert Transcript.read(out).labels() == last[1].labels()
        with open(out.with_name("batch-summary.csv"), newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 1
        assert rows[0]["kind"] == "survived"
        assert rows[0]["win_rate"] == "0.0000"
        assert rows[0]["nodes_spent"] == ""
        assert rows[0]["strategy"] == "full-oblivious"

    def test_missing_config(self, tmp_path):
        result = CliRunner().invoke(app, ["--config", str(tmp_path / "nope.yaml"), "validate"])
        assert result.exit_code == EXIT_FAILED


class TestVerify:
    def test_valid_transcript(self, invoke, row_transcript):
        result = invoke("verify", str(row_transcript))
        assert result.exit_code == 0, result.stderr
        assert "transcript verified" in result.stdout

    def test_tampered_color(self, invoke, row_transcript):
        lines = row_transcript.read_text().splitlines()
        index = next(i for i, line in enumerate(lines) if json.loads(line)["ev"] == "label")
        event = json.loads(lines[index])
        event["c"] = 4
        lines[index] = json.dumps(event)
        row_transcript.write_text("\n".join(lines) + "\n")
        result = invoke("verify", str(row_transcript))
        assert result.exit_code == EXIT_FAILED
        assert f"event {index - 1}: color 4" in result.stderr

    def test_replay_catches_relabel(self, invoke, row_transcript):
        """A different legal color is caught by the rules check or, failing that, by the replay."""
        lines = row_transcript.read_text().splitlines()
        events = [json.loads(line) for line in lines]
        index = max(i for i, ev in enumerate(events) if ev["ev"] == "label")
        events[index]["c"] = 3 if events[index]["c"] != 3 else 1
        row_transcript.write_text("\n".join(json.dumps(ev) for ev in events) + "\n")
        rules = invoke("verify", str(row_transcript), "--no-replay")
        replay = invoke("verify", str(row_transcript))
        assert replay.exit_code == EXIT_FAILED
        if rules.exit_code == 0:
            assert "replay labels node" in replay.stderr


class TestValidate:
    def test_desk_defaults(self, invoke):
        result = invoke("validate")
        assert result.exit_code == 0
        assert "regime: empirical-only" in result.stdout

    def test_guaranteed_regime(self, invoke):
        result = invoke("validate", "--kappa", "17")
        assert result.exit_code == 0
        assert "regime: guaranteed" in result.stdout
        assert "feasible at this budget: no" in result.stdout

    def test_invalid(self, invoke):
        result = invoke("validate", "--L0", "5")
        assert result.exit_code == EXIT_FAILED

    def test_from_transcript(self, invoke, row_transcript):
        result = invoke("validate", "--transcript", str(row_transcript))
        assert result.exit_code == 0
        assert "positivity: 1 > 0 [ok]" in result.stdout


def test_sweep_command(invoke, tmp_path):
    out = tmp_path / "grid.csv"
    with patch("src.buildSweepCSV.run_cell", side_effect=fake_row):
        result = invoke("sweep", "--T", "1,2", "--kappa", "2..5", "--out", str(out))
    assert result.exit_code == 0, result.stderr
    assert len(out.read_text().splitlines()) == 25
