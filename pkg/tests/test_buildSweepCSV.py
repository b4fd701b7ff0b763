import csv
from unittest.mock import patch

import pytest

from src.buildSweepCSV import COLUMNS, SweepBuilder, run_cell
from src.errors import GridLocalError
from src.xlabCli import _adversary_params


@pytest.fixture
def config():
    return {
        "game": {"T": 1, "budget": 100000},
        "adversary": {"kappa": 6, "L0": 64, "L1": 4096, "trials": 1},
        "directories": {"data": "data", "output": "output"},
        "paths": {"sweep_suffix": "-sweep.csv"},
        "csv": {"delimiter": ","},
    }


@pytest.fixture
def builder(config):
    return SweepBuilder(config=config)


def fake_row(cell):
    row = {key: cell.get(key, "") for key in COLUMNS}
    row.update(kind="survived", nodes_spent=10, achieved_potential=0, wallclock="0.001")
    return row


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_grid_order(builder):
    cells = builder.grid([1, 2], range(2, 6), ["greedy", "parity", "hash"], [0])
    assert len(cells) == 24
    assert [c["index"] for c in cells] == list(range(24))
    assert (cells[0]["T"], cells[0]["kappa"], cells[0]["algorithm"]) == (1, 2, "greedy")
    assert (cells[-1]["T"], cells[-1]["kappa"], cells[-1]["algorithm"]) == (2, 5, "hash")
    assert all(c["L1"] == 4096 and c["n_budget"] == 100000 for c in cells)


def test_output_path(builder):
    path = builder.get_output_path("demo")
    assert path.name == "demo-sweep.csv"
    assert path.parent.name == "output"


def test_build_writes_one_row_per_cell(builder, tmp_path):
    out = tmp_path / "sweep.csv"
    with patch("src.buildSweepCSV.run_cell", side_effect=fake_row) as mocked:
        builder.build([1, 2], range(2, 6), ["greedy", "parity", "hash"], [0], out)
    assert mocked.call_count == 24
    rows = read_rows(out)
    assert len(rows) == 24
    assert list(rows[0].keys()) == COLUMNS
    assert [int(r["index"]) for r in rows] == list(range(24))


def test_empty_range_writes_header_only(builder, tmp_path):
    out = builder.build([1], [], ["greedy"], [0], tmp_path / "empty.csv")
    with open(out) as f:
        assert f.read().strip() == ",".join(COLUMNS)


def test_invalid_cell_becomes_error_row(builder):
    cell = builder.grid([1], [0], ["greedy"], [0])[0]
    row = run_cell(cell)
    assert row["kind"] == "error"
    assert "positivity" in row["error"]


def test_unknown_algorithm_recorded(builder):
    cell = builder.grid([1], [2], ["quantum"], [0])[0]
    row = run_cell(cell)
    assert row["kind"] == "error"
    assert "quantum" in row["error"]


def test_failure_does_not_stop_sweep(builder, tmp_path):
    cells = builder.grid([1], [0, 2], ["greedy"], [0], strategy="log-boost")
    rows = builder.run(cells)
    assert [r["kind"] for r in rows] == ["error", "survived"]
    assert rows[1]["achieved_potential"] == 2
    assert rows[1]["nodes_spent"] > 0
    path = builder.write_csv(rows, tmp_path / "mixed.csv")
    assert [r["kind"] for r in read_rows(path)] == ["error", "survived"]


def test_semicolon_delimiter(config, tmp_path):
    config["csv"]["delimiter"] = ";"
    builder = SweepBuilder(config=config)
    with patch("src.buildSweepCSV.run_cell", side_effect=fake_row):
        out = builder.build([1], [2], ["greedy"], [0], tmp_path / "semi.csv")
    with open(out) as f:
        assert f.readline().strip() == ";".join(COLUMNS)


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        SweepBuilder(config_path=str(tmp_path / "missing.yaml"))


def test_cell_params_match_single_run(config):
    config["game"]["grid_side"] = 32768
    config["adversary"].update(c_ledger=3, column_cap_factor=2, level_copies=3)
    cell = SweepBuilder(config=config).grid([1], [6], ["greedy"], [0])[0]
    assert (cell["c_ledger"], cell["column_cap_factor"], cell["grid_side"]) == (3, 2, 32768)
    with patch("src.buildSweepCSV.run_strategy", side_effect=GridLocalError("stopped")) as mocked:
        row = run_cell(cell)
    assert row["error"] == "stopped"
    params = mocked.call_args[0][2]
    assert params == _adversary_params(config, None, None, None, None, None, None)
    assert params.ledger_constant == 3
