"""
Module to run a parameter sweep of lower-bound matches and collect one CSV row per grid point.
The grid is the cartesian product of T, kappa, algorithm and seed; rows keep grid order
whether the cells run in-process or across worker processes.
"""

import concurrent.futures
import csv
import itertools
import logging
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import yaml

from .adversary import AdversaryParams, run_oblivious_lb, run_strategy
from .errors import GridLocalError
from .refAlgos import get_algorithm

logger = logging.getLogger(__name__)

COLUMNS = [
    "index", "T", "kappa", "L0", "L1", "n_budget", "algorithm", "seed", "strategy",
    "kind", "nodes_spent", "achieved_potential", "wallclock", "win_rate", "error",
]


def run_cell(cell: Dict[str, Any]) -> Dict[str, Any]:
    """
    Play the match (or the oblivious trial batch) of one grid point.

    Failures are folded into the row so that one bad point never stops the sweep.
    """
    row = {key: cell.get(key, "") for key in COLUMNS}
    row.update({"kind": "", "nodes_spent": "", "achieved_potential": "", "win_rate": "", "error": ""})
    started = time.perf_counter()
    try:
        params = AdversaryParams(
            T=cell["T"], n_budget=cell["n_budget"], kappa=cell["kappa"],
            L0=cell["L0"], L1=cell["L1"], c_ledger=cell.get("c_ledger"), trials=cell["trials"],
            grid_side=cell.get("grid_side", 65536), column_cap_factor=cell.get("column_cap_factor", 4),
            level_copies=cell.get("level_copies", 2),
        )
        algorithm = get_algorithm(cell["algorithm"])
        if cell["strategy"] == "full-oblivious":
            stats = run_oblivious_lb(algorithm, params, cell["trials"], cell["seed"])
            row["kind"] = max(stats.kinds, key=stats.kinds.get) if stats.kinds else ""
            row["win_rate"] = f"{stats.win_rate:.4f}"
            if stats.best is not None:
                _, transcript = stats.best
                row["nodes_spent"] = transcript.header["spent"]
                row["achieved_potential"] = transcript.peak_potential
        else:
            cert, transcript = run_strategy(
                cell["strategy"], algorithm, params, cell["seed"], Fraction(cell["theta"]),
            )
            row["kind"] = cert.kind.value
            row["nodes_spent"] = transcript.header["spent"]
            row["achieved_potential"] = transcript.peak_potential
    except GridLocalError as e:
        logger.warning(f"sweep point {cell['index']} failed: {e}")
        row["kind"] = "error"
        row["error"] = str(e)
    row["wallclock"] = f"{time.perf_counter() - started:.3f}"
    return row


class SweepBuilder:
    """Class to run a sweep grid and write its summary CSV."""

    def __init__(self, config: Optional[Dict[str, Any]] = None, config_path: Optional[str] = None):
        """
        Args:
            config (Optional[Dict[str, Any]]): Parsed configuration; loaded from config_path if None
            config_path (Optional[str]): Path to the configuration file.
                                       If None, will use config/config.yaml in the project root.
        """
        self.project_root = self._find_project_root()
        self.config_path = config_path or str(self.project_root / "config" / "config.yaml")
        self.config = config if config is not None else self._load_config()
        self.delimiter = self.config.get("csv", {}).get("delimiter", ",")

    def _find_project_root(self) -> Path:
        """Directory holding config/, falling back to the working directory."""
        for directory in (Path(__file__).resolve().parent.parent, Path.cwd()):
            if (directory / "config").exists():
                return directory
        return Path.cwd()

    def _load_config(self) -> Dict[str, Any]:
        """
        Load the sweep configuration from config_path.

        Returns:
            Dict[str, Any]: Configuration dictionary (empty for an empty file)

        Raises:
            FileNotFoundError: If the configuration file does not exist
        """
        try:
            with open(self.config_path, "r") as file:
                return yaml.safe_load(file) or {}
        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file not found at: {self.config_path}")

    def get_output_path(self, name: str) -> Path:
        """
        Default CSV path of a sweep.

        Args:
            name (str): Stem of the file, usually the strategy name

        Returns:
            Path: data/output/<name><sweep_suffix> under the project root
        """
        directories = self.config.get("directories", {})
        suffix = self.config.get("paths", {}).get("sweep_suffix", "-sweep.csv")
        out_dir = self.project_root / directories.get("data", "data") / directories.get("output", "output")
        return out_dir / f"{name}{suffix}"

    def grid(self, Ts: Iterable[int], kappas: Iterable[int], algorithms: Iterable[str],
             seeds: Iterable[int], strategy: str = "full-det", theta: str = "0") -> List[Dict[str, Any]]:
        """
        Expand the ranges into sweep cells, in (T, kappa, algorithm, seed) order.

        L0, L1, budget, trials, the ledger constant, the column cap, the grid side and
        the copies per level come from the config sections, as for a single run.
        """
        game = self.config.get("game", {})
        adversary = self.config.get("adversary", {})
        cells = []
        for index, (T, kappa, algorithm, seed) in enumerate(itertools.product(Ts, kappas, algorithms, seeds)):
            cells.append({
                "index": index, "T": T, "kappa": kappa,
                "L0": adversary.get("L0", 64), "L1": adversary.get("L1", 4096),
                "n_budget": game.get("budget", 500000), "trials": adversary.get("trials", 1),
                "c_ledger": adversary.get("c_ledger"), "grid_side": game.get("grid_side", 65536),
                "column_cap_factor": adversary.get("column_cap_factor", 4),
                "level_copies": adversary.get("level_copies", 2),
                "algorithm": algorithm, "seed": seed, "strategy": strategy, "theta": theta,
            })
        return cells

    def run(self, cells: List[Dict[str, Any]], workers: int = 1) -> List[Dict[str, Any]]:
        """
        Run every cell and return its CSV row.

        Args:
            cells (List[Dict[str, Any]]): Cells from grid()
            workers (int): Size of the process pool; 1 runs in this process

        Returns:
            List[Dict[str, Any]]: One row per cell, in cell order
        """
        if workers <= 1:
            return [run_cell(cell) for cell in cells]
        rows: List[Optional[Dict[str, Any]]] = [None] * len(cells)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_cell, cell): i for i, cell in enumerate(cells)}
            for future in concurrent.futures.as_completed(futures):
                rows[futures[future]] = future.result()
        return [row for row in rows if row is not None]

    def write_csv(self, rows: List[Dict[str, Any]], path: Path) -> Path:
        """
        Write the rows under the COLUMNS header, creating parent directories.

        Returns:
            Path: The written file
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=COLUMNS, delimiter=self.delimiter)
            writer.writeheader()
            writer.writerows(rows)
        logger.info(f"wrote {len(rows)} sweep rows to {path}")
        return path

    def build(self, Ts: Iterable[int], kappas: Iterable[int], algorithms: Iterable[str],
              seeds: Iterable[int], out: Path, strategy: str = "full-det", workers: int = 1) -> Path:
        """Expand the grid, play it and write the CSV to out."""
        cells = self.grid(Ts, kappas, algorithms, seeds, strategy)
        return self.write_csv(self.run(cells, workers), out)
