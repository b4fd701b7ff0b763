"""
Command-line front end of the grid lab: run matches, validate parameter ledgers,
verify transcripts and sweep parameter grids.

Exit codes: 0 success, 1 verification failure or invalid configuration,
2 usage error, 3 budget exhausted.
"""
import logging
import os
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
import yaml
from dotenv import load_dotenv
from typing_extensions import Annotated

from .adversary import (
    STRATEGY_NAMES,
    AdversaryParams,
    params_from_header,
    replay_match,
    run_oblivious_lb,
    run_strategy,
    validate_params,
)
from .buildSweepCSV import SweepBuilder
from .errors import GridLocalError
from .harness import CertificateKind, Transcript
from .refAlgos import backdoor_enabled, get_algorithm
from .verifyTranscript import compare_labels, verify_transcript

logger = logging.getLogger(__name__)

CONFIG_ENV = "GRIDLOCAL_CONFIG"
EXIT_FAILED = 1
EXIT_BUDGET = 3


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from config.yaml, or from the file GRIDLOCAL_CONFIG names.

    Returns:
        Dict[str, Any]: Configuration dictionary
    """
    load_dotenv()
    project_root = Path(__file__).parent.parent
    path = Path(config_path or os.getenv(CONFIG_ENV) or project_root / "config" / "config.yaml")
    try:
        with open(path, "r") as f:
            return yaml.safe_load(f) or {}
    except Exception as e:
        logger.error(f"Error loading config: {e}")
        raise


def parse_theta(value: str) -> Fraction:
    """
    Parse a slope given as dy/dx (or a bare integer).

    Raises:
        typer.BadParameter: If the text is not an integer ratio with dx > 0
    """
    dy, _, dx = value.partition("/")
    try:
        num, den = int(dy), int(dx or 1)
    except ValueError:
        raise typer.BadParameter(f"expected dy/dx, got {value!r}")
    if den <= 0:
        raise typer.BadParameter(f"dx must be positive, got {den}")
    return Fraction(num, den)


def parse_range(value: str) -> List[int]:
    """'1,2,5' or '2..5' (inclusive); an empty string is the empty range."""
    value = value.strip()
    if not value:
        return []
    try:
        if ".." in value:
            lo, hi = value.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in value.split(",")]
    except ValueError:
        raise typer.BadParameter(f"expected a list like 1,2 or a range like 2..5, got {value!r}")


def _strategy_name(value: str) -> str:
    if value not in STRATEGY_NAMES:
        raise typer.BadParameter(f"{value!r} is not one of {', '.join(STRATEGY_NAMES)}")
    return value


def _pick(flag: Any, section: Dict[str, Any], key: str, default: Any) -> Any:
    return flag if flag is not None else section.get(key, default)


app = typer.Typer(help="Online-LOCAL grid coloring lab.", add_completion=False)


@app.callback()
def main(
    ctx: typer.Context,
    config_path: Annotated[
        Optional[str],
        typer.Option("--config", help="Configuration file (default config/config.yaml)."),
    ] = None,
):
    try:
        config = load_config(config_path)
    except (OSError, yaml.YAMLError) as e:
        typer.echo(f"invalid configuration: {e}", err=True)
        raise typer.Exit(EXIT_FAILED)
    level = config.get("logging", {}).get("level", "INFO")
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.INFO))
    ctx.obj = config


def _adversary_params(config: Dict[str, Any], T, kappa, L0, L1, budget, trials, copies=None) -> AdversaryParams:
    game = config.get("game", {})
    adversary = config.get("adversary", {})
    return AdversaryParams(
        T=_pick(T, game, "T", 1),
        n_budget=_pick(budget, game, "budget", 500000),
        kappa=_pick(kappa, adversary, "kappa", 6),
        L0=_pick(L0, adversary, "L0", 64),
        L1=_pick(L1, adversary, "L1", 4096),
        c_ledger=adversary.get("c_ledger"),
        trials=_pick(trials, adversary, "trials", 1),
        grid_side=game.get("grid_side", 65536),
        column_cap_factor=adversary.get("column_cap_factor", 4),
        level_copies=_pick(copies, adversary, "level_copies", 2),
    )


def _transcript_path(config: Dict[str, Any], out: Optional[str], name: str) -> Path:
    if out:
        return Path(out)
    directories = config.get("directories", {})
    suffix = config.get("paths", {}).get("transcript_suffix", ".jsonl")
    return Path(directories.get("data", "data")) / directories.get("output", "output") / f"{name}{suffix}"


def _verify_file(path: Path, replay: bool) -> List[str]:
    _, errors = verify_transcript(path)
    if errors or not replay:
        return errors
    transcript = Transcript.read(path)
    try:
        algorithm = get_algorithm(transcript.header["algorithm"])
        replayed = replay_match(transcript, algorithm)
    except (GridLocalError, KeyError) as e:
        return [f"replay failed: {e}"]
    return compare_labels(list(transcript.events), list(replayed.events))


@app.command()
def run(
    ctx: typer.Context,
    algo: Annotated[str, typer.Option("--algo", help="greedy, parity, hash or oracle.")],
    strategy: Annotated[str, typer.Option("--strategy", callback=_strategy_name)] = "full-det",
    T: Annotated[Optional[int], typer.Option("--T", help="Locality radius.")] = None,
    kappa: Annotated[Optional[int], typer.Option("--kappa")] = None,
    L0: Annotated[Optional[int], typer.Option("--L0")] = None,
    L1: Annotated[Optional[int], typer.Option("--L1")] = None,
    budget: Annotated[Optional[int], typer.Option("--budget", help="Node budget n.")] = None,
    theta: Annotated[str, typer.Option("--theta", help="Slope as dy/dx.")] = "0/1",
    trials: Annotated[Optional[int], typer.Option("--trials")] = None,
    copies: Annotated[Optional[int], typer.Option("--copies", help="Copies per slope-boost level (oblivious).")] = None,
    seed: Annotated[int, typer.Option("--seed")] = 0,
    out: Annotated[Optional[str], typer.Option("--out", help="Transcript JSONL path.")] = None,
    verify: Annotated[bool, typer.Option("--verify/--no-verify", help="Re-check the transcript after the run.")] = False,
):
    """Play one match (or a batch of oblivious trials) and write its transcript and one-row summary CSV."""
    config = ctx.obj
    slope = parse_theta(theta)
    params = _adversary_params(config, T, kappa, L0, L1, budget, trials, copies)
    report = validate_params(params)
    if not report.valid:
        for line in report.lines():
            typer.echo(line, err=True)
        raise typer.Exit(EXIT_FAILED)
    run_config = {
        "strategy": strategy, "algorithm": algo, "T": params.T, "kappa": params.kappa,
        "L0": params.L0, "L1": params.L1, "n_budget": params.n_budget,
        "theta": f"{slope.numerator}/{slope.denominator}", "trials": params.trials,
        "level_copies": params.level_copies, "seed": seed,
    }
    started = time.perf_counter()
    win_rate = ""
    no_wins = False
    try:
        algorithm = get_algorithm(algo)
        backdoor = backdoor_enabled()
        if strategy == "full-oblivious":
            stats = run_oblivious_lb(algorithm, params, params.trials, seed, backdoor=backdoor)
            typer.echo(f"oblivious: {stats.wins}/{stats.trials} wins, win rate {stats.win_rate:.3f}")
            no_wins = stats.best is None
            cert, transcript = stats.best or stats.last
            win_rate = f"{stats.win_rate:.4f}"
        else:
            cert, transcript = run_strategy(strategy, algorithm, params, seed, slope, backdoor, run_config)
    except GridLocalError as e:
        typer.echo(f"match aborted: {e}", err=True)
        raise typer.Exit(EXIT_FAILED)

    path = _transcript_path(config, out, f"{strategy}-{algo}-T{params.T}-s{seed}")
    transcript.write(path)
    summary = {
        "index": 0, "T": params.T, "kappa": params.kappa, "L0": params.L0, "L1": params.L1,
        "n_budget": params.n_budget, "algorithm": algo, "seed": seed, "strategy": strategy,
        "kind": cert.kind.value, "nodes_spent": transcript.header["spent"],
        "achieved_potential": transcript.peak_potential,
        "wallclock": f"{time.perf_counter() - started:.3f}", "win_rate": win_rate, "error": "",
    }
    if no_wins:
        # the batch has no single match to report; the transcript is the last trial's
        summary.update(kind=CertificateKind.SURVIVED.value, nodes_spent="", achieved_potential="")
    suffix = config.get("paths", {}).get("summary_suffix", "-summary.csv")
    SweepBuilder(config).write_csv([summary], path.with_name(f"{path.stem}{suffix}"))
    typer.echo(f"{cert.kind.value} nodes={transcript.header['spent']} peak|p|={transcript.peak_potential} "
               f"transcript={path}")
    if cert.detail:
        typer.echo(cert.detail)
    if verify:
        errors = _verify_file(path, replay=True)
        for error in errors:
            typer.echo(error, err=True)
        if errors:
            raise typer.Exit(EXIT_FAILED)
        typer.echo("transcript verified")
    if cert.kind == CertificateKind.BUDGET_EXHAUSTED:
        raise typer.Exit(EXIT_BUDGET)


@app.command("verify")
def verify_command(
    transcript: Annotated[Path, typer.Argument(dir_okay=False, help="Transcript JSONL file.")],
    replay: Annotated[bool, typer.Option("--replay/--no-replay",
                                         help="Also re-run the match and compare the label sequence.")] = True,
):
    """Re-check a transcript independently of the code that produced it."""
    errors = _verify_file(transcript, replay)
    for error in errors:
        typer.echo(error, err=True)
    if errors:
        raise typer.Exit(EXIT_FAILED)
    typer.echo("transcript verified")


@app.command()
def sweep(
    ctx: typer.Context,
    T: Annotated[str, typer.Option("--T", help="T values, e.g. 1,2 or 1..3.")] = "1",
    kappa: Annotated[str, typer.Option("--kappa")] = "2..5",
    algos: Annotated[str, typer.Option("--algo")] = "greedy,parity,hash",
    seeds: Annotated[str, typer.Option("--seed")] = "0",
    strategy: Annotated[str, typer.Option("--strategy", callback=_strategy_name)] = "full-det",
    workers: Annotated[int, typer.Option("--workers")] = 1,
    out: Annotated[Optional[str], typer.Option("--out", help="CSV path.")] = None,
):
    """Run the cartesian grid (T, kappa, algorithm, seed) and write one CSV row per point."""
    builder = SweepBuilder(ctx.obj)
    names = [a.strip() for a in algos.split(",") if a.strip()]
    path = Path(out) if out else builder.get_output_path(strategy)
    builder.build(parse_range(T), parse_range(kappa), names, parse_range(seeds), path, strategy, workers)
    typer.echo(f"sweep written to {path}")


@app.command()
def validate(
    ctx: typer.Context,
    T: Annotated[Optional[int], typer.Option("--T")] = None,
    kappa: Annotated[Optional[int], typer.Option("--kappa")] = None,
    L0: Annotated[Optional[int], typer.Option("--L0")] = None,
    L1: Annotated[Optional[int], typer.Option("--L1")] = None,
    budget: Annotated[Optional[int], typer.Option("--budget")] = None,
    transcript: Annotated[Optional[Path], typer.Option(
        "--transcript", exists=True, dir_okay=False,
        help="Take the parameters from a transcript header instead.")] = None,
):
    """Print the parameter ledger and its regime."""
    if transcript:
        params = params_from_header(Transcript.read(transcript).header)
    else:
        params = _adversary_params(ctx.obj, T, kappa, L0, L1, budget, None)
    report = validate_params(params)
    for line in report.lines():
        typer.echo(line)
    if not report.valid:
        raise typer.Exit(EXIT_FAILED)


if __name__ == "__main__":
    app()
