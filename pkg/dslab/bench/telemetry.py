# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

"""Run directory artifacts.

A run directory holds ``config.txt``, ``manifest.json`` and
``expansion.csv`` for all seeds, plus one ``seed-<seed>`` directory per
seed with ``generations.csv``, ``timing.csv``, ``history.csv``,
``outcomes.csv``, ``archive.bin`` and, for motion planners, ``tree.txt``.
Every file except ``timing.csv`` and ``manifest.json`` is a deterministic
function of the config and seed.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional, Tuple

from . import __package__
from ..exceptions import AbsentDataError, ArtifactError

try:
    import orjson
except (ModuleNotFoundError, ImportError):
    orjson = None

if TYPE_CHECKING:
    from typing import Sequence, Union

    from ..metrics.history import RunTelemetry
    from ..utils.types import FloatArray

    PathLike = Union[str, Path]


_log = logging.getLogger(__package__)

CONFIG_FILE = "config.txt"
MANIFEST_FILE = "manifest.json"
EXPANSION_FILE = "expansion.csv"
GENERATIONS_FILE = "generations.csv"
TIMING_FILE = "timing.csv"
HISTORY_FILE = "history.csv"
OUTCOMES_FILE = "outcomes.csv"
ARCHIVE_FILE = "archive.bin"
TREE_FILE = "tree.txt"

EXPANSION_HEADER = ("run_id", "seed", "generation", "score")
GENERATIONS_HEADER = (
    "generation", "score", "archive_size", "population_size", "rollouts"
)
HISTORY_HEADER = ("generation", "x", "y")
DEGRADATION_HEADER = (
    "cell_x", "cell_y", "mean_dist", "n_parents", "n_expansions"
)


def fmt(value: Any) -> str:
    """CSV representation; reals use 17 significant digits."""
    if isinstance(value, float):
        return format(value, ".17g")

    return str(value)


def seed_dir(run_dir: PathLike, seed: int) -> Path:
    return Path(run_dir) / f"seed-{seed}"


def write_csv(
    path: PathLike,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comment: Optional[str] = None
):
    """Write a headed CSV file.

    Raises
    ------
    ArtifactError
        The file could not be written.
    """
    try:
        with open(path, "w", newline="") as file:
            if comment:
                file.write(f"# {comment}\n")

            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([fmt(v) for v in row] for row in rows)
    except OSError as e:
        raise ArtifactError(f"Could not write `{path}`: {e}") from e


def read_csv(path: PathLike) -> Tuple[List[str], List[List[str]]]:
    """Header and rows of a CSV file; ``#`` lines are skipped.

    Raises
    ------
    AbsentDataError
        The file does not exist.
    """
    path = Path(path)

    if not path.exists():
        raise AbsentDataError(f"Missing data file `{path}`.")

    with open(path, newline="") as file:
        lines = [line for line in file if not line.startswith("#")]

    rows = list(csv.reader(lines))
    if not rows:
        raise AbsentDataError(f"`{path}` has no header.")

    return rows[0], rows[1:]


def write_text(path: PathLike, text: str):
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise ArtifactError(f"Could not write `{path}`: {e}") from e


def write_manifest(path: PathLike, manifest: Dict[str, Any]):
    """Write the manifest as indented JSON with sorted keys."""
    if orjson is not None:
        data = orjson.dumps(
            manifest, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
        )
    else:
        data = json.dumps(manifest, indent=2, sort_keys=True).encode()

    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise ArtifactError(f"Could not write `{path}`: {e}") from e


def read_manifest(path: PathLike) -> Dict[str, Any]:
    path = Path(path)

    if not path.exists():
        raise AbsentDataError(f"Missing manifest `{path}`.")

    return json.loads(path.read_text())


def write_seed_telemetry(
    directory: PathLike,
    telemetry: RunTelemetry,
    outcomes: FloatArray
):
    """Write the per-seed CSV files of a finished run."""
    directory = Path(directory)
    records = telemetry.records

    write_csv(directory / GENERATIONS_FILE, GENERATIONS_HEADER, (
        (r.generation, r.score, r.archive_size, r.population_size, r.rollouts)
        for r in records
    ))
    write_csv(
        directory / TIMING_FILE, ("generation", "wall_ms"),
        ((r.generation, r.wall_ms) for r in records)
    )

    if telemetry.log_selection:
        write_csv(directory / HISTORY_FILE, HISTORY_HEADER, (
            (generation, float(x), float(y))
            for generation, points in telemetry.selections
            for x, y in points
        ))

    write_csv(
        directory / OUTCOMES_FILE, ("x", "y"),
        ((float(x), float(y)) for x, y in outcomes)
    )
    _log.debug("Seed %i telemetry written to %s", telemetry.seed, directory)


def read_history(directory: PathLike) -> List[Tuple[int, float, float]]:
    _, rows = read_csv(Path(directory) / HISTORY_FILE)
    return [(int(g), float(x), float(y)) for g, x, y in rows]


def read_outcomes(directory: PathLike) -> List[Tuple[float, float]]:
    _, rows = read_csv(Path(directory) / OUTCOMES_FILE)
    return [(float(x), float(y)) for x, y in rows]
