# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, NamedTuple, Sequence

import numpy as np

from . import __package__
from .telemetry import (
    EXPANSION_FILE, MANIFEST_FILE, read_csv, read_manifest, write_csv
)
from ..exceptions import (
    AbsentDataError, EmptyCollectionError, InvalidInputError
)

if TYPE_CHECKING:
    from typing import Any, Tuple, Union

    PathLike = Union[str, Path]


_log = logging.getLogger(__package__)

SUMMARY_FILE = "summary.csv"
ORDERING_FILE = "ordering.csv"
SUMMARY_HEADER = ("algorithm", "checkpoint", "mean", "std", "n_runs")
ORDERING_HEADER = ("checkpoint", "first", "second", "leader", "difference")

# Aggregated spread is the population standard deviation (ddof 0).
STD_NOTE = "std: population"


@dataclass
class RunCurves:
    """Expansion curves of one algorithm, pooled over run directories.

    Attributes
    ----------
    algorithm: :class:`str`
        The algorithm shared by the pooled runs.
    setting: Tuple
        Environment and expansion grid; only equal settings are comparable.
    scores: Dict[:class:`int`, Dict[:class:`int`, :class:`float`]]
        ``seed -> generation -> score``.
    """
    algorithm: str
    setting: Tuple[Any, ...]
    scores: Dict[int, Dict[int, float]] = field(default_factory=dict)

    def at(self, checkpoint: int) -> np.ndarray:
        """Score of every seed at ``checkpoint``.

        Raises
        ------
        AbsentDataError
            A seed did not reach ``checkpoint``.
        """
        try:
            return np.array([
                curve[checkpoint] for _, curve in sorted(self.scores.items())
            ])
        except KeyError:
            raise AbsentDataError(
                f"A {self.algorithm} seed has no score at {checkpoint}."
            ) from None


class SummaryRow(NamedTuple):
    algorithm: str
    checkpoint: int
    mean: float
    std: float
    n_runs: int


def _setting(manifest: Dict[str, Any]) -> Tuple[Any, ...]:
    grid = manifest["grid"]
    return (
        manifest["environment"], grid["resolution"],
        tuple(grid["lower"]), tuple(grid["upper"])
    )


def load_runs(run_dirs: Sequence[PathLike]) -> Dict[str, RunCurves]:
    """Read ``expansion.csv`` of every run directory, grouped by algorithm.

    Raises
    ------
    InvalidInputError
        The runs differ in environment or expansion grid.
    """
    if not run_dirs:
        raise EmptyCollectionError("No run directory to aggregate.")

    curves: Dict[str, RunCurves] = {}
    setting = None

    for run_dir in map(Path, run_dirs):
        manifest = read_manifest(run_dir / MANIFEST_FILE)
        this = _setting(manifest)

        if setting is None:
            setting = this
        elif this != setting:
            raise InvalidInputError(
                f"`{run_dir}` was measured on {this}, not {setting}."
            )

        run = curves.setdefault(
            manifest["algorithm"], RunCurves(manifest["algorithm"], this)
        )
        _, rows = read_csv(run_dir / EXPANSION_FILE)

        for _, seed, generation, score in rows:
            run.scores.setdefault(int(seed), {})[int(generation)] = float(score)

        _log.debug("Loaded %s from %s", manifest["algorithm"], run_dir)

    return curves


def summarize(
    curves: Dict[str, RunCurves], checkpoints: Sequence[int]
) -> List[SummaryRow]:
    """Mean and population std of the score at each checkpoint."""
    rows = []

    for algorithm in sorted(curves):
        for checkpoint in checkpoints:
            values = curves[algorithm].at(checkpoint)
            rows.append(SummaryRow(
                algorithm, checkpoint, float(np.mean(values)),
                float(np.std(values)), len(values)
            ))

    return rows


def ordering(rows: Sequence[SummaryRow]):
    """Pairwise comparison of algorithm means at each checkpoint.

    Yields ``(checkpoint, first, second, leader, difference)`` where
    ``difference`` is ``mean(first) - mean(second)``; the leader is
    ``tie`` when the means are equal.
    """
    by_checkpoint: Dict[int, List[SummaryRow]] = {}
    for row in rows:
        by_checkpoint.setdefault(row.checkpoint, []).append(row)

    for checkpoint in sorted(by_checkpoint):
        for a, b in combinations(by_checkpoint[checkpoint], 2):
            difference = a.mean - b.mean
            leader = (
                a.algorithm if difference > 0
                else b.algorithm if difference < 0
                else "tie"
            )
            yield checkpoint, a.algorithm, b.algorithm, leader, difference


def aggregate(
    run_dirs: Sequence[PathLike],
    checkpoints: Sequence[int],
    out_dir: PathLike
) -> List[SummaryRow]:
    """Write ``summary.csv`` and ``ordering.csv`` into ``out_dir``.

    Parameters
    ----------
    run_dirs: Sequence[Union[:class:`str`, :class:`pathlib.Path`]]
        Run directories written by :func:`~dslab.bench.runner.run_experiment`.
    checkpoints: Sequence[:class:`int`]
        Generations (iterations for planners) to summarise.
    out_dir: Union[:class:`str`, :class:`pathlib.Path`]
        Created when missing.

    Raises
    ------
    InvalidInputError
        Mismatched environments or grids, or no checkpoint.
    AbsentDataError
        A run lacks a file or a checkpoint.
    """
    if not checkpoints:
        raise InvalidInputError("At least one checkpoint is required.")

    rows = summarize(load_runs(run_dirs), sorted(set(checkpoints)))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / SUMMARY_FILE, SUMMARY_HEADER, rows, comment=STD_NOTE)
    write_csv(out_dir / ORDERING_FILE, ORDERING_HEADER, ordering(rows))

    _log.info("Summary of %i runs written to %s", len(run_dirs), out_dir)
    return rows
