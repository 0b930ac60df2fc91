# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import __package__
from .telemetry import (
    ARCHIVE_FILE, CONFIG_FILE, DEGRADATION_HEADER, EXPANSION_FILE,
    EXPANSION_HEADER, MANIFEST_FILE, TREE_FILE, read_manifest, seed_dir,
    write_csv, write_manifest, write_seed_telemetry, write_text
)
from .. import __version__
from .._config import ExperimentConfig
from ..core.archive import ArchiveStore, OutcomeBounds
from ..envs.ballistic import ArmSpec, Ballistic3D
from ..envs.maze import SimpleMaze, load_maze, simplemaze_v1
from ..exceptions import AbsentDataError, ArtifactError, InvalidInputError
from ..explorers.gep import gep_generation, gep_init
from ..explorers.ns import ns_generation, ns_init
from ..explorers.random_search import random_search_generation
from ..metrics.degradation import (
    DegradationResult, expansion_degradation, pool_degradation
)
from ..metrics.expansion import ExpansionGrid
from ..metrics.history import GenerationRecord, RunTelemetry
from ..planners.est import EstPlanner
from ..planners.rrt import RrtPlanner
from ..planners.tree import MpTree
from ..policies.codec import read_archive, write_archive
from ..policies.mutation import MutationSpec
from ..utils.seed import Seed, format_seeds
from ..utils.tasks import SeedPool

if TYPE_CHECKING:
    from ..envs.base import Environment
    from ..envs.maze import MazeSpec
    from ..policies.mlp import Topology
    from ..utils.types import FloatArray


_log = logging.getLogger(__package__)

OUTPUT_ENV = "DSLAB_OUT"


def build_maze(config: ExperimentConfig) -> MazeSpec:
    horizon = config.n_timestep or 50

    if config.maze_file:
        return load_maze(config.maze_file, horizon)

    return simplemaze_v1(horizon)


def build_environment(config: ExperimentConfig) -> Environment:
    """The environment of a policy search config."""
    if config.environment == "ballistic3d":
        arm = ArmSpec(
            config.segment_lengths, config.joint_velocity_bound,
            config.gravity, config.control_dt, config.initial_angles
        )
        return Ballistic3D(arm, config.n_layers, config.n_neurons)

    return SimpleMaze(build_maze(config), config.n_layers, config.n_neurons)


def mutation_of(config: ExperimentConfig) -> MutationSpec:
    return MutationSpec(config.eta, config.p_mutation)


def outcome_bounds(config: ExperimentConfig) -> OutcomeBounds:
    """Bounds of the expansion grid and of goal sampling."""
    if config.is_motion_planning:
        return build_maze(config).bounds

    return build_environment(config).reachable_bounds()


def run_id_of(config: ExperimentConfig) -> str:
    return f"{config.algorithm}-{config.environment}-{config.config_hash[:10]}"


def resolve_output_dir(config: ExperimentConfig) -> Path:
    """``config.output_dir`` unless ``DSLAB_OUT`` is set."""
    override = os.environ.get(OUTPUT_ENV)

    if override:
        _log.warning(
            "%s overrides output_dir `%s` with `%s`",
            OUTPUT_ENV, config.output_dir, override
        )
        return Path(override)

    return Path(config.output_dir)


@dataclass(frozen=True)
class SeedJob:
    config: ExperimentConfig
    seed: Seed
    run_dir: str

    def __str__(self) -> str:
        config = self.config
        return f"{config.algorithm}/{config.environment} seed {self.seed}"


@dataclass(frozen=True)
class SeedResult:
    """What a worker sends back; everything else is on disk."""
    seed: int
    scores: Tuple[Tuple[int, float], ...]
    rollouts: int
    out_of_bounds: int
    wall_ms: float


class _Recorder:
    def __init__(self, job: SeedJob, bounds: OutcomeBounds, run_id: str):
        config = job.config
        self.grid = ExpansionGrid(bounds, config.g_expansion)
        self.telemetry = RunTelemetry(
            run_id, int(job.seed), config.log_selection
        )
        self.rollouts = 0
        self._clock = time.perf_counter()

    def select(self, generation: int, outcomes: Optional[FloatArray]):
        self.telemetry.record_selection(generation, outcomes)

    def close(
        self,
        generation: int,
        new_outcomes: FloatArray,
        archive_size: int,
        population_size: int,
        rollouts: int
    ):
        now = time.perf_counter()
        score = self.grid.update(new_outcomes)
        self.rollouts += rollouts

        self.telemetry.record(GenerationRecord(
            generation, score, archive_size, population_size, rollouts,
            (now - self._clock) * 1000
        ))
        self._clock = now

        _log.debug(
            "seed %i generation %i: score %.4f, archive %i",
            self.telemetry.seed, generation, score, archive_size
        )


def _run_planner(
    job: SeedJob, recorder: _Recorder, directory: Path
) -> Tuple[ArchiveStore, FloatArray]:
    config = job.config
    spec = build_maze(config)
    rng = job.seed.generator()

    if config.algorithm == "rrt":
        planner = RrtPlanner(spec, rng, config.control_steps)
    else:
        planner = EstPlanner(
            spec, rng, config.k, config.weight_mode, config.r_neigh,
            config.n_samples, config.control_steps
        )

    tree = MpTree(spec.start_point, config.n_update)
    recorder.close(0, tree.configs, 1, 1, 0)

    for it in range(1, config.n_sel_exp + 1):
        size = len(tree)
        planner.run(
            tree, 1, start=it - 1,
            on_select=lambda pair: recorder.select(it - 1, pair.outcome)
        )
        recorder.close(it, tree.configs[size:], len(tree), len(tree), 1)

    write_text(directory / TREE_FILE, tree.dump())
    return tree.store, tree.configs


def _run_ns(job, recorder, env, rng) -> Tuple[ArchiveStore, FloatArray]:
    config = job.config
    state = ns_init(env, config.n_selection, rng, n_update=config.n_update)
    outcomes = np.stack([p.outcome for p in state.population])
    recorder.close(0, outcomes, len(state.archive), config.n_selection,
                   config.n_selection)

    for g in range(1, config.n_generation + 1):
        ns_generation(
            state, env, mutation_of(config), config.n_selection,
            config.n_offspring, config.k, config.n_filter_archive, rng,
            config.p_expansion
        )
        recorder.select(g - 1, state.last_selected)
        new = np.asarray([p.outcome for p in state.offspring]).reshape(-1, 2)
        recorder.close(g, new, len(state.archive), len(state.population),
                       len(state.offspring))

    return state.archive, state.archive.outcomes


def _run_gep(job, recorder, env, rng) -> Tuple[ArchiveStore, FloatArray]:
    config = job.config
    mutation = mutation_of(config)
    state = gep_init(
        env, config.n_selection, mutation, rng, n_update=config.n_update
    )
    population = state.population
    recorder.close(0, population.outcomes, len(population), len(population),
                   len(population))

    for g in range(1, config.n_generation + 1):
        pairs = gep_generation(
            state, env, mutation, config.n_selection, rng,
            config.n_offspring, config.p_expansion
        )
        recorder.select(g - 1, state.last_selected)
        recorder.close(g, population.outcomes[len(population) - len(pairs):],
                       len(population), len(population), len(pairs))

    return population, population.outcomes


def _run_rs(job, recorder, env, rng) -> Tuple[ArchiveStore, FloatArray]:
    config = job.config
    batch = config.n_selection * config.n_offspring

    pairs = random_search_generation(env, None, config.n_selection, rng)
    outcomes: List[FloatArray] = [np.stack([p.outcome for p in pairs])]
    recorder.close(0, outcomes[0], len(pairs), len(pairs), len(pairs))
    next_id = len(pairs)

    for g in range(1, config.n_generation + 1):
        pairs = random_search_generation(
            env, None, batch, rng, first_id=next_id, generation=g
        )
        next_id += len(pairs)
        new = np.asarray([p.outcome for p in pairs]).reshape(-1, 2)
        outcomes.append(new)
        recorder.close(g, new, next_id, batch, len(pairs))

    # the sampled policies are independent; only the last batch is kept
    last = ArchiveStore(env.outcome_dim, n_update=config.n_update)
    last.extend(pairs)
    return last, np.concatenate(outcomes)


_EXPLORERS = {"ns": _run_ns, "gep": _run_gep, "rs": _run_rs}


def run_seed(job: SeedJob) -> SeedResult:
    """Run one seed and write its artifacts.

    Module level so it can be shipped to worker processes.
    """
    config = job.config
    started = time.perf_counter()
    directory = seed_dir(job.run_dir, job.seed)

    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactError(f"Could not create `{directory}`: {e}") from e

    run_id = Path(job.run_dir).name
    topology: Optional[Topology] = None

    if config.is_motion_planning:
        recorder = _Recorder(job, build_maze(config).bounds, run_id)
        store, outcomes = _run_planner(job, recorder, directory)
    else:
        env = build_environment(config)
        recorder = _Recorder(job, env.reachable_bounds(), run_id)
        store, outcomes = _EXPLORERS[config.algorithm](
            job, recorder, env, job.seed.generator()
        )
        topology = env.topology

    recorder.telemetry.out_of_bounds = recorder.grid.out_of_bounds
    write_seed_telemetry(directory, recorder.telemetry, outcomes)
    write_archive(directory / ARCHIVE_FILE, store, topology)

    wall_ms = (time.perf_counter() - started) * 1000
    _log.info("%s finished in %.0f ms", job, wall_ms)

    return SeedResult(
        int(job.seed), tuple(recorder.telemetry.scores), recorder.rollouts,
        recorder.grid.out_of_bounds, wall_ms
    )


def run_experiment(config: ExperimentConfig) -> Path:
    """Run every seed of ``config`` and write the run directory.

    Returns
    -------
    :class:`pathlib.Path`
        The run directory.

    Raises
    ------
    RunError
        A seed failed; the artifacts of the other seeds are kept.
    ArtifactError
        An artifact could not be written.
    """
    started = time.perf_counter()
    run_dir = resolve_output_dir(config) / run_id_of(config)

    try:
        run_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactError(f"Could not create `{run_dir}`: {e}") from e

    _log.info(
        "Running %s on %s for %i seeds into %s",
        config.algorithm, config.environment, len(config.seeds), run_dir
    )
    write_text(run_dir / CONFIG_FILE, config.to_text(harness=False))

    jobs = [SeedJob(config, seed, str(run_dir)) for seed in config.seeds]
    results = SeedPool(run_seed, config.workers).run(jobs)

    write_csv(run_dir / EXPANSION_FILE, EXPANSION_HEADER, (
        (run_dir.name, result.seed, generation, score)
        for result in results
        for generation, score in result.scores
    ))

    bounds = outcome_bounds(config)
    write_manifest(run_dir / MANIFEST_FILE, {
        "run_id": run_dir.name,
        "algorithm": config.algorithm,
        "environment": config.environment,
        "config_hash": config.config_hash,
        "version": __version__,
        "seeds": format_seeds(list(config.seeds)),
        "grid": {
            "resolution": config.g_expansion,
            "lower": list(bounds.lower),
            "upper": list(bounds.upper),
        },
        "rollouts": [r.rollouts for r in results],
        "out_of_bounds": [r.out_of_bounds for r in results],
        "wall_ms": (time.perf_counter() - started) * 1000,
    })

    _log.info("Run directory %s complete", run_dir)
    return run_dir


def run_degradation(
    run_dirs: Sequence[Union[str, Path]],
    out: Union[str, Path],
    *,
    seed: int = 0,
    n_policies_per_cell: int = 200,
    n_expansions_per_policy: int = 100
) -> DegradationResult:
    """Pool the expansion degradation over every seed archive of policy
    search runs and write ``degradation.csv`` to ``out``.

    The grid is the expansion grid of the first run's manifest.

    Raises
    ------
    InvalidInputError
        No run directory, a motion planning run, or runs on different
        environments.
    AbsentDataError
        A run lacks its config, manifest or archives.
    """
    if not run_dirs:
        raise InvalidInputError("At least one run directory is required.")

    rng = np.random.default_rng(seed)
    results = []
    grid = env = None

    for run_dir in map(Path, run_dirs):
        config = ExperimentConfig.from_text(_read(run_dir / CONFIG_FILE))

        if config.is_motion_planning:
            raise InvalidInputError(f"`{run_dir}` holds no policy archive.")

        if env is None:
            env = build_environment(config)
            manifest = read_manifest(run_dir / MANIFEST_FILE)
            grid = ExpansionGrid(
                OutcomeBounds(manifest["grid"]["lower"],
                              manifest["grid"]["upper"]),
                manifest["grid"]["resolution"]
            )
        elif config.environment != env.name:
            raise InvalidInputError(
                f"`{run_dir}` ran on {config.environment}, not {env.name}."
            )

        for s in config.seeds:
            path = seed_dir(run_dir, s) / ARCHIVE_FILE

            if not path.exists():
                raise AbsentDataError(f"Missing archive `{path}`.")

            loaded = read_archive(path, config.n_update)
            mutation = loaded.mutation or mutation_of(config)
            _log.info("Measuring degradation of %s", path)

            results.append(expansion_degradation(
                env, loaded.store, grid, mutation, rng,
                n_policies_per_cell, n_expansions_per_policy
            ))

    pooled = pool_degradation(results)
    write_csv(out, DEGRADATION_HEADER, pooled.rows())
    return pooled


def _read(path: Path) -> str:
    if not path.exists():
        raise AbsentDataError(f"Missing `{path}`.")

    return path.read_text()
