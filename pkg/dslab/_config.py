# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, List, Tuple

from .exceptions import ConfigError, InvalidConfigValue, UnknownConfigKey
from .utils.seed import Seed, format_seeds, parse_seeds
from .utils.types import MISSING, Applicable


MP_ALGORITHMS = ("rrt", "est")
DS_ALGORITHMS = ("ns", "gep", "rs")
ALGORITHMS = MP_ALGORITHMS + DS_ALGORITHMS
ENVIRONMENTS = ("simplemaze", "ballistic3d")
WEIGHT_MODES = ("knn", "radius")


def _bool(text: str) -> bool:
    lowered = text.strip().lower()

    if lowered in ("1", "true", "yes", "on"):
        return True

    if lowered in ("0", "false", "no", "off"):
        return False

    raise ValueError(f"`{text}` is not a boolean")


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, float):
        return repr(value)

    if isinstance(value, tuple):
        if value and isinstance(value[0], Seed):
            return format_seeds(list(value))

        return ",".join(repr(float(v)) for v in value)

    return str(value)


# Config key -> parser. Keys mirror the hyper-parameter symbols; the
# dataclass attribute is the lower-cased key.
KEYS: Dict[str, Callable[[str], Any]] = {
    "algorithm": str.strip,
    "environment": str.strip,
    "seeds": lambda text: tuple(parse_seeds(text)),
    "output_dir": str.strip,
    "workers": int,
    "log_selection": _bool,
    "maze_file": str.strip,
    "N_sel_exp": int,
    "R_neigh": float,
    "N_samples": int,
    "weight_mode": str.strip,
    "control_steps": int,
    "N_timestep": int,
    "N_selection": int,
    "N_layers": int,
    "N_neurons": int,
    "N_inputs": int,
    "N_outputs": int,
    "N_offspring": int,
    "N_generation": int,
    "p_expansion": float,
    "p_mutation": float,
    "eta": float,
    "k": int,
    "G_expansion": int,
    "N_filter_archive": int,
    "n_update": int,
    "segment_lengths": _floats,
    "joint_velocity_bound": float,
    "gravity": float,
    "control_dt": float,
    "initial_angles": _floats,
}

# Keys which do not change results.
_HARNESS_ONLY = ("output_dir", "workers")

_MP = dict(
    N_sel_exp=1000, G_expansion=4, n_update=10, control_steps=1
)
_EST = dict(R_neigh=0.2, N_samples=10, k=15, weight_mode="knn")

_DS = dict(
    N_layers=2, N_neurons=50, N_offspring=2, p_expansion=1.0,
    p_mutation=0.1, n_update=10
)
_DS_ENV = {
    "ballistic3d": dict(
        N_timestep=1, N_selection=1, N_inputs=5, N_outputs=5,
        N_generation=500, eta=2000.0, G_expansion=10,
        segment_lengths=(0.25, 0.25, 0.25, 0.25), joint_velocity_bound=1.0,
        gravity=9.81, control_dt=0.1,
        initial_angles=(0.0, math.pi / 4, -math.pi / 4, 0.0)
    ),
    "simplemaze": dict(
        N_timestep=50, N_selection=100, N_inputs=2, N_outputs=2,
        N_generation=1000, eta=15.0, G_expansion=4
    ),
}
_NS = {
    "ballistic3d": dict(k=15, N_filter_archive=10),
    "simplemaze": dict(k=15, N_filter_archive=6),
}


def defaults_for(algorithm: str, environment: str) -> Dict[str, Any]:
    """Hyper-parameter defaults of an (algorithm, environment) pair.

    Keys that do not apply to the pair are absent.

    Raises
    ------
    InvalidConfigValue
        Unknown algorithm or environment, or a pair that cannot run.
    """
    if algorithm not in ALGORITHMS:
        raise InvalidConfigValue(
            f"Unknown algorithm `{algorithm}`, expected one of {ALGORITHMS}.",
            "algorithm"
        )

    if environment not in ENVIRONMENTS:
        raise InvalidConfigValue(
            f"Unknown environment `{environment}`, "
            f"expected one of {ENVIRONMENTS}.",
            "environment"
        )

    if algorithm in MP_ALGORITHMS:
        if environment != "simplemaze":
            raise InvalidConfigValue(
                "Motion planners only run in the maze configuration space.",
                "environment"
            )

        return {**_MP, **(_EST if algorithm == "est" else {})}

    values = {**_DS, **_DS_ENV[environment]}
    if algorithm == "ns":
        values.update(_NS[environment])

    return values


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment.

    Hyper-parameters that do not apply to the (algorithm, environment)
    pair hold :data:`~dslab.utils.types.MISSING`. Build instances with
    :meth:`create` to get the defaults of the pair filled in.
    """
    algorithm: str
    environment: str
    seeds: Tuple[Seed, ...]
    output_dir: str = "runs"
    workers: int = 1
    log_selection: bool = True
    maze_file: Applicable[str] = MISSING
    n_sel_exp: Applicable[int] = MISSING
    r_neigh: Applicable[float] = MISSING
    n_samples: Applicable[int] = MISSING
    weight_mode: Applicable[str] = MISSING
    control_steps: Applicable[int] = MISSING
    n_timestep: Applicable[int] = MISSING
    n_selection: Applicable[int] = MISSING
    n_layers: Applicable[int] = MISSING
    n_neurons: Applicable[int] = MISSING
    n_inputs: Applicable[int] = MISSING
    n_outputs: Applicable[int] = MISSING
    n_offspring: Applicable[int] = MISSING
    n_generation: Applicable[int] = MISSING
    p_expansion: Applicable[float] = MISSING
    p_mutation: Applicable[float] = MISSING
    eta: Applicable[float] = MISSING
    k: Applicable[int] = MISSING
    g_expansion: Applicable[int] = MISSING
    n_filter_archive: Applicable[int] = MISSING
    n_update: Applicable[int] = MISSING
    segment_lengths: Applicable[Tuple[float, ...]] = MISSING
    joint_velocity_bound: Applicable[float] = MISSING
    gravity: Applicable[float] = MISSING
    control_dt: Applicable[float] = MISSING
    initial_angles: Applicable[Tuple[float, ...]] = MISSING

    def __post_init__(self):
        if not self.seeds:
            raise InvalidConfigValue("At least one seed is required.", "seeds")

        object.__setattr__(
            self, "seeds", tuple(Seed(int(s)) for s in self.seeds)
        )
        self._validate()

    @classmethod
    def create(
        cls, algorithm: str, environment: str, **values: Any
    ) -> ExperimentConfig:
        """Defaults of the pair, overridden by ``values`` given by config
        key.

        Raises
        ------
        UnknownConfigKey
            A key does not exist.
        InvalidConfigValue
            A key does not apply to the pair or its value is invalid.
        """
        defaults = defaults_for(algorithm, environment)
        merged: Dict[str, Any] = {}

        for key, value in values.items():
            if key not in KEYS or key in ("algorithm", "environment"):
                raise UnknownConfigKey(f"Unknown config key `{key}`.", key)

            applies = key in defaults or key not in _ALL_HYPER
            if key == "maze_file":
                applies = environment == "simplemaze"

            if not applies:
                raise InvalidConfigValue(
                    f"`{key}` does not apply to {algorithm} on "
                    f"{environment}.", key
                )

            merged[key] = value

        attrs = {
            key.lower(): value for key, value in {**defaults, **merged}.items()
        }
        return cls(algorithm, environment, **attrs)

    @classmethod
    def from_pairs(cls, pairs: List[Tuple[str, str]]) -> ExperimentConfig:
        """Parse ``(key, raw value)`` pairs; later pairs win."""
        raw: Dict[str, str] = {}

        for key, value in pairs:
            if key not in KEYS:
                raise UnknownConfigKey(f"Unknown config key `{key}`.", key)

            raw[key] = value

        for required in ("algorithm", "environment"):
            if required not in raw:
                raise ConfigError(f"`{required}` must be set.", required)

        values = {}
        for key, text in raw.items():
            try:
                values[key] = KEYS[key](text)
            except ConfigError:
                raise
            except ValueError as e:
                raise InvalidConfigValue(
                    f"Invalid value `{text}` for `{key}`: {e}", key
                ) from e

        algorithm = values.pop("algorithm")
        environment = values.pop("environment")
        values.setdefault("seeds", ())
        return cls.create(algorithm, environment, **values)

    @classmethod
    def from_text(cls, text: str) -> ExperimentConfig:
        return cls.from_pairs(parse_pairs(text))

    def items(self, *, harness: bool = True):
        """``(key, value)`` of every applicable key, in key order."""
        for key in KEYS:
            if not harness and key in _HARNESS_ONLY:
                continue

            value = getattr(self, key.lower())
            if value is not MISSING:
                yield key, value

    def to_text(self, *, harness: bool = True) -> str:
        return "".join(
            f"{key} = {_format(value)}\n"
            for key, value in self.items(harness=harness)
        )

    @property
    def config_hash(self) -> str:
        """Digest of every setting that can change results."""
        text = self.to_text(harness=False)
        return hashlib.sha256(text.encode()).hexdigest()

    @property
    def iterations(self) -> int:
        """Iterations (motion planners) or generations (policy search)."""
        if self.algorithm in MP_ALGORITHMS:
            return self.n_sel_exp

        return self.n_generation

    @property
    def is_motion_planning(self) -> bool:
        return self.algorithm in MP_ALGORITHMS

    def with_values(self, **values: Any) -> ExperimentConfig:
        """Copy with attributes replaced; validated again."""
        return replace(self, **values)

    def _validate(self):
        positive = (
            "workers", "n_sel_exp", "n_samples", "control_steps",
            "n_timestep", "n_selection", "n_layers", "n_neurons",
            "n_inputs", "n_outputs", "n_generation", "k", "g_expansion",
            "n_update"
        )
        for name in positive:
            value = getattr(self, name)
            if value is not MISSING and value < 1:
                raise InvalidConfigValue(
                    f"`{_key_of(name)}` must be positive (got {value}).",
                    _key_of(name)
                )

        for name in ("n_offspring", "n_filter_archive"):
            value = getattr(self, name)
            if value is not MISSING and value < 0:
                raise InvalidConfigValue(
                    f"`{_key_of(name)}` must not be negative.", _key_of(name)
                )

        for name in ("p_expansion", "p_mutation"):
            value = getattr(self, name)
            if value is not MISSING and not 0 <= value <= 1:
                raise InvalidConfigValue(
                    f"`{name}` must lie in [0, 1] (got {value}).", name
                )

        for name in ("eta", "r_neigh", "gravity", "joint_velocity_bound"):
            value = getattr(self, name)
            if value is not MISSING and not value > 0:
                raise InvalidConfigValue(
                    f"`{_key_of(name)}` must be positive.", _key_of(name)
                )

        if self.weight_mode not in (MISSING, *WEIGHT_MODES):
            raise InvalidConfigValue(
                f"`weight_mode` must be one of {WEIGHT_MODES}.", "weight_mode"
            )

        if self.environment == "ballistic3d" and self.n_timestep not in (
            MISSING, 1
        ):
            raise InvalidConfigValue(
                "The throw is a single control step.", "N_timestep"
            )

        expected_io = {"ballistic3d": 5, "simplemaze": 2}[self.environment]
        for name in ("n_inputs", "n_outputs"):
            value = getattr(self, name)
            if value is not MISSING and value != expected_io:
                raise InvalidConfigValue(
                    f"`{_key_of(name)}` is fixed to {expected_io} by "
                    f"{self.environment}.", _key_of(name)
                )


_KEY_OF_ATTR = {key.lower(): key for key in KEYS}
_ALL_HYPER = {
    key for table in (_MP, _EST, _DS, _NS["simplemaze"], *_DS_ENV.values())
    for key in table
}


def _key_of(attr: str) -> str:
    return _KEY_OF_ATTR[attr]


def parse_pairs(text: str) -> List[Tuple[str, str]]:
    """``(key, raw value)`` pairs of ``key = value`` lines; ``#`` starts a
    comment.
    """
    pairs = []

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()

        if not line:
            continue

        if "=" not in line:
            raise ConfigError(f"line {n}: expected `key = value`.")

        key, value = (part.strip() for part in line.split("=", 1))
        pairs.append((key, value))

    return pairs


def format_defaults(algorithm: str, environment: str) -> str:
    """:func:`defaults_for` as ``key = value`` lines in key order."""
    defaults = defaults_for(algorithm, environment)
    return "".join(
        f"{key} = {_format(defaults[key])}\n" for key in KEYS
        if key in defaults
    )
