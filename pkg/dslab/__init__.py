"""
dslab
=====
Selection-expansion search lab: motion planners, novelty search and goal
exploration on small benchmark environments.

Copyright dslab 2026
Full MIT License can be found in `LICENSE` at the project root.
"""

from typing import Literal, NamedTuple, Optional

from ._config import ExperimentConfig, defaults_for
from .core import (
    ArchiveStore, KdIndex, OutcomeBounds, SamplePair, novelty_scores,
    run_loop, select_density_proportionate, select_goal_nearest
)
from .envs import Ballistic3D, SimpleMaze, simplemaze_v1
from .exceptions import (
    AbsentDataError, ArtifactError, ConfigError, DimensionMismatchError,
    DslabError, EmptyCollectionError, InvalidConfigValue, InvalidInputError,
    LayoutFileError, RunError, UnknownConfigKey
)
from .explorers import gep_generation, ns_generation, random_search_generation
from .metrics import ExpansionGrid, expansion_degradation
from .planners import EstPlanner, MpTree, RrtPlanner
from .policies import MlpPolicy, MutationSpec, Topology, polynomial_mutation
from .utils import Seed

__package__ = "dslab"
__title__ = "dslab"
__description__ = "Divergent search experiments in motion planning " \
                  "and policy search."
__license__ = "MIT"

ReleaseType = Optional[Literal["alpha", "beta", "candidate", "final", "dev"]]


class VersionInfo(NamedTuple):
    """Version of the dslab package."""

    major: int
    minor: int
    micro: int

    release_level: ReleaseType = None
    serial: int = 0

    def __repr__(self) -> str:
        return f"{self.major}.{self.minor}.{self.micro}" + (
            f"-{self.release_level}{self.serial}"
            * (self.release_level is not None)
        )


version_info = VersionInfo(0, 3, 0)
__version__ = repr(version_info)

__all__ = (
    "AbsentDataError", "ArchiveStore", "ArtifactError", "Ballistic3D",
    "ConfigError", "DimensionMismatchError", "DslabError",
    "EmptyCollectionError", "EstPlanner", "ExpansionGrid",
    "ExperimentConfig", "InvalidConfigValue", "InvalidInputError",
    "KdIndex", "LayoutFileError", "MlpPolicy", "MpTree", "MutationSpec",
    "OutcomeBounds", "RrtPlanner", "RunError", "SamplePair", "Seed",
    "SimpleMaze", "Topology", "UnknownConfigKey", "__package__",
    "__title__", "__version__", "defaults_for", "expansion_degradation",
    "gep_generation", "novelty_scores", "ns_generation",
    "polynomial_mutation", "random_search_generation", "run_loop",
    "select_density_proportionate", "select_goal_nearest", "simplemaze_v1"
)
