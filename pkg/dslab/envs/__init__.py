# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .ballistic import (
    ArmSpec, Ballistic3D, ballistic_rollout, forward_kinematics, jacobian,
    reachable_bounds, throw
)
from .base import Environment, Trajectory
from .maze import (
    CellRanks, MazeSpec, SimpleMaze, load_maze, maze_rollout, maze_step,
    maze_step_checked, parse_layout, parse_ranks, segments_intersect,
    simplemaze_v1
)

__all__ = (
    "ArmSpec", "Ballistic3D", "CellRanks", "Environment", "MazeSpec",
    "SimpleMaze", "Trajectory", "ballistic_rollout", "forward_kinematics",
    "jacobian", "load_maze", "maze_rollout", "maze_step",
    "maze_step_checked", "parse_layout", "parse_ranks", "reachable_bounds",
    "segments_intersect", "simplemaze_v1", "throw"
)
