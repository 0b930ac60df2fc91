# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .est import EstPlanner, est_iteration, run_est
from .rrt import RrtPlanner, rrt_iteration, run_rrt
from .tree import MpTree, parse_tree_dump, propagate

__all__ = (
    "EstPlanner", "MpTree", "RrtPlanner", "est_iteration", "parse_tree_dump",
    "propagate", "rrt_iteration", "run_est", "run_rrt"
)
