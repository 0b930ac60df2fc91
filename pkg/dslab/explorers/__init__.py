# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .gep import GepState, gep_generation, gep_init
from .ns import NsState, ns_generation, ns_init
from .offspring import Offspring, breed
from .random_search import random_search_generation

__all__ = (
    "GepState", "NsState", "Offspring", "breed", "gep_generation",
    "gep_init", "ns_generation", "ns_init", "random_search_generation"
)
