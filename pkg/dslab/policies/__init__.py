# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from .codec import (
    LoadedArchive, decode_policy, dump_archive, encode_policy, load_archive,
    read_archive, write_archive
)
from .mlp import MlpBatch, MlpPolicy, Topology, flatten, random_init, unflatten
from .mutation import (
    KeyedReplay, MutationSpec, draw_keys, expand_rows, mutate_keyed,
    polynomial_delta, polynomial_mutation
)

__all__ = (
    "KeyedReplay", "LoadedArchive", "MlpBatch", "MlpPolicy", "MutationSpec",
    "Topology", "decode_policy", "draw_keys", "dump_archive",
    "encode_policy", "expand_rows", "flatten", "load_archive",
    "mutate_keyed", "polynomial_delta", "polynomial_mutation", "random_init",
    "read_archive", "unflatten", "write_archive"
)
