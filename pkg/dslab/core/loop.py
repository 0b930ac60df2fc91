# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, NamedTuple, Optional

import numpy as np

from . import __package__
from ..exceptions import EmptyCollectionError, InvalidInputError

if TYPE_CHECKING:
    from typing import Callable, Sequence

    from .archive import ArchiveStore, SamplePair
    from ..utils.types import FloatArray

    Selector = Callable[[ArchiveStore], SamplePair]
    Expander = Callable[[SamplePair], "Expansion"]
    Evaluator = Callable[["Expansion"], Optional[FloatArray]]
    Hook = Callable[[SamplePair], None]


_log = logging.getLogger(__package__)


class Expansion(NamedTuple):
    """A candidate created from a selected sample, not evaluated yet.

    Attributes
    ----------
    params: :class:`numpy.ndarray`
        Candidate parameters (a control for motion planners).
    parent: :class:`~dslab.core.archive.SamplePair`
        The selected sample.
    key: :class:`int`
        Seed of the expansion draw, ``0`` when not keyed.
    """
    params: FloatArray
    parent: SamplePair
    key: int = 0


def run_loop(
    selector: Selector,
    expander: Expander,
    evaluator: Evaluator,
    store: ArchiveStore,
    iterations: int,
    hooks: Sequence[Hook] = (),
    *,
    start: int = 0,
    on_select: Optional[Hook] = None
) -> ArchiveStore:
    """Run ``iterations`` rounds of select, expand, evaluate and insert.

    The evaluator returns ``None`` to discard a candidate (a blocked
    motion); the iteration is still consumed. New samples are tagged with
    the 1-based iteration number offset by ``start``. Each iteration
    closes a generation of the store's outcome index.

    Errors raised by the operators propagate unchanged; every sample
    inserted before the failure stays in ``store``.

    Parameters
    ----------
    selector: Callable[[:class:`ArchiveStore`], :class:`SamplePair`]
        Picks the sample to expand.
    expander: Callable[[:class:`SamplePair`], :class:`Expansion`]
        Creates a candidate from the selected sample.
    evaluator: Callable[[:class:`Expansion`], Optional[:class:`numpy.ndarray`]]
        Computes the outcome of a candidate.
    store: :class:`~dslab.core.archive.ArchiveStore`
        The archive, holding at least one sample.
    iterations: :class:`int`
        Number of rounds.
    hooks: Sequence[Callable[[:class:`SamplePair`], None]]
        Observers receiving every new sample.
    on_select: Optional[Callable[[:class:`SamplePair`], None]]
        Observer receiving every selected sample.

    Returns
    -------
    :class:`~dslab.core.archive.ArchiveStore`
        ``store``, updated in place.

    Raises
    ------
    EmptyCollectionError
        The store is empty.
    """  # noqa: E501
    if not store:
        raise EmptyCollectionError("The loop needs an initialised store.")

    if iterations < 0:
        raise InvalidInputError(
            f"Iteration count must be non-negative (got {iterations})."
        )

    for it in range(start + 1, start + iterations + 1):
        parent = selector(store)
        if on_select is not None:
            on_select(parent)

        candidate = expander(parent)
        outcome = evaluator(candidate)

        if outcome is not None:
            pair = store.append(
                np.asarray(candidate.params, dtype=np.float64),
                outcome,
                parent_id=parent.id,
                generation=it,
                key=candidate.key
            )

            for hook in hooks:
                hook(pair)

        store.end_generation()

    _log.debug(
        "Loop finished %i iterations with %i samples", iterations, len(store)
    )
    return store
