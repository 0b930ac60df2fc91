# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import re
from typing import List

import numpy as np

from ..exceptions import InvalidConfigValue

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


class Seed(int):
    """A run seed.

    Seeds are unsigned 64-bit integers. Every run owns exactly one random
    stream, created from its seed with :meth:`generator`.
    """
    _MAX_VALUE: int = 18446744073709551615
    _MIN_VALUE: int = 0

    def __init__(self, _):
        super().__init__()

        if self < self._MIN_VALUE:
            raise InvalidConfigValue(
                "seed value should be greater than or equal to 0.", "seeds"
            )

        if self > self._MAX_VALUE:
            raise InvalidConfigValue(
                "seed value should be less than"
                " or equal to 18446744073709551615.", "seeds"
            )

    @classmethod
    def from_string(cls, string: str) -> Seed:
        """Initialize a new Seed from a string.

        Parameters
        ----------
        string: :class:`str`
            The seed as a decimal string.
        """
        try:
            return cls(int(string))
        except ValueError as e:
            if isinstance(e, InvalidConfigValue):
                raise
            raise InvalidConfigValue(
                f"`{string}` is not a valid seed.", "seeds"
            ) from e

    def generator(self) -> np.random.Generator:
        """:class:`numpy.random.Generator`: The run's random stream."""
        return np.random.default_rng(int(self))


def parse_seeds(text: str) -> List[Seed]:
    """Parse a seed list.

    Accepts comma separated seeds and inclusive ``A..B`` ranges, e.g.
    ``1..3,10`` gives ``[1, 2, 3, 10]``.

    Parameters
    ----------
    text: :class:`str`
        Comma separated seeds and ``A..B`` ranges.

    Returns
    -------
    List[:class:`~dslab.utils.seed.Seed`]
        The seeds in the order given.

    Raises
    ------
    InvalidConfigValue
        A part is neither a seed nor a range, or a range is descending.
    """
    seeds: List[Seed] = []

    for part in filter(None, (p.strip() for p in text.split(","))):
        if match := _RANGE.match(part):
            low, high = int(match.group(1)), int(match.group(2))

            if high < low:
                raise InvalidConfigValue(
                    f"Seed range `{part}` is descending.", "seeds"
                )

            seeds.extend(Seed(s) for s in range(low, high + 1))
        else:
            seeds.append(Seed.from_string(part))

    return seeds


def format_seeds(seeds: List[Seed]) -> str:
    """Inverse of :func:`parse_seeds`; consecutive runs are folded into
    ``A..B`` ranges.
    """
    parts: List[str] = []
    i = 0

    while i < len(seeds):
        j = i
        while j + 1 < len(seeds) and seeds[j + 1] == seeds[j] + 1:
            j += 1

        parts.append(
            f"{seeds[i]}..{seeds[j]}" if j - i >= 2
            else ",".join(str(s) for s in seeds[i:j + 1])
        )
        i = j + 1

    return ",".join(parts)
