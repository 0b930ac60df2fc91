# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.
from typing import Optional


class DslabError(Exception):
    """Base exception class for all dslab errors"""


class InvalidInputError(DslabError, ValueError):
    """Exception which gets raised when an operation receives input which
    violates its preconditions.
    """


class DimensionMismatchError(InvalidInputError):
    """A vector or matrix does not have the dimension which the receiving
    structure declared.
    """

    @classmethod
    def from_sizes(cls, what: str, expected: int, got: int):
        """Create an instance by description.

        Parameters
        ----------
        what : :class:`str`
            The name of the mismatching quantity.
        expected : :class:`int`
            The dimension that was declared.
        got : :class:`int`
            The dimension that was received.
        """
        return cls(f"{what} must have dimension {expected} (got {got}).")


class EmptyCollectionError(InvalidInputError):
    """An operation which needs at least one element received an empty
    candidate list, store or index.
    """


class AbsentDataError(DslabError, LookupError):
    """Exception raised when data that an operation reads was never
    captured, e.g. selection history of a run with selection logging
    disabled or a missing CSV file.
    """


class ConfigError(DslabError):
    """Base class for exceptions related to experiment configuration.

    Attributes
    ----------
    key: Optional[:class:`str`]
        The offending configuration key.
    """

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message)


class UnknownConfigKey(ConfigError, KeyError):
    """A config file or flag named a key that does not exist."""

    def __str__(self) -> str:
        return self.args[0]


class InvalidConfigValue(ConfigError, ValueError):
    """A config key received a value that could not be parsed or that is
    out of its allowed range.
    """


class LayoutFileError(DslabError, ValueError):
    """Exception raised when a maze layout or rank sidecar file is
    malformed.

    Attributes
    ----------
    line: Optional[:class:`int`]
        The 1-based line number of the faulty line.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line

        if line is not None:
            message = f"line {line}: {message}"

        super().__init__(message)


class RunError(DslabError):
    """Exception raised when a single seeded run failed.

    Attributes
    ----------
    seed: Optional[:class:`int`]
        The seed of the failed run.
    """

    def __init__(self, message: str, seed: Optional[int] = None):
        self.seed = seed
        super().__init__(message)


class ArtifactError(DslabError, OSError):
    """Exception raised when a run artifact could not be written."""
