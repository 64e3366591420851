"""Exception hierarchy. Each class carries the process exit code the CLI uses."""

from __future__ import annotations


class LayerdepError(Exception):
    exit_code = 3


class ModelError(LayerdepError):
    """The model document is malformed or violates a structural invariant."""

    exit_code = 1


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class AnalysisError(LayerdepError):
    """The analysis cannot be carried out at the requested scale or on this model."""

    exit_code = 2


class PathExplosionError(AnalysisError):
    pass


class UnmappedEndpointError(AnalysisError):
    pass


class UnsatisfiableRequirementError(AnalysisError):
    pass


class VariableCapError(AnalysisError):
    pass


class InvariantError(LayerdepError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 3
