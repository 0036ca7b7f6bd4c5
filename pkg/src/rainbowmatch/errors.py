"""Exception types shared across the package."""

from __future__ import annotations


class EcgFormatError(ValueError):
    """Malformed .ecg text or graph/decomposition JSON."""


class PreconditionError(ValueError):
    """A stated hypothesis of an operation does not hold for the input.

    The message names the failed inequality or the offending vertex.
    """


class InternalInvariantError(RuntimeError):
    """A state the algorithm's correctness argument rules out was reached.

    This signals a bug in the implementation, never invalid input.
    """


class UnsatisfiableSpec(ValueError):
    """A generator spec that cannot be realized (e.g. k >= n)."""


class HallViolation(RuntimeError):
    """A colour class that cannot be spread over the available matchings.

    Carries the certificate: a set of class edges whose joint neighbourhood
    (parts they could extend) is smaller than the set itself.  Only reachable
    for monochromatic-degree budgets below the guaranteed threshold.
    """

    def __init__(self, colour, class_edges, violator_edges, part_indices):
        self.colour = colour
        self.class_edges = list(class_edges)
        self.violator_edges = list(violator_edges)
        self.part_indices = sorted(part_indices)
        super().__init__(
            f"colour class {colour}: {len(self.violator_edges)} edges compete "
            f"for {len(self.part_indices)} compatible matchings"
        )
