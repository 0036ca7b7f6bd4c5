"""Rainbow matchings in edge-coloured graphs.

A library for finding rainbow matchings under minimum-colour-degree
conditions, edge-decomposing bounded-monochromatic-degree graphs into
floor(t*n/2) rainbow matchings, and testing both against brute-force oracles
on seeded or exhaustively enumerated instances.
"""

from .adapters import (
    Adapter,
    adapter_absorb,
    adapter_from_parallel_pairs,
    adapter_union,
    check_adapter,
    verify_adapter,
)
from .decompose import (
    Decomposition,
    cover_lower_bound,
    decompose,
    sharpness_instance,
    verify_decomposition,
)
from .errors import (
    EcgFormatError,
    HallViolation,
    InternalInvariantError,
    PreconditionError,
    UnsatisfiableSpec,
)
from .extend import (
    ExtensionResult,
    bipartite_extend,
    extend_dispatch,
    find_rainbow_matching,
    general_extend,
    rainbow_matching,
    rainbow_matching_bipartite,
    size_bound,
)
from .genlab import (
    GenSpec,
    TrialReport,
    exhaustive_check,
    generate,
    run_trial,
    sweep_specs,
)
from .graphs import (
    EdgeColouredGraph,
    Matching,
    format_ecg,
    is_rainbow_matching,
    parse_ecg,
    read_ecg,
    write_ecg,
)
from .oracle import (
    BipartiteAssignment,
    hall_violator,
    max_bipartite_matching,
    max_rainbow_matching_exact,
)

__version__ = "0.1.0"

__all__ = [
    "Adapter",
    "BipartiteAssignment",
    "Decomposition",
    "EcgFormatError",
    "EdgeColouredGraph",
    "ExtensionResult",
    "GenSpec",
    "HallViolation",
    "InternalInvariantError",
    "Matching",
    "PreconditionError",
    "TrialReport",
    "UnsatisfiableSpec",
    "adapter_absorb",
    "adapter_from_parallel_pairs",
    "adapter_union",
    "bipartite_extend",
    "check_adapter",
    "cover_lower_bound",
    "decompose",
    "exhaustive_check",
    "extend_dispatch",
    "find_rainbow_matching",
    "format_ecg",
    "general_extend",
    "generate",
    "hall_violator",
    "is_rainbow_matching",
    "max_bipartite_matching",
    "max_rainbow_matching_exact",
    "parse_ecg",
    "rainbow_matching",
    "rainbow_matching_bipartite",
    "read_ecg",
    "run_trial",
    "sharpness_instance",
    "size_bound",
    "sweep_specs",
    "verify_adapter",
    "verify_decomposition",
    "write_ecg",
]
