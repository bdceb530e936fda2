"""Blicket-detector causal induction benchmark.

Thin wrapper over the C++ core. All dataset and prediction payloads are JSONL
strings in the same schema the CLI reads and writes.
"""

from ._blicket import (
    __version__,
    acyclicity,
    default_config,
    evaluate,
    generate,
    label_query,
    solve,
)

__all__ = [
    "__version__",
    "acyclicity",
    "default_config",
    "evaluate",
    "generate",
    "label_query",
    "solve",
]
