"""Dense density-matrix tools for mixed-state quantum information."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Bipartition,
    DensityMatrix,
    Operator,
    apply_unitary,
    eig_hermitian,
    entropy,
    expectation,
    partial_trace,
    partial_transpose,
    qubit_cap,
    tensor,
)
from .errors import (  # noqa: E402
    ArgumentError,
    DomainError,
    MixqError,
    ResourceError,
    StateFileError,
    UnsupportedError,
)
