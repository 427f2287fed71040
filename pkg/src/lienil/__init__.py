"""lienil: Lie nilpotency indices of modular group algebras over GF(p).

Computes the lower and upper Lie nilpotency indices of KG (G a finite
p-group, K = GF(p)) both by brute-force Lie power chains and by the closed
form over the dimension subgroup profile, and cross-checks the classical
containments and bounds on a built-in catalog of small p-groups.
"""

from ._kernels import backend_name
from .errors import (
    InputError,
    InternalInvariantError,
    LienilError,
    PresentationError,
    ResourceLimitError,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "InputError",
    "InternalInvariantError",
    "LienilError",
    "PresentationError",
    "ResourceLimitError",
    "__version__",
]
