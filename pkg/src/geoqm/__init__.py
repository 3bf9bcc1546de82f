"""Geometric quantum mechanics on complex projective space.

Frame functions, the operator/function correspondence, Monte Carlo
re-quantization, composite systems and entanglement measures.
"""

__version__ = "0.1.0"

from .linalg import ValidationError  # noqa: E402

__all__ = ["ValidationError", "__version__"]
