"""geodex: exact index iteration, loop-space Morse counts, and common index
jumps for closed-geodesic configurations on spheres."""

__version__ = "0.1.0"

from ._kernels import backend_id

__all__ = ["backend_id", "__version__"]
