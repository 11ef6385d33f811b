"""fqsl: a workbench for Sidon sets and additive bases in F_q[t]."""

__version__ = "0.1.0"

from . import _kernels

__all__ = ["__version__", "kernel_backend"]


def kernel_backend() -> str:
    """Name of the active kernel backend ("compiled" or "pure")."""
    return _kernels.backend_name()
