"""Select the sampling kernels at import time.

The compiled ``_ckernels`` extension is preferred; the numpy module
``_pykernels`` is used when the extension is not built or when the
environment variable ``CONDENT_BACKEND=python`` is set.
"""

import os

from . import _pykernels

python_kernels = _pykernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("CONDENT_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
else:
    kernels = _pykernels

BACKEND = kernels.NAME


def available():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    if compiled_kernels is not None:
        names.insert(0, "cython")
    return names


def get(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return kernels
    if name == "python":
        return python_kernels
    if name == "cython":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not built")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")
