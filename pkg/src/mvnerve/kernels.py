"""Kernel selection: the compiled extension when built, else the Python twin."""

import os

from . import _kernels_py

try:
    if os.environ.get("MVNERVE_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

#: Largest prime the compiled kernel accepts (products must fit in int64).
COMPILED_PRIME_LIMIT = 2**31

BACKEND = "cython" if _compiled is not None else "python"


def rref_mod_p(a, p):
    """In-place RREF of a C-contiguous int64 array mod prime ``p``."""
    if _compiled is not None and p < COMPILED_PRIME_LIMIT:
        return _compiled.rref_mod_p(a, p)
    return _kernels_py.rref_mod_p(a, p)
