"""Singular-value statistics of products of two mu-coupled complex Gaussian matrices.

Thin pybind11 bindings over the C++ core: finite-N determinantal kernels,
joint density, hard-edge limit, Monte Carlo sampling, and the linear-statistics
CLT.
"""

try:
    from muprod._core import *  # noqa: F401,F403  (installed wheel layout)
    from muprod._core import __doc__ as _core_doc  # noqa: F401
except ImportError:  # in-tree build: _core sits on PYTHONPATH next to the build dir
    from _core import *  # noqa: F401,F403
