"""Hot kernels with a compiled backend and a numpy fallback.

The Cython extension is used when it has been built, unless the environment
variable ``ZIGZAG_POWER_PURE_PYTHON`` is set to ``1``. ``backend`` is the
selected module; ``BACKEND`` names it.
"""

import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("ZIGZAG_POWER_PURE_PYTHON") != "1":
    backend = compiled_backend
else:
    backend = python_backend

BACKEND = backend.NAME


def statistics_matrix(counts, probs, cum, n):
    return backend.statistics_matrix(counts, probs, cum, n)


def compositions(n, k):
    return backend.compositions(n, k)
