"""Hot numerical kernels with a compiled core and a numpy fallback.

The compiled extension is used when it was built; set
``RESONATOR_METROLOGY_PURE_PYTHON=1`` to force the numpy versions. ``BACKEND``
names the active implementation.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("RESONATOR_METROLOGY_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

partial_trace = _active.partial_trace
spectral_fisher = _active.spectral_fisher
sld_eigenbasis = _active.sld_eigenbasis
wigner = _active.wigner

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "partial_trace",
    "spectral_fisher",
    "sld_eigenbasis",
    "wigner",
]
