"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``ISOSCHEMES_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels as python

compiled = None
if os.environ.get("ISOSCHEMES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python

BACKEND = _impl.BACKEND
components_mask = _impl.components_mask
gf2_rank = _impl.gf2_rank
hamiltonian_cycles = _impl.hamiltonian_cycles
balanced_separator = _impl.balanced_separator
compat_rows = _impl.compat_rows
