"""Hot graph kernels, compiled when available.

The Cython extension is used if it was built; otherwise, or when the
environment variable ``SGRAPH_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the numpy/scipy versions are used.  ``BACKEND`` names
the active one.
"""

import os

from . import _pykernels as python

if os.environ.get("SGRAPH_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

component_labels = _active.component_labels
kcore_mask = _active.kcore_mask
enumerate_s_masks = _active.enumerate_s_masks
mask_statistics = _active.mask_statistics

__all__ = ["BACKEND", "compiled", "python", "component_labels", "kcore_mask",
           "enumerate_s_masks", "mask_statistics"]
