"""Token edit distance with a compiled kernel when available.

The Cython extension ``itnkit._editdist`` is used if it was built; otherwise
the pure-Python kernel is used.  Set ``ITNKIT_PURE_PYTHON=1`` to force the
fallback.  ``BACKEND`` names the kernel in use.
"""

from __future__ import annotations

import os

from . import _editdist_py

if os.environ.get("ITNKIT_PURE_PYTHON") == "1":
    _kernel = _editdist_py
else:
    try:
        from . import _editdist as _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = _editdist_py

BACKEND = "python" if _kernel is _editdist_py else "cython"
edit_distance = _kernel.edit_distance
python_edit_distance = _editdist_py.edit_distance

__all__ = ["BACKEND", "edit_distance", "python_edit_distance"]
