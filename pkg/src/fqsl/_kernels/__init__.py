"""Hot enumeration kernels, with backend selection at import time.

The compiled Cython core is preferred when its extension module built; the
pure numpy twin is the fallback and the reference implementation.  Set
``FQSL_PURE=1`` to force the pure backend regardless.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("FQSL_PURE"):
    _backend = _pure
else:
    try:
        from . import _core as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _pure


def available_backends() -> dict[str, object]:
    out: dict[str, object] = {"pure": _pure}
    try:
        from . import _core

        out["compiled"] = _core
    except ImportError:
        pass
    return out


backend_name = _backend.backend_name
window_pair_sum = _backend.window_pair_sum
window_triple_sum = _backend.window_triple_sum
diff_hist = _backend.diff_hist
triple_hist = _backend.triple_hist
subset4_hist = _backend.subset4_hist
system_hist = _backend.system_hist
keyed_uniform = _backend.keyed_uniform
sample_window = _backend.sample_window
triple_weight_sum = _backend.triple_weight_sum
