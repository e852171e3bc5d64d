"""Backend dispatch for the per-signal numerical kernels.

The compiled backend (``topogate._kernels_cy``, built from the bundled
.pyx) is preferred when it imports cleanly; the pure NumPy backend is the
fallback.  Set ``TOPOGATE_PURE_PYTHON=1`` in the environment before import
to force the fallback.  Both backends are bit-identical on every input, so
the choice only affects speed; ``benchmarks/bench_kernels.py`` measures the
difference.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _select():
    if os.environ.get("TOPOGATE_PURE_PYTHON", "") == "1":
        return _kernels_py
    try:
        from . import _kernels_cy
    except ImportError:
        return _kernels_py
    return _kernels_cy


_impl = _select()

BACKEND: str = _impl.BACKEND
sublevel_pairs = _impl.sublevel_pairs
tent_stack = _impl.tent_stack


def available_backends() -> dict[str, object]:
    """Importable backend modules by name, for tests and benchmarks."""
    backends: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels_cy
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels_cy
    return backends
