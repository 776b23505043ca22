"""Backend selection for the hot kernels.

The compiled extension is preferred when present; REQCUT_BACKEND=python or
=compiled forces a choice (the latter raises if the extension is missing).
Both backends produce bit-identical output, so this is a speed knob only.
"""

import os

from . import _kernels_py

_requested = os.environ.get("REQCUT_BACKEND", "auto")
if _requested not in ("auto", "python", "compiled"):
    raise ImportError(f"REQCUT_BACKEND must be auto, python or compiled, got {_requested!r}")

_compiled = None
if _requested in ("auto", "compiled"):
    try:
        from . import _speedups as _compiled
    except ImportError:
        _compiled = None

if _requested == "compiled" and _compiled is None:
    raise ImportError("REQCUT_BACKEND=compiled but reqcut._speedups is not built")

impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "compiled" if _compiled is not None else "python"


def available_backends():
    names = ["python"]
    if _compiled is not None or _try_import_compiled():
        names.append("compiled")
    return names


def _try_import_compiled():
    try:
        from . import _speedups  # noqa: F401
        return True
    except ImportError:
        return False


def get_backend(name):
    """Fetch a backend module by name, independent of the active selection."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _speedups
        return _speedups
    raise ValueError(f"unknown backend {name!r}")


splitmix64 = impl.splitmix64
stream_value = impl.stream_value
unit_interval = impl.unit_interval
threshold_draws = impl.threshold_draws
component_labels = impl.component_labels
count_group_components = impl.count_group_components
pair_distances_unweighted = impl.pair_distances_unweighted


def derive_seed(seed, *indices):
    """Fold indices into independent 64-bit stream seeds."""
    s = seed & 0xFFFFFFFFFFFFFFFF
    for i in indices:
        s = stream_value(s, i)
    return s
