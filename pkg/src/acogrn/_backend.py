"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin. Both expose ``construct_orders``, ``circuit_sum`` and ``brute_force``.
"""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

DEFAULT = _compiled if _compiled is not None else _kernels_py


def get_kernels(name=None):
    """Return the kernel module called ``name``, or the default one."""
    if name is None:
        return DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {sorted(BACKENDS)}"
        ) from None


def available():
    return sorted(BACKENDS)
