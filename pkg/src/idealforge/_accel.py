"""Numba switch.

Set ``IDEALFORGE_NUMBA=0`` to run every kernel through its pure Python/numpy
fallback. When numba is missing the fallback is used automatically.
"""

import os
import types

_flag = os.environ.get("IDEALFORGE_NUMBA", "1").strip().lower()
_wanted = _flag not in ("0", "false", "no", "off")

try:
    if not _wanted:
        raise ImportError("disabled by IDEALFORGE_NUMBA")
    from numba import njit as _njit

    USE_NUMBA = True
except ImportError:
    _njit = None
    USE_NUMBA = False


def jit(func):
    """Compile ``func`` with ``njit(cache=True)`` when numba is active."""
    if USE_NUMBA:
        return _njit(cache=True)(func)
    return func


def pure_twins(namespace: dict) -> types.SimpleNamespace:
    """Plain-Python copies of the jitted functions in ``namespace``.

    The copies call each other rather than the compiled dispatchers, so
    running one never triggers a JIT compile. Meant for inputs too small to
    repay a cold compile.
    """
    env = dict(namespace)
    copies = {}
    for name, obj in namespace.items():
        py = getattr(obj, "py_func", None)
        if py is not None:
            copies[name] = types.FunctionType(py.__code__, env, name, py.__defaults__, py.__closure__)
    env.update(copies)
    return types.SimpleNamespace(**copies)


def threads() -> int:
    """Worker cap from ``IDEALFORGE_THREADS`` (default: all cores)."""
    raw = os.environ.get("IDEALFORGE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
