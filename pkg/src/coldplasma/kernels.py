"""Backend selection for the batch RK4 sweep kernel.

The compiled extension is used when it imported successfully; otherwise the
numpy implementation is selected. Either can be requested explicitly by name.
"""
from . import _fallback

try:
    from . import _kernels
except ImportError:  # pragma: no cover - depends on the build
    _kernels = None

BACKENDS = {"python": _fallback.advance}
if _kernels is not None:
    BACKENDS["cython"] = _kernels.advance

DEFAULT_BACKEND = "cython" if "cython" in BACKENDS else "python"


def get_advance(backend=None):
    """Return the ``advance`` kernel for ``backend`` (``None``: default)."""
    name = DEFAULT_BACKEND if backend is None else backend
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {sorted(BACKENDS)}"
        ) from None
