import numpy as np
import pytest

from coldplasma import _fallback
from coldplasma.experiments import gaussian_pulse, label_grid
from coldplasma.kernels import BACKENDS, DEFAULT_BACKEND, get_advance
from coldplasma.sweep import Sweep

needs_cython = pytest.mark.skipif("cython" not in BACKENDS,
                                  reason="compiled kernel not built")


def test_default_backend():
    assert DEFAULT_BACKEND in BACKENDS
    assert get_advance("python") is _fallback.advance
    with pytest.raises(ValueError):
        get_advance("fortran")


@needs_cython
def test_backends_agree_bitwise():
    f = gaussian_pulse(0.0, -0.9088, 4.0)
    grid = label_grid(18.0, 1e-2)
    runs = {}
    for name in ("python", "cython"):
        sw = Sweep(grid, f, 1e-3, backend=name)
        sw.step(15100)  # just past the first crossing near 15.02
        runs[name] = sw
    a, b = runs["python"], runs["cython"]
    assert np.array_equal(a.state, b.state)
    assert np.array_equal(a.status, b.status)
    assert np.array_equal(a.event_theta, b.event_theta, equal_nan=True)
    assert a.first_event is not None
