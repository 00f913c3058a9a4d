"""Backend selection for the numerical kernels.

The compiled extension is used when importable; set ``BUBBLELAB_KERNELS=python``
to force the pure-Python fallback (the test suite runs both).
"""
import os

from . import _pykernels

STATUS_END = _pykernels.STATUS_END
STATUS_ZERO = _pykernels.STATUS_ZERO
STATUS_UNDERFLOW = _pykernels.STATUS_UNDERFLOW
STATUS_MAX_STEPS = _pykernels.STATUS_MAX_STEPS

_impl = _pykernels
BACKEND = "python"
if os.environ.get("BUBBLELAB_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

integrate_radial = _impl.integrate_radial
hermite_eval = _impl.hermite_eval
power_moment = _impl.power_moment


def use_backend(name):
    """Switch kernels at runtime (``"python"`` or ``"cython"``); returns the old name."""
    global _impl, BACKEND, integrate_radial, hermite_eval, power_moment
    old = BACKEND
    if name == "python":
        impl = _pykernels
    elif name == "cython":
        from . import _ckernels as impl
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    _impl, BACKEND = impl, name
    integrate_radial = impl.integrate_radial
    hermite_eval = impl.hermite_eval
    power_moment = impl.power_moment
    return old
