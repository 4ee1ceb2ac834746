"""Spectral analysis of AR(1) structural-change precision matrices."""

try:
    from ._arspec import *  # noqa: F401,F403
    from ._arspec import __doc__ as _core_doc  # noqa: F401
except ImportError:
    # Development layout: the extension sits on sys.path (e.g. the CMake
    # build directory) instead of inside the package.
    from _arspec import *  # noqa: F401,F403
