"""Sparse mixture-density estimation from contaminated samples."""

try:
    from ._csde import *  # noqa: F401,F403  (installed wheel layout)
    from ._csde import __version__  # noqa: F401
except ImportError:  # in-tree build: the module sits on PYTHONPATH
    from _csde import *  # noqa: F401,F403
    from _csde import __version__  # noqa: F401
