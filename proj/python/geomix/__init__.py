"""Random geometric graph walk laboratory: python surface over the C++ core."""

try:
    from ._geomix import *  # noqa: F401,F403
    from ._geomix import __doc__  # noqa: F401
except ImportError:  # built out-of-tree: module sits next to us on PYTHONPATH
    from _geomix import *  # noqa: F401,F403
