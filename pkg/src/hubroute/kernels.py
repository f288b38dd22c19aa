"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twins are used. Set ``HUBROUTE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from hubroute import _pykernels

BACKEND = "python"

if os.environ.get("HUBROUTE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from hubroute import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
    else:
        BACKEND = "cython"
else:
    _impl = _pykernels

bfs_tree = _impl.bfs_tree
bfs_dist = _impl.bfs_dist
component_labels = _impl.component_labels
distance_summary = _impl.distance_summary
route_to_target = _impl.route_to_target

__all__ = [
    "BACKEND",
    "bfs_tree",
    "bfs_dist",
    "component_labels",
    "distance_summary",
    "route_to_target",
]
