"""Backend selection for the hot loops.

The compiled extension ``gwtoll._kernels`` is preferred. Setting the
environment variable ``GWTOLL_PURE=1`` (or a failed import) selects the
pure-Python twin. ``BACKEND`` names the active one.
"""
import os

from . import _purekernels as pure

try:
    from . import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("GWTOLL_PURE", "") not in ("1", "true", "yes"):
    _impl = compiled
    BACKEND = "compiled"
else:
    _impl = pure
    BACKEND = "python"

LEAF, OLDLEAF, PATH, OLDPATH = pure.LEAF, pure.OLDLEAF, pure.PATH, pure.OLDPATH

tree_arrays = _impl.tree_arrays
bfs_to_preorder = _impl.bfs_to_preorder
ind_rho = _impl.ind_rho
match_rho = _impl.match_rho
dom_rho = _impl.dom_rho
ind_envelope = _impl.ind_envelope
match_envelope = _impl.match_envelope
dom_envelope = _impl.dom_envelope
deletion_rounds = _impl.deletion_rounds

__all__ = [
    "BACKEND",
    "compiled",
    "pure",
    "tree_arrays",
    "bfs_to_preorder",
    "ind_rho",
    "match_rho",
    "dom_rho",
    "ind_envelope",
    "match_envelope",
    "dom_envelope",
    "deletion_rounds",
]
