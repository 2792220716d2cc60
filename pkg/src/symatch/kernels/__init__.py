"""Backend selection for hot kernels.

With numba available and ``SYMATCH_DISABLE_NUMBA`` unset, every kernel is the
compiled version from :mod:`loops`. Otherwise the numpy versions from
:mod:`vectorized` are used where they exist, and the remaining loop kernels
run as plain python.
"""
from .._jit import USE_NUMBA
from . import loops, vectorized

BACKEND = "numba" if USE_NUMBA else "numpy"

_LOOP_NAMES = (
    "rref_packed",
    "bp_minsum",
    "match_pairs",
    "blossom_pairs",
    "pair_any",
    "bfs_all_pairs",
    "dijkstra",
    "dijkstra_to",
    "bundle_uniform_bits",
    "bundle_uniform_qubits",
    "bundle_weighted",
    "min_logical_weight",
)


def backend_table(use_numba):
    """Map kernel name -> callable for the requested backend."""
    table = {}
    for name in _LOOP_NAMES:
        fn = getattr(loops, name)
        if use_numba:
            table[name] = fn
        elif hasattr(vectorized, name):
            table[name] = getattr(vectorized, name)
        else:
            table[name] = getattr(fn, "py_func", fn)
    return table


_active = backend_table(USE_NUMBA)
rref_packed = _active["rref_packed"]
bp_minsum = _active["bp_minsum"]
match_pairs = _active["match_pairs"]
blossom_pairs = _active["blossom_pairs"]
pair_any = _active["pair_any"]
bfs_all_pairs = _active["bfs_all_pairs"]
dijkstra = _active["dijkstra"]
dijkstra_to = _active["dijkstra_to"]
bundle_uniform_bits = _active["bundle_uniform_bits"]
bundle_uniform_qubits = _active["bundle_uniform_qubits"]
bundle_weighted = _active["bundle_weighted"]
min_logical_weight = _active["min_logical_weight"]
