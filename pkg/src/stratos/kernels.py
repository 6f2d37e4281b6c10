"""Backend selection for the strategy-product kernels.

The compiled extension is used when it imports; setting
``STRATOS_PURE_PYTHON=1`` forces the pure-Python implementation. Both take
and return the same Python-level values: factors are lists of int bitsets.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("STRATOS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"


def _words(bits: int, nw: int) -> np.ndarray:
    return np.frombuffer(bits.to_bytes(8 * nw, "little"), dtype="<u8").astype(np.uint64)


def _pack(factors, base, good, n_bits):
    nw = max(1, (n_bits + 63) // 64)
    width = max((len(f) for f in factors), default=0)
    fac = np.zeros((len(factors), max(width, 1), nw), dtype=np.uint64)
    for i, f in enumerate(factors):
        for j, b in enumerate(f):
            fac[i, j] = _words(b, nw)
    radix = np.array([len(f) for f in factors], dtype=np.int64)
    return fac, radix, _words(base, nw), _words(good & ((1 << (64 * nw)) - 1), nw)


def _use_compiled(backend):
    if backend is None:
        return _ckernels is not None
    if backend == "compiled" and _ckernels is None:
        raise RuntimeError("compiled kernels are not built")
    return backend == "compiled"


def first_forcing(factors, base: int, good: int, n_bits: int, backend=None):
    if _use_compiled(backend):
        return _ckernels.first_forcing(*_pack(factors, base, good, n_bits))
    return _pykernels.first_forcing(factors, base, good)


def scan(factors, base: int, good: int, weights, utils, n_bits: int, backend=None) -> dict:
    """Per-combination statistics as lists; see :func:`stratos._pykernels.scan`."""
    if _use_compiled(backend):
        w = np.ascontiguousarray(weights, dtype=np.float64)
        u = np.ascontiguousarray(utils, dtype=np.float64)
        res = _ckernels.scan(*_pack(factors, base, good, n_bits), w, u)
        return {k: v.tolist() for k, v in res.items()}
    return _pykernels.scan(factors, base, good, list(weights), list(utils))


def potentials(factors, base: int):
    return _pykernels.potentials(factors, base)


def space_size(factors) -> int:
    return math.prod(len(f) for f in factors)
