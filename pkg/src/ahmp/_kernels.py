"""Kernel backend dispatch.

Set AHMP_BACKEND=numpy to force the pure-numpy path; AHMP_BACKEND=numba
requires numba.  Unset, numba is used when importable.  Both backends expose
the same functions with the same semantics; benchmarks/backend_bench.py
compares their throughput.
"""
from __future__ import annotations

import os

_choice = os.environ.get("AHMP_BACKEND", "").strip().lower()

if _choice == "numpy":
    from . import _kernels_numpy as _impl
elif _choice == "numba":
    from . import _kernels_numba as _impl
elif _choice == "":
    try:
        from . import _kernels_numba as _impl
    except ImportError:
        from . import _kernels_numpy as _impl
else:
    raise RuntimeError(f"AHMP_BACKEND must be 'numpy' or 'numba', got {_choice!r}")

BACKEND_NAME = _impl.BACKEND_NAME
N_FRAMES = _impl.N_FRAMES
N_PROBES = _impl.N_PROBES

fk_frames = _impl.fk_frames
probe_points = _impl.probe_points
configs_free = _impl.configs_free
signed_clearances = _impl.signed_clearances
weighted_dists = _impl.weighted_dists
k_nearest = _impl.k_nearest
segment_free = _impl.segment_free
segments_free = _impl.segments_free
astar_csr = _impl.astar_csr
