"""Hypergraph product codes: construction, erasure-channel failure rates, and code search."""

import os

# the bundled TBB is too old for numba; OpenMP avoids a warning on every run
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

from hgpopt.erasure import CostEstimate, Erasure, estimate_failure_rate, is_correctable, sweep_curve
from hgpopt.gf2 import BitMatrix
from hgpopt.hgp import HgpCode, build_hgp, code_parameters
from hgpopt.tanner import SwapAction, TannerState, apply_swap, binary_matrix, read_alist, write_alist

__all__ = [
    "BitMatrix",
    "CostEstimate",
    "Erasure",
    "HgpCode",
    "SwapAction",
    "TannerState",
    "apply_swap",
    "binary_matrix",
    "build_hgp",
    "code_parameters",
    "estimate_failure_rate",
    "is_correctable",
    "read_alist",
    "sweep_curve",
    "write_alist",
]
