"""Hypergraph product of a classical parity-check matrix with itself."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from hgpopt import gf2
from hgpopt.gf2 import BitMatrix


class ConstructionError(RuntimeError):
    """Internal consistency check failed while assembling a code."""


@dataclass(frozen=True, eq=False)
class HgpCode:
    h: BitMatrix
    hx: BitMatrix
    hz: BitMatrix
    rank_h: int
    rank_hx: int
    rank_hz: int
    _logicals: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.h.cols

    @property
    def m(self) -> int:
        return self.h.rows

    @property
    def num_qubits(self) -> int:
        return self.hx.cols

    @property
    def num_logical(self) -> int:
        return self.num_qubits - self.rank_hx - self.rank_hz

    @property
    def rate(self) -> float:
        return self.num_logical / self.num_qubits

    def logical_basis(self, kind: str) -> BitMatrix:
        """Representatives of nontrivial logicals.

        ``kind="x"`` gives ker(hz) modulo rowspace(hx); ``kind="z"`` gives
        ker(hx) modulo rowspace(hz).  Each has ``num_logical`` rows.
        """
        if kind not in self._logicals:
            if kind == "x":
                stab, other = self.hx, self.hz
            elif kind == "z":
                stab, other = self.hz, self.hx
            else:
                raise ValueError(f"kind must be 'x' or 'z', not {kind!r}")
            ker = gf2.kernel_basis(other)
            keep = gf2.independent_rows(stab, ker)
            basis = BitMatrix(int(keep.sum()), ker.cols, ker.data[keep])
            if basis.rows != self.num_logical:
                raise ConstructionError(f"found {basis.rows} logicals, expected {self.num_logical}")
            self._logicals[kind] = basis
        return self._logicals[kind]

    @cached_property
    def engine(self):
        from hgpopt.erasure import CorrectabilityEngine

        return CorrectabilityEngine.from_code(self)


def build_hgp(h: BitMatrix | np.ndarray) -> HgpCode:
    """HX = [H (x) I_n | I_m (x) H^T], HZ = [I_n (x) H | H^T (x) I_m].

    The blocks are assembled on dense arrays; :func:`gf2.kron` and
    :func:`gf2.hstack` compute the same thing and are cross-checked in tests.
    """
    if not isinstance(h, BitMatrix):
        h = BitMatrix.from_dense(h)
    if h.rows == 0 or h.cols == 0:
        raise ValueError("parity-check matrix must be nonempty")
    m, n = h.shape
    hd = h.to_dense()
    i_n, i_m = np.eye(n, dtype=np.uint8), np.eye(m, dtype=np.uint8)
    hx = BitMatrix.from_dense(np.hstack([np.kron(hd, i_n), np.kron(i_m, hd.T)]))
    hz = BitMatrix.from_dense(np.hstack([np.kron(i_n, hd), np.kron(hd.T, i_m)]))
    if not gf2.mul(hx, hz.transpose()).is_zero():
        raise ConstructionError("hx hz^T != 0")
    return HgpCode(h, hx, hz, gf2.rank(h), gf2.rank(hx), gf2.rank(hz))


def code_parameters(c: HgpCode) -> tuple[int, int]:
    k = c.num_qubits - gf2.rank(c.hx) - gf2.rank(c.hz)
    if k != c.num_logical:
        raise ConstructionError(f"recomputed K={k} differs from stored {c.num_logical}")
    return c.num_qubits, c.num_logical
