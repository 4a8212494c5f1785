"""Erasure sampling, maximum-likelihood correctability, and Monte Carlo failure rates.

An erasure E is uncorrectable when some vector supported on E lies in
ker(HX) but not rowspace(HZ), or in ker(HZ) but not rowspace(HX).

Three implementations of that test live here:

* :func:`is_correctable` works from four ranks of column-restricted matrices;
* :func:`is_correctable_bruteforce` enumerates every vector supported on E;
* :class:`CorrectabilityEngine` is the compiled kernel used by the estimator.
  It checks ``rank([A; L][:, E]) == rank(A[:, E])``, where ``L`` spans the
  logicals that detect nontrivial elements of ``ker A``.  Before eliminating
  it peels erased qubits that are the only erased qubit on some check, since
  no kernel vector supported on E can touch them.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numba
import numpy as np
from llvmlite import ir
from numba.extending import intrinsic

from hgpopt import gf2
from hgpopt.gf2 import BitMatrix

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Erasure:
    num_qubits: int
    support: tuple[int, ...]

    def __post_init__(self):
        s = self.support
        if any(i < 0 or i >= self.num_qubits for i in s):
            raise IndexError(f"erasure index out of range for {self.num_qubits} qubits")
        if len(set(s)) != len(s):
            raise ValueError("duplicate erasure index")

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> Erasure:
        return cls(len(mask), tuple(int(i) for i in np.flatnonzero(mask)))

    def mask(self) -> np.ndarray:
        out = np.zeros(self.num_qubits, dtype=bool)
        out[list(self.support)] = True
        return out

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class CostEstimate:
    failures: int
    trials: int
    erasure_prob: float

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def std_error(self) -> float:
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.trials)

    def clamped_rate(self) -> float:
        """Rate with zero failures replaced by half a failure."""
        return max(self.rate, 1.0 / (2 * self.trials))

    def to_dict(self) -> dict:
        return {
            "p": self.erasure_prob,
            "trials": self.trials,
            "failures": self.failures,
            "rate": self.rate,
            "std_error": self.std_error,
        }


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary ints/bytes/strings."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, bytes):
            h.update(b"b" + len(part).to_bytes(8, "little") + part)
        else:
            text = str(part).encode()
            h.update(b"s" + len(text).to_bytes(8, "little") + text)
    return int.from_bytes(h.digest(), "little")


def sample_erasure(num_qubits: int, p: float, rng: np.random.Generator) -> Erasure:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    return Erasure.from_mask(rng.random(num_qubits) < p)


# reference criteria -------------------------------------------------------------


def _check_erasure(code, e: Erasure) -> np.ndarray:
    if e.num_qubits != code.num_qubits:
        raise IndexError(f"erasure is over {e.num_qubits} qubits, code has {code.num_qubits}")
    return np.array(sorted(e.support), dtype=np.int64)


def is_correctable(code, e: Erasure) -> bool:
    """Four-rank form of the criterion."""
    inside = _check_erasure(code, e)
    outside = np.setdiff1d(np.arange(code.num_qubits), inside)
    size = inside.size
    hx_in, hz_in = gf2.select_columns(code.hx, inside), gf2.select_columns(code.hz, inside)
    hx_out, hz_out = gf2.select_columns(code.hx, outside), gf2.select_columns(code.hz, outside)
    z_ok = size - gf2.rank(hx_in) == code.rank_hz - gf2.rank(hz_out)
    x_ok = size - gf2.rank(hz_in) == code.rank_hx - gf2.rank(hx_out)
    return z_ok and x_ok


def _in_rowspace(stab: BitMatrix, stab_rank: int, v: np.ndarray) -> bool:
    return gf2.rank(gf2.vstack(stab, BitMatrix.from_dense(v[None, :]))) == stab_rank


def is_correctable_bruteforce(code, e: Erasure, limit: int = 20) -> bool:
    """Enumerate all 2^|E| vectors supported on the erasure."""
    inside = _check_erasure(code, e)
    size = inside.size
    if size > limit:
        raise EnumerationLimitError(f"|E| = {size} exceeds enumeration limit {limit}")
    if size == 0:
        return True
    coeffs = ((np.arange(1, 2**size, dtype=np.int64)[:, None] >> np.arange(size)) & 1).astype(np.int64)
    hx, hz = code.hx.to_dense().astype(np.int64), code.hz.to_dense().astype(np.int64)
    for check, stab, stab_rank in ((hx, code.hz, code.rank_hz), (hz, code.hx, code.rank_hx)):
        synd = (coeffs @ check[:, inside].T) % 2
        for row in coeffs[~synd.any(axis=1)]:
            v = np.zeros(code.num_qubits, dtype=np.uint8)
            v[inside] = row
            if not _in_rowspace(stab, stab_rank, v):
                return False
    return True


# compiled engine ----------------------------------------------------------------


@intrinsic
def _cttz(typingctx, x):
    def codegen(context, builder, signature, args):
        return builder.cttz(args[0], ir.Constant(ir.IntType(1), 1))

    return x(x), codegen


@numba.njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def _trial_key(master, trial):
    return _mix64(master ^ _mix64(np.uint64(trial) + _GOLDEN))


@numba.njit(cache=True)
def _fill_erasure(num_qubits, p, key, mask):
    """Counter-based Bernoulli(p) draws; qubit j uses hash(key, j)."""
    count = 0
    for j in range(num_qubits):
        u = (_mix64(key + np.uint64(j + 1) * _GOLDEN) >> np.uint64(11)) * _INV53
        hit = u < p
        mask[j] = hit
        if hit:
            count += 1
    return count


@numba.njit(cache=True)
def _condition_fails(erased, support, q_ptr, q_idx, c_ptr, c_idx, cols, nchk, peel):
    """True when a logical fits on the erased qubits (one of the two CSS sides)."""
    nw = cols.shape[1]
    alive = erased.copy()
    core_size = support.shape[0]
    if peel:
        cnt = np.zeros(nchk, dtype=np.int32)
        for q in support:
            for t in range(q_ptr[q], q_ptr[q + 1]):
                cnt[q_idx[t]] += 1
        stack = np.empty(nchk, dtype=np.int64)
        top = 0
        for c in range(nchk):
            if cnt[c] == 1:
                stack[top] = c
                top += 1
        while top > 0:
            top -= 1
            c = stack[top]
            if cnt[c] != 1:
                continue
            for t in range(c_ptr[c], c_ptr[c + 1]):
                q = c_idx[t]
                if alive[q]:
                    alive[q] = False
                    core_size -= 1
                    for s in range(q_ptr[q], q_ptr[q + 1]):
                        c2 = q_idx[s]
                        cnt[c2] -= 1
                        if cnt[c2] == 1:
                            stack[top] = c2
                            top += 1
                    break
        if core_size == 0:
            return False
    owner = np.full(nchk, -1, dtype=np.int64)
    basis = np.empty((min(core_size, nchk), nw), dtype=np.uint64)
    size = 0
    v = np.empty(nw, dtype=np.uint64)
    for q in support:
        if not alive[q]:
            continue
        for k in range(nw):
            v[k] = cols[q, k]
        k = 0
        while True:
            while k < nw and v[k] == 0:
                k += 1
            if k == nw:
                break
            b = k * 64 + _cttz(v[k])
            if b >= nchk:
                return True
            o = owner[b]
            if o < 0:
                for j in range(k, nw):
                    basis[size, j] = v[j]
                owner[b] = size
                size += 1
                break
            for j in range(k, nw):
                v[j] ^= basis[o, j]
    return False


@numba.njit(cache=True)
def _single_trial(num_qubits, p, key, peel, a_qp, a_qi, a_cp, a_ci, a_cols, a_n, b_qp, b_qi, b_cp, b_ci, b_cols, b_n):
    mask = np.empty(num_qubits, dtype=np.bool_)
    count = _fill_erasure(num_qubits, p, key, mask)
    support = np.empty(count, dtype=np.int64)
    i = 0
    for j in range(num_qubits):
        if mask[j]:
            support[i] = j
            i += 1
    if count == 0:
        return False
    if _condition_fails(mask, support, a_qp, a_qi, a_cp, a_ci, a_cols, a_n, peel):
        return True
    return _condition_fails(mask, support, b_qp, b_qi, b_cp, b_ci, b_cols, b_n, peel)


@numba.njit(cache=True, parallel=True)
def _run_trials(num_qubits, p, master, trials, peel, a_qp, a_qi, a_cp, a_ci, a_cols, a_n, b_qp, b_qi, b_cp, b_ci, b_cols, b_n):
    out = np.zeros(trials, dtype=np.bool_)
    for t in numba.prange(trials):
        key = _trial_key(master, t)
        out[t] = _single_trial(
            num_qubits, p, key, peel, a_qp, a_qi, a_cp, a_ci, a_cols, a_n, b_qp, b_qi, b_cp, b_ci, b_cols, b_n
        )
    return out


def _csr(major: np.ndarray, minor: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(major, kind="stable")
    ptr = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(np.bincount(major, minlength=size), out=ptr[1:])
    return ptr, minor[order].astype(np.int64)


@dataclass(frozen=True, eq=False)
class _Side:
    q_ptr: np.ndarray
    q_idx: np.ndarray
    c_ptr: np.ndarray
    c_idx: np.ndarray
    cols: np.ndarray
    nchk: int

    @classmethod
    def build(cls, checks: BitMatrix, logicals: BitMatrix) -> _Side:
        a = checks.to_dense()
        stacked = np.vstack([a, logicals.to_dense()]).reshape(checks.rows + logicals.rows, checks.cols)
        chk, qub = np.nonzero(a)
        q_ptr, q_idx = _csr(qub, chk, checks.cols)
        c_ptr, c_idx = _csr(chk, qub, checks.rows)
        return cls(q_ptr, q_idx, c_ptr, c_idx, gf2.pack_rows(stacked.T), checks.rows)

    def args(self):
        return (self.q_ptr, self.q_idx, self.c_ptr, self.c_idx, self.cols, self.nchk)


@dataclass(frozen=True, eq=False)
class CorrectabilityEngine:
    num_qubits: int
    z_side: _Side
    x_side: _Side

    @classmethod
    def from_code(cls, code) -> CorrectabilityEngine:
        # ker(hx) vectors are trivial iff every X logical annihilates them, and vice versa
        return cls(
            code.num_qubits,
            _Side.build(code.hx, code.logical_basis("x")),
            _Side.build(code.hz, code.logical_basis("z")),
        )

    def is_correctable(self, e: Erasure, peel: bool = True) -> bool:
        if e.num_qubits != self.num_qubits:
            raise IndexError(f"erasure is over {e.num_qubits} qubits, code has {self.num_qubits}")
        mask = e.mask()
        support = np.array(sorted(e.support), dtype=np.int64)
        for side in (self.z_side, self.x_side):
            if _condition_fails(mask, support, *side.args(), peel):
                return False
        return True

    def trial_outcomes(self, p: float, trials: int, master_seed: int, peel: bool = False) -> np.ndarray:
        """Boolean failure flag of every trial, in trial-index order."""
        return _run_trials(
            self.num_qubits,
            float(p),
            np.uint64(master_seed),
            int(trials),
            peel,
            *self.z_side.args(),
            *self.x_side.args(),
        )


def trial_erasure(num_qubits: int, p: float, master_seed: int, trial: int) -> Erasure:
    """The erasure drawn by trial ``trial`` of a run seeded with ``master_seed``."""
    mask = np.empty(num_qubits, dtype=np.bool_)
    _fill_erasure(num_qubits, float(p), np.uint64(_trial_key(np.uint64(master_seed), trial)), mask)
    return Erasure.from_mask(mask)


def set_threads(n: int | None) -> int:
    """Cap the worker threads used by the trial loop; returns the effective count."""
    limit = numba.config.NUMBA_NUM_THREADS
    n = limit if n is None else max(1, min(int(n), limit))
    numba.set_num_threads(n)
    return n


def estimate_failure_rate(code, p: float, trials: int, master_seed: int, *, peel: bool = False) -> CostEstimate:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    failures = int(code.engine.trial_outcomes(p, trials, master_seed, peel).sum())
    return CostEstimate(failures, trials, float(p))


def sweep_curve(code, p_grid, trials: int, master_seed: int) -> list[CostEstimate]:
    p_grid = list(p_grid)
    if not p_grid:
        raise ValueError("empty p grid")
    return [estimate_failure_rate(code, p, trials, point_seed(master_seed, i)) for i, p in enumerate(p_grid)]


def point_seed(master_seed: int, index: int) -> int:
    return derive_seed("sweep", master_seed, index)
