"""Degree-constrained Tanner multigraphs, the edge-swap move, and alist I/O."""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from hgpopt.gf2 import BitMatrix


class AlistError(ValueError):
    """Malformed alist input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DegreeError(ValueError):
    """Degree prescription cannot be realized."""


@dataclass(frozen=True)
class SwapAction:
    slot_a: int
    slot_b: int

    def __post_init__(self):
        if not 0 <= self.slot_a < self.slot_b:
            raise ValueError(f"need 0 <= slot_a < slot_b, got ({self.slot_a}, {self.slot_b})")


class TannerState:
    """Bipartite multigraph stored as a fixed list of (check, bit) edge slots.

    Slot order carries no meaning for the code; it only gives actions stable
    addresses.  Instances are immutable.
    """

    __slots__ = ("num_checks", "num_bits", "edges", "_key")

    def __init__(self, num_checks: int, num_bits: int, edges):
        edges = np.array(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (
            edges[:, 0].min() < 0
            or edges[:, 1].min() < 0
            or edges[:, 0].max() >= num_checks
            or edges[:, 1].max() >= num_bits
        ):
            raise ValueError("edge endpoint out of range")
        edges.flags.writeable = False
        self.num_checks = num_checks
        self.num_bits = num_bits
        self.edges = edges
        self._key = None

    @classmethod
    def from_matrix(cls, h: BitMatrix | np.ndarray) -> TannerState:
        dense = h.to_dense() if isinstance(h, BitMatrix) else np.asarray(h)
        checks, bits = np.nonzero(dense)
        return cls(dense.shape[0], dense.shape[1], np.column_stack([checks, bits]))

    @property
    def num_slots(self) -> int:
        return len(self.edges)

    def check_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.num_checks)

    def bit_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.num_bits)

    @property
    def row_weight(self) -> int | None:
        """Common check degree in the multigraph, or None if irregular."""
        deg = self.check_degrees()
        return int(deg[0]) if deg.size and (deg == deg[0]).all() else None

    @property
    def col_weight(self) -> int | None:
        deg = self.bit_degrees()
        return int(deg[0]) if deg.size and (deg == deg[0]).all() else None

    def has_parallel_edges(self) -> bool:
        return len(np.unique(self.edges, axis=0)) < len(self.edges)

    def dense(self) -> np.ndarray:
        h = np.zeros((self.num_checks, self.num_bits), dtype=np.uint8)
        h[self.edges[:, 0], self.edges[:, 1]] = 1
        return h

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerState):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    def __hash__(self) -> int:
        return hash(canonical_key(self))

    def __repr__(self) -> str:
        return f"TannerState(m={self.num_checks}, n={self.num_bits}, slots={self.num_slots})"


def apply_swap(s: TannerState, a: SwapAction) -> TannerState:
    """Cross the endpoints of two slots: (u1,v1),(u2,v2) -> (u1,v2),(u2,v1)."""
    if a.slot_b >= s.num_slots:
        raise IndexError(f"slot {a.slot_b} out of range for {s.num_slots} slots")
    edges = s.edges.copy()
    edges[a.slot_a, 1], edges[a.slot_b, 1] = s.edges[a.slot_b, 1], s.edges[a.slot_a, 1]
    return TannerState(s.num_checks, s.num_bits, edges)


def binary_matrix(s: TannerState) -> BitMatrix:
    """Parity-check matrix with parallel edges collapsed to a single 1."""
    return BitMatrix.from_dense(s.dense())


def canonical_key(s: TannerState) -> bytes:
    """Byte string identifying the edge multiset (slot order ignored)."""
    if s._key is None:
        order = np.lexsort((s.edges[:, 1], s.edges[:, 0]))
        body = s.edges[order].astype("<u4").tobytes()
        header = np.array([s.num_checks, s.num_bits], dtype="<u4").tobytes()
        s._key = header + body
    return s._key


def key_hash(key: bytes) -> str:
    """Short stable digest of a canonical key, for logs."""
    return hashlib.blake2b(key, digest_size=8).hexdigest()


def action_pairs(num_slots: int) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographic arrays ``(slot_a, slot_b)`` indexed by action number."""
    return np.triu_indices(num_slots, k=1)


def enumerate_actions(s: TannerState) -> list[SwapAction]:
    first, second = action_pairs(s.num_slots)
    return [SwapAction(int(i), int(j)) for i, j in zip(first, second)]


def num_actions(s: TannerState) -> int:
    return math.comb(s.num_slots, 2)


def random_regular(
    m: int,
    n: int,
    col_weight: int,
    row_weight: int,
    seed=None,
    *,
    simple: bool = False,
    max_tries: int = 10_000,
) -> TannerState:
    """Configuration-model pairing of bit stubs with check stubs.

    With ``simple=True`` pairings containing parallel edges are rejected and
    redrawn, which conditions the distribution on simple graphs.
    """
    if n * col_weight != m * row_weight:
        raise DegreeError(f"n*col_weight = {n * col_weight} != m*row_weight = {m * row_weight}")
    rng = np.random.default_rng(seed)
    check_stubs = np.repeat(np.arange(m), row_weight)
    bit_stubs = np.repeat(np.arange(n), col_weight)
    for _ in range(max_tries):
        s = TannerState(m, n, np.column_stack([check_stubs, rng.permutation(bit_stubs)]))
        if not simple or not s.has_parallel_edges():
            return s
    raise DegreeError(f"no simple pairing found in {max_tries} tries")


def girth(s: TannerState) -> float:
    """Shortest cycle length of the collapsed bipartite graph, ``math.inf`` for forests."""
    h = s.dense()
    m, n = h.shape
    adj: list[list[int]] = [[] for _ in range(m + n)]
    for c, b in zip(*np.nonzero(h)):
        adj[c].append(m + b)
        adj[m + b].append(c)
    best = math.inf
    for root in range(m + n):
        dist = [-1] * (m + n)
        parent = [-1] * (m + n)
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 2 >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


# alist ------------------------------------------------------------------------


def write_alist(s: TannerState) -> str:
    h = s.dense()
    m, n = h.shape
    bit_nbrs = [np.flatnonzero(h[:, j]) + 1 for j in range(n)]
    check_nbrs = [np.flatnonzero(h[i]) + 1 for i in range(m)]
    max_col = max((len(x) for x in bit_nbrs), default=0)
    max_row = max((len(x) for x in check_nbrs), default=0)

    def padded(nbrs, width):
        vals = list(nbrs) + [0] * (width - len(nbrs))
        return " ".join(str(int(v)) for v in vals)

    lines = [
        f"{n} {m}",
        f"{max_col} {max_row}",
        " ".join(str(len(x)) for x in bit_nbrs),
        " ".join(str(len(x)) for x in check_nbrs),
    ]
    lines += [padded(x, max_col) for x in bit_nbrs]
    lines += [padded(x, max_row) for x in check_nbrs]
    return "\n".join(lines) + "\n"


def read_alist(text: str) -> TannerState:
    """Parse MacKay alist text.  Zero padding on neighbor lines is optional."""
    lines = [(no, line.split()) for no, line in enumerate(text.splitlines(), start=1) if line.strip()]
    cursor = 0

    def next_ints(what: str) -> tuple[int, list[int]]:
        nonlocal cursor
        if cursor >= len(lines):
            last = lines[-1][0] + 1 if lines else 1
            raise AlistError(f"unexpected end of input, expected {what}", last)
        no, toks = lines[cursor]
        cursor += 1
        try:
            return no, [int(t) for t in toks]
        except ValueError:
            raise AlistError(f"non-integer token in {what}", no) from None

    no, head = next_ints("'n m'")
    if len(head) != 2 or min(head) < 0:
        raise AlistError("expected two non-negative integers 'n m'", no)
    n, m = head
    no, maxes = next_ints("'max_col_weight max_row_weight'")
    if len(maxes) != 2:
        raise AlistError("expected 'max_col_weight max_row_weight'", no)
    max_col, max_row = maxes
    no, col_w = next_ints("column weights")
    if len(col_w) != n:
        raise AlistError(f"expected {n} column weights, got {len(col_w)}", no)
    if max(col_w, default=0) > max_col:
        raise AlistError(f"column weight exceeds declared maximum {max_col}", no)
    no, row_w = next_ints("row weights")
    if len(row_w) != m:
        raise AlistError(f"expected {m} row weights, got {len(row_w)}", no)
    if max(row_w, default=0) > max_row:
        raise AlistError(f"row weight exceeds declared maximum {max_row}", no)

    def neighbor_block(count, width, weights, bound, label):
        out = []
        for i in range(count):
            no, vals = next_ints(f"{label} {i + 1} neighbors")
            if len(vals) > width:
                raise AlistError(f"{label} {i + 1} lists {len(vals)} entries, max is {width}", no)
            nz = [v for v in vals if v != 0]
            if any(v < 0 or v > bound for v in nz):
                raise AlistError(f"{label} {i + 1} neighbor index out of range 1..{bound}", no)
            if len(nz) != weights[i]:
                raise AlistError(f"{label} {i + 1} has {len(nz)} neighbors, declared {weights[i]}", no)
            if len(set(nz)) != len(nz):
                raise AlistError(f"{label} {i + 1} repeats a neighbor", no)
            out.append(nz)
        return out

    bit_nbrs = neighbor_block(n, max_col, col_w, m, "bit")
    check_nbrs = neighbor_block(m, max_row, row_w, n, "check")
    if cursor < len(lines):
        raise AlistError("trailing content after check lists", lines[cursor][0])

    from_bits = {(c - 1, j) for j, nbrs in enumerate(bit_nbrs) for c in nbrs}
    from_checks = {(i, b - 1) for i, nbrs in enumerate(check_nbrs) for b in nbrs}
    if from_bits != from_checks:
        raise AlistError("bit and check neighbor lists disagree")
    edges = sorted(from_checks)
    return TannerState(m, n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def random_full_rank_regular(
    m: int, n: int, col_weight: int, row_weight: int, seed=None, *, simple: bool = True, max_tries: int = 1000
) -> TannerState:
    """Draw regular Tanner graphs from one seeded stream until the matrix has rank ``m``."""
    from hgpopt.gf2 import rank

    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        s = random_regular(m, n, col_weight, row_weight, rng, simple=simple)
        if rank(binary_matrix(s)) == m:
            return s
    raise DegreeError(f"no full-rank draw in {max_tries} tries")
