"""Slow, obviously-correct reference computations over plain integer lists."""

import itertools


def naive_rank(rows):
    """Rank mod 2 by elimination on lists of 0/1 ints."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] % 2), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] % 2:
                m[r] = [(a + b) % 2 for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def span(rows):
    """Every vector in the row space, as tuples."""
    rows = [tuple(r) for r in rows]
    n = len(rows[0]) if rows else 0
    out = set()
    for coeffs in itertools.product((0, 1), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            if c:
                v = [(a + b) % 2 for a, b in zip(v, r)]
        out.add(tuple(v))
    return out
