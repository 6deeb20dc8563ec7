"""Sequence extrapolation: Richardson for dyadic ladders, Wynn's epsilon.

`richardson_dyadic` assumes samples v_i = f(h_0 / 2**i) of a function with a
power-series error in h; each Neville sweep with weight 2**m kills one power.
`wynn_epsilon` is the classic nonlinear accelerator, used only as an
independent cross-check on the Richardson value.
"""

from __future__ import annotations

from mpmath import mp, mpf

__all__ = ["richardson_dyadic", "wynn_epsilon"]


def richardson_dyadic(values, depth: int | None = None):
    """Extrapolate samples at h, h/2, h/4, ... to h = 0.

    Returns (estimate, diagonal) where diagonal[m] is the deepest entry
    after m elimination sweeps; estimate is the last diagonal entry.
    """
    values = list(values)
    if not values:
        raise ValueError("need at least one sample")
    if depth is None:
        depth = len(values) - 1
    depth = min(depth, len(values) - 1)
    row = values
    diagonal = [row[-1]]
    for m in range(1, depth + 1):
        f = mpf(2) ** m
        row = [(f * row[i + 1] - row[i]) / (f - 1) for i in range(len(row) - 1)]
        diagonal.append(row[-1])
    return diagonal[-1], diagonal


def wynn_epsilon(seq):
    """Shanks-type limit estimate of a sequence via the epsilon table.

    Returns the deepest healthy even-column entry.  Degenerate differences
    (exact convergence) short-circuit to the repeated value.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("need at least one sample")
    if len(seq) == 1:
        return seq[0]
    prev = [mp.mpf(0)] * (len(seq) + 1)  # epsilon_{-1} column
    cur = list(seq)
    best = cur[-1]
    col = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0:
                return cur[i + 1]
            nxt.append(prev[i + 1] + 1 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            best = cur[-1]
    return best
