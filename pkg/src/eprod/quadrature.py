"""High-precision Gauss-Hermite quadrature, used as an independent oracle.

Nodes are the roots of H_n; float64 seeds from numpy are polished by Newton
iteration at working precision, and the weights come from the standard

    w_i = 2**(n-1) n! sqrt(pi) / (n**2 H_{n-1}(x_i)**2).

Integrals over the real line of functions decaying like exp(-x**2/2) are
computed with the substitution x = sqrt(2) u, which makes the weight of the
rule match a Gaussian of the right width (polynomials times exp(-x**2/2)
squared integrate exactly).
"""

from __future__ import annotations

from functools import lru_cache

import numpy
from mpmath import mp, mpf

from .precision import DEFAULT_DPS, working

__all__ = ["gauss_hermite_rule", "integrate", "basis_projection", "basis_rows"]

DEFAULT_NODES = 200


@lru_cache(maxsize=8)
def gauss_hermite_rule(n_nodes: int, dps: int) -> tuple[tuple[mpf, ...], tuple[mpf, ...]]:
    """(nodes, weights) of the n-point rule for weight exp(-u**2), at dps digits."""
    if n_nodes < 1:
        raise ValueError(f"need at least one node, got {n_nodes}")
    seeds = numpy.polynomial.hermite.hermgauss(n_nodes)[0]
    with working(dps + 10):
        target = mpf(10) ** (-(dps + 5))
        fact = mp.factorial(n_nodes)
        wscale = 2 ** (n_nodes - 1) * fact * mp.sqrt(mp.pi) / n_nodes**2
        nodes = []
        weights = []
        for seed in seeds:
            x = mpf(float(seed))
            for _ in range(80):
                # one recurrence pass gives H_{n-1} and H_n together
                prev, cur = mpf(1), 2 * x
                for k in range(1, n_nodes):
                    prev, cur = cur, 2 * x * cur - 2 * k * prev
                step = cur / (2 * n_nodes * prev)  # H_n / H_n'
                x -= step
                if abs(step) <= target * max(mpf(1), abs(x)):
                    break
            else:
                raise RuntimeError(f"node refinement stalled near {float(seed)}")
            prev, cur = mpf(1), 2 * x
            for k in range(1, n_nodes):
                prev, cur = cur, 2 * x * cur - 2 * k * prev
            nodes.append(x)
            weights.append(wscale / (prev * prev))
        return tuple(nodes), tuple(weights)


@lru_cache(maxsize=8)
def _line_rule(n_nodes: int, dps: int) -> tuple[tuple[mpf, ...], tuple[mpf, ...]]:
    """Abscissas x_i = sqrt(2) u_i and compensated weights v_i = sqrt(2) w_i e^{u_i^2}."""
    nodes, weights = gauss_hermite_rule(n_nodes, dps)
    with working(dps + 10):
        root2 = mp.sqrt(2)
        xs = tuple(root2 * u for u in nodes)
        vs = tuple(root2 * w * mp.exp(u * u) for u, w in zip(nodes, weights))
        return xs, vs


def integrate(fn, dps: int = DEFAULT_DPS, n_nodes: int = DEFAULT_NODES):
    """Integral of fn over the real line; fn must decay at least like exp(-x**2/2)."""
    xs, vs = _line_rule(n_nodes, dps)
    with working(dps):
        return mp.fsum(v * fn(x) for x, v in zip(xs, vs))


_rows_cache: dict[tuple[int, int], list] = {}


def basis_rows(n_max: int, n_nodes: int = DEFAULT_NODES, dps: int = DEFAULT_DPS) -> list:
    """rows[n][i] = e_n(x_i) * exp(x_i**2/2) on the line rule's abscissas.

    The Gaussian factor of e_n cancels against the rule's compensation, so
    these grow only polynomially and extend cheaply by the normalized
    recurrence.  Rows are cached per (n_nodes, dps) and shared.
    """
    key = (n_nodes, dps)
    rows = _rows_cache.get(key)
    xs, _ = _line_rule(n_nodes, dps)
    with working(dps):
        if rows is None:
            rows = [[mp.pi ** mpf("-0.25")] * len(xs)]
            _rows_cache[key] = rows
        while len(rows) <= n_max:
            n = len(rows) - 1
            a = mp.sqrt(mpf(2) / (n + 1))
            b = mp.sqrt(mpf(n) / (n + 1)) if n else mpf(0)
            last = rows[-1]
            before = rows[-2] if n else None
            rows.append(
                [
                    a * x * last[i] - (b * before[i] if before is not None else 0)
                    for i, x in enumerate(xs)
                ]
            )
    return rows


def basis_projection(fn, n: int, dps: int = DEFAULT_DPS, n_nodes: int = DEFAULT_NODES):
    """Integral of fn(x) e_n(x) dx; fn should decay like exp(-x**2/2) or faster.

    The Gaussian halves of e_n and of the rule's compensation cancel, so the
    sum uses the raw weights against the compensated basis rows.
    """
    _, weights = gauss_hermite_rule(n_nodes, dps)
    xs, _ = _line_rule(n_nodes, dps)
    row = basis_rows(n, n_nodes, dps)[n]
    with working(dps):
        root2 = mp.sqrt(2)
        return root2 * mp.fsum(
            w * fn(x) * row[i] for i, (x, w) in enumerate(zip(xs, weights))
        )
