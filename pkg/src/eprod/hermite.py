"""Physicists' Hermite polynomials and oscillator eigenfunctions.

The eigenfunctions are

    e_n(x) = H_n(x) exp(-x**2/2) / sqrt(2**n n! sqrt(pi)),

an orthonormal basis of L2(R).  Numeric evaluation always goes through the
normalized three-term recurrence (stable; never forms H_n and the huge
normalizer separately), while values and derivatives at the origin are kept
exact as SqrtTerm scalars.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import mp, mpc, mpf, mpmathify

from .exact import ExactTerm, SqrtTerm
from .precision import DEFAULT_DPS, working
from .special import moment_integral

__all__ = [
    "SingularKernelError",
    "hermite_eval",
    "hermite_at_zero",
    "eigenfunction_eval",
    "eigenfunction_values",
    "eigenfunction_at_zero",
    "eigenfunction_derivative_at_zero",
    "derivative_at_zero_via_moments",
    "mehler_kernel",
    "eigenfunction_kernel",
]


class SingularKernelError(ValueError):
    """Mehler kernel evaluated on its singular parameter set."""


def hermite_eval(n: int, x):
    """H_n(x) by the raw recurrence; generic over int/Fraction/mpf/mpc."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    one = x * 0 + 1  # matches the numeric type of x
    if n == 0:
        return one
    prev, cur = one, 2 * x
    for k in range(1, n):
        prev, cur = cur, 2 * x * cur - 2 * k * prev
    return cur


def hermite_at_zero(n: int) -> int:
    """H_n(0): 0 for odd n, (-1)**l (2l)!/l! for n = 2l."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if n % 2:
        return 0
    l = n // 2
    return (-1) ** l * math.factorial(2 * l) // math.factorial(l)


def eigenfunction_eval(n: int, x, dps: int = DEFAULT_DPS):
    """e_n(x) numerically (mpf for real x, mpc for complex)."""
    return eigenfunction_values(n, x, dps)[n]


def eigenfunction_values(n_max: int, x, dps: int = DEFAULT_DPS) -> list:
    """[e_0(x), ..., e_{n_max}(x)] in one pass of the normalized recurrence:

    e_{n+1} = sqrt(2/(n+1)) x e_n - sqrt(n/(n+1)) e_{n-1}.
    """
    if n_max < 0:
        raise ValueError(f"need n_max >= 0, got {n_max}")
    with working(dps):
        xv = mpmathify(x)
        if isinstance(x, Fraction):
            xv = mpf(x.numerator) / x.denominator
        out = [mp.pi ** mpf("-0.25") * mp.exp(-xv * xv / 2)]
        for n in range(n_max):
            nxt = mp.sqrt(mpf(2) / (n + 1)) * xv * out[-1]
            if n:
                nxt -= mp.sqrt(mpf(n) / (n + 1)) * out[-2]
            out.append(nxt)
        return out


def eigenfunction_at_zero(n: int) -> SqrtTerm:
    """e_n(0) exactly: 0 for odd n, (-1)**l sqrt(binom(2l, l)/4**l) pi**(-1/4)."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if n % 2:
        return SqrtTerm.zero()
    l = n // 2
    return SqrtTerm(Fraction((-1) ** l), Fraction(math.comb(2 * l, l), 4**l), -1)


def _derivative_table(state: dict[int, SqrtTerm]) -> dict[int, SqrtTerm]:
    """One application of d/dx on a finite combination of eigenfunctions:

    e_j' = sqrt(j/2) e_{j-1} - sqrt((j+1)/2) e_{j+1}.
    """
    out: dict[int, SqrtTerm] = {}

    def bump(idx: int, term: SqrtTerm):
        if term.is_zero:
            return
        cur = out.get(idx)
        out[idx] = term if cur is None else cur + term

    for j, w in state.items():
        if j > 0:
            bump(j - 1, w * SqrtTerm(Fraction(1), Fraction(j, 2)))
        bump(j + 1, w * SqrtTerm(Fraction(-1), Fraction(j + 1, 2)))
    return out


def eigenfunction_derivative_at_zero(n: int, k: int) -> SqrtTerm:
    """k-th derivative of e_n at 0, exact, via the ladder action of d/dx.

    The result is always a rational multiple of sqrt(rational) * pi**(-1/4);
    it vanishes unless n and k share parity.
    """
    if n < 0 or k < 0:
        raise ValueError(f"need n, k >= 0, got ({n}, {k})")
    state = {n: SqrtTerm.one()}
    for _ in range(k):
        state = _derivative_table(state)
    total = SqrtTerm.zero()
    for j, w in state.items():
        if j % 2 == 0:
            total = total + w * eigenfunction_at_zero(j)
    return total


def derivative_at_zero_via_moments(n: int, k: int) -> SqrtTerm:
    """Independent route for e_n^(k)(0) through the moment integrals:

    e_n^(k)(0) = phase * I(n, k) / (sqrt(2 pi) sqrt(2**n n!) pi**(1/4)),
    phase = (-1)**((k - n)/2) when n and k share parity, else the value is 0.
    """
    if n < 0 or k < 0:
        raise ValueError(f"need n, k >= 0, got ({n}, {k})")
    if (n + k) % 2:
        return SqrtTerm.zero()
    sign = (-1) ** (((k - n) // 2) % 2)
    value = SqrtTerm.from_exact_term(moment_integral(n, k))
    value = value * SqrtTerm(Fraction(sign), Fraction(1, 2), -2)  # 1/sqrt(2 pi)
    value = value * SqrtTerm(Fraction(1), Fraction(1, 2**n * math.factorial(n)), -1)
    return value


def mehler_kernel(z, x, y, dps: int = DEFAULT_DPS) -> mpc:
    """Closed form of sum_k z**k H_k(x) H_k(y) / k! :

        (1 - 4 z**2)**(-1/2) * exp(y**2 - (y - 2 z x)**2 / (1 - 4 z**2))

    with the principal square root.  Singular at z = +/- 1/2.
    """
    with working(dps):
        zv, xv, yv = mpc(z), mpc(x), mpc(y)
        denom = 1 - 4 * zv * zv
        if abs(denom) <= mpf(10) ** (-(dps - 5)):
            raise SingularKernelError(f"kernel parameter z = {z} is singular")
        w = yv - 2 * zv * xv
        return mp.exp(yv * yv - w * w / denom) / mp.sqrt(denom)


def _poly_shift(p, a, b, first: bool):
    """P -> dP/dv + P*(a*x + b*y) on {(i, j): coeff} polynomials, where v is
    x when ``first`` else y."""
    out = {}

    def acc(key, c):
        out[key] = out.get(key, 0) + c

    for (i, j), c in p.items():
        if first:
            if i:
                acc((i - 1, j), i * c)
        else:
            if j:
                acc((i, j - 1), j * c)
        acc((i + 1, j), a * c)
        acc((i, j + 1), b * c)
    return out


def eigenfunction_kernel(w, x, y, dx: int = 0, dy: int = 0,
                         dps: int = DEFAULT_DPS) -> mpc:
    """Closed form of sum_n w**n e_n^(dx)(x) e_n^(dy)(y).

    The undifferentiated kernel is exp(Q)/sqrt(pi (1 - w**2)) with the
    quadratic exponent

        Q = [4 w x y - (1 + w**2)(x**2 + y**2)] / (2 (1 - w**2)),

    so each x- or y-derivative multiplies by a polynomial factor; the
    factors are accumulated exactly and evaluated at the end.  Singular at
    w = +/- 1; complex w with |w| < 1 is the useful regime.
    """
    if dx < 0 or dy < 0:
        raise ValueError("derivative orders must be nonnegative")
    with working(dps):
        wv, xv, yv = mpc(w), mpc(x), mpc(y)
        den = 1 - wv * wv
        if abs(den) <= mpf(10) ** (-(dps - 5)):
            raise SingularKernelError(f"kernel parameter w = {w} is singular")
        qs = -(1 + wv * wv) / (2 * den)  # x**2 and y**2 coefficient
        qc = 2 * wv / den                # x*y coefficient
        poly = {(0, 0): mpc(1)}
        for _ in range(dx):
            poly = _poly_shift(poly, 2 * qs, qc, True)
        for _ in range(dy):
            poly = _poly_shift(poly, qc, 2 * qs, False)
        value = mpc(0)
        for (i, j), c in poly.items():
            value += c * xv**i * yv**j
        q = qs * (xv * xv + yv * yv) + qc * xv * yv
        return value * mp.exp(q) / mp.sqrt(mp.pi * den)
