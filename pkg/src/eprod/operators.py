"""Ladder-operator words and their adjoints with respect to the pairing.

An operator expression is a finite sum  sum_t  scalar_t * word_t,  where a
word is a tuple of letters acting on basis-coefficient sequences:

    c      (c s)_n  = sqrt(n+1) s_{n+1}         (lowering)
    cdag   (c+ s)_n = sqrt(n)   s_{n-1}         (raising)
    x      (c + cdag)/sqrt(2)                   (position)
    d      (c - cdag)/sqrt(2)                   (derivative)

Words compose left to right, i.e. ("x", "d") means x applied after d.  The
pairing adjoint (written ``ddagger``) satisfies

    <X‡ F, G> = <F, X G>

for sequences F, G paired by sum_n conj(F_n) G_n.  Since every letter has a
real matrix in this basis, the adjoint is the transpose with conjugated
scalars: words reverse, c and cdag swap, x is self-adjoint, d flips sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import mp, mpc, mpf

from .distributions import Distribution, coeff_sequence
from .eproduct import (
    EProductResult,
    SummationConfig,
    TermSource,
    _kernel_eval,
    _point_branches,
    _word_branches,
    classify_series,
)
from .precision import DEFAULT_DPS, working

__all__ = [
    "OperatorExpr",
    "apply_operator",
    "adjoint_defect",
    "adjoint_check",
    "AdjointCheckReport",
    "InconclusivePairingError",
    "LETTERS",
]

LETTERS = ("c", "cdag", "x", "d")

_SWAP = {"c": "cdag", "cdag": "c", "x": "x", "d": "d"}
_FLIP_SIGN = {"c": 1, "cdag": 1, "x": 1, "d": -1}


def _conj_scalar(s):
    if isinstance(s, (int, Fraction, mpf, float)):
        return s
    if hasattr(s, "conjugate"):  # complex, mpc, ComplexRational
        return s.conjugate()
    return mp.conj(s)


@dataclass(frozen=True)
class OperatorExpr:
    """Finite sum of scalar-weighted letter words."""

    terms: tuple = ()

    def __post_init__(self):
        for scalar, word in self.terms:
            for letter in word:
                if letter not in LETTERS:
                    raise ValueError(f"unknown letter {letter!r}")
        object.__setattr__(
            self, "terms", tuple((s, tuple(w)) for s, w in self.terms)
        )

    # -- constructors --------------------------------------------------

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls(((1, ()),))

    @classmethod
    def letter(cls, name: str) -> "OperatorExpr":
        if name not in LETTERS:
            raise ValueError(f"unknown letter {name!r}")
        return cls(((1, (name,)),))

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return OperatorExpr(self.terms + other.terms)

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self + (-1) * other

    def __neg__(self) -> "OperatorExpr":
        return (-1) * self

    def __mul__(self, scalar) -> "OperatorExpr":
        return OperatorExpr(tuple((scalar * s, w) for s, w in self.terms))

    def __rmul__(self, scalar) -> "OperatorExpr":
        return OperatorExpr(tuple((scalar * s, w) for s, w in self.terms))

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        """Composition: (A @ B) acts as A after B."""
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        terms = []
        for s1, w1 in self.terms:
            for s2, w2 in other.terms:
                terms.append((s1 * s2, w1 + w2))
        return OperatorExpr(tuple(terms))

    def ddagger(self) -> "OperatorExpr":
        """Adjoint with respect to the pairing (an involution)."""
        out = []
        for s, w in self.terms:
            sign = 1
            for letter in w:
                sign *= _FLIP_SIGN[letter]
            new_word = tuple(_SWAP[letter] for letter in reversed(w))
            out.append((sign * _conj_scalar(s), new_word))
        return OperatorExpr(tuple(out))


def _letter_action(fn: Callable[[int], object], letter: str):
    if letter == "c":

        def act(n):
            return mp.sqrt(n + 1) * fn(n + 1)

    elif letter == "cdag":

        def act(n):
            return mp.sqrt(n) * fn(n - 1) if n else mpf(0)

    elif letter == "x":

        def act(n):
            lower = mp.sqrt(n) * fn(n - 1) if n else mpf(0)
            return (mp.sqrt(n + 1) * fn(n + 1) + lower) / mp.sqrt(2)

    else:  # "d"

        def act(n):
            lower = mp.sqrt(n) * fn(n - 1) if n else mpf(0)
            return (mp.sqrt(n + 1) * fn(n + 1) - lower) / mp.sqrt(2)

    return act


def apply_operator(
    expr: OperatorExpr, seq: Callable[[int], object], dps: int = DEFAULT_DPS
) -> Callable[[int], object]:
    """The sequence n -> (X s)_n, memoized; ``seq`` maps index to coefficient."""
    branches = []
    for scalar, word in expr.terms:
        fn = seq
        for letter in reversed(word):  # rightmost letter acts first
            fn = _letter_action(fn, letter)
        branches.append((scalar, fn))
    memo: dict[int, object] = {}

    def out(n: int):
        if n < 0:
            raise ValueError(f"need n >= 0, got {n}")
        if n not in memo:
            with working(dps):
                total = 0
                for scalar, fn in branches:
                    total += scalar * fn(n)
                memo[n] = total
        return memo[n]

    return out


class InconclusivePairingError(RuntimeError):
    """A side of the adjoint identity did not classify to a usable value."""


@dataclass
class AdjointCheckReport:
    """Both sides of <X‡ F, G> = <F, X G>, classified independently."""

    left: EProductResult
    right: EProductResult
    difference: mpf
    max_partial_dev: mpf


def adjoint_check(
    expr: OperatorExpr,
    big: Distribution,
    small: Distribution,
    cfg: Optional[SummationConfig] = None,
    dps: int = DEFAULT_DPS,
    probe: int = 64,
) -> AdjointCheckReport:
    """Compare <X‡ F, G> against <F, X G> through the full pipeline.

    Each side is its own term stream (operator applied on the coefficient
    sequence of one slot).  When both distributions admit point branches the
    Abel levels also get a closed form: the ladder letters transfer to the
    argument side of the eigenfunctions, so operator-applied pairs keep the
    kernel route (and its direct-summation cross-check).

    ``probe`` bounds the partial-sum deviation scan reported alongside the
    two classified values; the deviation need not vanish (truncation leaves
    ladder boundary terms), it is context for the value comparison.
    """
    cfg = cfg or SummationConfig()
    f = coeff_sequence(big, dps)
    g = coeff_sequence(small, dps)
    left_seq = apply_operator(expr.ddagger(), f, dps)
    right_seq = apply_operator(expr, g, dps)

    left_eval = right_eval = None
    bf = _point_branches(big)
    bg = _point_branches(small)
    if bf is not None and bg is not None:
        left_eval = _kernel_eval(_word_branches(expr.ddagger().terms, bf), bg, dps)
        right_eval = _kernel_eval(bf, _word_branches(expr.terms, bg), dps)

    def left_fetch(n: int):
        with working(dps):
            return mp.conj(left_seq(n)) * g(n)

    def right_fetch(n: int):
        with working(dps):
            return mp.conj(f(n)) * right_seq(n)

    lsrc = TermSource(left_fetch, abel_eval=left_eval)
    rsrc = TermSource(right_fetch, abel_eval=right_eval)
    left = classify_series(lsrc, cfg, dps)
    right = classify_series(rsrc, cfg, dps)
    if not (left.has_value and right.has_value):
        raise InconclusivePairingError(
            f"sides classified {left.status} / {right.status}; nothing to compare"
        )
    with working(dps):
        difference = abs(left.value - right.value)
        sum_l = mpc(0)
        sum_r = mpc(0)
        dev = mpf(0)
        for n in range(probe):
            sum_l += lsrc.term(n)
            sum_r += rsrc.term(n)
            dev = max(dev, abs(sum_l - sum_r))
    return AdjointCheckReport(left, right, difference, dev)


def adjoint_defect(
    expr: OperatorExpr,
    seq_f: Callable[[int], object],
    seq_g: Callable[[int], object],
    n_max: int,
    dps: int = DEFAULT_DPS,
):
    """(lhs, rhs, |lhs - rhs|) for the moving identity

        sum_{n <= n_max} conj((X‡ f)_n) g_n  =  sum_{n <= n_max} conj(f_n) (X g)_n.

    Equality holds exactly in the limit; truncation leaves ladder boundary
    terms at n_max, so callers should pick sequences that decay.
    """
    left = apply_operator(expr.ddagger(), seq_f, dps)
    right = apply_operator(expr, seq_g, dps)
    with working(dps):
        lhs = 0
        rhs = 0
        for n in range(n_max + 1):
            lhs += mp.conj(left(n)) * seq_g(n)
            rhs += mp.conj(seq_f(n)) * right(n)
        return lhs, rhs, abs(lhs - rhs)
