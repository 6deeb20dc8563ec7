"""Exact scalar algebra for series bookkeeping.

Three small value types cover every exact quantity the series machinery
produces:

``ExactTerm``
    rational * pi**(p/2) * 2**(q/2).  Closed under multiplication and
    division; addition is defined between terms carrying the same
    irrational signature.

``SqrtTerm``
    rational * sqrt(positive rational) * pi**(q/4).  Closed under
    multiplication; addition is defined whenever the two radicands differ
    by a perfect rational square, which is exactly the situation the
    eigenfunction ladder produces.  Squares always collapse to ExactTerm.

``ComplexRational``
    re + im*i with rational parts, the combination scalar of the
    expression layer.

All are frozen, hashable, and never touch floating point except through
the explicit ``to_mpf``/``as_mpc`` converters (or when multiplied by an
already-inexact partner).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .precision import DEFAULT_DPS, GUARD_DPS

__all__ = ["ExactTerm", "SqrtTerm", "ComplexRational", "IncompatibleTermError"]


class IncompatibleTermError(ValueError):
    """Raised when adding terms whose irrational parts cannot be merged."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


def _two_adic_split(q: Fraction) -> tuple[int, Fraction]:
    """Write q = 2**e * u with u having odd numerator and denominator."""
    if q <= 0:
        raise ValueError("positive rational required")
    num, den = q.numerator, q.denominator
    e = 0
    while num % 2 == 0:
        num //= 2
        e += 1
    while den % 2 == 0:
        den //= 2
        e -= 1
    return e, Fraction(num, den)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a positive rational, or None."""
    if q <= 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ExactTerm:
    """rational * pi**(pi_half_power/2) * 2**(two_half_power/2).

    Normal form: a zero mantissa forces both exponents to zero, and whole
    powers of two are folded into the mantissa so two_half_power is 0 or 1.
    """

    mantissa: Fraction
    pi_half_power: int = 0
    two_half_power: int = 0

    def __post_init__(self):
        m = _as_fraction(self.mantissa)
        p = int(self.pi_half_power)
        q = int(self.two_half_power)
        if m == 0:
            p = q = 0
        else:
            whole, q = divmod(q, 2)
            if whole:
                m *= Fraction(2) ** whole
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "pi_half_power", p)
        object.__setattr__(self, "two_half_power", q)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "ExactTerm":
        return cls(Fraction(0))

    @classmethod
    def one(cls) -> "ExactTerm":
        return cls(Fraction(1))

    @classmethod
    def from_rational(cls, value) -> "ExactTerm":
        return cls(_as_fraction(value))

    # -- predicates ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def is_rational(self) -> bool:
        return self.pi_half_power == 0 and self.two_half_power == 0

    def sign(self) -> int:
        if self.mantissa > 0:
            return 1
        if self.mantissa < 0:
            return -1
        return 0

    def _signature(self) -> tuple[int, int]:
        return (self.pi_half_power, self.two_half_power)

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "ExactTerm":
        return ExactTerm(-self.mantissa, self.pi_half_power, self.two_half_power)

    def __abs__(self) -> "ExactTerm":
        return ExactTerm(abs(self.mantissa), self.pi_half_power, self.two_half_power)

    def __add__(self, other) -> "ExactTerm":
        if isinstance(other, (int, Fraction)):
            other = ExactTerm(_as_fraction(other))
        if not isinstance(other, ExactTerm):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self._signature() != other._signature():
            raise IncompatibleTermError(
                f"cannot add {self} and {other}: different irrational parts"
            )
        return ExactTerm(
            self.mantissa + other.mantissa, self.pi_half_power, self.two_half_power
        )

    __radd__ = __add__

    def __sub__(self, other) -> "ExactTerm":
        if isinstance(other, (int, Fraction)):
            other = ExactTerm(_as_fraction(other))
        if not isinstance(other, ExactTerm):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExactTerm":
        return (-self) + other

    def __mul__(self, other) -> "ExactTerm":
        if isinstance(other, (int, Fraction)):
            return ExactTerm(
                self.mantissa * _as_fraction(other),
                self.pi_half_power,
                self.two_half_power,
            )
        if not isinstance(other, ExactTerm):
            return NotImplemented
        return ExactTerm(
            self.mantissa * other.mantissa,
            self.pi_half_power + other.pi_half_power,
            self.two_half_power + other.two_half_power,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactTerm":
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return ExactTerm(self.mantissa / q, self.pi_half_power, self.two_half_power)
        if not isinstance(other, ExactTerm):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero term")
        return ExactTerm(
            self.mantissa / other.mantissa,
            self.pi_half_power - other.pi_half_power,
            self.two_half_power - other.two_half_power,
        )

    def __pow__(self, exponent: int) -> "ExactTerm":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ExactTerm.one() / (self ** (-exponent))
        out = ExactTerm.one()
        for _ in range(exponent):
            out = out * self
        return out

    def _diff_sign(self, other) -> int:
        """Sign of self - other; defined when a signature or a sign decides it."""
        if isinstance(other, (int, Fraction)):
            other = ExactTerm(_as_fraction(other))
        if not isinstance(other, ExactTerm):
            raise TypeError(f"cannot compare ExactTerm with {type(other).__name__}")
        if self.is_zero:
            return -other.sign()
        if other.is_zero:
            return self.sign()
        if self._signature() == other._signature():
            return (self - other).sign()
        if self.sign() != other.sign():
            return 1 if self.sign() > other.sign() else -1
        raise IncompatibleTermError(
            f"cannot order {self} and {other}: different irrational parts"
        )

    def __lt__(self, other):
        return self._diff_sign(other) < 0

    def __le__(self, other):
        return self._diff_sign(other) <= 0

    def __gt__(self, other):
        return self._diff_sign(other) > 0

    def __ge__(self, other):
        return self._diff_sign(other) >= 0

    # -- conversion ----------------------------------------------------

    def to_mpf(self, dps: int = DEFAULT_DPS) -> mpf:
        with mp.workdps(dps + GUARD_DPS):
            value = mpf(self.mantissa.numerator) / self.mantissa.denominator
            if self.pi_half_power:
                value *= mp.pi ** (mpf(self.pi_half_power) / 2)
            if self.two_half_power:
                value *= mp.sqrt(2) ** self.two_half_power
            return value

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [str(self.mantissa)]
        if self.pi_half_power:
            parts.append(f"pi^({self.pi_half_power}/2)")
        if self.two_half_power:
            parts.append("sqrt(2)")
        return " * ".join(parts)


@dataclass(frozen=True, eq=False)
class ComplexRational:
    """re + im*i with exact rational parts.

    The combination scalar produced by the expression parser: stays exact
    through linear-combination bookkeeping and converts late via ``as_mpc``
    (which ``to_mpc`` picks up by duck typing).  Compares equal to plain
    rationals when the imaginary part vanishes.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __add__(self, other) -> "ComplexRational":
        if isinstance(other, (int, Fraction)):
            other = ComplexRational(_as_fraction(other))
        if not isinstance(other, ComplexRational):
            return NotImplemented
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ComplexRational(_as_fraction(other))
        if isinstance(other, ComplexRational):
            return ComplexRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (float, complex, mpf, mp.mpc)):
            # inexact partner: convert late, at the ambient precision
            return self.as_mpc(mp.dps) * other
        return NotImplemented

    __rmul__ = __mul__

    def as_mpc(self, dps: int = DEFAULT_DPS):
        with mp.workdps(dps + GUARD_DPS):
            re = mpf(self.re.numerator) / self.re.denominator
            im = mpf(self.im.numerator) / self.im.denominator
            return mp.mpc(re, im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.im == 1:
            ipart = "i"
        elif self.im == -1:
            ipart = "-i"
        else:
            ipart = f"{self.im}i"
        if self.re == 0:
            return ipart
        sign = "+" if self.im > 0 else "-"
        mag = ipart.lstrip("-")
        return f"{self.re}{sign}{mag}"


@dataclass(frozen=True)
class SqrtTerm:
    """coeff * sqrt(radicand) * pi**(pi_quarters/4), radicand a positive rational.

    The representation is not canonical (3*sqrt(2) == 1*sqrt(18)); equality
    and hashing go through an invariant key instead.
    """

    coeff: Fraction
    radicand: Fraction = Fraction(1)
    pi_quarters: int = 0

    def __post_init__(self):
        c = _as_fraction(self.coeff)
        r = _as_fraction(self.radicand)
        q = int(self.pi_quarters)
        if c == 0:
            r = Fraction(1)
            q = 0
        elif r <= 0:
            raise ValueError(f"radicand must be positive, got {r}")
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "pi_quarters", q)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "SqrtTerm":
        return cls(Fraction(0))

    @classmethod
    def one(cls) -> "SqrtTerm":
        return cls(Fraction(1))

    @classmethod
    def from_rational(cls, value) -> "SqrtTerm":
        return cls(_as_fraction(value))

    @classmethod
    def from_exact_term(cls, term: ExactTerm) -> "SqrtTerm":
        radicand = Fraction(2) ** term.two_half_power if not term.is_zero else Fraction(1)
        return cls(term.mantissa, radicand, 2 * term.pi_half_power)

    # -- predicates -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def sign(self) -> int:
        if self.coeff > 0:
            return 1
        if self.coeff < 0:
            return -1
        return 0

    def _key(self):
        if self.coeff == 0:
            return (0, Fraction(0), 0)
        return (self.sign(), self.coeff * self.coeff * self.radicand, self.pi_quarters)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SqrtTerm(_as_fraction(other))
        if not isinstance(other, SqrtTerm):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    # -- arithmetic ------------------------------------------------------

    def __neg__(self) -> "SqrtTerm":
        return SqrtTerm(-self.coeff, self.radicand, self.pi_quarters)

    def __abs__(self) -> "SqrtTerm":
        return SqrtTerm(abs(self.coeff), self.radicand, self.pi_quarters)

    def __mul__(self, other) -> "SqrtTerm":
        if isinstance(other, (int, Fraction)):
            return SqrtTerm(self.coeff * _as_fraction(other), self.radicand, self.pi_quarters)
        if isinstance(other, ExactTerm):
            other = SqrtTerm.from_exact_term(other)
        if not isinstance(other, SqrtTerm):
            return NotImplemented
        return SqrtTerm(
            self.coeff * other.coeff,
            self.radicand * other.radicand,
            self.pi_quarters + other.pi_quarters,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SqrtTerm":
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return SqrtTerm(self.coeff / q, self.radicand, self.pi_quarters)
        if isinstance(other, ExactTerm):
            other = SqrtTerm.from_exact_term(other)
        if not isinstance(other, SqrtTerm):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero term")
        return SqrtTerm(
            self.coeff / (other.coeff * other.radicand),
            self.radicand * other.radicand,
            self.pi_quarters - other.pi_quarters,
        )

    def __add__(self, other) -> "SqrtTerm":
        if isinstance(other, (int, Fraction)):
            other = SqrtTerm(_as_fraction(other))
        if isinstance(other, ExactTerm):
            other = SqrtTerm.from_exact_term(other)
        if not isinstance(other, SqrtTerm):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_quarters != other.pi_quarters:
            raise IncompatibleTermError(
                f"cannot add {self} and {other}: different pi powers"
            )
        ratio = other.radicand / self.radicand
        root = _rational_sqrt(ratio)
        if root is None:
            raise IncompatibleTermError(
                f"cannot add {self} and {other}: radicand ratio {ratio} is not a square"
            )
        return SqrtTerm(self.coeff + other.coeff * root, self.radicand, self.pi_quarters)

    __radd__ = __add__

    def __sub__(self, other) -> "SqrtTerm":
        if isinstance(other, (int, Fraction)):
            other = SqrtTerm(_as_fraction(other))
        if isinstance(other, ExactTerm):
            other = SqrtTerm.from_exact_term(other)
        if not isinstance(other, SqrtTerm):
            return NotImplemented
        return self + (-other)

    def square(self) -> ExactTerm:
        """Exact square; always representable since the radicand disappears."""
        return ExactTerm(self.coeff * self.coeff * self.radicand, self.pi_quarters, 0)

    # -- conversion -------------------------------------------------------

    def to_exact_term(self) -> ExactTerm:
        """Collapse to ExactTerm when the radicand is a square times a power of 2."""
        if self.is_zero:
            return ExactTerm.zero()
        if self.pi_quarters % 2:
            raise IncompatibleTermError(f"{self}: odd power of pi^(1/4)")
        e, odd = _two_adic_split(self.radicand)
        root = _rational_sqrt(odd)
        if root is None:
            raise IncompatibleTermError(f"{self}: radicand {self.radicand} not reducible")
        return ExactTerm(self.coeff * root, self.pi_quarters // 2, e)

    def to_mpf(self, dps: int = DEFAULT_DPS) -> mpf:
        with mp.workdps(dps + GUARD_DPS):
            value = mpf(self.coeff.numerator) / self.coeff.denominator
            if self.radicand != 1:
                value *= mp.sqrt(mpf(self.radicand.numerator) / self.radicand.denominator)
            if self.pi_quarters:
                value *= mp.pi ** (mpf(self.pi_quarters) / 4)
            return value

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [str(self.coeff)]
        if self.radicand != 1:
            parts.append(f"sqrt({self.radicand})")
        if self.pi_quarters:
            parts.append(f"pi^({self.pi_quarters}/4)")
        return " * ".join(parts)
