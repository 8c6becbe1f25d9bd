"""Rotation numbers carried as continued-fraction digit streams."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpf

from ..core.errors import PrecisionExhaustedError


DEFAULT_PRECISION_BITS = 512

Real = Union[float, int, str, Fraction, "mpmath.mpf"]


@dataclass(frozen=True)
class RotationNumber:
    """
    Number in [0, 1) given by digits [a0; a1, a2, ...].

    The stream is ``prefix`` (a0 first) followed by ``period`` repeated forever.
    An empty period means the expansion terminates (a rational number).
    """
    prefix: Tuple[int, ...]
    period: Tuple[int, ...] = ()
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(a) for a in self.prefix))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if not self.prefix:
            raise ValueError("prefix must contain a0")
        if any(a < 1 for a in self.prefix[1:]) or any(a < 1 for a in self.period):
            raise ValueError("digits a_j (j >= 1) must be >= 1")

    @property
    def is_finite(self) -> bool:
        return not self.period

    def digit(self, j: int) -> int:
        """Digit a_j; raises IndexError past the end of a finite expansion."""
        if j < 0:
            raise IndexError(j)
        if j < len(self.prefix):
            return self.prefix[j]
        if not self.period:
            raise IndexError(f"finite expansion has no digit {j}")
        return self.period[(j - len(self.prefix)) % len(self.period)]

    def digits(self, n: int) -> List[int]:
        """Digits a0..a_n (shorter if the expansion terminates first)."""
        if self.is_finite:
            return list(self.prefix[: n + 1])
        return [self.digit(j) for j in range(n + 1)]

    def head(self, n: int) -> "RotationNumber":
        """Finite truncation [a0; a1, ..., a_n]."""
        return RotationNumber(tuple(self.digits(n)), (), self.precision_bits)

    @cached_property
    def value(self) -> mpf:
        """High-precision value at ``precision_bits``."""
        with mp.workprec(self.precision_bits):
            if self.is_finite:
                return cf_eval(self.prefix, self.precision_bits)
            t = _periodic_tail(self.period)
            for a in reversed(self.prefix[1:]):
                t = a + 1 / t
            return mpf(self.prefix[0]) + 1 / t

    def __float__(self) -> float:
        return float(self.value)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        data: Dict[str, Any] = {"prefix": list(self.prefix)}
        if self.period:
            data["period"] = list(self.period)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], precision_bits: int = DEFAULT_PRECISION_BITS) -> "RotationNumber":
        return cls(tuple(data["prefix"]), tuple(data.get("period", ())), precision_bits)

    @classmethod
    def periodic(cls, block: Sequence[int], precision_bits: int = DEFAULT_PRECISION_BITS) -> "RotationNumber":
        """[0; block, block, ...]"""
        return cls((0,), tuple(block), precision_bits)

    @classmethod
    def golden(cls, precision_bits: int = DEFAULT_PRECISION_BITS) -> "RotationNumber":
        return cls.periodic((1,), precision_bits)

    @classmethod
    def from_value(cls, x: Real, n_terms: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> "RotationNumber":
        """Finite rotation number from the first ``n_terms`` digits of x."""
        return cls(tuple(cf_expand(x, n_terms, precision_bits)), (), precision_bits)

    def __repr__(self) -> str:
        body = ",".join(str(a) for a in self.prefix[1:])
        if self.period:
            tail = ",".join(str(a) for a in self.period)
            body = f"{body},({tail})*" if body else f"({tail})*"
        return f"[{self.prefix[0]};{body}]"


def _periodic_tail(block: Tuple[int, ...]) -> mpf:
    # y = [b1; b2, ..., bm, y] solves k_m y^2 + (k_{m-1} - h_m) y - h_{m-1} = 0
    h_prev, h = 1, block[0]
    k_prev, k = 0, 1
    for b in block[1:]:
        h_prev, h = h, b * h + h_prev
        k_prev, k = k, b * k + k_prev
    disc = mpf(k_prev - h) ** 2 + 4 * mpf(k) * h_prev
    return ((h - k_prev) + mpmath.sqrt(disc)) / (2 * k)


def cf_expand(x: Real, n_terms: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> List[int]:
    """
    Gauss-map expansion of x in (0, 1) into [0; a1, ..., a_n_terms].

    Floats carry a relative input error of 2^-52; strings and mpf values are
    taken at ``precision_bits``. The error is propagated through each step of
    the Gauss map. Returns a shorter list when the remainder is an integer to
    within that error (terminating expansion).

    Raises:
        PrecisionExhaustedError: error reached the size of a digit before n_terms
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")

    if isinstance(x, (Fraction, int)):
        return _expand_exact(Fraction(x), n_terms)

    with mp.workprec(precision_bits):
        if isinstance(x, float):
            t = mpf(x)
            err = abs(t) * mpf(2) ** -52
        else:
            t = mpf(x)
            err = abs(t) * mpf(2) ** -(precision_bits - 8)
        if not 0 < t < 1:
            raise ValueError(f"cf_expand needs 0 < x < 1, got {x}")

        digits = [0]
        for k in range(1, n_terms + 1):
            y = 1 / t
            err = err / (t * t - err * t) if err < t else mpf("inf")
            if err >= mpf("0.5"):
                raise PrecisionExhaustedError(
                    "Continued fraction digits exhausted working precision",
                    {"digits_found": k - 1, "requested": n_terms, "precision_bits": precision_bits},
                )
            a = mpmath.nint(y)
            if abs(y - a) <= err:
                digits.append(int(a))
                break
            a = mpmath.floor(y)
            digits.append(int(a))
            t = y - a
        return digits


def _expand_exact(x: Fraction, n_terms: int) -> List[int]:
    if not 0 < x < 1:
        raise ValueError(f"cf_expand needs 0 < x < 1, got {x}")
    digits = [0]
    num, den = x.numerator, x.denominator
    while len(digits) <= n_terms and num:
        a, r = divmod(den, num)
        digits.append(a)
        den, num = num, r
    return digits


def cf_eval(digits: Sequence[int], precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Value of a finite continued fraction at working precision."""
    p, q = convergent(digits)
    with mp.workprec(precision_bits):
        return mpf(p) / mpf(q)


def convergent(digits: Sequence[int]) -> Tuple[int, int]:
    """Exact (p, q) of the finite continued fraction."""
    if not digits:
        raise ValueError("empty digit sequence")
    p_prev, p = 1, int(digits[0])
    q_prev, q = 0, 1
    for a in digits[1:]:
        if a < 1:
            raise ValueError("digits a_j (j >= 1) must be >= 1")
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q
