"""Approximants, Brjuno partial sums and high-type membership."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

from .rotation import RotationNumber


Digits = Union[Sequence[int], RotationNumber]


@dataclass(frozen=True)
class Approximant:
    """Convergent p_n/q_n of index n."""
    p: int
    q: int
    index: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"index": self.index, "p": self.p, "q": self.q}


def _digit_at(digits: Digits, j: int) -> int:
    if isinstance(digits, RotationNumber):
        return digits.digit(j)
    return int(digits[j])


def _available(digits: Digits) -> float:
    """Number of fractional digits available (inf for periodic streams)."""
    if isinstance(digits, RotationNumber):
        return math.inf if digits.period else len(digits.prefix) - 1
    return len(digits) - 1


def approximants(digits: Digits, n: int) -> List[Approximant]:
    """
    Convergents of indices 1..n.

    Uses p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2} with
    p_{-1} = 1, p_0 = a_0, q_{-1} = 0, q_0 = 1.
    """
    if n > _available(digits):
        raise ValueError(f"need {n} fractional digits, have {_available(digits)}")
    p_prev, p = 1, _digit_at(digits, 0)
    q_prev, q = 0, 1
    out: List[Approximant] = []
    for k in range(1, n + 1):
        a = _digit_at(digits, k)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Approximant(p=p, q=q, index=k))
    return out


def denominators(digits: Digits, n: int) -> List[int]:
    return [a.q for a in approximants(digits, n)]


def brjuno_sum(digits: Digits, n_terms: int) -> float:
    """
    Partial Brjuno sum over consecutive approximant denominators.

    With q listed from index 1 (q_1, q_2, ...), returns
    sum_{k=1}^{n_terms} log(q_{k+1}) / q_k. For golden digits the first term is
    log(2)/1. The omitted log(q_1)/q_0 = log(a_1) term never affects convergence.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    qs = denominators(digits, n_terms + 1)
    return math.fsum(math.log(qs[k + 1]) / qs[k] for k in range(n_terms))


def is_high_type(digits: Digits, N: int) -> bool:
    """True iff every inspected a_j (j >= 1) is >= N."""
    if isinstance(digits, RotationNumber):
        inspected = list(digits.prefix[1:]) + list(digits.period)
    else:
        inspected = [int(a) for a in digits[1:]]
    if not inspected:
        raise ValueError("need at least one fractional digit")
    return all(a >= N for a in inspected)
