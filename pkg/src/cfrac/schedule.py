"""Perturbed rotation numbers and the theta_l schedule."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import mpmath
from loguru import logger

from .convergents import approximants, brjuno_sum, denominators
from .rotation import RotationNumber
from ..core.errors import InvalidScheduleError


AN_RULES = ("linear", "power", "exp_square", "constant")
EXP_SQUARE_MAX_DIGITS = 300


def perturbed_rotation(alpha: RotationNumber, n: int, A_n: int, theta: RotationNumber) -> RotationNumber:
    """
    alpha_n = [a0, a1, ..., a_n, A_n, t1, t2, ...].

    The result shares the convergents of alpha through index n.
    """
    if A_n < 1:
        raise ValueError("A_n must be >= 1")
    head = alpha.digits(n)
    if len(head) != n + 1:
        raise ValueError(f"alpha has fewer than {n} fractional digits")
    return RotationNumber(
        tuple(head) + (int(A_n),) + theta.prefix[1:],
        theta.period,
        max(alpha.precision_bits, theta.precision_bits),
    )


def an_rule(rule: str, n: int, q_n: int, scale: int = 1, max_digits: int = EXP_SQUARE_MAX_DIGITS) -> int:
    """
    Integer A_n for a named growth rule.

    linear:     scale * n
    power:      q_n ** scale
    exp_square: ceil(exp(scale * q_n^2)), so A_n^(1/q_n) grows without bound
                while (log A_n)^(1/q_n) tends to 1; capped at 10**max_digits
    constant:   scale
    """
    if rule == "linear":
        value = scale * n
    elif rule == "power":
        value = q_n ** scale
    elif rule == "exp_square":
        with mpmath.workdps(30):
            exponent = scale * q_n * q_n
            if exponent > max_digits * math.log(10):
                value = 10 ** max_digits
            else:
                value = int(mpmath.ceil(mpmath.exp(exponent)))
    elif rule == "constant":
        value = scale
    else:
        raise InvalidScheduleError(f"Unknown A_n rule: {rule}", {"valid": list(AN_RULES)})
    return max(1, int(value))


def an_condition_report(alpha: RotationNumber, n_values: Sequence[int], rule: str, scale: int = 1,
                        log_degree: float = 3.0, root_log_factor: float = 1.0) -> List[Dict[str, Any]]:
    """
    Finite-range evidence for the A_n growth conditions, one row per n.

    log_root_ok: (log A_n)^(1/q_n) <= (1 + q_n)^(log_degree/q_n). The bound tends
    to 1, so rows that keep passing are consistent with limsup (log A_n)^(1/q_n) <= 1.

    root_ok: A_n^(1/q_n) >= root_log_factor * log(q_n), a floor that grows without
    bound, as the area experiments need.
    """
    rows = []
    qs = denominators(alpha, max(n_values))
    for n in n_values:
        q_n = qs[n - 1]
        A = an_rule(rule, n, q_n, scale)
        log_a = math.log(A)
        log_root = log_a ** (1.0 / q_n) if log_a > 0 else 0.0
        log_bound = (1.0 + q_n) ** (log_degree / q_n)
        root = math.exp(log_a / q_n) if log_a / q_n < 700 else math.inf
        root_min = root_log_factor * math.log(q_n)
        rows.append({
            "n": n,
            "q_n": q_n,
            "A_n_log10": log_a / math.log(10),
            "log_root": log_root,
            "log_bound": log_bound,
            "log_root_ok": log_root <= log_bound,
            "root": root,
            "root_min": root_min,
            "root_ok": root >= root_min,
        })
    failing = [r["n"] for r in rows if not (r["log_root_ok"] and r["root_ok"])]
    if failing:
        logger.debug(f"A_n rule {rule!r} misses a growth condition at n in {failing}")
    return rows


@dataclass
class ThetaSchedule:
    """theta_l = [0, b_1, ..., b_{m_l + 1}, N, N, ...] for l = 1..L."""
    b_table: List[int]
    m_sequence: List[int]
    a_sequence: List[int]
    N: int
    thetas: List[RotationNumber] = field(default_factory=list)

    def b(self, j: int) -> int:
        """b_j for j >= 1 (N past the table)."""
        if j < 1:
            raise IndexError(j)
        return self.b_table[j - 1] if j <= len(self.b_table) else self.N

    @property
    def limit(self) -> RotationNumber:
        """Digit stream of the limit theta (every b_j, then N forever)."""
        return self.thetas[-1]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "b_table": self.b_table,
            "m_sequence": self.m_sequence,
            "a_sequence": self.a_sequence,
            "N": self.N,
            "thetas": [t.to_dict() for t in self.thetas],
        }


def theta_schedule(
    theta0_digits: Union[Sequence[int], RotationNumber],
    m_sequence: Sequence[int],
    A_sequence: Sequence[int],
    N: int,
    precision_bits: int = 512,
) -> ThetaSchedule:
    """
    Build theta_1..theta_L from the b_j table.

    b_j = a_j (digits of theta0) for j <= m_1, b_{m_t + 1} = A_t, and N otherwise.

    Raises:
        InvalidScheduleError: m not strictly increasing, lengths differ, A_t < 1
    """
    m = [int(v) for v in m_sequence]
    A = [int(v) for v in A_sequence]
    if not m:
        raise InvalidScheduleError("Empty m sequence")
    if len(m) != len(A):
        raise InvalidScheduleError("m and A sequences differ in length", {"m": len(m), "A": len(A)})
    if m[0] < 1 or any(b <= a for a, b in zip(m, m[1:])):
        raise InvalidScheduleError("m sequence must be positive and strictly increasing", {"m": m})
    if any(a < 1 for a in A):
        raise InvalidScheduleError("A_t must be >= 1", {"A": A})

    def a_j(j: int) -> int:
        if isinstance(theta0_digits, RotationNumber):
            return theta0_digits.digit(j)
        if j >= len(theta0_digits):
            raise InvalidScheduleError("theta0 has fewer digits than m_1", {"m_1": m[0]})
        return int(theta0_digits[j])

    special = {mt + 1: At for mt, At in zip(m, A)}
    table = []
    for j in range(1, m[-1] + 2):
        if j in special:
            table.append(special[j])
        elif j <= m[0]:
            table.append(a_j(j))
        else:
            table.append(int(N))

    schedule = ThetaSchedule(b_table=table, m_sequence=m, a_sequence=A, N=int(N))
    for mt in m:
        schedule.thetas.append(RotationNumber((0,) + tuple(table[: mt + 1]), (int(N),), precision_bits))
    logger.debug(f"theta schedule: {len(schedule.thetas)} levels, b table length {len(table)}")
    return schedule


def brjuno_divergence_witness(schedule: ThetaSchedule, bound: float, extra_terms: int = 2) -> Dict[str, Any]:
    """
    Partial Brjuno sums of the limit theta along the schedule.

    Reports the level terms log(A_t)/q_{m_t} and the first index whose
    partial sum exceeds ``bound`` (None when the finite schedule never does).
    """
    limit = schedule.limit
    n_max = schedule.m_sequence[-1] + 1 + extra_terms
    qs = denominators(limit, n_max + 1)
    partial = [brjuno_sum(limit, n) for n in range(1, n_max + 1)]
    level_terms = [
        math.log(At) / qs[mt - 1] for mt, At in zip(schedule.m_sequence, schedule.a_sequence)
    ]
    first: Optional[int] = next((i + 1 for i, s in enumerate(partial) if s > bound), None)
    return {
        "partial_sums": partial,
        "level_terms": level_terms,
        "first_exceeding": first,
        "bound": bound,
    }


def shared_convergents(a: RotationNumber, b: RotationNumber, n: int) -> bool:
    """True when a and b have identical convergents through index n."""
    return approximants(a, n) == approximants(b, n)
