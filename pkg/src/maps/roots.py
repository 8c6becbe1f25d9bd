"""Simultaneous polynomial root finding and preimage counting."""

from typing import Callable, List

import numpy as np
from loguru import logger

from ..core.errors import NoConvergenceError


MAX_DEGREE = 8
CLUSTER_TOL = 1e-7
RESIDUAL_TOL = 1e-10


def _horner(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for a in c[::-1]:
        acc = acc * z + a
    return acc


def _polish(c: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    # a Newton step is kept only where it lowers |p|
    poly = np.polynomial.Polynomial(c)
    deriv = poly.deriv()
    for _ in range(steps):
        p = poly(z)
        dp = deriv(z)
        step = np.divide(p, dp, out=np.zeros_like(p), where=dp != 0)
        trial = z - step
        z = np.where(np.abs(poly(trial)) < np.abs(p), trial, z)
    return z


def polynomial_roots(coeffs, max_iter: int = 500) -> np.ndarray:
    """
    All complex roots of sum_k coeffs[k] z^k (ascending coefficients).

    Aberth iteration from a deterministic circle of starting points around the
    root centroid, then a few Newton steps per root. Exact zero roots are split
    off first.

    Raises:
        NoConvergenceError: residual check failed after max_iter sweeps
    """
    c = np.asarray(coeffs, dtype=complex)
    top = len(c) - 1
    while top > 0 and c[top] == 0:
        top -= 1
    c = c[: top + 1]
    n = len(c) - 1
    if n < 1:
        raise ValueError("need a polynomial of degree >= 1")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds {MAX_DEGREE}")

    zeros = 0
    while c[zeros] == 0:
        zeros += 1
    c = c[zeros:]
    n = len(c) - 1
    found = [0j] * zeros
    if n == 0:
        return np.array(found, dtype=complex)
    if n == 1:
        return np.array(found + [-c[0] / c[1]], dtype=complex)

    monic = c / c[-1]
    dc = np.array([k * monic[k] for k in range(1, n + 1)], dtype=complex)
    center = -monic[n - 1] / n
    radius = max(abs(monic[k]) ** (1.0 / (n - k)) for k in range(n))
    radius = radius if radius > 0 else 1.0
    z = center + radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))

    scale = np.max(np.abs(monic))
    for it in range(max_iter):
        p = _horner(monic, z)
        dp = _horner(dc, z)
        dp = np.where(dp == 0, 1e-300, dp)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        offset = ratio / (1.0 - ratio * inv.sum(axis=1))
        z = z - offset
        if np.all(np.abs(offset) <= 1e-15 * np.maximum(1.0, np.abs(z))):
            break

    z = _polish(monic, z)
    residual = np.abs(_horner(monic, z))
    if np.any(~np.isfinite(z)) or np.any(residual > RESIDUAL_TOL * scale):
        raise NoConvergenceError(
            "Root iteration did not converge", {"degree": n, "max_residual": float(np.nanmax(residual))}
        )
    logger.trace(f"roots of degree {n} polynomial after {it + 1} sweeps")
    return np.array(found + list(z), dtype=complex)


def cluster_roots(roots: np.ndarray, tol: float = CLUSTER_TOL) -> List[List[complex]]:
    """Group numerically coincident roots (multiple roots)."""
    clusters: List[List[complex]] = []
    for r in roots:
        for cl in clusters:
            ref = np.mean(cl)
            if abs(r - ref) <= tol * max(1.0, abs(ref)):
                cl.append(complex(r))
                break
        else:
            clusters.append([complex(r)])
    return clusters


def count_preimages_in(fmap, w: complex, region: Callable[[complex], bool]) -> int:
    """
    Number of solutions of fmap(z) = w in ``region``, with multiplicity.

    Members of a multiple-root cluster are decided together at the centroid.
    """
    c = np.array(fmap.effective_coeffs, dtype=complex)
    c[0] -= w
    count = 0
    for cl in cluster_roots(polynomial_roots(c)):
        if region(complex(np.mean(cl))):
            count += len(cl)
    return count
