"""Compiled per-cell orbit kernels."""

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _poly(coeffs, z):
    acc = coeffs[coeffs.shape[0] - 1]
    for m in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[m]
    return acc


@njit(parallel=True, cache=True)
def escape_kernel(coeffs, xmin, ymin, dx, dy, nx, ny, horizon, r_escape):
    """1 where the centre orbit stays in |z| <= r_escape for horizon steps, else 0."""
    out = np.zeros((ny, nx), dtype=np.uint8)
    r2 = r_escape * r_escape
    for j in prange(ny):
        y = ymin + (j + 0.5) * dy
        for i in range(nx):
            z = complex(xmin + (i + 0.5) * dx, y)
            bounded = 1
            for k in range(horizon + 1):
                if z.real * z.real + z.imag * z.imag > r2:
                    bounded = 0
                    break
                if k < horizon:
                    z = _poly(coeffs, z)
            out[j, i] = bounded
    return out


@njit(parallel=True, cache=True)
def confinement_kernel(coeffs, allowed, xmin, ymin, dx, dy, horizon):
    """1 for allowed cells whose centre orbit lands in allowed cells for horizon steps."""
    ny, nx = allowed.shape
    out = np.zeros((ny, nx), dtype=np.uint8)
    for j in prange(ny):
        y = ymin + (j + 0.5) * dy
        for i in range(nx):
            if allowed[j, i] == 0:
                continue
            z = complex(xmin + (i + 0.5) * dx, y)
            stays = 1
            for _ in range(horizon):
                z = _poly(coeffs, z)
                fc = (z.real - xmin) / dx
                fr = (z.imag - ymin) / dy
                if not (fc >= 0.0 and fc < nx and fr >= 0.0 and fr < ny):
                    stays = 0
                    break
                if allowed[int(fr), int(fc)] == 0:
                    stays = 0
                    break
            out[j, i] = stays
    return out


@njit(cache=True, inline="always")
def _bilinear(dist, fr, fc):
    ny, nx = dist.shape
    r0 = int(np.floor(fr))
    c0 = int(np.floor(fc))
    if r0 < 0 or c0 < 0 or r0 + 1 >= ny or c0 + 1 >= nx:
        return np.inf
    tr = fr - r0
    tc = fc - c0
    top = dist[r0, c0] * (1.0 - tc) + dist[r0, c0 + 1] * tc
    bottom = dist[r0 + 1, c0] * (1.0 - tc) + dist[r0 + 1, c0 + 1] * tc
    return top * (1.0 - tr) + bottom * tr


@njit(parallel=True, cache=True)
def neighborhood_kernel(coeffs, dist, xmin, ymin, dx, dy, horizon, delta):
    """1 where every orbit point up to horizon lies within delta of the region encoded by dist."""
    ny, nx = dist.shape
    out = np.zeros((ny, nx), dtype=np.uint8)
    for j in prange(ny):
        y = ymin + (j + 0.5) * dy
        for i in range(nx):
            if dist[j, i] >= delta:
                continue
            z = complex(xmin + (i + 0.5) * dx, y)
            stays = 1
            for _ in range(horizon):
                z = _poly(coeffs, z)
                d = _bilinear(dist, (z.imag - ymin) / dy - 0.5, (z.real - xmin) / dx - 0.5)
                if d >= delta:
                    stays = 0
                    break
            out[j, i] = stays
    return out
