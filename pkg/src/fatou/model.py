"""Model coordinate in which a near-parabolic map is close to translation by one."""

from dataclasses import dataclass

import numpy as np

from ..core.errors import NewtonDivergenceError


def cut_log(x, cut: float):
    """Logarithm with its branch cut along the ray of direction ``cut``; arg in (cut, cut + 2 pi)."""
    x = np.asarray(x, dtype=complex)
    arg = np.angle(-x * np.exp(-1j * cut)) + cut + np.pi
    out = np.log(np.abs(x)) + 1j * arg
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ModelCoordinate:
    """
    w(z) = log z / (2 pi i alpha) + log(z - sigma) / log(mu).

    The two logarithms are cut along the line through 0 and sigma, outside the
    segment between them, so w is single valued on the petal.
    """
    sigma: complex
    alpha: float
    log_mu: complex

    @property
    def cut_zero(self) -> float:
        return float(np.angle(-self.sigma))

    @property
    def cut_sigma(self) -> float:
        return float(np.angle(self.sigma))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (cut_log(z, self.cut_zero) / (2j * np.pi * self.alpha)
               + cut_log(z - self.sigma, self.cut_sigma) / self.log_mu)
        return complex(out) if np.ndim(out) == 0 else out

    def deriv(self, z: complex) -> complex:
        return 1.0 / (2j * np.pi * self.alpha * z) + 1.0 / ((z - self.sigma) * self.log_mu)

    def _mobius_inverse(self, w: complex) -> complex:
        e = np.exp(2j * np.pi * self.alpha * w)
        return complex(self.sigma * e / (e - 1.0))

    def _mobius(self, z: complex) -> complex:
        return complex(np.log(z / (z - self.sigma)) / (2j * np.pi * self.alpha))

    def inverse(self, w: complex, seed: complex | None = None, tol: float = 1e-13, max_iter: int = 60) -> complex:
        """
        Solve w(z) = target by damped Newton.

        Without a seed, the Moebius model (exact for log(mu) = -2 pi i alpha) is
        corrected a few times for the difference between the two coordinates.

        Raises:
            NewtonDivergenceError: no convergence within max_iter
        """
        if seed is None:
            z = self._mobius_inverse(w)
            for _ in range(4):
                shift = self(z) - self._mobius(z)
                z = self._mobius_inverse(w - shift)
        else:
            z = complex(seed)
        residual = abs(self(z) - w)
        for _ in range(max_iter):
            if residual <= tol * max(1.0, abs(w)):
                return z
            step = (self(z) - w) / self.deriv(z)
            t = 1.0
            while t > 1e-6:
                trial = z - t * step
                r = abs(self(trial) - w)
                if r < residual:
                    z, residual = trial, r
                    break
                t *= 0.5
            else:
                break
        if residual <= 1e3 * tol * max(1.0, abs(w)):
            return z
        raise NewtonDivergenceError("Model coordinate inverse did not converge", {"w": w, "residual": residual})
