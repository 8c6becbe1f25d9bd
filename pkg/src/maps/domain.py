"""The fixed domain V = g(C-hat minus E) of the Inou-Shishikura class."""

from dataclasses import dataclass

import numpy as np
from skimage.measure import points_in_poly


@dataclass(frozen=True)
class ISDomain:
    """Ellipse E and the map g(z) = -4z/(1+z)^2; no free parameters."""
    center: float = -0.18
    semi_x: float = 1.24
    semi_y: float = 1.04

    @staticmethod
    def g(w):
        return -4 * w / (1 + w) ** 2

    def inside_ellipse(self, w):
        """Closed ellipse test (boundary counts as inside E)."""
        u = (np.real(w) - self.center) / self.semi_x
        v = np.imag(w) / self.semi_y
        return u * u + v * v <= 1.0

    def preimages(self, z):
        """
        Both roots of z w^2 + (2z + 4) w + z = 0, i.e. g(w) = z.

        The larger root is formed without cancellation and the other follows from
        the product of roots being 1.
        """
        z = np.asarray(z, dtype=complex)
        s = 2 * np.sqrt(z + 1)
        b = -(z + 2)
        big = np.where(np.abs(b - s) >= np.abs(b + s), b - s, b + s)
        with np.errstate(divide="ignore", invalid="ignore"):
            w1 = big / z
            w2 = 1 / w1
        return w1, w2

    def contains(self, z):
        """z in V iff some g-preimage of z lies strictly outside E; 0 is in V."""
        z_arr = np.asarray(z, dtype=complex)
        w1, w2 = self.preimages(z_arr)
        with np.errstate(invalid="ignore"):
            out = ~self.inside_ellipse(w1) | ~self.inside_ellipse(w2)
        out = np.where(z_arr == 0, True, out)
        return bool(out) if out.ndim == 0 else out

    def boundary(self, m: int = 4096) -> np.ndarray:
        """Closed curve g(boundary of E) sampled at m points."""
        t = 2 * np.pi * np.arange(m) / m
        w = self.center + self.semi_x * np.cos(t) + 1j * self.semi_y * np.sin(t)
        return self.g(w)

    def contains_by_winding(self, z, m: int = 4096):
        """Point-in-polygon oracle against the sampled boundary curve."""
        curve = self.boundary(m)
        poly = np.column_stack([curve.real, curve.imag])
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        return points_in_poly(np.column_stack([pts.real, pts.imag]), poly)


IS_DOMAIN = ISDomain()


def is_in_V(z):
    """Membership in the fixed domain V."""
    return IS_DOMAIN.contains(z)
