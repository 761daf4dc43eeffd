"""Paraboloid geometry and the RIS element layout on the rim annulus.

The dish is a prime-focus paraboloid ``z = rho**2 / (4 f)`` with its vertex at
the origin and the feed at ``(0, 0, f)``.  Angles ``theta_f`` are measured at
the feed from the -z axis, so ``rho = 2 f tan(theta_f / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_F_OVER_D = 0.375

# rings may overhang the annulus edge by this much (fraction of element side)
_RING_SLACK = 1e-9


class ConfigurationError(ValueError):
    """Geometry parameters that cannot produce a valid dish or layout."""


def radial_from_angle(theta_f, f):
    """Radial distance in the xy-plane of the surface point seen at ``theta_f``."""
    theta_f = np.asarray(theta_f, dtype=float)
    if np.any(theta_f < 0) or np.any(theta_f >= np.pi):
        raise ValueError("theta_f must lie in [0, pi)")
    out = 2.0 * f * np.tan(theta_f / 2.0)
    return float(out) if out.ndim == 0 else out


def angle_from_radial(rho, f):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    out = 2.0 * np.arctan2(rho, 2.0 * f)
    return float(out) if out.ndim == 0 else out


def surface_point(rho, phi, f):
    """Point on the paraboloid as an (..., 3) array measured from the vertex."""
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        np.broadcast_arrays(rho * np.cos(phi), rho * np.sin(phi), rho**2 / (4.0 * f)),
        axis=-1,
    )


def feed_vector(rho, phi, f):
    """Unit vector from the feed to the surface point and the path length.

    Returns ``(s_hat, s)`` where ``s = rho**2/(4f) + f``.
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    vec = np.stack(
        np.broadcast_arrays(
            rho * np.cos(phi), rho * np.sin(phi), rho**2 / (4.0 * f) - f
        ),
        axis=-1,
    )
    s = rho**2 / (4.0 * f) + f
    return vec / np.asarray(s)[..., None], s


def surface_normal(rho, phi, f):
    """Unit normal of the paraboloid pointing toward the feed (+z at the vertex)."""
    x, y, _ = np.moveaxis(surface_point(rho, phi, f), -1, 0)
    n = np.stack(np.broadcast_arrays(-x / (2.0 * f), -y / (2.0 * f), np.ones_like(x)), axis=-1)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


@dataclass(frozen=True)
class DishGeometry:
    """Axisymmetric prime-focus paraboloid split into a fixed core and a rim.

    ``theta1`` is the feed angle at the edge of the fixed portion and
    ``theta0`` the feed angle at the outer rim.
    """

    diameter: float
    focal_length: float
    theta1: float
    theta0: float
    feed_q: float = 1.5
    feed_amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not self.focal_length > 0:
            raise ConfigurationError("focal length must be positive")
        if not 0 < self.theta1 < self.theta0 < math.pi:
            raise ConfigurationError("need 0 < theta1 < theta0 < pi")
        if not self.feed_q > 0:
            raise ConfigurationError("feed exponent q must be positive")
        expected = 4.0 * self.focal_length * math.tan(self.theta0 / 2.0)
        if not math.isclose(expected, self.diameter, rel_tol=1e-9):
            raise ConfigurationError(
                f"diameter {self.diameter} inconsistent with f and theta0 (expects {expected})"
            )

    @classmethod
    def from_rim(cls, diameter, rim_width, focal_length=None, feed_q=1.5,
                 feed_amplitude=1.0 + 0.0j):
        """Build from dish diameter and radial width of the reconfigurable rim.

        ``focal_length`` defaults to ``0.375 * diameter``.
        """
        if focal_length is None:
            focal_length = DEFAULT_F_OVER_D * diameter
        if not 0 < rim_width < diameter / 2:
            raise ConfigurationError("rim width must lie in (0, D/2)")
        rho0 = diameter / 2.0
        rho1 = rho0 - rim_width
        theta0 = angle_from_radial(rho0, focal_length)
        theta1 = angle_from_radial(rho1, focal_length)
        return cls(diameter, focal_length, theta1, theta0, feed_q, complex(feed_amplitude))

    @property
    def rho0(self) -> float:
        return radial_from_angle(self.theta0, self.focal_length)

    @property
    def rho1(self) -> float:
        return radial_from_angle(self.theta1, self.focal_length)

    @property
    def rim_width(self) -> float:
        return self.rho0 - self.rho1

    @property
    def f_over_d(self) -> float:
        return self.focal_length / self.diameter


@dataclass(frozen=True)
class RimLayout:
    """RIS element centres on the rim, ordered ring by ring in increasing phi.

    ``pairs[n] = (2n, 2n + 1)`` (0-based) are circumferential neighbours on the
    same ring.
    """

    rho: np.ndarray
    phi: np.ndarray
    ring: np.ndarray
    element_side: float
    area: float
    pairs: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.rho, self.phi, self.ring, self.pairs):
            arr.setflags(write=False)

    def __len__(self):
        return self.rho.size

    @property
    def n_elements(self) -> int:
        return self.rho.size

    @property
    def mean_radius(self) -> float:
        return float(np.mean(self.rho))

    def points(self, f):
        return surface_point(self.rho, self.phi, f)


def ring_radii(geom: DishGeometry, side: float) -> np.ndarray:
    """Centre radii of the concentric element rings covering the rim."""
    width = geom.rim_width
    if side > width * (1 + _RING_SLACK):
        raise ConfigurationError(
            f"rim width {width:.4g} m is narrower than one element ({side:.4g} m)"
        )
    n_rings = int(math.floor(width / side * (1 + _RING_SLACK)))
    return geom.rho1 + side * (np.arange(n_rings) + 0.5)


def build_rim_layout(geom: DishGeometry, wavelength: float) -> RimLayout:
    """Pack square cells of side ``wavelength/2`` on the rim in concentric rings.

    Each ring at radius ``rho_c`` holds ``floor(2 pi rho_c / side)`` cells,
    rounded down to an even count so that every pair stays on one ring.
    """
    side = 0.5 * wavelength
    rho_list, phi_list, ring_list = [], [], []
    for i, rc in enumerate(ring_radii(geom, side)):
        count = int(math.floor(2.0 * math.pi * rc / side))
        count -= count % 2
        if count < 2:
            continue
        rho_list.append(np.full(count, rc))
        phi_list.append(2.0 * np.pi * np.arange(count) / count)
        ring_list.append(np.full(count, i))
    if not rho_list:
        raise ConfigurationError("rim too small to hold a single element pair")
    rho = np.concatenate(rho_list)
    phi = np.concatenate(phi_list)
    ring = np.concatenate(ring_list)
    pairs = np.arange(rho.size).reshape(-1, 2)
    return RimLayout(rho, phi, ring, side, side * side, pairs)


def continuum_element_count(geom: DishGeometry, wavelength: float) -> float:
    side = 0.5 * wavelength
    return math.pi * (geom.rho0**2 - geom.rho1**2) / side**2
