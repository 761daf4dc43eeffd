"""Physical-optics fields of the dish and the nulling linear system.

Far-field quantities drop the common ``exp(-j beta r) / r`` factor; every
field shares the prefactor held by :class:`FieldScale`, so nulls and solved
weights do not depend on it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .geometry import (
    SPEED_OF_LIGHT,
    DishGeometry,
    RimLayout,
    feed_vector,
    surface_normal,
    surface_point,
)

MU0 = 4e-7 * math.pi
ETA0 = MU0 * SPEED_OF_LIGHT


class DegenerateSystemError(ValueError):
    pass


class QuadratureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FarFieldTarget:
    """A far-field direction (zenith ``psi``, azimuth ``phi``) at wavenumber ``beta``."""

    psi: float
    phi: float
    beta: float
    kind: str = "null"

    def __post_init__(self):
        if self.kind not in ("null", "mainlobe"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if not 0 <= self.psi < math.pi / 2:
            raise ValueError("psi must lie in [0, pi/2)")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.kind == "mainlobe" and self.psi != 0:
            raise ValueError("mainlobe target must sit at psi = 0")

    @classmethod
    def from_degrees(cls, psi_deg, phi_deg, freq_hz, kind="null"):
        return cls(math.radians(psi_deg), math.radians(phi_deg),
                   2 * math.pi * freq_hz / SPEED_OF_LIGHT, kind)

    @property
    def freq_hz(self) -> float:
        return self.beta * SPEED_OF_LIGHT / (2 * math.pi)

    @property
    def psi_deg(self) -> float:
        return math.degrees(self.psi)

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)

    def key(self):
        return (self.psi, self.phi, self.beta)


@dataclass(frozen=True)
class FieldScale:
    """Prefactor ``-j omega mu0 / (4 pi)`` times an arbitrary complex constant."""

    extra: complex = 1.0 + 0.0j

    def factor(self, beta):
        omega = beta * SPEED_OF_LIGHT
        return -1j * omega * MU0 / (4 * math.pi) * self.extra

    def describe(self) -> str:
        return f"-j*omega*mu0/(4*pi) * ({self.extra.real:g}{self.extra.imag:+g}j), exp(-j*beta*r)/r dropped"


def direction(psi, phi):
    """Far-field unit vector(s) as an (..., 3) array."""
    psi = np.asarray(psi, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        np.broadcast_arrays(np.sin(psi) * np.cos(phi), np.sin(psi) * np.sin(phi), np.cos(psi)),
        axis=-1,
    )


def copol_unit(psi, phi):
    """Co-polar unit vector for a y-polarised feed.

    Expanded closed form; equals ``r x (y x r)`` normalised, so boresight
    maps to +y.
    """
    psi = np.asarray(psi, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sp2 = np.sin(psi) ** 2
    denom2 = 1.0 - sp2 * np.sin(phi) ** 2
    if np.any(denom2 <= 1e-15):
        raise ValueError("co-pol direction undefined along the y axis")
    vec = np.stack(
        np.broadcast_arrays(
            -sp2 * np.cos(phi) * np.sin(phi),
            np.cos(psi) ** 2 + sp2 * np.cos(phi) ** 2,
            -np.cos(psi) * np.sin(psi) * np.sin(phi),
        ),
        axis=-1,
    )
    return vec / np.sqrt(denom2)[..., None]


def _feed_pattern(rho, f, q):
    # cos(theta_f) at the feed, measured from -z
    z = rho**2 / (4 * f)
    c = (f - z) / (f + z)
    return np.sign(c) * np.abs(c) ** q


def feed_h_field(rho, phi, geom: DishGeometry, beta):
    """Incident magnetic field of the feed at surface points, shape (..., 3)."""
    f = geom.focal_length
    s_hat, s = feed_vector(rho, phi, f)
    y_hat = np.array([0.0, 1.0, 0.0])
    pol = np.cross(y_hat, s_hat)
    norm = np.linalg.norm(pol, axis=-1, keepdims=True)
    if np.any(norm < 1e-14):
        raise ValueError("feed polarisation undefined where s_hat is parallel to y")
    amp = geom.feed_amplitude * np.exp(-1j * beta * s) / s * _feed_pattern(np.asarray(rho, float), f, geom.feed_q)
    return pol / norm * np.asarray(amp)[..., None]


def surface_current(rho, phi, geom: DishGeometry, beta):
    """PO current ``2 n x H`` on the paraboloid, shape (..., 3)."""
    n_hat = surface_normal(rho, phi, geom.focal_length)
    h = feed_h_field(rho, phi, geom, beta)
    return 2.0 * np.cross(n_hat, h)


def e_vector(target: FarFieldTarget, layout: RimLayout, geom: DishGeometry,
             scale: FieldScale = FieldScale()):
    """Co-pol far-field contribution of each rim element at unit weight."""
    beta = target.beta
    j = surface_current(layout.rho, layout.phi, geom, beta)
    e_co = copol_unit(target.psi, target.phi)
    r_hat = direction(target.psi, target.phi)
    pts = layout.points(geom.focal_length)
    phase = np.exp(1j * beta * (pts @ r_hat))
    return scale.factor(beta) * (j @ e_co) * phase * layout.area


def rim_currents(layout: RimLayout, geom: DishGeometry, beta, weights=None):
    """Element currents times cell area (and weights), shape (N, 3)."""
    j = surface_current(layout.rho, layout.phi, geom, beta) * layout.area
    if weights is not None:
        j = j * np.asarray(weights)[:, None]
    return j


@dataclass
class DishQuadrature:
    """Midpoint rule for the fixed-dish integral on a (rho, phi') grid.

    Cells have arc length at most ``spacing`` in both directions.  Cells are
    weighted by projected area ``rho drho dphi``, the same measure the rim
    cells use, so unit rim weights continue the fixed-dish current smoothly.
    """

    geom: DishGeometry
    spacing: float
    rho: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    _currents: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, geom: DishGeometry, spacing: float):
        rho1 = geom.rho1
        n_rho = max(1, math.ceil(rho1 / spacing))
        d_rho = rho1 / n_rho
        rho_c = (np.arange(n_rho) + 0.5) * d_rho
        rhos, phis, wts = [], [], []
        for rc in rho_c:
            n_phi = max(8, math.ceil(2 * math.pi * rc / spacing))
            d_phi = 2 * math.pi / n_phi
            rhos.append(np.full(n_phi, rc))
            phis.append((np.arange(n_phi) + 0.5) * d_phi)
            wts.append(np.full(n_phi, rc * d_rho * d_phi))
        return cls(geom, spacing, np.concatenate(rhos), np.concatenate(phis), np.concatenate(wts))

    @property
    def size(self) -> int:
        return self.rho.size

    @property
    def points(self):
        return surface_point(self.rho, self.phi, self.geom.focal_length)

    def currents(self, beta):
        """Surface current times cell area at wavenumber ``beta`` (cached)."""
        cur = self._currents.get(beta)
        if cur is None:
            cur = surface_current(self.rho, self.phi, self.geom, beta) * self.weight[:, None]
            cur = np.ascontiguousarray(cur)
            self._currents[beta] = cur
        return cur


def default_spacing(beta):
    """Eighth of a wavelength at ``beta``."""
    return (2 * math.pi / beta) / 8.0


_QUAD_CACHE: dict = {}


def dish_quadrature(geom: DishGeometry, spacing: float) -> DishQuadrature:
    key = (geom, round(spacing, 12))
    quad = _QUAD_CACHE.get(key)
    if quad is None:
        if len(_QUAD_CACHE) > 8:
            _QUAD_CACHE.clear()
        quad = DishQuadrature.build(geom, spacing)
        _QUAD_CACHE[key] = quad
    return quad


def radiate_copol(points, currents, psi, phi, beta, scale: FieldScale = FieldScale()):
    """Co-pol far field of a discrete current set toward each (psi, phi)."""
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    phi = np.broadcast_to(np.asarray(phi, dtype=float), psi.shape)
    dirs = np.ascontiguousarray(direction(psi, phi))
    vec = kernels.radiate(np.ascontiguousarray(points), np.ascontiguousarray(currents), dirs, float(beta))
    e_co = copol_unit(psi, phi)
    return scale.factor(beta) * np.einsum("ij,ij->i", vec, e_co)


def fixed_field_many(psi, phi, beta, geom: DishGeometry, quadrature: DishQuadrature | None = None,
                     scale: FieldScale = FieldScale()):
    if quadrature is None:
        quadrature = dish_quadrature(geom, default_spacing(beta))
    return radiate_copol(quadrature.points, quadrature.currents(beta), psi, phi, beta, scale)


def fixed_field(target: FarFieldTarget, geom: DishGeometry,
                quadrature: DishQuadrature | None = None, scale: FieldScale = FieldScale()):
    """Co-pol field of the fixed (non-reconfigurable) part of the dish."""
    return complex(fixed_field_many(target.psi, target.phi, target.beta, geom, quadrature, scale)[0])


def fixed_field_convergence(target: FarFieldTarget, geom: DishGeometry, spacing=None,
                            threshold_db=0.1):
    """Resolution-doubling check of :func:`fixed_field`.

    Returns ``(coarse, fine, change_db)`` and warns when the change exceeds
    ``threshold_db``.
    """
    if spacing is None:
        spacing = default_spacing(target.beta)
    coarse = fixed_field(target, geom, dish_quadrature(geom, spacing))
    fine = fixed_field(target, geom, dish_quadrature(geom, spacing / 2))
    change = abs(20 * math.log10(abs(fine) / abs(coarse))) if coarse != 0 and fine != 0 else math.inf
    if change > threshold_db:
        warnings.warn(
            f"fixed-dish quadrature under-resolved at psi={target.psi_deg:.4g} deg: "
            f"{change:.3g} dB change on doubling",
            QuadratureWarning,
            stacklevel=2,
        )
    return coarse, fine, change


@dataclass(frozen=True)
class NullingSystem:
    """``A w = y`` with one row per target (mainlobe row first when present)."""

    A: np.ndarray
    y: np.ndarray
    targets: tuple
    fixed: np.ndarray
    delta: float | None = None

    def __post_init__(self):
        for arr in (self.A, self.y, self.fixed):
            arr.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_elements(self) -> int:
        return self.A.shape[1]

    @property
    def has_mainlobe(self) -> bool:
        return bool(self.targets) and self.targets[0].kind == "mainlobe"

    @property
    def null_rows(self):
        return [i for i, t in enumerate(self.targets) if t.kind == "null"]

    def singular_values(self):
        return np.linalg.svd(self.A, compute_uv=False)

    def cond(self) -> float:
        s = self.singular_values()
        return float(s[0] / s[-1]) if s[-1] > 0 else math.inf


def assemble_system(targets: Sequence[FarFieldTarget], delta, layout: RimLayout, geom: DishGeometry,
                    scale: FieldScale = FieldScale(), spacing=None, mainlobe_beta=None) -> NullingSystem:
    """Stack e-vectors into ``A`` and fixed-dish fields into ``y``.

    ``delta=None`` omits the mainlobe row.  Otherwise a boresight row is
    prepended with ``y_0 = +delta * E_f,0``, at the first null's wavenumber
    unless ``mainlobe_beta`` is given.  Null rows get ``y_i = -E_f,i``.
    """
    targets = list(targets)
    nulls = [t for t in targets if t.kind == "null"]
    mains = [t for t in targets if t.kind == "mainlobe"]
    if len(mains) > 1:
        raise DegenerateSystemError("at most one mainlobe target allowed")
    keys = [t.key() for t in nulls]
    if len(set(keys)) != len(keys):
        raise DegenerateSystemError("duplicate null targets make A rank deficient")
    if not nulls and delta is None and not mains:
        raise DegenerateSystemError("no targets")

    rows = []
    if delta is not None or mains:
        if mains:
            main = mains[0]
        else:
            beta0 = mainlobe_beta if mainlobe_beta is not None else nulls[0].beta
            main = FarFieldTarget(0.0, 0.0, beta0, "mainlobe")
        rows.append(main)
        delta = 0.0 if delta is None else float(delta)
    rows.extend(nulls)

    A = np.empty((len(rows), layout.n_elements), dtype=np.complex128)
    fixed = np.empty(len(rows), dtype=np.complex128)
    for i, t in enumerate(rows):
        A[i] = e_vector(t, layout, geom, scale)
        quad = dish_quadrature(geom, spacing if spacing is not None else default_spacing(t.beta))
        fixed[i] = fixed_field(t, geom, quad, scale)
    y = -fixed.copy()
    if rows[0].kind == "mainlobe":
        y[0] = delta * fixed[0]
    return NullingSystem(A, y, tuple(rows), fixed, delta)
