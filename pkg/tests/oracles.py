"""Independent reference computations used by the tests.

Nothing here imports the solver or field code under test.
"""

import itertools
import math

import mpmath
import numpy as np


def svd_least_norm(A, y):
    """Minimum-norm solution of ``A x = y`` from the full SVD."""
    U, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > s[0] * 1e-14))
    coef = (U[:, :r].conj().T @ y) / s[:r]
    return Vh[:r].conj().T @ coef


def psk_vertices(M):
    return np.exp(2j * np.pi * np.arange(M) / M)


def hull_projection_qp(z, M):
    """Nearest point of the M-PSK convex hull to ``z`` (2-D QP solved exactly).

    The hull is a convex polygon: if ``z`` satisfies every edge half-plane it
    is its own projection, otherwise the minimiser lies on the boundary and is
    the closest of the clamped edge projections.
    """
    v = psk_vertices(M)
    p = np.array([z.real, z.imag])
    pts = np.stack([v.real, v.imag], axis=1)
    inside = True
    best, best_d = None, math.inf
    for k in range(M):
        a, b = pts[k], pts[(k + 1) % M]
        edge = b - a
        # outward normal for counter-clockwise vertices
        normal = np.array([edge[1], -edge[0]])
        if np.dot(p - a, normal) > 0:
            inside = False
        t = np.clip(np.dot(p - a, edge) / np.dot(edge, edge), 0.0, 1.0)
        q = a + t * edge
        d = np.linalg.norm(p - q)
        if d < best_d:
            best, best_d = q, d
    if inside:
        return complex(z)
    return complex(best[0], best[1])


def j0_series_mp(x, terms=40, dps=60):
    """40-term power series of J0 in extended precision."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        h = (x / 2) ** 2
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        for k in range(1, terms):
            term *= -h / (k * k)
            total += term
        return float(total)


def exhaustive_psk(A, y, M):
    """Best M-PSK vector by enumerating all ``M**N`` candidates."""
    N = A.shape[1]
    pts = psk_vertices(M)
    best_f, best_w = math.inf, None
    for idx in itertools.product(range(M), repeat=N):
        w = pts[list(idx)]
        r = A @ w - y
        f = float(np.vdot(r, r).real)
        if f < best_f:
            best_f, best_w = f, w
    return best_f, best_w


def _coord_refine(A, y, w, sweeps):
    # exact minimisation over one phase at a time
    r = A @ w - y
    for _ in range(sweeps):
        for n in range(A.shape[1]):
            a = A[:, n]
            rest = r - a * w[n]
            c = -np.vdot(a, rest)
            new = c / abs(c) if abs(c) > 0 else 1.0
            r = rest + a * new
            w[n] = new
    return w, float(np.vdot(r, r).real)


def grid_refine_unimodular(A, y, n_phase=720, starts=20, sweeps=400, seed=0):
    """Unimodular least squares by phase-grid coordinate search plus refinement.

    Each start runs coordinate descent on an ``n_phase`` grid per element and
    then exact continuous coordinate minimisation.  Returns the best objective
    and weights over all starts.
    """
    rng = np.random.default_rng(seed)
    grid = np.exp(2j * np.pi * np.arange(n_phase) / n_phase)
    N = A.shape[1]
    best_f, best_w = math.inf, None
    for s in range(starts):
        w = np.ones(N, complex) if s == 0 else grid[rng.integers(0, n_phase, N)]
        r = A @ w - y
        for _ in range(50):
            moved = False
            for n in range(N):
                a = A[:, n]
                rest = r - a * w[n]
                cand = rest[:, None] + a[:, None] * grid[None, :]
                k = int(np.argmin(np.sum(np.abs(cand) ** 2, axis=0)))
                if grid[k] != w[n]:
                    moved = True
                w[n] = grid[k]
                r = rest + a * w[n]
            if not moved:
                break
        w, f = _coord_refine(A, y, w, sweeps)
        if f < best_f:
            best_f, best_w = f, w.copy()
    return best_f, best_w


def numeric_normal(rho, phi, f, h=1e-6):
    """Unit normal of ``z = (x^2+y^2)/(4f)`` from central-difference tangents."""
    def point(r, p):
        return np.array([r * math.cos(p), r * math.sin(p), r * r / (4 * f)])

    t_rho = (point(rho + h, phi) - point(rho - h, phi)) / (2 * h)
    t_phi = (point(rho, phi + h) - point(rho, phi - h)) / (2 * h)
    n = np.cross(t_rho, t_phi)
    if rho == 0:
        n = np.array([0.0, 0.0, 1.0])
    n = n / np.linalg.norm(n)
    return n if n[2] > 0 else -n


def copol_triple(psi, phi):
    """Co-pol unit vector as the normalised triple product ``r x (y x r)``."""
    r = np.array([math.sin(psi) * math.cos(phi), math.sin(psi) * math.sin(phi), math.cos(psi)])
    v = np.cross(r, np.cross([0.0, 1.0, 0.0], r))
    return v / np.linalg.norm(v)


def feed_field_symbolic(rho, phi, f, beta, q, i0=1.0):
    """Feed magnetic field evaluated through sympy from its defining formula."""
    import sympy as sp

    R, P, F, B, Q = sp.symbols("rho phi f beta q", positive=True)
    pos = sp.Matrix([R * sp.cos(P), R * sp.sin(P), R**2 / (4 * F) - F])
    s = sp.sqrt(pos.dot(pos))
    s_hat = pos / s
    yv = sp.Matrix([0, 1, 0])
    cross = yv.cross(s_hat)
    cross = cross / sp.sqrt(cross.dot(cross))
    cos_t = -s_hat[2]
    expr = i0 * cross * sp.exp(-sp.I * B * s) / s * cos_t**Q
    vals = {R: rho, P: phi, F: f, B: beta, Q: q}
    return np.array([complex(sp.N(e.subs(vals), 30)) for e in expr])


def aperture_gain_dbi(diameter, wavelength, efficiency=0.6):
    area = efficiency * math.pi * diameter**2 / 4
    return 10 * math.log10(4 * math.pi * area / wavelength**2)


def tapered_aperture_first_null(f, rho_max, wavelength, q, psi_deg=np.arange(0.3, 1.5, 0.005)):
    """First null of a scalar circular aperture with the feed's illumination.

    The aperture amplitude is ``cos(theta)^q / s`` mapped onto the projected
    radius and the pattern is its Hankel transform (scipy quadrature).
    """
    from scipy.integrate import quad
    from scipy.special import j0

    beta = 2 * math.pi / wavelength

    def amp(r):
        th = 2 * math.atan(r / (2 * f))
        return math.cos(th) ** q * math.cos(th / 2) ** 2 / f

    def pattern(psi):
        k = beta * math.sin(psi)
        return quad(lambda r: amp(r) * j0(k * r) * r, 0, rho_max, limit=400)[0]

    e = np.abs([pattern(math.radians(p)) for p in psi_deg])
    i = int(np.argmax((e[1:-1] < e[:-2]) & (e[1:-1] < e[2:]))) + 1
    return float(psi_deg[i])
