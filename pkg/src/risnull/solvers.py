"""Weight solvers for ``A w ~= y`` under three constraint regimes.

* unconstrained: minimum-norm pseudoinverse solution;
* continuous unimodular (``|w_n| = 1``): gradient projection, alternating
  projection and the closed-form pair-merge approximation;
* M-PSK (``w_n`` in ``exp(2j*pi*k/M)``): extreme point pursuit (penalised
  majorization-minimization over the PSK convex hull) and a simulated
  annealing baseline.

Every iterative solver starts from the all-ones vector and is deterministic.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import kernels
from .fields import NullingSystem

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_WINDOW = 50
# stop once f <= ABS_FLOOR * ||y||^2 (numerical zero)
ABS_FLOOR = 1e-26


class SingularSystemError(np.linalg.LinAlgError):
    def __init__(self, message, smallest_eigenvalue):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class SnapWarning(UserWarning):
    pass


@dataclass
class WeightSolution:
    """Weights plus the objective trace of the run that produced them."""

    w: np.ndarray
    method: str
    constraint: str
    objective: np.ndarray
    iterations: int
    converged: bool
    final_objective: float
    levels: int | None = None
    c_trace: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.final_objective


def objective(sys: NullingSystem, w):
    w = np.asarray(w)
    if w.shape != (sys.n_elements,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({sys.n_elements},)")
    r = sys.A @ w - sys.y
    return float(np.vdot(r, r).real)


def gradient(sys: NullingSystem, w):
    """``2 A^H (A w - y)``: steepest-ascent direction of ``f`` in (Re w, Im w)."""
    w = np.asarray(w)
    if w.shape != (sys.n_elements,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({sys.n_elements},)")
    return 2.0 * (sys.A.conj().T @ (sys.A @ w - sys.y))


def unit_phase(x):
    """``exp(1j*angle(x))`` with ``angle(0) = 0``; also returns the zero count."""
    x = np.asarray(x)
    mag = np.abs(x)
    zero = mag == 0
    out = np.ones_like(x, dtype=np.complex128)
    np.divide(x, mag, out=out, where=~zero)
    return out, int(zero.sum())


def largest_eigenvalue(sys: NullingSystem) -> float:
    """``lambda_1(A A^H)`` (equal to ``lambda_1(A^H A)``)."""
    return float(np.linalg.eigvalsh(sys.A @ sys.A.conj().T)[-1])


class _Gram:
    """Cholesky factor of ``A A^H`` for repeated ``A^+ r`` products."""

    def __init__(self, sys: NullingSystem):
        gram = sys.A @ sys.A.conj().T
        eig = np.linalg.eigvalsh(gram)
        if eig[0] <= 1e-13 * eig[-1]:
            raise SingularSystemError(
                f"A A^H is singular (smallest eigenvalue {eig[0]:.3e})", float(eig[0])
            )
        self.A = sys.A
        self.factor = linalg.cho_factor(gram)
        self.eigenvalues = eig

    def pinv_apply(self, r):
        return self.A.conj().T @ linalg.cho_solve(self.factor, r)


def _stalled(trace, tol, window, floor):
    k = len(trace) - 1
    if trace[k] <= floor:
        return True
    if k < window:
        return False
    old = trace[k - window]
    return abs(old - trace[k]) <= tol * old


def solve_pseudoinverse(sys: NullingSystem) -> WeightSolution:
    """Minimum-norm exact solution ``A^H (A A^H)^-1 y``."""
    gram = _Gram(sys)
    w = gram.pinv_apply(sys.y)
    f = objective(sys, w)
    return WeightSolution(w, "pinv", "unconstrained", np.array([f]), 0, True, f,
                          info={"min_eigenvalue": float(gram.eigenvalues[0])})


def _projected_iteration(sys, step, method, tol, max_iter, window, floor):
    y_norm2 = float(np.vdot(sys.y, sys.y).real)
    floor = floor * y_norm2
    w = np.ones(sys.n_elements, dtype=np.complex128)
    trace = [objective(sys, w)]
    zeros = 0
    converged = _stalled(trace, tol, window, floor)
    k = 0
    while not converged and k < max_iter:
        eta = w - step(sys.A @ w - sys.y)
        w, nz = unit_phase(eta)
        zeros += nz
        k += 1
        trace.append(objective(sys, w))
        converged = _stalled(trace, tol, window, floor)
    if zeros:
        log.info("%s: %d zero entries projected with angle(0)=0", method, zeros)
    return WeightSolution(w, method, "unimodular", np.asarray(trace), k, converged,
                          trace[-1], info={"zero_entries": zeros})


def solve_gp(sys: NullingSystem, tol=DEFAULT_TOL, max_iter=200_000, window=DEFAULT_WINDOW,
             floor=ABS_FLOOR) -> WeightSolution:
    """Gradient projection onto the unit-modulus set.

    Step ``w - A^H (A w - y) / lambda_1(A A^H)`` followed by phase projection.
    """
    alpha = 1.0 / largest_eigenvalue(sys)
    AH = sys.A.conj().T
    sol = _projected_iteration(sys, lambda r: alpha * (AH @ r), "gp", tol, max_iter, window, floor)
    sol.info["step"] = alpha
    return sol


def solve_ap(sys: NullingSystem, tol=DEFAULT_TOL, max_iter=200_000, window=DEFAULT_WINDOW,
             floor=ABS_FLOOR) -> WeightSolution:
    """Alternating projection between ``{A w = y}`` and the unit-modulus set."""
    gram = _Gram(sys)
    return _projected_iteration(sys, gram.pinv_apply, "ap", tol, max_iter, window, floor)


def pair_merge_closed_form(sys: NullingSystem, w_star, pairs=None) -> WeightSolution:
    """Replace each adjacent weight pair by two unit-modulus weights.

    For the pair ``(a, b)`` the averaged column ``(A_a + A_b)/2`` must carry
    ``A_a w_a + A_b w_b``; the per-row ratio is averaged over rows to give a
    scalar ``y_n`` and the pair becomes ``exp(j(angle(y_n) +/- acos(|y_n|/2)))``.
    ``|y_n|`` is clamped to 2.
    """
    w_star = np.asarray(w_star)
    n = sys.n_elements
    if pairs is None:
        if n % 2:
            raise ValueError("pair merge needs an even number of elements")
        pairs = np.arange(n).reshape(-1, 2)
    pairs = np.asarray(pairs)
    a, b = pairs[:, 0], pairs[:, 1]
    merged = 0.5 * (sys.A[:, a] + sys.A[:, b])
    target = sys.A[:, a] * w_star[a] + sys.A[:, b] * w_star[b]
    y_n = np.mean(target / merged, axis=0)
    mag = np.abs(y_n)
    clamped = int(np.count_nonzero(mag > 2.0))
    offset = np.arccos(np.minimum(mag, 2.0) / 2.0)
    base = np.where(mag > 0, np.angle(y_n), 0.0)
    w = np.empty(n, dtype=np.complex128)
    w[a] = np.exp(1j * (base + offset))
    w[b] = np.exp(1j * (base - offset))
    f = objective(sys, w)
    inf_norm = float(np.max(np.abs(w_star)))
    return WeightSolution(w, "pair", "unimodular", np.array([f]), 0, True, f,
                          info={"clamped_pairs": clamped, "in_regime": inf_norm <= 1.0,
                                "w_star_inf_norm": inf_norm})


def _psk_clamp(w, M, offset):
    # rotate each entry into a sector, clamp to the wedge triangle, rotate back
    half = math.pi / M
    ang = np.angle(w)
    if offset:
        m = np.floor(np.mod(ang, 2 * math.pi) / (2 * half))
        rot = np.exp(1j * (2 * m + 1) * half)
    else:
        m = np.floor((ang + half) / (2 * half))
        rot = np.exp(1j * 2 * m * half)
    wb = w * rot.conj()
    re = np.clip(wb.real, 0.0, math.cos(half))
    im = np.clip(wb.imag, -math.sin(half), math.sin(half))
    return rot * (re + 1j * im)


def project_psk_hull(w, M):
    """Euclidean projection onto the convex hull of the M-PSK points (elementwise).

    Each entry is rotated to the centre of its sector between two adjacent
    constellation points, where the hull boundary is the vertical edge
    ``Re = cos(pi/M)``, ``|Im| <= sin(pi/M)``.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    return _psk_clamp(np.asarray(w, dtype=np.complex128), M, offset=True)


def project_psk_hull_printed(w, M):
    """The closed form as usually printed: rotation to the nearest vertex
    rather than the nearest sector centre.

    It pulls constellation points inward (``M=4``: 1 maps to ``cos(pi/4)``), so
    it is kept for comparison only; solvers use :func:`project_psk_hull`.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    return _psk_clamp(np.asarray(w, dtype=np.complex128), M, offset=False)


def psk_snap(w, M):
    """Nearest M-PSK point to each entry and the largest snap distance."""
    k = np.mod(np.round(np.angle(w) * M / (2 * math.pi)), M)
    snapped = np.exp(2j * math.pi * k / M)
    return snapped, float(np.max(np.abs(np.asarray(w) - snapped))), k.astype(np.int64)


def penalized_objective(sys: NullingSystem, w, c):
    return objective(sys, w) - c * float(np.vdot(w, w).real)


def majorant_value(w, w_k, sys: NullingSystem, c):
    """Upper bound of ``f(w) - c||w||^2`` that touches it at ``w_k``."""
    w = np.asarray(w)
    w_k = np.asarray(w_k)
    return (objective(sys, w) - 2 * c * float(np.vdot(w_k, w - w_k).real)
            - c * float(np.vdot(w_k, w_k).real))


@dataclass(frozen=True)
class PenaltySchedule:
    """Penalty ramp and step for EXPP.

    ``c`` rises linearly from 0 to ``c_knee`` over ``ramp_iters`` and then
    linearly to ``c_max`` over ``tail_iters``.  ``c_knee`` sits near the
    per-element curvature ``max ||a_n||^2``, which is where elements start to
    polarise; a single ramp straight to ``c_max ~ lambda_1`` crosses that
    region in a few iterations and freezes the phases early.
    ``c_knee = c_max`` recovers the plain single-segment ramp.
    """

    c_max: float
    ramp_iters: int
    beta_step: float
    c_knee: float | None = None
    tail_iters: int = 0

    @classmethod
    def default(cls, sys: NullingSystem, c_factor=0.55, beta_factor=1.1, ramp_iters=700,
                knee_factor=3.0, tail_iters=100):
        lam = largest_eigenvalue(sys)
        col = float(np.max(np.sum(np.abs(sys.A) ** 2, axis=0)))
        c_max = c_factor * lam
        return cls(c_max, ramp_iters, beta_factor * lam, min(knee_factor * col, c_max), tail_iters)

    @property
    def knee(self):
        return self.c_max if self.c_knee is None else self.c_knee

    @property
    def total_ramp(self):
        return self.ramp_iters + self.tail_iters

    def validate(self, lam):
        if not self.c_max > lam / 2:
            raise ValueError(f"c_max={self.c_max:.4g} must exceed lambda_1/2={lam / 2:.4g}")
        if not self.beta_step > lam:
            raise ValueError(f"beta={self.beta_step:.4g} must exceed lambda_1={lam:.4g}")
        if self.ramp_iters < 0 or self.tail_iters < 0:
            raise ValueError("ramp lengths must be non-negative")
        if not 0.0 <= self.knee <= self.c_max:
            raise ValueError("c_knee must lie in [0, c_max]")

    def c_at(self, k):
        if k < self.ramp_iters:
            return self.knee * k / self.ramp_iters
        if k < self.total_ramp:
            return self.knee + (self.c_max - self.knee) * (k - self.ramp_iters) / self.tail_iters
        return self.c_max


def solve_expp(sys: NullingSystem, M=4, schedule: PenaltySchedule | None = None,
               tol=DEFAULT_TOL, max_iter=5000, window=DEFAULT_WINDOW,
               floor=ABS_FLOOR, snap_limit=1e-3) -> WeightSolution:
    """Extreme point pursuit for M-PSK weights.

    Minimises ``f(w) - c||w||^2`` over the PSK hull with one accelerated
    projected gradient step per majorant while ``c`` ramps from 0 to
    ``c_max`` (see ``PenaltySchedule``).  The gradient is taken as
    ``A^H (A z - y) - c w_k`` so that the step ``1/beta`` with
    ``beta > lambda_1`` is a valid descent step.
    The returned weights are the final iterate snapped to the constellation.
    """
    lam = largest_eigenvalue(sys)
    if schedule is None:
        schedule = PenaltySchedule.default(sys)
    schedule.validate(lam)
    A, AH, y = sys.A, sys.A.conj().T, sys.y
    floor = floor * float(np.vdot(y, y).real)
    step = 1.0 / schedule.beta_step

    w = np.ones(sys.n_elements, dtype=np.complex128)
    w_prev = w.copy()
    xi_prev = 0.0
    c = schedule.c_at(0)
    trace = [objective(sys, w)]
    cs = [c]
    converged = False
    k = 0
    while k < max_iter:
        xi = (1.0 + math.sqrt(1.0 + 4.0 * xi_prev * xi_prev)) / 2.0
        alpha = (xi_prev - 1.0) / xi
        z = w + alpha * (w - w_prev)
        grad = AH @ (A @ z - y) - c * w
        w_prev, w = w, project_psk_hull(z - step * grad, M)
        xi_prev = xi
        k += 1
        c = schedule.c_at(k)
        trace.append(objective(sys, w))
        cs.append(c)
        if k >= schedule.total_ramp and _stalled(trace, tol, window, floor):
            _, dist, _ = psk_snap(w, M)
            if dist < snap_limit or trace[-1] <= floor:
                converged = True
                break

    snapped, dist, idx = psk_snap(w, M)
    if dist > snap_limit:
        warnings.warn(f"EXPP iterate not fully polarised (snap distance {dist:.3g})",
                      SnapWarning, stacklevel=2)
    f_final = objective(sys, snapped)
    return WeightSolution(snapped, "expp", "psk", np.asarray(trace), k, converged, f_final,
                          levels=M, c_trace=np.asarray(cs),
                          info={"snap_distance": dist, "snap_warning": dist > snap_limit,
                                "hull_objective": trace[-1], "level_index": idx,
                                "c_max": schedule.c_max, "beta_step": schedule.beta_step,
                                "ramp_iters": schedule.ramp_iters,
                                "c_knee": schedule.knee, "tail_iters": schedule.tail_iters})


def solve_sa_baseline(sys: NullingSystem, M=4, seed=0, n_steps=100_000, t0=None,
                      cooling=0.999, n_clusters=None) -> WeightSolution:
    """Simulated annealing over M-PSK weights.

    Each step moves one element (or one cluster of contiguous elements) to a
    different random level; worse moves are accepted with probability
    ``exp(-delta/T)`` and ``T`` decays geometrically from ``t0``
    (default ``f(1)/10``).  ``t0=0`` gives greedy serial descent.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    rng = np.random.default_rng(seed)
    n = sys.n_elements
    if n_clusters is None:
        groups = None
        columns = np.ascontiguousarray(sys.A.T)
    else:
        groups = np.array_split(np.arange(n), n_clusters)
        columns = np.ascontiguousarray(np.stack([sys.A[:, g].sum(axis=1) for g in groups]))
    units = columns.shape[0]
    constellation = np.exp(2j * np.pi * np.arange(M) / M)
    levels = np.zeros(units, dtype=np.int64)
    residual = np.ascontiguousarray(sys.A @ np.ones(n, dtype=np.complex128) - sys.y)
    f0 = float(np.vdot(residual, residual).real)
    if t0 is None:
        t0 = f0 / 10.0

    moves = rng.integers(0, units, size=n_steps, dtype=np.int64)
    offsets = rng.integers(1, M, size=n_steps, dtype=np.int64) if M > 1 else np.zeros(n_steps, np.int64)
    uniforms = rng.random(n_steps)
    trace = np.empty(n_steps + 1)
    trace[0] = f0
    accepted = kernels.anneal(columns, residual, levels, constellation, moves, offsets,
                              uniforms, float(t0), float(cooling), trace[1:])

    if groups is None:
        k_idx = levels
    else:
        k_idx = np.empty(n, dtype=np.int64)
        for g, lv in zip(groups, levels):
            k_idx[g] = lv
    w = constellation[k_idx]
    tail = trace[-max(1, min(1000, n_steps // 10)):]
    f_final = objective(sys, w)
    return WeightSolution(w, "sa", "psk", trace, n_steps, bool(np.all(tail == tail[-1])), f_final,
                          levels=M, info={"accepted": int(accepted), "t0": float(t0),
                                          "cooling": cooling, "seed": seed,
                                          "n_clusters": n_clusters, "level_index": k_idx})
