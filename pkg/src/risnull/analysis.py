"""Correlation, eigenvalue and feasibility theory for the nulling system.

The correlation between two e-vectors governs the conditioning of ``A``:
highly correlated rows spread the eigenvalues of ``A A^H`` and force large
unconstrained weights, which in turn decide whether a unimodular solution
can exist.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .fields import FarFieldTarget, NullingSystem

SMALL_ANGLE_LIMIT = math.radians(5.0)
EQUAL_NORM_RTOL = 0.02
_J0_SWITCH = 25.0


class UndefinedCorrelationError(ValueError):
    pass


class SmallAngleWarning(UserWarning):
    pass


# ----------------------------------------------------------------------------
# Bessel J0


def _j0_trapezoid(x):
    # J0(x) = (1/2pi) * integral of cos(x sin t) over a full period; the
    # trapezoidal rule is spectrally accurate for periodic integrands and
    # n > |x| + 30 nodes pushes the aliasing error below 1e-16.
    n = int(math.ceil(abs(x))) + 32
    t = 2.0 * math.pi * np.arange(n) / n
    return float(np.mean(np.cos(x * np.sin(t))))


def _j0_hankel(x):
    # Hankel asymptotic expansion, truncated at the smallest term
    mu = 0.0
    p, q = 0.0, 0.0
    term = 1.0
    best = math.inf
    k = 0
    while True:
        # a_k(0) = prod_{i=1..k} (mu - (2i-1)^2) / (k! 8^k)
        if k > 0:
            term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > best or k > 60:
            break
        best = abs(term)
        if k % 4 == 0:
            p += term
        elif k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        else:
            q -= term
        k += 1
    chi = x - math.pi / 4
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x):
    """Zeroth-order Bessel function of the first kind, |error| <= 1e-10.

    Accepts a scalar or array; non-finite input raises ``ValueError``.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j0 needs finite input")
    flat = np.abs(arr).ravel()
    out = np.array([_j0_trapezoid(v) if v <= _J0_SWITCH else _j0_hankel(v) for v in flat])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def j0_series(x, terms=40):
    """Power series of J0 with ``terms`` terms (reference for moderate |x|)."""
    x = float(x)
    total = 0.0
    term = 1.0
    h = (x / 2.0) ** 2
    for k in range(terms):
        if k > 0:
            term *= -h / (k * k)
        total += term
    return total


# ----------------------------------------------------------------------------
# Correlation


def _standardise(e):
    e = np.asarray(e, dtype=np.complex128)
    mu = e.mean()
    d = e - mu
    var = float(np.vdot(d, d).real) / (e.size - 1)
    if var <= 0.0:
        raise UndefinedCorrelationError("zero-variance e-vector")
    return d / math.sqrt(var), mu, var


def corr_empirical(e1, e2) -> complex:
    """Sample correlation ``(1/(N-1)) sum conj(z1) z2`` of standardised vectors."""
    e1 = np.asarray(e1)
    e2 = np.asarray(e2)
    if e1.shape != e2.shape or e1.ndim != 1:
        raise ValueError("e-vectors must be 1-D and the same length")
    if e1.size < 2:
        raise ValueError("need at least two samples")
    if np.array_equal(e1, e2):
        _standardise(e1)
        return 1.0 + 0.0j
    z1, _, _ = _standardise(e1)
    z2, _, _ = _standardise(e2)
    return complex(np.vdot(z1, z2) / (e1.size - 1))


def _ab(t1: FarFieldTarget, t2: FarFieldTarget):
    a = t2.beta * t2.psi * math.cos(t2.phi) - t1.beta * t1.psi * math.cos(t1.phi)
    b = t2.beta * t2.psi * math.sin(t2.phi) - t1.beta * t1.psi * math.sin(t1.phi)
    return a, b


def _flag_small_angle(*targets):
    if any(t.psi > SMALL_ANGLE_LIMIT for t in targets):
        warnings.warn("small-angle approximation used beyond 5 degrees", SmallAngleWarning,
                      stacklevel=3)


def corr_analytic(t1: FarFieldTarget, t2: FarFieldTarget, rho_bar, f) -> complex:
    """Bessel approximation ``J0(rho_bar sqrt(a^2+b^2)) exp(-j dbeta f)``."""
    _flag_small_angle(t1, t2)
    a, b = _ab(t1, t2)
    dbeta = t2.beta - t1.beta
    return complex(bessel_j0(rho_bar * math.hypot(a, b)) * np.exp(-1j * dbeta * f))


def ratio_cn(t1: FarFieldTarget, t2: FarFieldTarget, rho, phi, f):
    """Closed-form approximation of the element ratio ``e2_n / e1_n``.

    ``rho``/``phi`` may be scalars or arrays of element positions.
    """
    _flag_small_angle(t1, t2)
    a, b = _ab(t1, t2)
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = np.exp(1j * rho * (np.cos(phi) * a + np.sin(phi) * b)) * np.exp(-1j * (t2.beta - t1.beta) * f)
    return complex(out) if out.ndim == 0 else out


def ratio_true(e1, e2):
    """Elementwise ``e2 / e1``; raises on a zero entry of ``e1``."""
    e1 = np.asarray(e1)
    if np.any(e1 == 0):
        raise ZeroDivisionError("e1 has a zero entry")
    return np.asarray(e2) / e1


@dataclass
class CorrelationReport:
    empirical: complex
    mean_ratio: complex
    analytic: complex
    params: dict
    sigma2: tuple = ()
    mean: tuple = ()

    @property
    def abs_error(self) -> float:
        return abs(self.empirical - self.analytic)

    def to_dict(self):
        return {
            "empirical_re": self.empirical.real,
            "empirical_im": self.empirical.imag,
            "analytic_re": self.analytic.real,
            "analytic_im": self.analytic.imag,
            "mean_ratio_re": self.mean_ratio.real,
            "mean_ratio_im": self.mean_ratio.imag,
            "abs_error": self.abs_error,
            "sigma2": list(self.sigma2),
            "mean_abs": [abs(m) for m in self.mean],
            "params": self.params,
        }


def correlation_report(t1, t2, e1, e2, layout, f) -> CorrelationReport:
    """Empirical, mean-ratio and Bessel correlation for one target pair."""
    rho_bar = layout.mean_radius
    _, mu1, v1 = _standardise(e1)
    _, mu2, v2 = _standardise(e2)
    emp = corr_empirical(e1, e2)
    cn = ratio_cn(t1, t2, layout.rho, layout.phi, f)
    ana = corr_analytic(t1, t2, rho_bar, f)
    params = {"psi1": t1.psi, "phi1": t1.phi, "beta1": t1.beta,
              "psi2": t2.psi, "phi2": t2.phi, "beta2": t2.beta, "rho_bar": rho_bar}
    return CorrelationReport(emp, complex(np.mean(cn)), ana, params, (v1, v2), (complex(mu1), complex(mu2)))


def first_zero_spacing(rho_bar, beta):
    """Separation at which ``J0(rho_bar beta dpsi)`` first vanishes."""
    return 2.404825557695773 / (rho_bar * beta)


# ----------------------------------------------------------------------------
# Eigenvalue bounds


@dataclass
class EigenvalueBoundsReport:
    eigenvalues: np.ndarray
    row_norms_sq: np.ndarray
    offdiag_frobenius: float
    lower: np.ndarray
    upper: np.ndarray
    holds: bool
    holds_unsquared: bool | None = None
    skipped: bool = False
    reason: str = ""


def _rows(sys_or_A):
    return sys_or_A.A if isinstance(sys_or_A, NullingSystem) else np.asarray(sys_or_A)


def eigenvalue_bounds(sys_or_A, rtol=EQUAL_NORM_RTOL) -> EigenvalueBoundsReport:
    """Check ``||e_i||^2 - ||E||_F <= lambda_i <= ||e_i||^2 + ||E||_F``.

    ``E`` is the off-diagonal part of ``A A^H``.  Eigenvalues and squared row
    norms are compared in sorted order, which makes the check rigorous when
    the norms differ slightly.  The unsquared variant is reported as a
    diagnostic only.
    """
    A = _rows(sys_or_A)
    G = A @ A.conj().T
    d = np.real(np.diag(G))
    E = G - np.diag(np.diag(G))
    fro = float(np.linalg.norm(E))
    lam = np.linalg.eigvalsh(G)
    ds = np.sort(d)
    lower, upper = ds - fro, ds + fro
    slack = 1e-12 * float(ds[-1])
    if math.sqrt(ds[-1]) > (1 + rtol) * math.sqrt(ds[0]):
        return EigenvalueBoundsReport(lam, d, fro, lower, upper, False, None, True,
                            f"row norms differ by more than {rtol:.0%}")
    holds = bool(np.all(lam >= lower - slack) and np.all(lam <= upper + slack))
    dn = np.sqrt(ds)
    holds_unsq = bool(np.all(lam >= dn - fro) and np.all(lam <= dn + fro))
    return EigenvalueBoundsReport(lam, d, fro, lower, upper, holds, holds_unsq)


@dataclass
class K2Relation:
    lambda1: float
    lambda2: float
    cond: float
    corr: complex
    predicted_lambda1: float
    predicted_lambda2: float
    predicted_cond: float
    sigma2: float = 0.0
    sample_variance: float = 0.0
    mean_sq: float = 0.0


def k2_condition_relation(e1, e2, rtol=EQUAL_NORM_RTOL) -> K2Relation:
    """Two-row eigenvalues and condition number, direct and from the correlation.

    Prediction: ``lambda = ||e||^2 +/- N sigma^2 |C|`` with ``sigma^2`` the
    measured mean power ``E|e_n|^2`` (geometric mean over the two rows) and
    ``C`` the empirical correlation.  The mean-subtracted sample variance and
    ``|mu|^2`` are reported too; they differ from ``sigma^2`` when the
    element mean is not negligible.
    """
    e1 = np.asarray(e1, dtype=np.complex128)
    e2 = np.asarray(e2, dtype=np.complex128)
    n1, n2 = float(np.vdot(e1, e1).real), float(np.vdot(e2, e2).real)
    if max(n1, n2) > (1 + rtol) ** 2 * min(n1, n2):
        raise ValueError("e-vector norms differ by more than the equal-norm tolerance")
    A = np.stack([e1, e2])
    lam = np.linalg.eigvalsh(A @ A.conj().T)[::-1]
    s = np.sqrt(np.clip(lam, 0.0, None))
    cond = float(s[0] / s[1]) if s[1] > 0 else math.inf
    c = corr_empirical(e1, e2)
    _, mu1, v1 = _standardise(e1)
    _, mu2, v2 = _standardise(e2)
    N = e1.size
    sigma2 = math.sqrt(n1 * n2) / N
    norm2 = 0.5 * (n1 + n2)
    spread = N * sigma2 * abs(c)
    p1, p2 = norm2 + spread, norm2 - spread
    pcond = math.sqrt(p1 / p2) if p2 > 0 else math.inf
    return K2Relation(float(lam[0]), float(lam[1]), cond, c, p1, p2, pcond, sigma2,
                      math.sqrt(v1 * v2), float(abs(mu1) * abs(mu2)))


# ----------------------------------------------------------------------------
# Feasibility


def epsilon_threshold(N) -> float:
    """Largest admissible ``||w*||_inf`` under the linear-magnitude model."""
    if N < 1:
        raise ValueError("N must be positive")
    N = float(N)
    return (math.sqrt(2 * N * N + 2 * N + 1) + 1) / (N + 1)


@dataclass
class FeasibilityVerdict:
    inf_norm: float
    energy_lhs: float
    energy_rhs: float
    epsilon_threshold: float
    predicted_feasible: bool
    energy_feasible: bool = field(default=False)

    def to_dict(self):
        return {"inf_norm": self.inf_norm, "epsilon": self.epsilon_threshold,
                "energy_lhs": self.energy_lhs, "energy_rhs": self.energy_rhs,
                "feasible": self.predicted_feasible, "energy_feasible": self.energy_feasible}


def feasibility_predict(w_star, N=None) -> FeasibilityVerdict:
    """Predict whether a unimodular exact solution exists from ``w*``.

    The headline verdict is ``||w*||_inf < eps(N)``; the energy comparison
    between sub-unit and super-unit magnitudes is reported alongside.
    """
    mag = np.abs(np.asarray(w_star))
    if N is None:
        N = mag.size
    inf = float(mag.max())
    lhs = float(mag[mag < 1].sum())
    rhs = float(mag[mag > 1].sum())
    eps = epsilon_threshold(N)
    return FeasibilityVerdict(inf, lhs, rhs, eps, inf < eps, lhs >= rhs)
