"""Patterns, null depths and convergence summaries for solved weights."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .fields import (
    ETA0,
    FarFieldTarget,
    FieldScale,
    NullingSystem,
    default_spacing,
    dish_quadrature,
    e_vector,
    fixed_field,
    fixed_field_many,
    radiate_copol,
    rim_currents,
)
from .geometry import DishGeometry, RimLayout

GAIN_FLOOR_DB = -400.0
CONVERGENCE_THRESHOLD = 1e-6


def _db20(x):
    x = np.abs(np.asarray(x, dtype=np.complex128))
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(x)
    return np.maximum(out, GAIN_FLOOR_DB)


def nominal_dbi(field_value, geom: DishGeometry, scale: FieldScale = FieldScale()):
    """Nominal directivity in dBi of a co-pol far-field value.

    Uses ``U = |E|^2 / (2 eta)`` (the dropped ``1/r`` absorbed) against the
    feed power ``P_rad = pi eta |I0|^2 / (2q + 1)`` over the forward
    hemisphere.  Only differences between values are physically meaningful.
    """
    q = geom.feed_q
    e = np.abs(np.asarray(field_value)) / abs(scale.extra)
    lin = 2.0 * (2 * q + 1) * e**2 / (ETA0**2 * abs(geom.feed_amplitude) ** 2)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(lin)
    out = np.maximum(out, GAIN_FLOOR_DB)
    return float(out) if out.ndim == 0 else out


def rim_field(psi, phi, beta, w, layout: RimLayout, geom: DishGeometry,
              scale: FieldScale = FieldScale()):
    """Co-pol field of the weighted rim toward each ``psi`` (``e^T w``)."""
    cur = rim_currents(layout, geom, beta, w)
    return radiate_copol(layout.points(geom.focal_length), cur, psi, phi, beta, scale)


def total_field(target: FarFieldTarget, w, layout: RimLayout, geom: DishGeometry,
                scale: FieldScale = FieldScale(), quadrature=None) -> complex:
    """Fixed-dish plus weighted-rim co-pol field at one target."""
    if len(w) != layout.n_elements:
        raise ValueError("weight vector length does not match the layout")
    if quadrature is None:
        quadrature = dish_quadrature(geom, default_spacing(target.beta))
    ef = fixed_field(target, geom, quadrature, scale)
    return ef + complex(e_vector(target, layout, geom, scale) @ np.asarray(w))


@dataclass
class PatternCut:
    phi: float
    beta: float
    psi: np.ndarray
    fixed: np.ndarray
    fields: dict
    geom: DishGeometry
    scale: FieldScale = field(default_factory=FieldScale)

    @property
    def plane(self):
        if self.phi == 0.0:
            return "H"
        if abs(self.phi - math.pi / 2) < 1e-12:
            return "E"
        return f"phi={math.degrees(self.phi):g}"

    @property
    def psi_deg(self):
        return np.degrees(self.psi)

    def gain_db(self, name):
        """Nominal dBi of one weight set (``"ref"`` is the all-ones dish)."""
        return nominal_dbi(self.fields[name], self.geom, self.scale)

    def suppression_db(self, name):
        return self.gain_db("ref") - self.gain_db(name)

    def to_csv(self, header_lines=()):
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        names = [n for n in self.fields if n != "ref"]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["psi_deg", "ref_db"] + [f"{n}_db" for n in names])
        cols = [self.gain_db("ref")] + [self.gain_db(n) for n in names]
        for i, p in enumerate(self.psi_deg):
            writer.writerow([f"{p:.6f}"] + [f"{c[i]:.6f}" for c in cols])
        return buf.getvalue()


def pattern_cut(geom: DishGeometry, layout: RimLayout, weights: dict | None = None, phi=0.0,
                psi_range=(0.0, math.radians(5.0)), step=math.radians(0.005), beta=None,
                scale: FieldScale = FieldScale(), spacing=None) -> PatternCut:
    """Co-pol cut versus ``psi`` at fixed ``phi`` for each named weight set.

    The ``w = 1`` dish is always included under the name ``"ref"``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if beta is None:
        raise ValueError("beta is required")
    lo, hi = psi_range
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    psi = lo + step * np.arange(n)
    quad = dish_quadrature(geom, spacing if spacing is not None else default_spacing(beta))
    ef = fixed_field_many(psi, phi, beta, geom, quad, scale)
    ones = np.ones(layout.n_elements, dtype=np.complex128)
    fields = {"ref": ef + rim_field(psi, phi, beta, ones, layout, geom, scale)}
    for name, w in (weights or {}).items():
        if name == "ref":
            raise ValueError("'ref' is reserved for the unweighted dish")
        fields[name] = ef + rim_field(psi, phi, beta, np.asarray(w), layout, geom, scale)
    return PatternCut(float(phi), float(beta), psi, ef, fields, geom, scale)


@dataclass
class PatternGrid:
    """Polar (psi, phi) sampling of the co-pol pattern; arrays are (n_phi, n_psi)."""

    psi: np.ndarray
    phi: np.ndarray
    beta: float
    fields: dict
    geom: DishGeometry
    scale: FieldScale = field(default_factory=FieldScale)

    def gain_db(self, name):
        return nominal_dbi(self.fields[name], self.geom, self.scale)

    def suppression_db(self, name):
        return self.gain_db("ref") - self.gain_db(name)


def pattern_grid(geom: DishGeometry, layout: RimLayout, weights: dict | None = None,
                 psi_range=(0.0, math.radians(5.0)), step=math.radians(0.05), phi_values=None,
                 beta=None, scale: FieldScale = FieldScale(), spacing=None) -> PatternGrid:
    """Pattern over a polar grid of directions, one ``pattern_cut`` per azimuth.

    ``phi_values`` defaults to 0..355 degrees in 5 degree steps.
    """
    if phi_values is None:
        phi_values = np.radians(np.arange(0.0, 360.0, 5.0))
    phi_values = np.asarray(phi_values, dtype=float)
    cuts = [pattern_cut(geom, layout, weights, phi=p, psi_range=psi_range, step=step, beta=beta,
                        scale=scale, spacing=spacing) for p in phi_values]
    fields = {name: np.stack([c.fields[name] for c in cuts]) for name in cuts[0].fields}
    return PatternGrid(cuts[0].psi, phi_values, float(beta), fields, geom, scale)


@dataclass
class NullReport:
    targets: list
    mainlobe_delta_db: float | None
    residual: float
    relative_residual: float
    average_suppression_db: float

    def to_dict(self):
        return {"targets": self.targets, "mainlobe_delta_db": self.mainlobe_delta_db,
                "residual": self.residual, "relative_residual": self.relative_residual,
                "average_suppression_db": self.average_suppression_db}


def null_report(sys: NullingSystem, w) -> NullReport:
    """Per-target suppression of ``w`` relative to the all-ones dish.

    ``average_suppression_db`` is the dB ratio of mean power across targets.
    ``mainlobe_delta_db`` compares the weighted boresight field with the
    fixed-dish boresight field (``None`` without a mainlobe row).
    """
    w = np.asarray(w, dtype=np.complex128)
    total = sys.A @ w + sys.fixed
    ref = sys.A @ np.ones(sys.n_elements, dtype=np.complex128) + sys.fixed
    r = sys.A @ w - sys.y
    rows = []
    main = None
    if sys.has_mainlobe:
        main = float(_db20(total[0]) - _db20(sys.fixed[0]))
    for i in sys.null_rows:
        t = sys.targets[i]
        entry = {
            "psi_deg": round(t.psi_deg, 10),
            "phi_deg": round(t.phi_deg, 10),
            "freq_hz": round(t.freq_hz, 3),
            "suppression_db": float(_db20(ref[i]) - _db20(total[i])),
            "gain_rel_fixed_db": float(_db20(total[i]) - _db20(sys.fixed[i])),
            "residual": float(abs(r[i]) ** 2),
        }
        if sys.has_mainlobe:
            entry["gain_rel_boresight_db"] = float(_db20(total[i]) - _db20(total[0]))
        rows.append(entry)
    idx = sys.null_rows
    p_ref = float(np.mean(np.abs(ref[idx]) ** 2))
    p_w = float(np.mean(np.abs(total[idx]) ** 2))
    avg = float(10 * math.log10(p_ref / p_w)) if p_w > 0 else -GAIN_FLOOR_DB
    res = float(np.vdot(r, r).real)
    return NullReport(rows, main, res, res / float(np.vdot(sys.y, sys.y).real), avg)


def iterations_to_threshold(trace, y_norm2, threshold=CONVERGENCE_THRESHOLD):
    """First iteration with objective <= ``threshold * ||y||^2`` (None if never)."""
    hit = np.nonzero(np.asarray(trace) <= threshold * y_norm2)[0]
    return int(hit[0]) if hit.size else None


def objective_at(trace, k):
    trace = np.asarray(trace)
    return float(trace[min(k, trace.size - 1)])


@dataclass
class ConvergenceTable:
    rows: dict
    y_norm2: float

    def faster(self, a, b) -> bool:
        """True when ``a`` reaches the threshold in fewer iterations than ``b``."""
        ia, ib = self.rows[a]["iterations_to_threshold"], self.rows[b]["iterations_to_threshold"]
        if ia is None:
            return False
        return ib is None or ia < ib

    def lower_at(self, a, ka, b, kb) -> bool:
        """True when ``a``'s objective at ``ka`` is below ``b``'s at ``kb``."""
        return self.rows[a]["trace"][min(ka, len(self.rows[a]["trace"]) - 1)] < \
            self.rows[b]["trace"][min(kb, len(self.rows[b]["trace"]) - 1)]


def convergence_compare(traces: dict, y_norm2, threshold=CONVERGENCE_THRESHOLD) -> ConvergenceTable:
    """Tabulate iterations-to-threshold and final objective per method."""
    rows = {}
    for name, tr in traces.items():
        tr = np.asarray(tr, dtype=float)
        rows[name] = {
            "iterations_to_threshold": iterations_to_threshold(tr, y_norm2, threshold),
            "final_objective": float(tr[-1]),
            "final_relative": float(tr[-1] / y_norm2),
            "trace": tr,
        }
    return ConvergenceTable(rows, float(y_norm2))
