"""NumPy implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly in inputs, outputs and random-stream
usage; they are used when the compiled extension is unavailable.
"""

import numpy as np

_CHUNK = 1 << 22


def radiate(points, currents, directions, beta):
    """Vector radiation sum ``sum_p currents[p] * exp(1j*beta*dir.points[p])``.

    points: (P, 3) float, currents: (P, 3) complex, directions: (D, 3) float.
    Returns (D, 3) complex.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    currents = np.ascontiguousarray(currents, dtype=np.complex128)
    directions = np.ascontiguousarray(directions, dtype=np.float64)
    n_dir = directions.shape[0]
    out = np.empty((n_dir, 3), dtype=np.complex128)
    step = max(1, _CHUNK // max(points.shape[0], 1))
    for start in range(0, n_dir, step):
        d = directions[start:start + step]
        phase = np.exp(1j * beta * (d @ points.T))
        out[start:start + step] = phase @ currents
    return out


def anneal(columns, residual, levels, constellation, moves, offsets, uniforms,
           t0, cooling, trace):
    """Single-element simulated annealing over M-PSK levels.

    columns: (N, K) complex, the columns of A stored row-wise.
    residual: (K,) complex, A w - y for the current ``levels`` (updated in place).
    levels: (N,) int64 phase indices (updated in place).
    moves, offsets, uniforms: per-step element index, level offset in 1..M-1,
    and acceptance draw.  trace receives the objective after every step.
    Returns the number of accepted moves.
    """
    m = constellation.shape[0]
    f_cur = float(np.vdot(residual, residual).real)
    temp = t0
    accepted = 0
    for step in range(moves.shape[0]):
        n = moves[step]
        old = levels[n]
        new = (old + offsets[step]) % m
        cand = residual + columns[n] * (constellation[new] - constellation[old])
        f_new = float(np.vdot(cand, cand).real)
        delta = f_new - f_cur
        if delta < 0.0:
            take = True
        elif temp > 0.0:
            take = uniforms[step] < np.exp(-delta / temp)
        else:
            take = False
        if take:
            residual[:] = cand
            levels[n] = new
            f_cur = f_new
            accepted += 1
        trace[step] = f_cur
        temp *= cooling
    return accepted
