# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, exp

cnp.import_array()


def radiate(const double[:, ::1] points, const double complex[:, ::1] currents,
            const double[:, ::1] directions, double beta):
    cdef Py_ssize_t n_dir = directions.shape[0]
    cdef Py_ssize_t n_pts = points.shape[0]
    cdef Py_ssize_t d, p
    cdef double dx, dy, dz, ph, c, s
    cdef double complex e, ax, ay, az
    out = np.empty((n_dir, 3), dtype=np.complex128)
    cdef double complex[:, ::1] res = out
    with nogil:
        for d in range(n_dir):
            dx = beta * directions[d, 0]
            dy = beta * directions[d, 1]
            dz = beta * directions[d, 2]
            ax = 0
            ay = 0
            az = 0
            for p in range(n_pts):
                ph = dx * points[p, 0] + dy * points[p, 1] + dz * points[p, 2]
                c = cos(ph)
                s = sin(ph)
                e = c + 1j * s
                ax = ax + currents[p, 0] * e
                ay = ay + currents[p, 1] * e
                az = az + currents[p, 2] * e
            res[d, 0] = ax
            res[d, 1] = ay
            res[d, 2] = az
    return out


def anneal(const double complex[:, ::1] columns, double complex[::1] residual,
           cnp.int64_t[::1] levels, const double complex[::1] constellation,
           const cnp.int64_t[::1] moves, const cnp.int64_t[::1] offsets,
           const double[::1] uniforms, double t0, double cooling, double[::1] trace):
    cdef Py_ssize_t k_rows = residual.shape[0]
    cdef Py_ssize_t m = constellation.shape[0]
    cdef Py_ssize_t n_steps = moves.shape[0]
    cdef Py_ssize_t step, k
    cdef cnp.int64_t n, old, new
    cdef double f_cur = 0.0, f_new, delta, temp = t0
    cdef double complex dw, v
    cdef long accepted = 0
    cdef bint take
    cand_arr = np.empty(k_rows, dtype=np.complex128)
    cdef double complex[::1] cand = cand_arr
    for k in range(k_rows):
        f_cur += residual[k].real * residual[k].real + residual[k].imag * residual[k].imag
    with nogil:
        for step in range(n_steps):
            n = moves[step]
            old = levels[n]
            new = (old + offsets[step]) % m
            dw = constellation[new] - constellation[old]
            f_new = 0.0
            for k in range(k_rows):
                v = residual[k] + columns[n, k] * dw
                cand[k] = v
                f_new += v.real * v.real + v.imag * v.imag
            delta = f_new - f_cur
            if delta < 0.0:
                take = True
            elif temp > 0.0:
                take = uniforms[step] < exp(-delta / temp)
            else:
                take = False
            if take:
                for k in range(k_rows):
                    residual[k] = cand[k]
                levels[n] = new
                f_cur = f_new
                accepted += 1
            trace[step] = f_cur
            temp *= cooling
    return accepted
