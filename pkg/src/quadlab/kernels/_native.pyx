# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the pure-numpy scan kernels.

Per-point C loops; the fused objectives avoid every intermediate array,
which is what makes small-batch optimizer steps cheap.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, fmax, fmin, hypot, sqrt

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)
    double complex conj(double complex)

DEFAULT_SEPARATION = 1e-3


cdef inline void _project_point(const double* xin, double* xout, double rx, double ry) nogil:
    cdef double xn = 0.0, dot = 0.0, yn = 0.0
    cdef double xu[4]
    cdef double y[4]
    cdef int k, kmin
    cdef double amin
    for k in range(4):
        xn += xin[k] * xin[k]
    xn = sqrt(xn)
    if xn < 1e-150:
        xu[0] = 1.0; xu[1] = 0.0; xu[2] = 0.0; xu[3] = 0.0
    else:
        for k in range(4):
            xu[k] = xin[k] / xn
    for k in range(4):
        dot += xin[4 + k] * xu[k]
    for k in range(4):
        y[k] = xin[4 + k] - dot * xu[k]
        yn += y[k] * y[k]
    yn = sqrt(yn)
    if yn < 1e-12:
        kmin = 0
        amin = fabs(xu[0])
        for k in range(1, 4):
            if fabs(xu[k]) < amin:
                amin = fabs(xu[k]); kmin = k
        dot = xu[kmin]
        for k in range(4):
            y[k] = -dot * xu[k]
        y[kmin] += 1.0
        yn = 0.0
        for k in range(4):
            yn += y[k] * y[k]
        yn = sqrt(yn)
    for k in range(4):
        xout[k] = rx * xu[k]
        xout[4 + k] = ry * y[k] / yn
    return


cdef inline void _frame_to_w(const double* f, double complex* w) nogil:
    w[0] = (f[0] - f[5]) + 1j * (f[4] + f[1])
    w[1] = (f[0] + f[5]) + 1j * (f[4] - f[1])
    w[2] = (f[2] - f[7]) + 1j * (f[6] + f[3])
    w[3] = (f[2] + f[7]) + 1j * (f[6] - f[3])
    return


cdef inline double _abs_jac(const double complex* w) nogil:
    cdef double complex p = w[2] * w[3]
    cdef double complex num = (3j - 3) * p * p + (2 - 4j) * p + 1j
    return cabs(num) / fmax(cabs(w[0]), cabs(w[2]))


cdef inline double _disc_abs(const double complex* w) nogil:
    cdef double complex p = w[2] * w[3]
    return cabs(6j * p * p - (2 + 6j) * p + 1)


cdef inline void _partner_point(const double complex* w, double t, double separation,
                                double* excess_out, double* gap_out) nogil:
    cdef double complex p, sq, base, den, r, what2
    cdef double dist, excess, gap_best, exc_best, n
    cdef int s
    gap_best = INFINITY
    exc_best = INFINITY
    if cabs(w[0]) == 0.0 or cabs(w[2]) == 0.0:
        excess_out[0] = exc_best
        gap_out[0] = gap_best
        return
    p = w[2] * w[3]
    sq = csqrt(6j * p * p - (2 + 6j) * p + 1)
    base = (2j - 1) + (1 - 1j) * p
    den = (2j - 2) * w[2]
    for s in range(2):
        r = (base + sq) / den if s == 0 else (base - sq) / den
        what2 = (1.0 - w[2] * r) / w[0]
        dist = hypot(cabs(r - w[3]), cabs(what2 - w[1]))
        if dist < separation:
            continue
        n = cabs(w[0]) ** 2 + cabs(what2) ** 2 + cabs(w[2]) ** 2 + cabs(r) ** 2
        excess = n / 2.0 - t
        if fabs(excess) < gap_best:
            gap_best = fabs(excess)
            exc_best = excess
    excess_out[0] = exc_best
    gap_out[0] = gap_best
    return


def project_mt(xy, double t):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.empty((m, 8), dtype=np.float64)
    cdef double rx = sqrt((t + 1.0) / 2.0), ry = sqrt((t - 1.0) / 2.0)
    for i in range(m):
        _project_point(&a[i, 0], &out[i, 0], rx, ry)
    return out


def xy_to_w(xy):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] out = np.empty((m, 4), dtype=np.complex128)
    for i in range(m):
        _frame_to_w(&a[i, 0], &out[i, 0])
    return out


def w_to_xy(w):
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.empty((m, 8), dtype=np.float64)
    cdef double complex z1, z2, z3, z4
    for i in range(m):
        z1 = (a[i, 0] + a[i, 1]) / 2.0
        z2 = (a[i, 0] - a[i, 1]) / 2j
        z3 = (a[i, 2] + a[i, 3]) / 2.0
        z4 = (a[i, 2] - a[i, 3]) / 2j
        out[i, 0] = z1.real; out[i, 1] = z2.real; out[i, 2] = z3.real; out[i, 3] = z4.real
        out[i, 4] = z1.imag; out[i, 5] = z2.imag; out[i, 6] = z3.imag; out[i, 7] = z4.imag
    return out


def quadric_residual(w):
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    for i in range(m):
        out[i] = cabs(a[i, 0] * a[i, 1] + a[i, 2] * a[i, 3] - 1.0)
    return out


def abs_restricted_jacobian(w):
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    for i in range(m):
        out[i] = _abs_jac(&a[i, 0])
    return out


def disc_abs(w):
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    for i in range(m):
        out[i] = _disc_abs(&a[i, 0])
    return out


def partner_data(w, double t, double separation=DEFAULT_SEPARATION):
    cdef cnp.ndarray[double complex, ndim=2, mode="c"] a = np.ascontiguousarray(w, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] exc = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] gap = np.empty(m, dtype=np.float64)
    for i in range(m):
        _partner_point(&a[i, 0], t, separation, &exc[i], &gap[i])
    return exc, gap


def objective_absj(xy, double t):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double rx = sqrt((t + 1.0) / 2.0), ry = sqrt((t - 1.0) / 2.0)
    cdef double f[8]
    cdef double complex w[4]
    for i in range(m):
        _project_point(&a[i, 0], f, rx, ry)
        _frame_to_w(f, w)
        out[i] = _abs_jac(w)
    return out


def objective_gap(xy, double t, double separation=DEFAULT_SEPARATION):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double rx = sqrt((t + 1.0) / 2.0), ry = sqrt((t - 1.0) / 2.0)
    cdef double f[8]
    cdef double complex w[4]
    cdef double exc, gap
    for i in range(m):
        _project_point(&a[i, 0], f, rx, ry)
        _frame_to_w(f, w)
        _partner_point(w, t, separation, &exc, &gap)
        out[i] = gap
    return out


def objective_disc(xy, double t):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double rx = sqrt((t + 1.0) / 2.0), ry = sqrt((t - 1.0) / 2.0)
    cdef double f[8]
    cdef double complex w[4]
    for i in range(m):
        _project_point(&a[i, 0], f, rx, ry)
        _frame_to_w(f, w)
        out[i] = _disc_abs(w)
    return out
