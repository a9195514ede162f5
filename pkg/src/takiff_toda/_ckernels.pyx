# cython: language_level=3
"""C loops for the 1-D series kernels and the lattice integrators.

Same contracts as ``_pykernels``; series routines here accept only 1-D
coefficient vectors.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp as c_exp, log as c_log, sqrt as c_sqrt, fabs, isfinite

cnp.import_array()


cdef void _mul(const double[::1] a, const double[::1] b, double[::1] c) noexcept nogil:
    cdef Py_ssize_t K = a.shape[0], k, i
    cdef double s
    for k in range(K):
        s = 0.0
        for i in range(k + 1):
            s += a[i] * b[k - i]
        c[k] = s


cdef void _exp(const double[::1] a, double[::1] e) noexcept nogil:
    cdef Py_ssize_t K = a.shape[0], k, j
    cdef double s
    e[0] = c_exp(a[0])
    for k in range(1, K):
        s = 0.0
        for j in range(1, k + 1):
            s += j * a[j] * e[k - j]
        e[k] = s / k


def jet_mul(a, b):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    out = np.empty(av.shape[0])
    cdef double[::1] cv = out
    _mul(av, bv, cv)
    return out


def jet_exp(a):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    out = np.empty(av.shape[0])
    cdef double[::1] ev = out
    _exp(av, ev)
    return out


def jet_log(a):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t K = av.shape[0], k, j
    out = np.empty(K)
    cdef double[::1] l = out
    cdef double s
    l[0] = c_log(av[0])
    for k in range(1, K):
        s = 0.0
        for j in range(1, k):
            s += j * l[j] * av[k - j]
        l[k] = (av[k] - s / k) / av[0]
    return out


def jet_inv(a):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t K = av.shape[0], k, j
    out = np.empty(K)
    cdef double[::1] c = out
    cdef double s
    c[0] = 1.0 / av[0]
    for k in range(1, K):
        s = 0.0
        for j in range(1, k + 1):
            s += av[j] * c[k - j]
        c[k] = -s / av[0]
    return out


def jet_sqrt(a):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t K = av.shape[0], k, j
    out = np.empty(K)
    cdef double[::1] b = out
    cdef double s
    b[0] = c_sqrt(av[0])
    for k in range(1, K):
        s = 0.0
        for j in range(1, k):
            s += b[j] * b[k - j]
        b[k] = (av[k] - s) / (2.0 * b[0])
    return out


cdef void _force(const double[:, ::1] q, const double[:, ::1] P,
                 double[:, ::1] Q, double[:, ::1] E, double[:, ::1] f) noexcept nogil:
    # f[i, n] = -sum_a P[a, i] * exp(Q_a)[n],  Q_a = sum_i P[a, i] q[i, :]
    cdef Py_ssize_t R = P.shape[0], C = P.shape[1], K = q.shape[1]
    cdef Py_ssize_t a, i, n
    cdef double w
    for a in range(R):
        for n in range(K):
            Q[a, n] = 0.0
        for i in range(C):
            w = P[a, i]
            if w != 0.0:
                for n in range(K):
                    Q[a, n] += w * q[i, n]
        _exp(Q[a], E[a])
    for i in range(C):
        for n in range(K):
            f[i, n] = 0.0
    for a in range(R):
        for i in range(C):
            w = P[a, i]
            if w != 0.0:
                for n in range(K):
                    f[i, n] -= w * E[a, n]


cdef bint _bad(const double[:, ::1] x, double limit) noexcept nogil:
    cdef Py_ssize_t i, n
    for i in range(x.shape[0]):
        for n in range(x.shape[1]):
            if not isfinite(x[i, n]) or fabs(x[i, n]) > limit:
                return True
    return False


def force(q, pairing):
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[:, ::1] P = np.ascontiguousarray(pairing, dtype=np.float64)
    cdef Py_ssize_t R = P.shape[0], K = qv.shape[1]
    cdef double[:, ::1] Q = np.empty((R, K))
    cdef double[:, ::1] E = np.empty((R, K))
    out = np.empty((qv.shape[0], K))
    cdef double[:, ::1] f = out
    _force(qv, P, Q, E, f)
    return out


def eom_rhs(q, p, pairing):
    return np.array(p, dtype=np.float64, copy=True), force(q, pairing)


def rk4(q0, p0, pairing, double dt, Py_ssize_t nsteps, double limit=1e12):
    cdef const double[:, ::1] P = np.ascontiguousarray(pairing, dtype=np.float64)
    cdef Py_ssize_t C = P.shape[1], R = P.shape[0]
    cdef Py_ssize_t K = np.shape(q0)[1]
    qs_arr = np.empty((nsteps + 1, C, K))
    ps_arr = np.empty((nsteps + 1, C, K))
    cdef double[:, :, ::1] qs = qs_arr
    cdef double[:, :, ::1] ps = ps_arr
    cdef double[:, ::1] q = np.array(q0, dtype=np.float64, order="C")
    cdef double[:, ::1] p = np.array(p0, dtype=np.float64, order="C")
    cdef double[:, ::1] tq = np.empty((C, K))
    cdef double[:, ::1] Q = np.empty((R, K))
    cdef double[:, ::1] E = np.empty((R, K))
    cdef double[:, ::1] f1 = np.empty((C, K))
    cdef double[:, ::1] f2 = np.empty((C, K))
    cdef double[:, ::1] f3 = np.empty((C, K))
    cdef double[:, ::1] f4 = np.empty((C, K))
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    cdef Py_ssize_t step, i, n
    cdef Py_ssize_t done = nsteps
    qs[0, :, :] = q
    ps[0, :, :] = p
    with nogil:
        for step in range(nsteps):
            # stage velocities are p, p + h2 f1, p + h2 f2, p + dt f3
            _force(q, P, Q, E, f1)
            for i in range(C):
                for n in range(K):
                    tq[i, n] = q[i, n] + h2 * p[i, n]
            _force(tq, P, Q, E, f2)
            for i in range(C):
                for n in range(K):
                    tq[i, n] = q[i, n] + h2 * (p[i, n] + h2 * f1[i, n])
            _force(tq, P, Q, E, f3)
            for i in range(C):
                for n in range(K):
                    tq[i, n] = q[i, n] + dt * (p[i, n] + h2 * f2[i, n])
            _force(tq, P, Q, E, f4)
            for i in range(C):
                for n in range(K):
                    q[i, n] = q[i, n] + h6 * (
                        p[i, n] + 2.0 * (p[i, n] + h2 * f1[i, n])
                        + 2.0 * (p[i, n] + h2 * f2[i, n]) + (p[i, n] + dt * f3[i, n]))
                    p[i, n] = p[i, n] + h6 * (f1[i, n] + 2.0 * f2[i, n] + 2.0 * f3[i, n] + f4[i, n])
            if _bad(q, limit) or _bad(p, limit):
                done = step
                break
            qs[step + 1, :, :] = q
            ps[step + 1, :, :] = p
    return qs_arr, ps_arr, done


def leapfrog(q0, p0, pairing, double dt, Py_ssize_t nsteps, double limit=1e12):
    cdef const double[:, ::1] P = np.ascontiguousarray(pairing, dtype=np.float64)
    cdef Py_ssize_t C = P.shape[1], R = P.shape[0]
    cdef Py_ssize_t K = np.shape(q0)[1]
    qs_arr = np.empty((nsteps + 1, C, K))
    ps_arr = np.empty((nsteps + 1, C, K))
    cdef double[:, :, ::1] qs = qs_arr
    cdef double[:, :, ::1] ps = ps_arr
    cdef double[:, ::1] q = np.array(q0, dtype=np.float64, order="C")
    cdef double[:, ::1] p = np.array(p0, dtype=np.float64, order="C")
    cdef double[:, ::1] Q = np.empty((R, K))
    cdef double[:, ::1] E = np.empty((R, K))
    cdef double[:, ::1] f = np.empty((C, K))
    cdef double h2 = 0.5 * dt
    cdef Py_ssize_t step, i, n
    cdef Py_ssize_t done = nsteps
    qs[0, :, :] = q
    ps[0, :, :] = p
    with nogil:
        _force(q, P, Q, E, f)
        for step in range(nsteps):
            for i in range(C):
                for n in range(K):
                    p[i, n] = p[i, n] + h2 * f[i, n]
                    q[i, n] = q[i, n] + dt * p[i, n]
            _force(q, P, Q, E, f)
            for i in range(C):
                for n in range(K):
                    p[i, n] = p[i, n] + h2 * f[i, n]
            if _bad(q, limit) or _bad(p, limit):
                done = step
                break
            qs[step + 1, :, :] = q
            ps[step + 1, :, :] = p
    return qs_arr, ps_arr, done
