"""Numpy kernels for truncated-series arithmetic and the lattice flow.

Every series routine acts on the last axis (coefficient ``k`` of ``v**k`` at
index ``k``) and broadcasts over leading axes. Domain checks (units, positive
leading coefficients) are the caller's job; see :mod:`takiff_toda.series`.

This module is the reference implementation. ``_ckernels.pyx`` mirrors the
1-D routines and the integrators with C loops.
"""

import numpy as np


def jet_mul(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    K = a.shape[-1]
    if a.ndim == 1 and b.ndim == 1:
        return np.convolve(a, b)[:K]
    shape = np.broadcast_shapes(a.shape, b.shape)
    c = np.zeros(shape)
    for k in range(K):
        c[..., k] = np.sum(a[..., : k + 1] * b[..., k::-1], axis=-1)
    return c


def jet_exp(a):
    a = np.asarray(a, dtype=float)
    K = a.shape[-1]
    e = np.empty_like(a)
    e[..., 0] = np.exp(a[..., 0])
    j = np.arange(K, dtype=float)
    ja = a * j
    for k in range(1, K):
        # k e_k = sum_{j=1..k} j a_j e_{k-j}
        e[..., k] = np.sum(ja[..., 1 : k + 1] * e[..., k - 1 :: -1], axis=-1) / k
    return e


def jet_log(a):
    a = np.asarray(a, dtype=float)
    K = a.shape[-1]
    out = np.empty_like(a)
    a0 = a[..., 0]
    out[..., 0] = np.log(a0)
    for k in range(1, K):
        j = np.arange(1, k, dtype=float)
        acc = np.sum(j * out[..., 1:k] * a[..., k - 1 : 0 : -1], axis=-1) if k > 1 else 0.0
        out[..., k] = (a[..., k] - acc / k) / a0
    return out


def jet_inv(a):
    a = np.asarray(a, dtype=float)
    K = a.shape[-1]
    c = np.empty_like(a)
    a0 = a[..., 0]
    c[..., 0] = 1.0 / a0
    for k in range(1, K):
        c[..., k] = -np.sum(a[..., 1 : k + 1] * c[..., k - 1 :: -1], axis=-1) / a0
    return c


def jet_sqrt(a):
    a = np.asarray(a, dtype=float)
    K = a.shape[-1]
    b = np.empty_like(a)
    b[..., 0] = np.sqrt(a[..., 0])
    for k in range(1, K):
        acc = np.sum(b[..., 1:k] * b[..., k - 1 : 0 : -1], axis=-1) if k > 1 else 0.0
        b[..., k] = (a[..., k] - acc) / (2.0 * b[..., 0])
    return b


def force(q, pairing):
    """Return dp/dt: ``-sum_a a(h_i) exp(sum_k Q(a,k) v^k)`` coefficientwise."""
    Q = pairing @ q
    return -(pairing.T @ jet_exp(Q))


def eom_rhs(q, p, pairing):
    return np.array(p, dtype=float, copy=True), force(q, pairing)


def _bad(x, limit):
    return not np.all(np.isfinite(x)) or np.max(np.abs(x)) > limit


def rk4(q0, p0, pairing, dt, nsteps, limit=1e12):
    """Classical RK4. Returns ``(qs, ps, ndone)``; ``ndone < nsteps`` flags blowup."""
    pairing = np.ascontiguousarray(pairing, dtype=float)
    qs = np.empty((nsteps + 1,) + q0.shape)
    ps = np.empty_like(qs)
    q = np.array(q0, dtype=float)
    p = np.array(p0, dtype=float)
    qs[0], ps[0] = q, p
    h2 = 0.5 * dt
    for n in range(nsteps):
        k1q, k1p = p, force(q, pairing)
        k2q, k2p = p + h2 * k1p, force(q + h2 * k1q, pairing)
        k3q, k3p = p + h2 * k2p, force(q + h2 * k2q, pairing)
        k4q, k4p = p + dt * k3p, force(q + dt * k3q, pairing)
        q = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        p = p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if _bad(q, limit) or _bad(p, limit):
            return qs, ps, n
        qs[n + 1], ps[n + 1] = q, p
    return qs, ps, nsteps


def leapfrog(q0, p0, pairing, dt, nsteps, limit=1e12):
    """Kick-drift-kick Stormer-Verlet; valid because dq/dt = p and dp/dt depends on q only."""
    pairing = np.ascontiguousarray(pairing, dtype=float)
    qs = np.empty((nsteps + 1,) + q0.shape)
    ps = np.empty_like(qs)
    q = np.array(q0, dtype=float)
    p = np.array(p0, dtype=float)
    qs[0], ps[0] = q, p
    f = force(q, pairing)
    for n in range(nsteps):
        p = p + 0.5 * dt * f
        q = q + dt * p
        f = force(q, pairing)
        p = p + 0.5 * dt * f
        if _bad(q, limit) or _bad(p, limit):
            return qs, ps, n
        qs[n + 1], ps[n + 1] = q, p
    return qs, ps, nsteps
