"""Coordinates on the orbit, the Lax matrix and its block-trace invariants.

Two charts are used. Coefficient coordinates ``(y, b)`` are the entries of the
Lax matrix; Darboux coordinates ``(q, p)`` satisfy
``{p_i(m), q_j(n)} = delta_ij delta_{m+n,N}``. They are related by ``y = p`` and

    sum_l b_a(l) v^l = exp(1/2 sum_n Q(a, n) v^n),   Q(a, n) = sum_i a(h_i) q_i(n).

All arrays carry the truncation degree on the last axis. Functions whose name
ends in ``_array`` broadcast over leading (batch) axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _pykernels
from .errors import MissingRepresentationError, NonPositiveLeadingCoefficientError, SingularPairingError
from .lie import RootData

SQRT2 = np.sqrt(2.0)
FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PhaseState:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q, p = _frozen(self.q), _frozen(self.p)
        if q.ndim != 2 or q.shape != p.shape:
            raise ValueError(f"q and p must share a 2-D shape, got {q.shape} and {p.shape}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return self.q.shape[1] - 1

    @classmethod
    def zeros(cls, n_cartan, N):
        z = np.zeros((n_cartan, N + 1))
        return cls(z, z)

    def flat(self):
        return np.concatenate([self.q.ravel(), self.p.ravel()])

    @classmethod
    def from_flat(cls, x, shape):
        n = shape[0] * shape[1]
        return cls(np.reshape(x[:n], shape), np.reshape(x[n:], shape))


@dataclass(frozen=True, eq=False)
class CoeffState:
    y: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        y, b = _frozen(self.y), _frozen(self.b)
        if y.ndim != 2 or b.ndim != 2 or y.shape[1] != b.shape[1]:
            raise ValueError("y and b must be 2-D with equal truncation length")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "b", b)

    @property
    def N(self) -> int:
        return self.y.shape[1] - 1


@dataclass(frozen=True, eq=False)
class LaxMatrix:
    """Block upper-triangular Toeplitz matrix with first block row ``x_0..x_N``."""

    blocks: np.ndarray  # (N+1, M, M)

    def __post_init__(self):
        object.__setattr__(self, "blocks", np.asarray(self.blocks, dtype=float))

    @property
    def N(self) -> int:
        return self.blocks.shape[0] - 1

    @property
    def M(self) -> int:
        return self.blocks.shape[1]

    def __matmul__(self, other):
        return LaxMatrix(block_matmul(self.blocks, other.blocks))

    def __pow__(self, n):
        return LaxMatrix(block_power(self.blocks, n))


# -- chart changes ---------------------------------------------------------


def b_from_q_array(q, pairing):
    Q = np.einsum("ai,...ik->...ak", pairing, q)
    return _pykernels.jet_exp(0.5 * Q)


def to_coeff(ps: PhaseState, rd: RootData) -> CoeffState:
    if ps.q.shape[0] != rd.n_cartan:
        raise ValueError(f"state has {ps.q.shape[0]} Cartan rows, root data expects {rd.n_cartan}")
    return CoeffState(ps.p, b_from_q_array(ps.q, rd.pairing))


def _check_square(P):
    if P.shape[0] != P.shape[1]:
        raise SingularPairingError(f"pairing is {P.shape[0]}x{P.shape[1]}; positions need a square matrix")
    if np.linalg.matrix_rank(P) < P.shape[0]:
        raise SingularPairingError("pairing matrix is singular")


def to_phase(cs: CoeffState, rd: RootData) -> PhaseState:
    """Invert :func:`to_coeff`.

    Order by order this is the triangular solve ``P q(0) = 2 log b(0)``,
    ``P q(n) = (b(n) - c)/d``; taking ``2 log`` of the whole series ``b``
    performs the same recursion in one pass.
    """
    P = rd.pairing
    _check_square(P)
    if np.any(cs.b[:, 0] <= 0.0):
        raise NonPositiveLeadingCoefficientError("b_a(0) must be positive for every simple root")
    Q = 2.0 * _pykernels.jet_log(cs.b)
    return PhaseState(np.linalg.solve(P, Q), cs.y)


# -- Lax matrix and block traces --------------------------------------------


def _rep(rd):
    if rd.rep is None:
        raise MissingRepresentationError(f"root data {rd.name!r} has no representation matrices")
    return rd.rep


def lax_array(y, b, rd):
    rep = _rep(rd)
    return np.einsum("...ik,imn->...kmn", y, rep.H) + np.einsum("...ak,amn->...kmn", b, rep.E + rep.F)


def lax(cs: CoeffState, rd: RootData) -> LaxMatrix:
    return LaxMatrix(lax_array(cs.y, cs.b, rd))


def block_matmul(A, B):
    """Product of block-Toeplitz matrices given by first block rows (..., K, M, M)."""
    K = A.shape[-3]
    C = np.zeros(np.broadcast_shapes(A.shape, B.shape))
    for k in range(K):
        for i in range(k + 1):
            C[..., k, :, :] += A[..., i, :, :] @ B[..., k - i, :, :]
    return C


def block_power(A, n):
    if n < 0:
        raise ValueError("negative powers are not supported")
    K, M = A.shape[-3], A.shape[-1]
    out = np.zeros(A.shape)
    out[..., 0, :, :] = np.eye(M)
    for _ in range(n):
        out = block_matmul(out, A)
    return out


def block_trace(L, k: int) -> float:
    """Trace along the ``k*M``-th superdiagonal: ``(N+1-k) tr(x_k)``."""
    blocks = L.blocks if isinstance(L, LaxMatrix) else np.asarray(L)
    N = blocks.shape[-3] - 1
    if not 0 <= k <= N:
        raise IndexError(f"block trace index {k} outside 0..{N}")
    return (N + 1 - k) * np.trace(blocks[..., k, :, :], axis1=-2, axis2=-1)


def dense_lax(L: LaxMatrix) -> np.ndarray:
    K, M = L.N + 1, L.M
    D = np.zeros((K * M, K * M))
    for r in range(K):
        for c in range(r, K):
            D[r * M : (r + 1) * M, c * M : (c + 1) * M] = L.blocks[c - r]
    return D


def dense_block_trace(D: np.ndarray, k: int, M: int) -> float:
    return float(np.trace(D, offset=k * M))


def default_pairs(rd: RootData, N: int):
    """(k, l) with 0 <= k <= N and l - 1 an exponent: the independent family."""
    return [(k, e + 1) for k in range(N + 1) for e in sorted(rd.exponents)]


def conserved_array(y, b, rd, pairs):
    """Values of ``tr_k(L^l)`` for each ``(k, l)`` in ``pairs``; result axis last."""
    L = lax_array(y, b, rd)
    K, M = L.shape[-3], L.shape[-1]
    lmax = max(l for _, l in pairs)
    powers = {}
    cur = np.zeros(L.shape)
    cur[..., 0, :, :] = np.eye(M)
    for l in range(1, lmax + 1):
        cur = block_matmul(cur, L)
        powers[l] = cur
    return np.stack([block_trace(powers[l], k) for k, l in pairs], axis=-1)


def conserved(cs: CoeffState, rd: RootData, k: int, l: int) -> float:
    if l < 1:
        raise ValueError("degree must be >= 1")
    if not 0 <= k <= cs.N:
        raise IndexError(f"block trace index {k} outside 0..{cs.N}")
    return float(conserved_array(cs.y, cs.b, rd, [(k, l)])[0])


def hamiltonian_array(y, b):
    return 0.5 * np.sum(y * y[..., ::-1], axis=(-2, -1)) + np.sum(b * b[..., ::-1], axis=(-2, -1))


def hamiltonian(cs: CoeffState) -> float:
    """``1/2 tr_N(L^2)`` written in coefficient coordinates."""
    return float(hamiltonian_array(cs.y, cs.b))


def phase_conserved(ps: PhaseState, rd: RootData, pairs):
    cs = to_coeff(ps, rd)
    return conserved_array(cs.y, cs.b, rd, pairs)


# -- Poisson bracket ---------------------------------------------------------


def fd_jacobian(fun, ps: PhaseState):
    """Central-difference derivatives of ``fun`` (scalar or 1-D valued).

    Returns ``(dq, dp)`` with shapes ``out_shape + q.shape``.
    """
    x0 = ps.flat()
    shape = ps.q.shape
    f0 = np.asarray(fun(ps), dtype=float)
    J = np.empty(f0.shape + x0.shape)
    for j in range(x0.size):
        h = FD_STEP * max(1.0, abs(x0[j]))
        xp, xm = x0.copy(), x0.copy()
        xp[j] += h
        xm[j] -= h
        fp = np.asarray(fun(PhaseState.from_flat(xp, shape)), dtype=float)
        fm = np.asarray(fun(PhaseState.from_flat(xm, shape)), dtype=float)
        J[..., j] = (fp - fm) / (xp[j] - xm[j])
    n = shape[0] * shape[1]
    return J[..., :n].reshape(f0.shape + shape), J[..., n:].reshape(f0.shape + shape)


def bracket_from_gradients(gF, gG):
    """``sum_{i,m} dF/dp_i(m) dG/dq_i(N-m) - dG/dp_i(m) dF/dq_i(N-m)``."""
    Fq, Fp = gF
    Gq, Gp = gG
    return np.sum(Fp * Gq[..., ::-1]) - np.sum(Gp * Fq[..., ::-1])


def bracket_matrix(Jq, Jp):
    """All pairwise brackets of a vector of functions from its Jacobian."""
    A = np.einsum("aik,bik->ab", Jp, Jq[..., ::-1])
    return A - A.T


def poisson_bracket(F, G, ps: PhaseState) -> float:
    return float(bracket_from_gradients(fd_jacobian(F, ps), fd_jacobian(G, ps)))


def independence_rank(ps: PhaseState, rd: RootData, rtol: float = 1e-8) -> int:
    """Numerical rank of the Jacobian of the independent family ``f_kl``."""
    _rep(rd)
    pairs = default_pairs(rd, ps.N)
    Jq, Jp = fd_jacobian(lambda s: phase_conserved(s, rd, pairs), ps)
    J = np.concatenate([Jq.reshape(len(pairs), -1), Jp.reshape(len(pairs), -1)], axis=1)
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


# -- sl(2) rescaled chart ----------------------------------------------------
# q_n = q_1(n)/sqrt(2), p_n = p_1(n)/sqrt(2); then b(v) = exp(sum q_n v^n).


def sl2_state(q, p) -> PhaseState:
    """Generic-chart state for type A1 from rescaled positions and momenta."""
    return PhaseState(SQRT2 * np.atleast_2d(np.asarray(q, dtype=float)), SQRT2 * np.atleast_2d(np.asarray(p, dtype=float)))


def sl2_rescaled(ps: PhaseState):
    """Rescaled ``(q_n, p_n)`` arrays of a type A1 state."""
    return ps.q[0] / SQRT2, ps.p[0] / SQRT2
