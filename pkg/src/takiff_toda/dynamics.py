"""Equations of motion, time stepping and the Lax-pair check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NonFiniteStateError
from .lie import RootData
from .phase import (
    CoeffState,
    LaxMatrix,
    PhaseState,
    _rep,
    b_from_q_array,
    block_matmul,
    conserved_array,
    default_pairs,
    hamiltonian_array,
    lax_array,
    to_coeff,
)

BLOWUP_LIMIT = 1e12
SCHEMES = ("rk4", "leapfrog")


def eom_rhs(ps: PhaseState, rd: RootData):
    """``dq_i(n) = p_i(n)``, ``dp_i(n) = -sum_a a(h_i) (exp sum_k Q(a,k) v^k)_n``."""
    dq, dp = kernels.eom_rhs(np.ascontiguousarray(ps.q), np.ascontiguousarray(ps.p), rd.pairing)
    return dq, dp


@dataclass
class Trajectory:
    times: np.ndarray
    q: np.ndarray  # (T, n_cartan, N+1)
    p: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def state(self, i) -> PhaseState:
        return PhaseState(self.q[i], self.p[i])

    @property
    def states(self):
        return [self.state(i) for i in range(len(self))]

    def drift(self):
        """Max over time of ``|f(t) - f(0)| / (1 + |f(0)|)`` per diagnostic."""
        return {
            name: float(np.max(np.abs(v - v[0])) / (1.0 + abs(v[0])))
            for name, v in self.diagnostics.items()
        }


def n_steps(dt, T):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not T >= dt:
        raise ValueError(f"horizon T={T} shorter than one step dt={dt}")
    return int(math.floor(T / dt + 1e-9))


def diagnostics(q, p, rd: RootData, pairs=None):
    b = b_from_q_array(q, rd.pairing)
    out = {"H": hamiltonian_array(p, b)}
    if rd.rep is not None:
        if pairs is None:
            pairs = default_pairs(rd, q.shape[-1] - 1)
        if pairs:
            vals = conserved_array(p, b, rd, pairs)
            for j, (k, l) in enumerate(pairs):
                out[f"f_{k}_{l}"] = vals[..., j]
    return out


def integrate(ps0: PhaseState, rd: RootData, dt: float, T: float, scheme: str = "rk4",
              pairs=None, with_diagnostics: bool = True) -> Trajectory:
    """Fixed-step integration on ``floor(T/dt) + 1`` equally spaced times.

    Raises :class:`NonFiniteStateError` once a coordinate leaves ``|x| <= 1e12``.
    """
    nsteps = n_steps(dt, T)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if ps0.q.shape[0] != rd.n_cartan:
        raise ValueError(f"state has {ps0.q.shape[0]} Cartan rows, root data expects {rd.n_cartan}")
    stepper = kernels.rk4 if scheme == "rk4" else kernels.leapfrog
    qs, ps, done = stepper(
        np.ascontiguousarray(ps0.q), np.ascontiguousarray(ps0.p), rd.pairing, float(dt), nsteps, BLOWUP_LIMIT
    )
    if done < nsteps:
        raise NonFiniteStateError(
            f"state left the finite region at step {done + 1} (t={(done + 1) * dt:g})",
            step=done + 1,
            time=(done + 1) * dt,
        )
    times = dt * np.arange(nsteps + 1)
    diag = diagnostics(qs, ps, rd, pairs) if with_diagnostics else {}
    return Trajectory(times, qs, ps, diag)


def m_matrix(cs: CoeffState, rd: RootData) -> LaxMatrix:
    """Lax partner ``M`` with blocks ``1/2 sum_a b_a(k) (f_a - e_a)``.

    With ``dq = p`` and ``dp = -dV/dq`` the flow is ``dL/dt = [M, L]`` for this
    sign; ``1/2 sum b (e - f)`` gives ``dL/dt = [L, M]`` instead.
    """
    rep = _rep(rd)
    return LaxMatrix(0.5 * np.einsum("ak,amn->kmn", cs.b, rep.F - rep.E))


def commutator(A: LaxMatrix, B: LaxMatrix) -> LaxMatrix:
    return LaxMatrix(block_matmul(A.blocks, B.blocks) - block_matmul(B.blocks, A.blocks))


def lax_derivative(ps: PhaseState, rd: RootData, h: float = 1e-6) -> LaxMatrix:
    """dL/dt along the flow: central difference of ``L(to_coeff(x + eps X))``."""
    dq, dp = eom_rhs(ps, rd)

    def L_at(eps):
        cs = to_coeff(PhaseState(ps.q + eps * dq, ps.p + eps * dp), rd)
        return lax_array(cs.y, cs.b, rd)

    return LaxMatrix((L_at(h) - L_at(-h)) / (2.0 * h))


def lax_residual(ps: PhaseState, rd: RootData, h: float = 1e-6) -> float:
    """Frobenius norm, over all blocks, of ``dL/dt - [M, L]``."""
    cs = to_coeff(ps, rd)
    L = LaxMatrix(lax_array(cs.y, cs.b, rd))
    comm = commutator(m_matrix(cs, rd), L)
    Ldot = lax_derivative(ps, rd, h)
    return float(np.linalg.norm(Ldot.blocks - comm.blocks))
