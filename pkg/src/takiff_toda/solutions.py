"""Closed-form solutions: sl(2) factorisation, jet lifts and lattice solitons.

Every formula is written in :mod:`takiff_toda.series` arithmetic, so the same
code evaluates at real arguments (order-0 jets) and at jet-valued initial data.
Evaluating an order-0 solution at ``x_j0 -> sum_n x_jn v^n`` and
``z_j0 -> sum_n z_jn v^n`` applies every jet transformation ``D_n`` at once:
the coefficient of ``v^n`` is ``D_n`` of the base solution.

The sl(2) routines use the rescaled chart ``q_n = q_1(n)/sqrt(2)``,
``p_n = p_1(n)/sqrt(2)`` unless they take or return generic states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .phase import SQRT2, CoeffState, PhaseState
from .series import Jet, as_jet, exp, hyperbolics, inv, log_unit, arccosh, sqrt_unit

BaseSolution = Callable[[float, Sequence[Jet], Sequence[Jet]], tuple[Sequence[Jet], Sequence[Jet]]]


@dataclass(frozen=True, eq=False)
class JetSolutionSample:
    t: float
    q: np.ndarray  # (n_cartan, N+1)
    p: np.ndarray

    @property
    def state(self) -> PhaseState:
        return PhaseState(self.q, self.p)


def _order(*args):
    orders = {a.order for a in args if isinstance(a, Jet)}
    if len(orders) > 1:
        raise ValueError(f"mixed jet orders {sorted(orders)}")
    return orders.pop() if orders else None


def sl2_base(t, x0, z0):
    """General solution of the rank-one open Toda equations ``q'' = -exp(2q)``.

    ``q(t) = x0 - log(cosh(t beta) - (z0/beta) sinh(t beta))`` with
    ``beta = sqrt(z0^2 + exp(2 x0))``; the momentum comes from the
    factorisation formula for ``y(v, t)``. Arguments may be reals or jets of a
    common order; reals in give reals out.
    """
    order = _order(x0, z0)
    scalar = order is None
    order = 0 if scalar else order
    x, z = as_jet(x0, order), as_jet(z0, order)
    e2x = exp(2.0 * x)
    beta = sqrt_unit(z * z + e2x)
    hb = hyperbolics(t * beta)
    q = x - log_unit(hb.cosh - z * inv(beta) * hb.sinh)
    p = z - e2x * hb.sinh * inv(beta * hb.cosh - z * hb.sinh)
    if scalar:
        return q.coeffs[0], p.coeffs[0]
    return q, p


def sl2_base_solution(t, xs, zs):
    """:func:`sl2_base` in the list form expected by :func:`jet_lift`."""
    q, p = sl2_base(t, xs[0], zs[0])
    return [q], [p]


def jet_lift(base: BaseSolution, X, Z, t: float) -> JetSolutionSample:
    """Order-N solution with initial data ``q_j(n)(0) = X[j, n]``, ``p_j(n)(0) = Z[j, n]``.

    ``base`` must solve the order-0 equations for the same root data.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if X.shape != Z.shape:
        raise ValueError("X and Z must share a shape")
    qs, ps = base(t, [Jet(row) for row in X], [Jet(row) for row in Z])
    return JetSolutionSample(t, np.array([q.coeffs for q in qs]), np.array([p.coeffs for p in ps]))


def sl2_factorized(t: float, cs0: CoeffState) -> CoeffState:
    """Coefficient state at time ``t`` from the sl(2) Borel factorisation.

    Works in the generic chart: the Lax diagonal entry is ``y/sqrt(2)``.
    """
    if cs0.y.shape[0] != 1 or cs0.b.shape[0] != 1:
        raise ValueError("factorised solution is only available for sl(2)")
    if t == 0:
        return cs0
    u = Jet(cs0.y[0] / SQRT2)
    b = Jet(cs0.b[0])
    beta = sqrt_unit(u * u + b * b)
    hb = hyperbolics(t * beta)
    d_inv = inv(beta * hb.cosh - u * hb.sinh)
    u_t = u - b * b * hb.sinh * d_inv
    b_t = b * beta * d_inv
    return CoeffState(SQRT2 * u_t.coeffs[None, :], b_t.coeffs[None, :])


def sl2_three_body_zero_velocity(t, x0, x1, x2):
    """Rescaled positions ``(q0, q1, q2)`` for sl(2), N=2, zero initial velocity."""
    w = t * math.exp(x0)
    th = math.tanh(w)
    sech2 = 1.0 / math.cosh(w) ** 2
    q0 = x0 - math.log(math.cosh(w))
    q1 = x1 - t * x1 * math.exp(x0) * th
    q2 = (x2 - 0.5 * t * (x1 * x1 + 2.0 * x2) * math.exp(x0) * th
          - 0.5 * t * t * x1 * x1 * math.exp(2.0 * x0) * sech2)
    return q0, q1, q2


def soliton_kappa(x0, x1) -> Jet:
    """Wave-number series with ``cosh(2 kappa) = 2 exp(x0 - x1) - 1``.

    ``x0`` and ``x1`` are the position series at sites 0 and 1 (time zero);
    requires ``x0_0 > x1_0``.
    """
    order = _order(x0, x1) or 0
    c = 2.0 * exp(as_jet(x0, order) - as_jet(x1, order)) - 1.0
    return 0.5 * arccosh(c)


def soliton(j: int, t: float, kappa: Jet, sign: int = 1) -> Jet:
    """Relative displacement series ``r_j = q_{j+1} - q_j`` of the one-soliton.

    ``exp(-r_j) = 1 + gamma^2 sech^2(kappa j + sign gamma t)`` with ``gamma = sinh(kappa)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    kappa = as_jet(kappa, kappa.order if isinstance(kappa, Jet) else 0)
    gamma = hyperbolics(kappa).sinh
    sech = hyperbolics(kappa * float(j) + gamma * (sign * t)).sech
    return -log_unit(1.0 + gamma * gamma * sech * sech)
