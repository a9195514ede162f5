"""Invariant checks run by ``takiff-toda verify``.

Each check returns ``{"pass": bool, "worst_value": float | None, "tolerance": float}``
plus optional detail keys. By default only applicable checks run: those needing
representation matrices are skipped for root data without them, and the
Darboux roundtrip is skipped for non-square (lattice window) pairings.
"""

from __future__ import annotations

import math

import numpy as np

from . import series as S
from .dynamics import eom_rhs, lax_residual
from .errors import TakiffError
from .lie import RootData
from .phase import (
    PhaseState,
    bracket_matrix,
    default_pairs,
    fd_jacobian,
    independence_rank,
    phase_conserved,
    to_coeff,
    to_phase,
)

TOLERANCES = {
    "root_data": 1e-12,
    "ring_axioms": 1e-12,
    "darboux_roundtrip": 1e-10,
    "eom_partition": 1e-12,
    "bracket_commutation": 1e-6,
    "independence_rank": 0.05,
    "lax_residual": 1e-6,
}
NEEDS_REP = {"root_data", "bracket_commutation", "independence_rank", "lax_residual"}
CHECKS = tuple(TOLERANCES)


def partitions(n):
    """Multiplicity vectors ``(s_1..s_n)`` with ``sum i s_i = n``."""
    if n == 0:
        yield ()
        return

    def rec(remaining, part):
        if part == 0:
            if remaining == 0:
                yield ()
            return
        for m in range(remaining // part + 1):
            for rest in rec(remaining - m * part, part - 1):
                yield rest + (m,)

    yield from rec(n, n)


def exp_coeff_by_partitions(a, n):
    """Coefficient ``n`` of ``exp(sum a_k v^k)`` by summing over partitions."""
    total = 0.0
    for sigma in partitions(n):
        term = 1.0
        for i, s in enumerate(sigma, start=1):
            term *= a[i] ** s / math.factorial(s)
        total += term
    return math.exp(a[0]) * total


def random_state(rng, rd: RootData, N, scale=1.0):
    shape = (rd.n_cartan, N + 1)
    return PhaseState(rng.uniform(-scale, scale, shape), rng.uniform(-scale, scale, shape))


def _result(name, worst, **extra):
    tol = TOLERANCES[name]
    ok = worst is not None and math.isfinite(worst) and worst <= tol
    return {"pass": bool(ok), "worst_value": None if worst is None or not math.isfinite(worst) else float(worst),
            "tolerance": tol, **extra}


def check_root_data(rd, N, rng, samples):
    res = rd.rep_residuals()
    return _result("root_data", max(res.values()), detail=res)


def random_jet(rng, N, lead=None, scale=1.0):
    c = rng.uniform(-scale, scale, N + 1)
    if lead is not None:
        c[0] = rng.uniform(*lead)
    return S.Jet(c)


def ring_residuals(a, b, c):
    """Worst relative residual of the ring identities and inverse pairs at a triple of jets."""
    one = S.Jet.constant(1.0, a.order)

    def rel(x, y):
        return float(np.max(np.abs(x.coeffs - y.coeffs)) / max(1.0, np.max(np.abs(y.coeffs))))

    out = {
        "associativity": rel((a * b) * c, a * (b * c)),
        "distributivity": rel(a * (b + c), a * b + a * c),
        "commutativity": rel(a * b, b * a),
        "exp_homomorphism": rel(S.exp(a + b), S.exp(a) * S.exp(b)),
    }
    unit = a if a.coeffs[0] > 0 else -a
    out["inverse"] = rel(unit * S.inv(unit), one)
    out["sqrt"] = rel(S.sqrt_unit(unit) * S.sqrt_unit(unit), unit)
    out["log"] = rel(S.exp(S.log_unit(unit)), unit)
    h = S.hyperbolics(b)
    out["cosh2_minus_sinh2"] = rel(h.cosh * h.cosh, one + h.sinh * h.sinh)
    out["sech_cosh"] = rel(h.sech * h.cosh, one)
    return out


def check_ring_axioms(rd, N, rng, samples):
    worst = {}
    for _ in range(samples):
        a = random_jet(rng, N, lead=(0.5, 2.0))
        b, c = random_jet(rng, N), random_jet(rng, N)
        for k, v in ring_residuals(a, b, c).items():
            worst[k] = max(worst.get(k, 0.0), v)
    return _result("ring_axioms", max(worst.values()), detail=worst)


def check_darboux_roundtrip(rd, N, rng, samples):
    worst = 0.0
    try:
        for _ in range(samples):
            ps = random_state(rng, rd, N)
            back = to_phase(to_coeff(ps, rd), rd)
            worst = max(worst, float(np.max(np.abs(back.flat() - ps.flat()))))
    except TakiffError as exc:
        return _result("darboux_roundtrip", None, error=f"{type(exc).__name__}: {exc}")
    return _result("darboux_roundtrip", worst)


def check_eom_partition(rd, N, rng, samples):
    worst = 0.0
    P = rd.pairing
    for _ in range(samples):
        ps = random_state(rng, rd, N)
        _, dp = eom_rhs(ps, rd)
        Q = P @ ps.q
        ref = np.zeros_like(dp)
        for a in range(rd.rank):
            coeffs = np.array([exp_coeff_by_partitions(Q[a], n) for n in range(N + 1)])
            ref -= np.outer(P[a], coeffs)
        worst = max(worst, float(np.max(np.abs(dp - ref))))
    return _result("eom_partition", worst)


def check_bracket_commutation(rd, N, rng, samples):
    pairs = default_pairs(rd, N)
    worst = 0.0
    for _ in range(samples):
        ps = random_state(rng, rd, N)
        Jq, Jp = fd_jacobian(lambda s: phase_conserved(s, rd, pairs), ps)
        worst = max(worst, float(np.max(np.abs(bracket_matrix(Jq, Jp)))))
    return _result("bracket_commutation", worst, pairs=[list(p) for p in pairs])


def check_independence_rank(rd, N, rng, samples):
    target = rd.rank * (N + 1)
    deficient = sum(independence_rank(random_state(rng, rd, N), rd) < target for _ in range(samples))
    return _result("independence_rank", deficient / samples, expected_rank=target)


def check_lax_residual(rd, N, rng, samples):
    worst = max(lax_residual(random_state(rng, rd, N), rd) for _ in range(samples))
    return _result("lax_residual", worst)


_RUNNERS = {
    "root_data": check_root_data,
    "ring_axioms": check_ring_axioms,
    "darboux_roundtrip": check_darboux_roundtrip,
    "eom_partition": check_eom_partition,
    "bracket_commutation": check_bracket_commutation,
    "independence_rank": check_independence_rank,
    "lax_residual": check_lax_residual,
}


def applicable(name, rd: RootData) -> bool:
    if name in NEEDS_REP:
        return rd.rep is not None
    if name == "darboux_roundtrip":
        return rd.pairing.shape[0] == rd.pairing.shape[1]
    return True


def run_checks(rd: RootData, N: int, names=None, samples: int = 20, seed: int = 0):
    """Run the named checks (all applicable ones by default) and return the report dict."""
    if names is None:
        names = [n for n in CHECKS if applicable(n, rd)]
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}; available: {list(CHECKS)}")
    report = {}
    for i, name in enumerate(names):
        if name in NEEDS_REP and rd.rep is None:
            report[name] = {"pass": False, "worst_value": None, "tolerance": TOLERANCES[name],
                            "error": "MissingRepresentationError: root data has no representation"}
            continue
        rng = np.random.default_rng([seed, i])
        try:
            report[name] = _RUNNERS[name](rd, N, rng, samples)
        except TakiffError as exc:
            report[name] = {"pass": False, "worst_value": None, "tolerance": TOLERANCES[name],
                            "error": f"{type(exc).__name__}: {exc}"}
    return report

