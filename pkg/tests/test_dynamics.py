import math

import numpy as np
import pytest

from takiff_toda.dynamics import eom_rhs, integrate, lax_residual, m_matrix, n_steps
from takiff_toda.errors import MissingRepresentationError, NonFiniteStateError
from takiff_toda.lie import lattice_window, type_a
from takiff_toda.phase import CoeffState, PhaseState, sl2_rescaled, sl2_state
from takiff_toda.solutions import sl2_three_body_zero_velocity
from takiff_toda.verify import exp_coeff_by_partitions


def rand_state(rng, rd, N, scale=1.0):
    shape = (rd.n_cartan, N + 1)
    return PhaseState(rng.uniform(-scale, scale, shape), rng.uniform(-scale, scale, shape))


def test_eom_order_zero():
    rd = type_a(2)
    ps = rand_state(np.random.default_rng(0), rd, 0)
    dq, dp = eom_rhs(ps, rd)
    P, q = rd.pairing, ps.q[:, 0]
    want = -sum(P[a] * math.exp(P[a] @ q) for a in range(2))
    assert np.array_equal(dq, ps.p)
    assert np.allclose(dp[:, 0], want, rtol=1e-14)


def test_eom_sl2_rescaled_n2():
    rng = np.random.default_rng(1)
    q, p = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
    _, dp = eom_rhs(sl2_state(q, p), type_a(1))
    e = math.exp(2 * q[0])
    want = [-e, -2 * q[1] * e, -2 * (q[1] ** 2 + q[2]) * e]
    assert np.allclose(dp[0] / math.sqrt(2), want, rtol=1e-13)


@pytest.mark.parametrize("s,N", [(1, 6), (2, 4), (3, 3)])
def test_eom_matches_partition_sum(s, N):
    rd = type_a(s)
    rng = np.random.default_rng(s + N)
    ps = rand_state(rng, rd, N)
    _, dp = eom_rhs(ps, rd)
    Q = rd.pairing @ ps.q
    ref = np.zeros_like(dp)
    for a in range(rd.rank):
        ref -= np.outer(rd.pairing[a], [exp_coeff_by_partitions(Q[a], n) for n in range(N + 1)])
    assert np.max(np.abs(dp - ref)) <= 1e-12


def test_lattice_eom_is_nearest_neighbour_toda():
    rd = lattice_window(0, 3)
    rng = np.random.default_rng(2)
    ps = rand_state(rng, rd, 1)
    _, dp = eom_rhs(ps, rd)
    q = ps.q
    for i in (1, 2):
        d_out = q[i] - q[i + 1]
        d_in = q[i - 1] - q[i]
        want0 = -math.exp(d_out[0]) + math.exp(d_in[0])
        want1 = -math.exp(d_out[0]) * d_out[1] + math.exp(d_in[0]) * d_in[1]
        assert dp[i] == pytest.approx([want0, want1], rel=1e-13)
    # free ends lose one neighbour
    assert dp[0, 0] == pytest.approx(-math.exp(q[0, 0] - q[1, 0]), rel=1e-13)
    assert dp[3, 0] == pytest.approx(math.exp(q[2, 0] - q[3, 0]), rel=1e-13)


def test_n_steps_and_validation():
    assert n_steps(1e-3, 2.0) == 2000
    assert n_steps(0.1, 0.3) == 3
    with pytest.raises(ValueError):
        n_steps(0.1, 0.05)
    with pytest.raises(ValueError):
        n_steps(0.0, 1.0)


def test_one_step_from_rest_moves_q_at_second_order():
    rd = type_a(2)
    q0 = np.random.default_rng(3).uniform(-1, 1, (2, 3))
    for dt in (1e-2, 5e-3):
        tr = integrate(PhaseState(q0, np.zeros_like(q0)), rd, dt, dt)
        _, f = eom_rhs(PhaseState(q0, np.zeros_like(q0)), rd)
        assert len(tr) == 2
        assert np.allclose(tr.q[1] - q0, 0.5 * dt * dt * f, atol=dt ** 3 * 10)


def test_zero_velocity_matches_closed_form():
    rng = np.random.default_rng(4)
    x = rng.uniform(-1, 1, 3)
    tr = integrate(sl2_state(x, np.zeros(3)), type_a(1), 1e-3, 2.0)
    err = 0.0
    for i in range(0, len(tr), 50):
        q, _ = sl2_rescaled(tr.state(i))
        err = max(err, np.max(np.abs(q - sl2_three_body_zero_velocity(tr.times[i], *x))))
    assert err <= 1e-6


@pytest.mark.parametrize("s,N", [(1, 3), (2, 2)])
def test_conservation_rk4(s, N):
    rd = type_a(s)
    tr = integrate(rand_state(np.random.default_rng(5), rd, N), rd, 1e-3, 5.0)
    drift = tr.drift()
    assert set(drift) == {"H"} | {f"f_{k}_{l}" for k in range(N + 1) for l in range(2, s + 2)}
    assert drift["H"] <= 1e-8
    assert max(drift.values()) <= 1e-6


def test_leapfrog_bounded_energy_error():
    rd = type_a(2)
    ps0 = rand_state(np.random.default_rng(6), rd, 2)
    tr = integrate(ps0, rd, 1e-3, 5.0, scheme="leapfrog")
    assert tr.drift()["H"] <= 1e-5
    ref = integrate(ps0, rd, 1e-3, 5.0)
    assert np.max(np.abs(tr.q[-1] - ref.q[-1])) <= 1e-4


def test_rk4_convergence_order():
    rd = type_a(2)
    ps0 = rand_state(np.random.default_rng(7), rd, 2)
    T = 2.0
    ref = integrate(ps0, rd, 1e-3, T, with_diagnostics=False)
    errs = []
    for dt in (0.04, 0.02):
        tr = integrate(ps0, rd, dt, T, with_diagnostics=False)
        errs.append(np.max(np.abs(np.concatenate([tr.q[-1] - ref.q[-1], tr.p[-1] - ref.p[-1]]))))
    assert 12.0 <= errs[0] / errs[1] <= 20.0


def test_time_reversal():
    rd = type_a(1)
    ps0 = rand_state(np.random.default_rng(8), rd, 2)
    fwd = integrate(ps0, rd, 1e-3, 2.0, with_diagnostics=False)
    back = integrate(PhaseState(fwd.q[-1], -fwd.p[-1]), rd, 1e-3, 2.0, with_diagnostics=False)
    assert np.max(np.abs(back.q[-1] - ps0.q)) <= 1e-6


def test_blowup_detected():
    rd = type_a(1)
    ps0 = PhaseState(np.array([[30.0, 0.0]]), np.zeros((1, 2)))
    with pytest.raises(NonFiniteStateError) as info:
        integrate(ps0, rd, 0.1, 1.0)
    assert info.value.step == 1


def test_unknown_scheme():
    with pytest.raises(ValueError):
        integrate(PhaseState.zeros(1, 1), type_a(1), 0.1, 1.0, scheme="euler")


def test_m_matrix_rank_one():
    c = 0.8
    M = m_matrix(CoeffState(np.zeros((1, 3)), np.array([[c, 0.0, 0.0]])), type_a(1))
    assert np.allclose(M.blocks[0], c / 2 * np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert not M.blocks[1:].any()
    rng = np.random.default_rng(9)
    M = m_matrix(CoeffState(rng.normal(size=(1, 4)), rng.normal(size=(1, 4))), type_a(1))
    assert np.allclose(M.blocks, -np.swapaxes(M.blocks, 1, 2))


def test_m_matrix_requires_rep():
    with pytest.raises(MissingRepresentationError):
        m_matrix(CoeffState(np.zeros((2, 1)), np.ones((1, 1))), lattice_window(0, 1))


@pytest.mark.parametrize("s,N", [(1, 2), (2, 1), (3, 2)])
def test_lax_residual_random(s, N):
    rd = type_a(s)
    rng = np.random.default_rng(10 + s)
    for _ in range(5):
        assert lax_residual(rand_state(rng, rd, N), rd) <= 1e-6


def test_lax_residual_at_origin():
    rd = type_a(1)
    assert lax_residual(PhaseState.zeros(1, 2), rd) <= 1e-6
