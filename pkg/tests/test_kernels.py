import numpy as np
import pytest

from takiff_toda import _pykernels, kernels
from takiff_toda.lie import lattice_window, type_a

BACKENDS = kernels.backends()
needs_ext = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


@needs_ext
@pytest.mark.parametrize("name", ["jet_mul", "jet_exp", "jet_log", "jet_inv", "jet_sqrt"])
def test_series_kernels_agree(name):
    rng = np.random.default_rng(0)
    c = BACKENDS["cython"]
    for K in (1, 2, 5, 9):
        a = rng.uniform(-1, 1, K)
        a[0] = rng.uniform(0.5, 2)
        args = (a, rng.uniform(-1, 1, K)) if name == "jet_mul" else (a,)
        assert np.allclose(getattr(c, name)(*args), getattr(_pykernels, name)(*args), rtol=1e-13, atol=1e-14)


@needs_ext
@pytest.mark.parametrize("rd", [type_a(1), type_a(3), lattice_window(-3, 3)], ids=["A1", "A3", "window"])
@pytest.mark.parametrize("stepper", ["rk4", "leapfrog"])
def test_integrators_agree(rd, stepper):
    rng = np.random.default_rng(1)
    q0, p0 = rng.uniform(-1, 1, (2, rd.n_cartan, 3))
    c = BACKENDS["cython"]
    assert np.allclose(c.force(q0, rd.pairing), _pykernels.force(q0, rd.pairing), rtol=1e-13, atol=1e-14)
    out_c = getattr(c, stepper)(q0, p0, rd.pairing, 0.01, 200)
    out_p = getattr(_pykernels, stepper)(q0, p0, rd.pairing, 0.01, 200)
    assert out_c[2] == out_p[2] == 200
    assert np.allclose(out_c[0], out_p[0], rtol=1e-11, atol=1e-12)
    assert np.allclose(out_c[1], out_p[1], rtol=1e-11, atol=1e-12)


@pytest.mark.parametrize("impl", sorted(BACKENDS))
def test_blowup_flag(impl):
    k = BACKENDS[impl]
    P = type_a(1).pairing
    _, _, done = k.rk4(np.array([[30.0]]), np.zeros((1, 1)), P, 0.1, 10)
    assert done == 0


def test_batched_series_use_numpy_path():
    a = np.array([[1.0, 0.5, 0.1], [2.0, -0.3, 0.2]])
    out = kernels.jet_exp(a)
    assert out.shape == (2, 3)
    assert np.allclose(out[1], kernels.jet_exp(a[1]))


def test_backend_name():
    assert kernels.BACKEND in BACKENDS
