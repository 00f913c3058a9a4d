import functools

import pytest

from bubblelab import kernels
from bubblelab.ode_core import ProblemParams, ground_state

# Frozen output of tests/oracles/compute_oracles.py (mpmath, 30 digits).
# (n, gamma): (r_star, alpha_star, lambda_flux, lambda_mass)
ORACLE = {
    (3, 1.0): (3.1415926535897932385, 0.31830988618379067154, 39.478417604357434475,
               129.878788045337),
    (3, 2.0): (4.352874595946124677, 0.12724865113117520972, 30.298097756282277082,
               44.8270559292883),
    (3, 3.0): (6.8968486193769603755, 0.042429757604452951672, 25.361900947065253276,
               25.3619009470653),
    (4, 2.0): (6.3465109986123125131, 0.043885337167578513902, 221.43909175155151044,
               221.439091751552),
    (4, 1.6): (4.9830801382259961715, 0.090227042783293294981, 220.37386029087205206,
               350.117149007711),
    (6, 1.5): (7.4021786224423527683, 0.025233616248272828356, 17387.090574274173234,
               17387.0905742742),
}
PHI_HALF_3_2 = 0.47308426405124928767  # phi(r_star / 2) at (3, 2)


@functools.lru_cache(maxsize=None)
def cached_ground_state(n, gamma, oracle_mode=False, tol_ode=1e-10):
    return ground_state(ProblemParams(n, gamma, tol_ode=tol_ode, oracle_mode=oracle_mode))


@pytest.fixture
def gs32():
    return cached_ground_state(3, 2.0)


@pytest.fixture(params=["python", "cython"])
def backend(request):
    if request.param == "cython":
        pytest.importorskip("bubblelab._ckernels")
    old = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(old)
