"""The compiled kernels and the NumPy kernels must be interchangeable."""
import importlib.util
import math
import os

import numpy as np
import pytest

from whichway import _kernels_np
from whichway._backend import backend_name

HAVE_EXT = importlib.util.find_spec("whichway._kernels_cy") is not None

if HAVE_EXT:
    from whichway import _kernels_cy

pytestmark = pytest.mark.skipif(not HAVE_EXT, reason="compiled extension not built")

LAM, D, L, EPS = 5e-7, 1e-4, 1.0, 1e-5
TAU = LAM * L / (2 * math.pi)
XS = np.linspace(-0.025, 0.025, 4096)
SQ = math.sqrt(0.5)


def _allclose(a, b):
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)


def test_packet_grid_matches():
    for center in (-D / 2, D / 2):
        _allclose(
            _kernels_cy.packet_grid(XS, center, EPS, TAU),
            _kernels_np.packet_grid(XS, center, EPS, TAU),
        )


def test_direct_grid_matches(rng):
    for _ in range(5):
        s = rng.uniform()
        theta = rng.uniform(-math.pi, math.pi)
        ip = s * np.exp(-1j * theta)
        a1 = SQ * np.exp(1j * rng.uniform(-math.pi, math.pi))
        a2 = np.sqrt(1 - abs(a1) ** 2)
        args = (XS, D, EPS, TAU, a1, a2, ip)
        _allclose(_kernels_cy.direct_grid(*args), _kernels_np.direct_grid(*args))


def test_closed_grid_matches(rng):
    for _ in range(5):
        args = (XS, D, EPS, TAU, rng.uniform(), rng.uniform(-math.pi, math.pi))
        _allclose(_kernels_cy.closed_grid(*args), _kernels_np.closed_grid(*args))
        for cy_part, np_part in zip(
            _kernels_cy.closed_parts_grid(*args), _kernels_np.closed_parts_grid(*args)
        ):
            _allclose(cy_part, np_part)


def test_conditional_grid_matches():
    args = (XS, D, EPS, TAU, SQ, SQ, SQ, SQ, SQ, -SQ)
    for cy_branch, np_branch in zip(
        _kernels_cy.conditional_grid(*args), _kernels_np.conditional_grid(*args)
    ):
        _allclose(cy_branch, np_branch)


def test_route_equivalence_holds_per_backend(rng):
    # the direct/closed cross-check must pass inside each backend on its own
    for mod in (_kernels_cy, _kernels_np):
        for _ in range(3):
            s = rng.uniform()
            theta = rng.uniform(-math.pi, math.pi)
            direct = mod.direct_grid(XS, D, EPS, TAU, SQ, SQ, s * np.exp(-1j * theta))
            closed = mod.closed_grid(XS, D, EPS, TAU, s, theta)
            mask = direct > 1e-300
            assert np.max(np.abs(direct[mask] - closed[mask]) / closed[mask]) < 1e-10


def test_active_backend_is_compiled():
    if os.environ.get("WHICHWAY_BACKEND", "auto") not in ("auto", "cython"):
        pytest.skip("backend forced away from the extension")
    assert backend_name() == "cython"
