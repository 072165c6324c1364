import math

import numpy as np
import pytest

from nonclassical.errors import DomainError, GridTooLarge
from nonclassical.oracle import oracle_husimi
from nonclassical.phasespace import (
    husimi_grid,
    husimi_q,
    husimi_q_array,
    psmatrix_det,
    psmatrix_special,
    q_zero,
)
from nonclassical.state import fock_coefficients, make_state


def test_coherent_peak():
    params = make_state(1.3 - 0.2j, 0.0)
    assert husimi_q(params, params.alpha) == pytest.approx(1 / math.pi, rel=1e-14)


def test_q_zero_location():
    assert q_zero(make_state(1.0, 0.0)) is None
    params = make_state(1.0, math.sqrt(0.5))
    assert q_zero(params) == pytest.approx(-1.0)
    p = make_state(0.7 + 0.4j, 0.5)
    assert husimi_q(p, q_zero(p)) == pytest.approx(0.0, abs=1e-30)


def test_husimi_matches_oracle():
    params = make_state(0.72, 0.38)
    fock = fock_coefficients(params, 1e-12, min_n_max=40)
    for x in np.linspace(-1.5, 1.5, 4):
        for y in np.linspace(-1.5, 1.5, 4):
            beta = complex(x, y)
            assert abs(husimi_q(params, beta) - oracle_husimi(fock, beta)) < 1e-10


def test_array_matches_scalar():
    params = make_state(0.4 + 1j, 0.6)
    betas = np.array([0.0, 1 + 1j, -2 + 0.3j])
    assert np.allclose(husimi_q_array(params, betas), [husimi_q(params, b) for b in betas])


def test_grid_integral_near_vacuum():
    # r = 0 makes the state |alpha> for any alpha != 0; alpha = 0 itself has N = 0.
    params = make_state(1e-3, 0.0)
    grid = husimi_grid(params, (-4, 4), (-4, 4), 161, 161)
    assert abs(grid.integral() - 1.0) < 1e-3


@pytest.mark.parametrize("alpha,r", [(1.0, 0.2), (1.32, 0.94), (0.5 - 1j, 0.5)])
def test_grid_integral_general(alpha, r):
    grid = husimi_grid(make_state(alpha, r), (-6, 6), (-6, 6), 241, 241)
    assert abs(grid.integral() - 1.0) < 1e-3


def test_grid_minimum_at_zero():
    params = make_state(1.32, 0.94)
    zero = q_zero(params)
    grid = husimi_grid(params, (-2, 2), (-2, 2), 401, 401)
    assert abs(grid.argmin() - zero) < 0.02
    assert grid.values.min() < 1e-5


def test_grid_layout_and_limits():
    grid = husimi_grid(make_state(1.0, 0.2), (-1, 1), (0, 2), 3, 2)
    rows = list(grid.rows())
    assert [(x, y) for x, y, _ in rows] == [(-1, 0), (0, 0), (1, 0), (-1, 2), (0, 2), (1, 2)]
    with pytest.raises(GridTooLarge):
        husimi_grid(make_state(1.0, 0.2), (-1, 1), (-1, 1), 3000, 3000)
    with pytest.raises(DomainError):
        husimi_grid(make_state(1.0, 0.2), (-1, 1), (-1, 1), 1, 5)


def test_psmatrix_coherent_vanishes():
    rng = np.random.default_rng(7)
    params = make_state(0.8 + 0.3j, 0.0)
    for _ in range(50):
        b1, b2 = (complex(*rng.uniform(-3, 3, 2)) for _ in range(2))
        assert abs(psmatrix_det(params, b1, b2)) < 1e-12


def test_psmatrix_diagonal_vanishes():
    params = make_state(1.0, 0.5)
    assert psmatrix_det(params, 0.3 + 0.2j, 0.3 + 0.2j) == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("alpha,r", [(1.0, 0.38), (0.4 - 0.6j, 0.8), (1.5, 0.2)])
def test_psmatrix_special_matches_general(alpha, r):
    params = make_state(alpha, r)
    b1 = q_zero(params)
    for b2 in (b1 + 1, b1 - 0.5j, 0.1, b1 + 2 - 1j):
        general = psmatrix_det(params, b1, b2)
        special = psmatrix_special(params, b2)
        assert special == pytest.approx(general, rel=1e-10, abs=1e-300)
        assert special < 0


def test_psmatrix_special_at_zero_is_zero():
    params = make_state(1.0, 0.38)
    assert psmatrix_special(params, q_zero(params)) == pytest.approx(0.0, abs=1e-30)
    with pytest.raises(DomainError):
        psmatrix_special(make_state(1.0, 0.0), 0.1)
