"""Husimi Q function and the two-point phase-space-matrix determinant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridTooLarge
from .state import StateParams

MAX_GRID_POINTS = 4_000_000


def husimi_q(params: StateParams, beta: complex) -> float:
    """``Q(beta) = |t alpha + r conj(beta)|^2 exp(-|alpha - beta|^2) / (pi N)``."""
    alpha = params.alpha
    beta = complex(beta)
    overlap = abs(params.t * alpha + params.r * beta.conjugate()) ** 2
    return overlap * math.exp(-abs(alpha - beta) ** 2) / (math.pi * params.norm)


def husimi_q_array(params: StateParams, beta: np.ndarray) -> np.ndarray:
    beta = np.asarray(beta, dtype=complex)
    overlap = np.abs(params.t * params.alpha + params.r * np.conj(beta)) ** 2
    return overlap * np.exp(-np.abs(params.alpha - beta) ** 2) / (math.pi * params.norm)


def q_zero(params: StateParams) -> complex | None:
    """The unique zero ``-conj(alpha) t / r`` of Q, or None when r = 0."""
    if params.r <= 1e-12:
        return None
    return -params.alpha.conjugate() * params.t / params.r


@dataclass(frozen=True)
class PhaseGrid:
    """Q sampled on a uniform rectangle; ``values[i, j]`` sits at ``(re[j], im[i])``."""

    re: np.ndarray
    im: np.ndarray
    values: np.ndarray

    @property
    def cell_area(self) -> float:
        return float((self.re[1] - self.re[0]) * (self.im[1] - self.im[0]))

    def integral(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def argmin(self) -> complex:
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return complex(self.re[j], self.im[i])

    def rows(self):
        """``(re, im, q)`` triples in row-major order."""
        for i, y in enumerate(self.im):
            for j, x in enumerate(self.re):
                yield float(x), float(y), float(self.values[i, j])


def husimi_grid(
    params: StateParams,
    re_range: tuple[float, float],
    im_range: tuple[float, float],
    n_re: int,
    n_im: int,
) -> PhaseGrid:
    if n_re < 2 or n_im < 2:
        raise DomainError("grid needs at least two points per axis")
    if n_re * n_im > MAX_GRID_POINTS:
        raise GridTooLarge(f"{n_re * n_im} grid points exceed {MAX_GRID_POINTS}")
    re = np.linspace(*re_range, n_re)
    im = np.linspace(*im_range, n_im)
    beta = re[None, :] + 1j * im[:, None]
    return PhaseGrid(re=re, im=im, values=husimi_q_array(params, beta))


def psmatrix_det(params: StateParams, beta1: complex, beta2: complex) -> float:
    """``Q(b1) Q(b2) - exp(-|b2 - b1|^2 / 2) Q((b1 + b2)/2)^2``."""
    beta1, beta2 = complex(beta1), complex(beta2)
    mid = husimi_q(params, (beta1 + beta2) / 2)
    return husimi_q(params, beta1) * husimi_q(params, beta2) - math.exp(
        -abs(beta2 - beta1) ** 2 / 2
    ) * mid * mid


def psmatrix_special(params: StateParams, beta2: complex) -> float:
    """Determinant with ``beta1`` pinned at the Q zero, written out explicitly.

    At the midpoint ``t alpha + r conj(mid) = (t alpha + r conj(beta2)) / 2``,
    which gives the factor 16 below.
    """
    if params.r <= 1e-12:
        raise DomainError("the Q function has no zero when r = 0")
    alpha, t, r = params.alpha, params.t, params.r
    beta2 = complex(beta2)
    shift = alpha.conjugate() * t / r
    mid = (beta2 - shift) / 2
    amp = abs(t * alpha + r * beta2.conjugate()) ** 4
    return -(
        math.exp(-abs(beta2 + shift) ** 2 / 2)
        * amp
        * math.exp(-2 * abs(alpha - mid) ** 2)
        / (16 * math.pi**2 * params.norm**2)
    )
