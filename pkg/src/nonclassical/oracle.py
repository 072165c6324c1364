"""Truncated-Fock-space numerics used to cross-check the closed forms.

Everything here works on explicit amplitude vectors with dense matrices
(dimension stays below a few hundred, so matrix-vector products cost
O(n^2) and that is fine).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import stirling2
from .errors import DomainError, OutOfRange, TruncationTooSmall
from .state import FockVector, choose_truncation, coherent_amplitudes


@dataclass(frozen=True)
class LadderMatrices:
    annihilate: np.ndarray
    create: np.ndarray
    number: np.ndarray
    quadrature: np.ndarray

    @property
    def dim(self) -> int:
        return self.annihilate.shape[0]


def ladder_matrices(n_max: int) -> LadderMatrices:
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)
    ad = a.conj().T
    return LadderMatrices(
        annihilate=a,
        create=ad,
        number=np.diag(np.arange(n_max + 1, dtype=float)).astype(complex),
        quadrature=(a + ad) / math.sqrt(2.0),
    )


def oracle_moment(fock: FockVector, m: int, n: int) -> complex:
    """``<psi| a^dagger^m a^n |psi>`` as ``<a^m psi | a^n psi>``."""
    if m < 0 or n < 0:
        raise DomainError("moment orders must be non-negative")
    if 2 * (m + n) > fock.n_max:
        raise TruncationTooSmall(f"m+n={m + n} needs n_max >= {2 * (m + n)}, have {fock.n_max}")
    ops = ladder_matrices(fock.n_max)
    psi = np.asarray(fock.amplitudes)
    left, right = psi, psi
    for _ in range(m):
        left = ops.annihilate @ left
    for _ in range(n):
        right = ops.annihilate @ right
    return complex(np.vdot(left, right))


def oracle_number_moment(fock: FockVector, j: int) -> float:
    n = np.arange(fock.n_max + 1, dtype=float)
    return float(np.sum(n**j * fock.probabilities))


def oracle_central_moment(fock: FockVector, operator: str, l: int) -> float:
    """``<(A - <A>)^l>`` for ``A`` the number or quadrature operator.

    The state is embedded in a space ``l`` levels larger than its cutoff so
    that raising operators never hit the matrix boundary.
    """
    if not 1 <= l <= 10:
        raise OutOfRange(f"l must lie in [1, 10], got {l}")
    if 2 * l > fock.n_max:
        raise TruncationTooSmall(f"order {l} needs n_max >= {2 * l}, have {fock.n_max}")
    dim = fock.n_max + l
    ops = ladder_matrices(dim)
    if operator == "number":
        A = ops.number
    elif operator == "quadrature":
        A = ops.quadrature
    else:
        raise DomainError(f"unknown operator {operator!r}")
    psi = fock.padded(dim)
    mean = np.vdot(psi, A @ psi).real
    shifted = A - mean * np.eye(dim + 1)
    half = psi
    for _ in range(l // 2):
        half = shifted @ half
    if l % 2 == 0:
        return float(np.vdot(half, half).real)
    return float(np.vdot(half, shifted @ half).real)


@lru_cache(maxsize=None)
def _poisson_central_coefficients(l: int) -> tuple[int, ...]:
    # Touchard raw moments centred binomially, in exact integer arithmetic;
    # entry i is the coefficient of mu^i.
    coeffs = [0] * (l + 1)
    for k in range(l + 1):
        sign_weight = math.comb(l, k) * (-1) ** (l - k)
        for j in range(k + 1):
            coeffs[l - k + j] += sign_weight * stirling2(k, j)
    return tuple(coeffs)


def poisson_central_moment(mu: float, l: int) -> float:
    """Central moment of Poisson(mu) from Touchard raw moments."""
    if mu <= 0:
        raise DomainError("Poisson mean must be positive")
    if not 0 <= l <= 10:
        raise OutOfRange(f"l must lie in [0, 10], got {l}")
    return float(sum(c * mu**i for i, c in enumerate(_poisson_central_coefficients(l)) if c))


def poisson_central_by_summation(mu: float, l: int) -> float:
    """Same quantity by summing the Poisson pmf directly."""
    n_max = choose_truncation(math.sqrt(mu), 1e-17) + 4 * l
    n = np.arange(n_max + 1)
    log_p = -mu + n * math.log(mu) - np.array([math.lgamma(k + 1) for k in n])
    return float(np.sum(np.exp(log_p) * (n - mu) ** l))


def oracle_pm(fock: FockVector, m: int) -> float:
    if m > fock.n_max:
        raise TruncationTooSmall(f"p_{m} lies beyond n_max={fock.n_max}")
    if m < 0:
        return 0.0
    return float(abs(fock.amplitudes[m]) ** 2)


def oracle_husimi(fock: FockVector, beta: complex, tail_tol: float = 1e-12) -> float:
    """``|<beta|psi>|^2 / pi`` from the truncated inner product.

    The cutoff must also cover the coherent bra, to ``tail_tol``.
    """
    need = choose_truncation(beta, tail_tol)
    if need > fock.n_max:
        raise TruncationTooSmall(f"beta={beta} needs n_max >= {need}, have {fock.n_max}")
    bra = coherent_amplitudes(beta, fock.n_max)
    return float(abs(np.vdot(bra, fock.amplitudes)) ** 2 / math.pi)
