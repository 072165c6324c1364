"""Closed-form moments of the superposed state."""

from __future__ import annotations

import math
from functools import lru_cache

from .algebra import (
    ANNIHILATE,
    CREATE,
    NormalForm,
    coherent_expectation,
    normal_order,
    quadrature_power,
    stirling2,
    word,
)
from .errors import DomainError, OutOfRange
from .state import StateParams

MAX_MOMENT_ORDER = 16


def _check_order(m: int, n: int) -> None:
    if not (0 <= m <= MAX_MOMENT_ORDER and 0 <= n <= MAX_MOMENT_ORDER):
        raise OutOfRange(f"moment orders must lie in [0, {MAX_MOMENT_ORDER}], got ({m}, {n})")


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ArithmeticError(f"{what} has imaginary residue {value.imag:.3e}")
    return value.real


@lru_cache(maxsize=1024)
def _moment_forms(m: int, n: int) -> tuple[NormalForm, NormalForm, NormalForm, NormalForm]:
    # <psi| ad^m a^n |psi> * N = <alpha| (t ad + r a) ad^m a^n (t a + r ad) |alpha>
    tt = normal_order(word((CREATE, m + 1), (ANNIHILATE, n + 1)))
    rr = normal_order(word((ANNIHILATE, 1), (CREATE, m), (ANNIHILATE, n), (CREATE, 1)))
    tr = normal_order(word((CREATE, m + 1), (ANNIHILATE, n), (CREATE, 1)))
    rt = normal_order(word((ANNIHILATE, 1), (CREATE, m), (ANNIHILATE, n + 1)))
    return tt, rr, tr, rt


def general_moment(params: StateParams, m: int, n: int) -> complex:
    """``<a^dagger^m a^n>`` on the normalized state.

    Regular at ``alpha = 0``: every term is a polynomial in alpha.
    """
    _check_order(m, n)
    t, r, alpha = params.t, params.r, params.alpha
    tt, rr, tr, rt = _moment_forms(m, n)
    total = t * t * coherent_expectation(tt, alpha) + r * r * coherent_expectation(rr, alpha)
    if r and t:
        total += r * t * (coherent_expectation(tr, alpha) + coherent_expectation(rt, alpha))
    return total / params.norm


def special_case_real(params: StateParams, m: int, n: int) -> float:
    """Real-alpha polynomial form of ``<a^dagger^m a^n>``."""
    _check_order(m, n)
    if params.alpha.imag != 0.0:
        raise DomainError("special_case_real needs a real alpha")
    a, t, r = params.alpha.real, params.t, params.r
    k = m + n
    value = (2 * r * t + 1) * a ** (k + 2) + (r * r * (k + 1) + r * t * k) * a**k
    if m and n:
        value += r * r * m * n * a ** (k - 2)
    return value / params.norm


def special_case_diagonal(params: StateParams, l: int) -> float:
    """Complex-alpha polynomial form of ``<a^dagger^l a^l>``."""
    _check_order(l, l)
    alpha, t, r = params.alpha, params.t, params.r
    s = abs(alpha) ** 2
    bracket = s * s + r * r * (l * l + (2 * l + 1) * s) + 2 * r * t * (l + s) * (alpha * alpha).real
    if l == 0:
        # |alpha|^{-2} prefactor cancels against the bracket; fall back to the identity.
        return 1.0
    return s ** (l - 1) * bracket / params.norm


def number_moment(params: StateParams, j: int) -> float:
    """``<(a^dagger a)^j>`` from normally ordered diagonal moments."""
    if not 0 <= j <= 12:
        raise OutOfRange(f"number moment order must lie in [0, 12], got {j}")
    total = sum(stirling2(j, k) * general_moment(params, k, k) for k in range(j + 1))
    return _real(total, f"<N^{j}>")


def central_number_moment(params: StateParams, l: int) -> float:
    """``<(N - <N>)^l>`` expanded in the displaced frame ``b = a - alpha``.

    ``N - <N> = b^dagger b + conj(alpha) b + alpha b^dagger + delta`` and only
    ``<b^dagger^p b^q>`` with ``p, q <= 1`` are nonzero, so no large raw
    moments are ever subtracted from one another.
    """
    if not 1 <= l <= 10:
        raise OutOfRange(f"central moment order must lie in [1, 10], got {l}")
    if l == 1:
        return 0.0
    alpha = params.alpha
    b = {k: displaced_moment(params, *k) for k in ((0, 0), (1, 0), (0, 1), (1, 1))}
    delta = -(b[(1, 1)] + alpha * b[(1, 0)] + alpha.conjugate() * b[(0, 1)])
    step = NormalForm({(1, 1): 1, (0, 1): alpha.conjugate(), (1, 0): alpha, (0, 0): delta})
    form = NormalForm.identity()
    for done in range(1, l + 1):
        form = form * step
        # b^dagger powers never shrink and each step removes at most one b
        form = NormalForm({(p, q): c for (p, q), c in form.items() if p <= 1 and q <= 1 + l - done})
    total = sum(c * b[key] for key, c in form.items())
    return _real(total, f"<(dN)^{l}>")


def displaced_moment(params: StateParams, m: int, n: int) -> complex:
    """``<b^dagger^m b^n>`` with ``b = a - alpha``.

    The state equals ``D(alpha) (gamma|0> + r|1>) / sqrt(N)`` with
    ``gamma = t alpha + r conj(alpha)``, so only ``m, n <= 1`` survive.
    """
    _check_order(m, n)
    if m > 1 or n > 1:
        return 0j
    gamma = params.t * params.alpha + params.r * params.alpha.conjugate()
    r = params.r
    value = {
        (0, 0): params.norm,
        (1, 0): r * gamma,
        (0, 1): r * gamma.conjugate(),
        (1, 1): r * r,
    }[(m, n)]
    return complex(value) / params.norm


def _shifted_quadrature_moment(params: StateParams, k: int) -> float:
    # <(X - sqrt(2) Re alpha)^k>: cancellation-free because the shift is exact.
    form = quadrature_power(k)
    total = sum(c * displaced_moment(params, p, q) for (p, q), c in form.items())
    return _real(total, f"<(X - x0)^{k}>") / 2 ** (k / 2)


def quadrature_moment(params: StateParams, k: int) -> float:
    """``<X^k>`` with ``X = (a + a^dagger)/sqrt(2)``, from :func:`general_moment`."""
    form = quadrature_power(k)
    total = sum(c * general_moment(params, p, q) for (p, q), c in form.items())
    return _real(total, f"<X^{k}>") / 2 ** (k / 2)


def quadrature_central_moment(params: StateParams, l: int) -> float:
    """``<(X - <X>)^l>`` for even ``l``.

    Binomial centering is done about ``sqrt(2) Re alpha`` rather than the
    origin; large coherent displacements would otherwise cost several
    digits to cancellation.
    """
    if l % 2 or not 2 <= l <= 10:
        raise DomainError(f"quadrature moment order must be even and within [2, 10], got {l}")
    offset = _shifted_quadrature_moment(params, 1)
    return sum(
        math.comb(l, k) * (-offset) ** (l - k) * _shifted_quadrature_moment(params, k)
        for k in range(l + 1)
    )
