"""Scalar nonclassicality witnesses with classical threshold 0."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .algebra import pochhammer_half, stirling2
from .errors import DegenerateState, DomainError, OutOfRange
from .moments import (
    central_number_moment,
    general_moment,
    number_moment,
    quadrature_central_moment,
)
from .oracle import poisson_central_moment
from .state import StateParams

BOUNDARY = 1e-12
DEGENERATE_DENOMINATOR = 1e-12


class Witness(str, Enum):
    MANDEL = "mandel"
    HOA = "hoa"
    HOSPS = "hosps"
    HOS = "hos"
    AGARWAL_TARA = "agarwal-tara"
    KLYSHKO = "klyshko"


@dataclass(frozen=True)
class WitnessRecord:
    """One evaluated witness.

    ``nonclassical`` is set only for values strictly below
    ``threshold - 1e-12``; values inside that band are flagged ``boundary``.
    Degenerate records carry ``value = nan``. ``alternate`` holds a second
    evaluation of the same quantity when one exists.
    """

    name: Witness
    order: int
    params: StateParams
    value: float
    threshold: float = 0.0
    nonclassical: bool = False
    boundary: bool = False
    degenerate: bool = False
    alternate: float | None = None

    @classmethod
    def evaluate(cls, name, order, params, value, alternate=None) -> "WitnessRecord":
        value = float(value)
        if not math.isfinite(value):
            raise ArithmeticError(f"{name.value} produced non-finite value {value}")
        return cls(
            name=name,
            order=order,
            params=params,
            value=value,
            nonclassical=value < -BOUNDARY,
            boundary=abs(value) <= BOUNDARY,
            alternate=alternate,
        )

    @classmethod
    def flagged(cls, name, order, params) -> "WitnessRecord":
        return cls(name=name, order=order, params=params, value=math.nan, degenerate=True)


def _check_order(l: int, lo: int, hi: int) -> None:
    if not lo <= l <= hi:
        raise OutOfRange(f"order must lie in [{lo}, {hi}], got {l}")


def mandel_q(params: StateParams, l: int = 2) -> WitnessRecord:
    """Higher-order Mandel parameter ``<(dN)^l> / <N> - 1``."""
    _check_order(l, 2, 10)
    mean = number_moment(params, 1)
    if mean <= 1e-12:
        raise DegenerateState("mean photon number vanishes")
    value = central_number_moment(params, l) / mean - 1.0
    return WitnessRecord.evaluate(Witness.MANDEL, l, params, value)


def antibunching(params: StateParams, l: int) -> float:
    """``d(l-1) = <a^dagger^l a^l> - <a^dagger a>^l``."""
    return (general_moment(params, l, l) - general_moment(params, 1, 1) ** l).real


def hoa(params: StateParams, l: int = 2) -> WitnessRecord:
    _check_order(l, 2, 10)
    return WitnessRecord.evaluate(Witness.HOA, l, params, antibunching(params, l))


def hosps_printed(params: StateParams, l: int) -> float:
    """Double Stirling/binomial sum over antibunching terms.

    With the standard Stirling normalization this equals
    ``(-1)^l (<(dN)^l> - <(dN)^l>_Poisson)``.
    """
    mean = number_moment(params, 1)
    total = 0.0
    for e in range(l + 1):
        inner = sum(stirling2(e, f) * antibunching(params, f) for f in range(2, e + 1))
        total += math.comb(l, e) * (-1) ** e * inner * mean ** (l - e)
    return total


def hosps(params: StateParams, l: int = 2) -> WitnessRecord:
    """Central number moment minus the Poisson value at equal mean."""
    _check_order(l, 2, 8)
    mean = number_moment(params, 1)
    value = central_number_moment(params, l) - poisson_central_moment(mean, l)
    return WitnessRecord.evaluate(
        Witness.HOSPS, l, params, value, alternate=hosps_printed(params, l)
    )


def hos(params: StateParams, l: int = 2, phase: float | None = None) -> WitnessRecord:
    """Hong-Mandel squeezing ``S(l)``.

    With ``phase`` given, alpha is replaced by ``|alpha| e^{i phase}``.
    """
    if l % 2:
        raise DomainError(f"Hong-Mandel order must be even, got {l}")
    _check_order(l, 2, 10)
    if phase is not None:
        params = replace(params, alpha=abs(params.alpha) * cmath.exp(1j * phase))
    bound = float(pochhammer_half(l))
    value = (quadrature_central_moment(params, l) - bound) / bound
    return WitnessRecord.evaluate(Witness.HOS, l, params, value)


def _hankel3(moments) -> np.ndarray:
    return np.array([[moments[i + j] for j in range(3)] for i in range(3)], dtype=float)


def agarwal_tara(params: StateParams) -> WitnessRecord:
    m = [1.0] + [general_moment(params, j, j).real for j in range(1, 5)]
    mu = [1.0] + [number_moment(params, j) for j in range(1, 5)]
    det_m = np.linalg.det(_hankel3(m))
    det_mu = np.linalg.det(_hankel3(mu))
    denom = det_mu - det_m
    if abs(denom) < DEGENERATE_DENOMINATOR:
        return WitnessRecord.flagged(Witness.AGARWAL_TARA, 3, params)
    return WitnessRecord.evaluate(Witness.AGARWAL_TARA, 3, params, det_m / denom)


def photon_prob(params: StateParams, m: int) -> float:
    """``p_m = N^-1 e^{-|alpha|^2} |alpha|^{2(m-1)} |t alpha^2 + r m|^2 / m!``."""
    if m < 0:
        return 0.0
    if m > 4096:
        raise OutOfRange(f"photon number {m} too large")
    alpha, t, r = params.alpha, params.t, params.r
    s = abs(alpha) ** 2
    if m == 0:
        return t * t * s * math.exp(-s) / params.norm
    if s == 0.0:
        return r * r / params.norm if m == 1 else 0.0
    log_weight = -s + (m - 1) * math.log(s) - math.lgamma(m + 1)
    return math.exp(log_weight) * abs(t * alpha * alpha + r * m) ** 2 / params.norm


def klyshko_closed_form(params: StateParams, m: int) -> float:
    """Factored expression for ``B(m)`` (negative bracket form)."""
    alpha, t, r = params.alpha, params.t, params.r
    s = abs(alpha) ** 2
    a2 = (alpha * alpha).real
    a4 = (alpha**4).real
    bracket = r * r * (2 * m * m + 4 * m + 1) + 4 * r * t * (m + 1) * a2 + 2 * t * t * a4
    if s == 0.0:
        weight = 1.0 if m == 0 else 0.0
    else:
        weight = math.exp(-2 * s + 2 * m * math.log(s) - math.lgamma(m + 1) - math.lgamma(m + 2))
    return -weight * r * r * bracket / params.norm**2


def klyshko(params: StateParams, m: int = 0) -> WitnessRecord:
    """``B(m) = (m+2) p_m p_{m+2} - (m+1) p_{m+1}^2``."""
    _check_order(m, 0, 30)
    p0, p1, p2 = (photon_prob(params, m + k) for k in range(3))
    value = (m + 2) * p0 * p2 - (m + 1) * p1 * p1
    return WitnessRecord.evaluate(
        Witness.KLYSHKO, m, params, value, alternate=klyshko_closed_form(params, m)
    )


def evaluate(name: Witness | str, params: StateParams, order: int, **kwargs) -> WitnessRecord:
    """Dispatch by witness name; ``order`` is ignored for Agarwal-Tara."""
    name = Witness(name)
    if name is Witness.AGARWAL_TARA:
        return agarwal_tara(params)
    fn = {
        Witness.MANDEL: mandel_q,
        Witness.HOA: hoa,
        Witness.HOSPS: hosps,
        Witness.HOS: hos,
        Witness.KLYSHKO: klyshko,
    }[name]
    return fn(params, order, **kwargs)
