"""The state family (t a + r a^dagger)|alpha> and its number-basis expansion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateState, DomainError

MIN_NORM = 1e-12


@dataclass(frozen=True)
class StateParams:
    """Validated parameter point (alpha, t, r).

    ``norm`` is the squared norm of ``(t a + r a^dagger)|alpha>``, i.e.
    ``r^2 + |alpha|^2 + r t (alpha^2 + conj(alpha)^2)``.
    """

    alpha: complex
    t: float
    r: float
    norm: float = field(init=False)

    def __post_init__(self):
        alpha = complex(self.alpha)
        t, r = float(self.t), float(self.r)
        if not 0.0 <= r <= 1.0:
            raise DomainError(f"r must lie in [0, 1], got {r}")
        if abs(t * t + r * r - 1.0) > 1e-12:
            raise DomainError(f"t^2 + r^2 must equal 1, got t={t}, r={r}")
        norm = r * r + abs(alpha) ** 2 + 2.0 * r * t * (alpha * alpha).real
        if norm <= MIN_NORM:
            raise DegenerateState(
                f"normalization {norm:.3e} vanishes at alpha={alpha}, r={r}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "norm", norm)

    @classmethod
    def signed(cls, alpha: complex, t: float, r: float) -> "StateParams":
        """Build with an explicit (possibly negative) ``t``."""
        return cls(alpha, t, r)


def make_state(alpha: complex, r: float) -> StateParams:
    """Parameters with ``t = +sqrt(1 - r^2)``."""
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    return StateParams(complex(alpha), math.sqrt(1.0 - r * r), r)


@dataclass(frozen=True)
class FockVector:
    """Truncated number-basis amplitudes ``c_0 .. c_{n_max}``.

    ``tail_bound`` bounds the probability mass living above ``n_max``.
    """

    amplitudes: np.ndarray
    tail_bound: float

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(np.sum(self.probabilities))

    def padded(self, n_max: int) -> np.ndarray:
        """Amplitudes zero-extended to length ``n_max + 1``."""
        out = np.zeros(max(n_max, self.n_max) + 1, dtype=complex)
        out[: self.n_max + 1] = self.amplitudes
        return out


def _log_poisson(n: int, mean: float) -> float:
    if mean == 0.0:
        return 0.0 if n == 0 else -math.inf
    return -mean + n * math.log(mean) - math.lgamma(n + 1)


def choose_truncation(alpha: complex, tail_tol: float) -> int:
    """Smallest cutoff whose Poisson tail (mean ``|alpha|^2 + 2``) is below ``tail_tol``.

    The tail beyond ``n`` is bounded by ``p_{n+1} / (1 - mean/(n+2))`` once
    ``n + 2 > mean``, since successive Poisson ratios then stay below
    ``mean/(n+2)``.
    """
    if tail_tol <= 0:
        raise DomainError("tail_tol must be positive")
    mean = abs(complex(alpha)) ** 2 + 2.0
    log_tol = math.log(tail_tol)
    n = 0
    while True:
        if n + 2 > mean:
            bound = _log_poisson(n + 1, mean) - math.log1p(-mean / (n + 2))
            if bound < log_tol:
                return n
        n += 1


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """``e^{-|alpha|^2/2} alpha^n / sqrt(n!)`` for n = 0..n_max, by recursion."""
    alpha = complex(alpha)
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def superposition_amplitudes(
    alpha: complex, t: complex, r: complex, n_max: int
) -> np.ndarray:
    """Un-normalized amplitudes of ``(t a + r a^dagger)|alpha>``.

    Accepts complex ``t`` and ``r`` so heralded outputs can be compared
    against arbitrary-phase targets.
    """
    coh = coherent_amplitudes(alpha, n_max)
    out = t * complex(alpha) * coh
    out[1:] += r * np.sqrt(np.arange(1, n_max + 1)) * coh[:-1]
    return out


def fock_coefficients(
    params: StateParams, tail_tol: float = 1e-12, min_n_max: int = 0
) -> FockVector:
    """Number-basis image of the state, normalized by the exact norm.

    Starts from :func:`choose_truncation` and grows the cutoff until the
    omitted mass, ``1 - sum |c_n|^2``, is below ``tail_tol``.
    """
    if not 0.0 < tail_tol <= 1e-3:
        raise DomainError(f"tail_tol must lie in (0, 1e-3], got {tail_tol}")
    n_max = max(choose_truncation(params.alpha, tail_tol), min_n_max)
    scale = 1.0 / math.sqrt(params.norm)
    while True:
        amps = superposition_amplitudes(params.alpha, params.t, params.r, n_max) * scale
        tail = max(1.0 - float(np.sum(np.abs(amps) ** 2)), 0.0)
        if tail < tail_tol:
            return FockVector(amps, tail_bound=max(tail, np.finfo(float).eps))
        n_max += max(4, n_max // 4)
