"""Three-mode simulation of the heralded (t a + r a^dagger) scheme.

Mode ``a`` carries the signal, ``b`` and ``c`` are ancillas. The pipeline
is: down-conversion on (a, c), beam splitter BS1 on (b, a), beam splitter
BS2 on (b, c), then an ideal photon-number projection of ``b`` (PD1) and
``c`` (PD2).

Beam splitters act on creation operators as ``i^dagger -> t* i^dagger +
r* j^dagger`` and ``j^dagger -> t j^dagger - r i^dagger``, which is the
Schrodinger-picture form of ``i' = t i + r j``, ``j' = t* j - r* i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import CapExceeded, DomainError, ZeroProbability
from .state import FockVector, choose_truncation, coherent_amplitudes, superposition_amplitudes

MODE_A, MODE_B, MODE_C = 0, 1, 2
LEAK_TOL = 1e-10
ANCILLA_CAP = 3

PD1 = "PD1_click_PD2_silent"
PD2 = "PD2_click_PD1_silent"
_PATTERNS = {PD1: (1, 0), PD2: (0, 1), "PD1": (1, 0), "PD2": (0, 1)}


@dataclass(frozen=True)
class MultimodeState:
    """Amplitudes indexed ``[n_a, n_b, n_c]`` up to per-mode caps (inclusive).

    ``norm`` is the raw squared norm; first-order down-conversion is not
    unitary and the heralding probabilities are taken relative to it.
    """

    amplitudes: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 3:
            raise DomainError("multimode amplitudes must be a 3-index array")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm", float(np.sum(np.abs(amps) ** 2)))

    @property
    def caps(self) -> tuple[int, int, int]:
        return tuple(d - 1 for d in self.amplitudes.shape)

    @classmethod
    def product(cls, signal: np.ndarray, cap_b: int = ANCILLA_CAP, cap_c: int = ANCILLA_CAP):
        """``|signal>_a |0>_b |0>_c``."""
        amps = np.zeros((len(signal), cap_b + 1, cap_c + 1), dtype=complex)
        amps[:, 0, 0] = signal
        return cls(amps)


@dataclass(frozen=True)
class SchemeConfig:
    t1: complex
    r1: complex
    t2: complex
    r2: complex
    eta: float
    pdc_order: str = "first"
    ancilla_cap: int = ANCILLA_CAP

    def __post_init__(self):
        for name, (t, r) in {"BS1": (self.t1, self.r1), "BS2": (self.t2, self.r2)}.items():
            if abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) > 1e-12:
                raise DomainError(f"{name} coefficients are not unitary: |t|^2+|r|^2 != 1")
        if self.pdc_order not in ("first", "exact"):
            raise DomainError(f"pdc_order must be 'first' or 'exact', got {self.pdc_order!r}")
        limit = 0.05 if self.pdc_order == "first" else 0.3
        if not 0.0 <= self.eta <= limit:
            raise DomainError(f"eta must lie in [0, {limit}] for {self.pdc_order} order")
        if self.ancilla_cap < 2:
            raise DomainError("ancilla cap must be at least 2")

    @classmethod
    def from_transmissions(
        cls, t1: float, t2: float, eta: float, pdc_order: str = "first", mirror_phase: float = math.pi
    ) -> "SchemeConfig":
        """Real transmissions; the reflection of BS2 carries the mirror phase.

        The default phase pi (``r2 = -|r2|``) is the one for which the PD1
        branch heralds ``t = -r1* t2*/t1`` together with ``r = -eta t2``.
        """
        r1 = math.sqrt(max(0.0, 1.0 - t1 * t1))
        r2 = math.sqrt(max(0.0, 1.0 - t2 * t2))
        if mirror_phase == math.pi:
            r2 = -r2
        elif mirror_phase != 0.0:
            r2 = r2 * complex(math.cos(mirror_phase), math.sin(mirror_phase))
        return cls(t1=t1, r1=r1, t2=t2, r2=r2, eta=eta, pdc_order=pdc_order)

    def implied_coefficients(self, pattern: str = PD1) -> tuple[complex, complex]:
        """First-order (t, r) heralded by each detector pattern."""
        t1, r1, t2, r2 = (complex(x) for x in (self.t1, self.r1, self.t2, self.r2))
        if _PATTERNS[pattern] == (1, 0):
            return -r1.conjugate() * t2.conjugate() / t1, -self.eta * t2
        return -r1.conjugate() * r2.conjugate() / t1, self.eta * r2

    def as_dict(self) -> dict:
        def c(z):
            z = complex(z)
            return {"re": z.real, "im": z.imag}

        return {
            "t1": c(self.t1),
            "r1": c(self.r1),
            "t2": c(self.t2),
            "r2": c(self.r2),
            "eta": self.eta,
            "pdc_order": self.pdc_order,
            "ancilla_cap": self.ancilla_cap,
        }


def _check_leak(amps: np.ndarray, caps: tuple[int, int, int], guard_ancillas: bool) -> np.ndarray:
    """Crop to caps, raising if the discarded (or guard-level) population is too big."""
    ca, cb, cc = caps
    kept = amps[: ca + 1, : cb + 1, : cc + 1]
    lost = float(np.sum(np.abs(amps) ** 2) - np.sum(np.abs(kept) ** 2))
    if lost > LEAK_TOL:
        raise CapExceeded(f"population {lost:.3e} pushed beyond caps {caps}")
    if guard_ancillas:
        guard = float(np.sum(np.abs(kept[:, cb, :]) ** 2) + np.sum(np.abs(kept[:, :cb, cc]) ** 2))
        if guard > LEAK_TOL:
            raise CapExceeded(f"population {guard:.3e} reached the ancilla cap")
    return kept


def apply_pdc(state: MultimodeState, eta: float, order: str = "first") -> MultimodeState:
    """Down-conversion ``exp(-eta a^dag c^dag + eta a c)`` on modes (a, c).

    ``order="first"`` keeps ``1 - eta a^dag c^dag`` only. The result is
    not renormalized.
    """
    if eta < 0:
        raise DomainError("eta must be non-negative")
    caps = state.caps
    ca, cb, cc = caps
    psi = state.amplitudes
    if order == "first":
        out = np.zeros((ca + 2, cb + 1, cc + 2), dtype=complex)
        out[: ca + 1, :, : cc + 1] = psi
        weight = np.sqrt(np.outer(np.arange(1, ca + 2), np.arange(1, cc + 2)))
        out[1:, :, 1:] -= eta * weight[:, None, :] * psi
    elif order == "exact":
        out = _pdc_exact(psi, eta)
    else:
        raise DomainError(f"unknown pdc order {order!r}")
    return MultimodeState(_check_leak(out, caps, guard_ancillas=True))


def _pdc_exact(psi: np.ndarray, eta: float, pad: int = 24) -> np.ndarray:
    # The generator conserves n_a - n_c, so it is block diagonal over ladders
    # |d + k, k> (d >= 0) or |k, k - d> (d < 0); each block is tridiagonal.
    ca, cb, cc = (d - 1 for d in psi.shape)
    da, dc = ca + pad, cc + pad
    out = np.zeros((da + 1, cb + 1, dc + 1), dtype=complex)
    for d in range(-dc, da + 1):
        a0, c0 = max(d, 0), max(-d, 0)
        length = min(da - a0, dc - c0) + 1
        if length <= 0:
            continue
        na = a0 + np.arange(length)
        nc = c0 + np.arange(length)
        couple = eta * np.sqrt((na[:-1] + 1.0) * (nc[:-1] + 1.0))
        gen = np.diag(-couple, -1) + np.diag(couple, 1)
        U = expm(gen)
        inside = (na <= ca) & (nc <= cc)
        if not inside.any():
            continue
        src = np.zeros((length, cb + 1), dtype=complex)
        src[inside] = psi[na[inside], :, nc[inside]]
        out[na, :, nc] = U @ src
    return out


def _bs_transfer(n_i: int, n_j: int, t: complex, r: complex) -> dict[tuple[int, int], complex]:
    """Output amplitudes of ``|n_i, n_j>`` through the beam splitter."""
    out: dict[tuple[int, int], complex] = {}
    tc, rc = t.conjugate(), r.conjugate()
    norm = math.sqrt(math.factorial(n_i) * math.factorial(n_j))
    for k in range(n_i + 1):
        ck = math.comb(n_i, k) * tc**k * rc ** (n_i - k)
        for l in range(n_j + 1):
            cl = math.comb(n_j, l) * t**l * (-r) ** (n_j - l)
            p, q = k + n_j - l, n_i - k + l
            amp = ck * cl * math.sqrt(math.factorial(p) * math.factorial(q)) / norm
            out[(p, q)] = out.get((p, q), 0) + amp
    return out


def apply_beam_splitter(
    state: MultimodeState, modes: tuple[int, int], t: complex, r: complex
) -> MultimodeState:
    """Two-mode beam splitter on ``modes = (i, j)``; see the module docstring."""
    t, r = complex(t), complex(r)
    if abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) > 1e-12:
        raise DomainError("beam splitter needs |t|^2 + |r|^2 = 1")
    i, j = modes
    if i == j or {i, j} - {0, 1, 2}:
        raise DomainError(f"invalid mode pair {modes}")
    k = 3 - i - j
    psi = np.moveaxis(state.amplitudes, (i, j, k), (0, 1, 2))
    ci, cj = psi.shape[0] - 1, psi.shape[1] - 1
    total = ci + cj
    out = np.zeros((total + 1, total + 1, psi.shape[2]), dtype=complex)
    for n_i in range(ci + 1):
        for n_j in range(cj + 1):
            column = psi[n_i, n_j]
            if not column.any():
                continue
            for (p, q), amp in _bs_transfer(n_i, n_j, t, r).items():
                out[p, q] += amp * column
    caps = (ci, cj, psi.shape[2] - 1)
    kept = _check_leak(out, caps, guard_ancillas=False)
    return MultimodeState(np.moveaxis(kept, (0, 1, 2), (i, j, k)))


def branch_probabilities(state: MultimodeState) -> dict[tuple[int, int], float]:
    """Probability of every ``(n_b, n_c)`` detector outcome."""
    if state.norm <= 0:
        raise ZeroProbability("state has zero norm")
    weights = np.sum(np.abs(state.amplitudes) ** 2, axis=0) / state.norm
    return {(nb, nc): float(weights[nb, nc]) for nb in range(weights.shape[0]) for nc in range(weights.shape[1])}


def herald(state: MultimodeState, pattern: str = PD1) -> tuple[FockVector, float]:
    """Project the ancillas on a detector pattern; return the signal and its probability."""
    try:
        nb, nc = _PATTERNS[pattern]
    except KeyError:
        raise DomainError(f"unknown herald pattern {pattern!r}") from None
    cond = state.amplitudes[:, nb, nc]
    weight = float(np.sum(np.abs(cond) ** 2))
    probability = weight / state.norm if state.norm > 0 else 0.0
    if probability < 1e-30:
        raise ZeroProbability(f"pattern {pattern} has probability {probability:.3e}")
    amps = cond / math.sqrt(weight)
    tail = max(float(abs(amps[-1]) ** 2), np.finfo(float).eps)
    return FockVector(amps, tail_bound=tail), probability


def signal_cap(alpha: complex) -> int:
    return choose_truncation(alpha, 1e-12) + 2


def run_scheme(alpha: complex, config: SchemeConfig) -> MultimodeState:
    """PDC, then BS1, then BS2, starting from ``|alpha>_a |0>_b |0>_c``."""
    signal = coherent_amplitudes(alpha, signal_cap(alpha))
    state = MultimodeState.product(signal, config.ancilla_cap, config.ancilla_cap)
    state = apply_pdc(state, config.eta, config.pdc_order)
    # (b, a) orientation with r = conj(r1) gives the first-order term -(r1*/t1) a b^dag.
    state = apply_beam_splitter(state, (MODE_B, MODE_A), config.t1, complex(config.r1).conjugate())
    return apply_beam_splitter(state, (MODE_B, MODE_C), config.t2, config.r2)


@dataclass(frozen=True)
class SchemeResult:
    config: SchemeConfig
    pattern: str
    success_probability: float
    implied_t: complex
    implied_r: complex
    fidelity: float

    def as_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "pattern": self.pattern,
            "success_probability": self.success_probability,
            "implied_t": {"re": self.implied_t.real, "im": self.implied_t.imag},
            "implied_r": {"re": self.implied_r.real, "im": self.implied_r.imag},
            "fidelity": self.fidelity,
        }


def fidelity(a: FockVector, b: np.ndarray) -> float:
    """``|<b|a>|^2`` with ``b`` normalized here."""
    n = min(len(b), a.n_max + 1)
    b = np.asarray(b[:n]) / np.linalg.norm(b)
    return float(min(1.0, abs(np.vdot(b, a.amplitudes[:n])) ** 2))


def scheme_fidelity(alpha: complex, config: SchemeConfig, pattern: str = PD1) -> SchemeResult:
    """Heralded-state fidelity with the target built from the implied (t, r)."""
    state = run_scheme(alpha, config)
    heralded, probability = herald(state, pattern)
    t, r = config.implied_coefficients(pattern)
    target = superposition_amplitudes(alpha, t, r, heralded.n_max)
    return SchemeResult(
        config=config,
        pattern=pattern if pattern in (PD1, PD2) else {"PD1": PD1, "PD2": PD2}[pattern],
        success_probability=probability,
        implied_t=complex(t),
        implied_r=complex(r),
        fidelity=fidelity(heralded, target),
    )
