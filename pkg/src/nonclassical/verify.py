"""Cross-check every closed-form quantity against the Fock-space oracle.

Errors are reported as ``abs_err / max(|oracle|, scale)`` where ``scale``
is the magnitude of the terms that make up the quantity. For differences
that cancel (witnesses near zero, Q near its zero) this is the honest
yardstick; for plain moments the scale is 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import oracle
from .moments import general_moment
from .phasespace import husimi_q, psmatrix_det, q_zero
from .state import StateParams, choose_truncation, fock_coefficients
from .witnesses import (
    DEGENERATE_DENOMINATOR,
    agarwal_tara,
    hoa,
    hos,
    hosps,
    klyshko,
    mandel_q,
    photon_prob,
)

TINY = 1e-300


@dataclass(frozen=True)
class Check:
    quantity: str
    closed_form: float | None
    oracle: float | None
    abs_err: float
    rel_err: float
    passed: bool


@dataclass
class VerifyReport:
    params: StateParams
    tol: float
    n_max: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, quantity: str, closed: float, truth: float, scale: float = 1.0) -> None:
        abs_err = abs(closed - truth)
        rel_err = abs_err / max(abs(truth), scale, TINY)
        ok = bool(math.isfinite(rel_err) and rel_err <= self.tol)
        self.checks.append(Check(quantity, float(closed), float(truth), abs_err, rel_err, ok))

    def add_flag(self, quantity: str, closed_flag: bool, oracle_flag: bool) -> None:
        # Both sides degenerate: nothing to compare numerically.
        ok = closed_flag == oracle_flag
        err = 0.0 if ok else math.inf
        self.checks.append(Check(quantity, None, None, err, err, ok))

    def to_json(self, indent: int | None = 2) -> str:
        rows = []
        for c in self.checks:
            row = asdict(c)
            row["pass"] = row.pop("passed")
            for key in ("abs_err", "rel_err"):
                if not math.isfinite(row[key]):
                    row[key] = None
            rows.append(row)
        return json.dumps(rows, indent=indent)


def default_betas(params: StateParams) -> list[complex]:
    """5x5 lattice of unit spacing centred on alpha."""
    offsets = np.arange(-2, 3)
    return [params.alpha + complex(x, y) for y in offsets for x in offsets]


def default_beta_pairs(params: StateParams) -> list[tuple[complex, complex]]:
    pairs = []
    for k in range(10):
        theta = 2 * math.pi * k / 10
        b1 = params.alpha + 1.2 * complex(math.cos(theta), math.sin(theta))
        pairs.append((b1, b1 + 0.7 * complex(math.cos(3 * theta), math.sin(3 * theta))))
    zero = q_zero(params)
    if zero is not None and abs(zero - params.alpha) < 4:
        pairs[-1] = (zero, zero + 1)
    return pairs


def _hankel_det(values) -> float:
    return float(np.linalg.det(np.array([[values[i + j] for j in range(3)] for i in range(3)])))


def _pm_scale(params: StateParams, m: int) -> float:
    s = abs(params.alpha) ** 2
    if s == 0.0:
        return 0.0
    log_w = -s + (m - 1) * math.log(s) - math.lgamma(m + 1)
    return math.exp(log_w) * (params.t * s + params.r * m) ** 2 / params.norm


def _q_scale(params: StateParams, beta: complex) -> float:
    amp = (abs(params.t * params.alpha) + abs(params.r * beta)) ** 2
    return amp * math.exp(-abs(params.alpha - beta) ** 2) / (math.pi * params.norm)


def verify_all(
    params: StateParams,
    tol: float = 1e-8,
    tail_tol: float = 1e-12,
    max_moment: int = 6,
    max_pm: int = 10,
    betas: list[complex] | None = None,
    beta_pairs: list[tuple[complex, complex]] | None = None,
) -> VerifyReport:
    """Recompute every witness and phase-space quantity both ways.

    Mismatches become failing entries; nothing is raised for them.
    """
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    betas = default_betas(params) if betas is None else list(betas)
    beta_pairs = default_beta_pairs(params) if beta_pairs is None else list(beta_pairs)

    all_betas = betas + [b for pair in beta_pairs for b in pair]
    all_betas += [(b1 + b2) / 2 for b1, b2 in beta_pairs]
    reach = max((abs(b) for b in all_betas), default=0.0)
    need = max(4 * max_moment, 2 * 8, max_pm + 4, choose_truncation(reach, tail_tol))
    fock = fock_coefficients(params, tail_tol, min_n_max=need)
    report = VerifyReport(params=params, tol=tol, n_max=fock.n_max)

    for m in range(max_moment + 1):
        for n in range(max_moment + 1):
            closed = general_moment(params, m, n)
            truth = oracle.oracle_moment(fock, m, n)
            report.add(f"moment({m},{n}).re", closed.real, truth.real)
            report.add(f"moment({m},{n}).im", closed.imag, truth.imag)

    mean = oracle.oracle_number_moment(fock, 1)
    for l in range(2, 6):
        central = oracle.oracle_central_moment(fock, "number", l)
        report.add(f"mandel({l})", mandel_q(params, l).value, central / mean - 1.0)

        m_l = oracle.oracle_moment(fock, l, l).real
        m_1 = oracle.oracle_moment(fock, 1, 1).real
        report.add(f"hoa({l})", hoa(params, l).value, m_l - m_1**l, scale=m_l + m_1**l)

        poisson = oracle.poisson_central_by_summation(mean, l)
        report.add(
            f"hosps({l})",
            hosps(params, l).value,
            central - poisson,
            scale=abs(central) + abs(poisson),
        )

    for l in (2, 4, 6):
        bound = math.prod(range(l - 1, 0, -2)) / 2 ** (l // 2)
        truth = (oracle.oracle_central_moment(fock, "quadrature", l) - bound) / bound
        report.add(f"hos({l})", hos(params, l).value, truth)

    m_j = [1.0] + [oracle.oracle_moment(fock, j, j).real for j in range(1, 5)]
    mu_j = [1.0] + [oracle.oracle_number_moment(fock, j) for j in range(1, 5)]
    det_m, det_mu = _hankel_det(m_j), _hankel_det(mu_j)
    oracle_degenerate = abs(det_mu - det_m) < DEGENERATE_DENOMINATOR
    record = agarwal_tara(params)
    if record.degenerate or oracle_degenerate:
        report.add_flag("agarwal-tara", record.degenerate, oracle_degenerate)
    else:
        report.add("agarwal-tara", record.value, det_m / (det_mu - det_m))

    probs = [oracle.oracle_pm(fock, m) for m in range(max_pm + 3)]
    for m in range(max_pm + 1):
        report.add(f"p({m})", photon_prob(params, m), probs[m], scale=_pm_scale(params, m))
    for m in range(max_pm + 1):
        a, b = (m + 2) * probs[m] * probs[m + 2], (m + 1) * probs[m + 1] ** 2
        report.add(f"klyshko({m})", klyshko(params, m).value, a - b, scale=a + b)

    for k, beta in enumerate(betas):
        report.add(
            f"husimi[{k}]",
            husimi_q(params, beta),
            oracle.oracle_husimi(fock, beta, tail_tol),
            scale=_q_scale(params, beta),
        )
    for k, (b1, b2) in enumerate(beta_pairs):
        q1 = oracle.oracle_husimi(fock, b1, tail_tol)
        q2 = oracle.oracle_husimi(fock, b2, tail_tol)
        qm = oracle.oracle_husimi(fock, (b1 + b2) / 2, tail_tol)
        weight = math.exp(-abs(b2 - b1) ** 2 / 2)
        truth = q1 * q2 - weight * qm * qm
        scale = (
            _q_scale(params, b1) * _q_scale(params, b2)
            + weight * _q_scale(params, (b1 + b2) / 2) ** 2
        )
        report.add(f"psmatrix[{k}]", psmatrix_det(params, b1, b2), truth, scale=scale)
    return report
