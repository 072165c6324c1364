"""Nonclassicality witnesses for the superposed state (t a + r a^dagger)|alpha>.

Closed-form moments come from exact normal ordering; every quantity can be
re-derived on a truncated Fock space (``verify_all``) and the heralding
optics can be simulated directly (``scheme_fidelity``).
"""

from .algebra import NormalForm, coherent_expectation, normal_order, pochhammer_half, stirling2
from .errors import (
    CapExceeded,
    DegenerateState,
    DomainError,
    GridTooLarge,
    NonclassicalError,
    OutOfRange,
    SpecTooLarge,
    TruncationTooSmall,
    WordTooLong,
    ZeroProbability,
)
from .herald import SchemeConfig, run_scheme, scheme_fidelity
from .moments import (
    central_number_moment,
    general_moment,
    number_moment,
    quadrature_central_moment,
    quadrature_moment,
)
from .phasespace import husimi_grid, husimi_q, psmatrix_det, psmatrix_special, q_zero
from .state import FockVector, StateParams, choose_truncation, fock_coefficients, make_state
from .sweep import MaskSpec, SweepRow, SweepSpec, domain_mask, emit_csv, emit_json, run_sweep
from .verify import VerifyReport, verify_all
from .witnesses import (
    Witness,
    WitnessRecord,
    agarwal_tara,
    evaluate,
    hoa,
    hos,
    hosps,
    klyshko,
    mandel_q,
    photon_prob,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "DegenerateState",
    "DomainError",
    "FockVector",
    "GridTooLarge",
    "MaskSpec",
    "NonclassicalError",
    "NormalForm",
    "OutOfRange",
    "SchemeConfig",
    "SpecTooLarge",
    "StateParams",
    "SweepRow",
    "SweepSpec",
    "TruncationTooSmall",
    "VerifyReport",
    "Witness",
    "WitnessRecord",
    "WordTooLong",
    "ZeroProbability",
    "agarwal_tara",
    "central_number_moment",
    "choose_truncation",
    "coherent_expectation",
    "domain_mask",
    "emit_csv",
    "emit_json",
    "evaluate",
    "fock_coefficients",
    "general_moment",
    "hoa",
    "hos",
    "hosps",
    "husimi_grid",
    "husimi_q",
    "klyshko",
    "make_state",
    "mandel_q",
    "normal_order",
    "number_moment",
    "photon_prob",
    "pochhammer_half",
    "psmatrix_det",
    "psmatrix_special",
    "q_zero",
    "quadrature_central_moment",
    "quadrature_moment",
    "run_scheme",
    "scheme_fidelity",
    "stirling2",
    "verify_all",
]
