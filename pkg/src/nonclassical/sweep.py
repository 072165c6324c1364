"""Parameter sweeps, nonclassicality-domain masks and their serialization.

Sweep spec (JSON)::

    {
      "witnesses": ["mandel", "hoa"],
      "orders": [2, 3],
      "r_values": [0.2, 0.38, 0.94],
      "alpha": {"kind": "real", "start": 0.01, "stop": 2.0, "count": 200}
    }

``alpha`` may instead be ``{"kind": "complex", "re": [lo, hi], "im": [lo, hi],
"n_re": .., "n_im": ..}`` or ``{"kind": "phase", "modulus": 1.0,
"phase": [lo, hi], "count": ..}`` or an explicit list ``{"kind": "points",
"values": [0.5, [1.0, -0.2]]}`` (reals or ``[re, im]`` pairs). Agarwal-Tara ignores ``orders``;
Klyshko reads them as photon numbers ``m``.

Mask spec (JSON)::

    {"r": [0.0, 1.0, 100], "alpha": [0.01, 2.0, 100], "l": 2, "beta": 0.1,
     "klyshko_m": 3, "criteria": ["mandel", ...]}
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import DegenerateState, DomainError, SpecTooLarge
from .phasespace import psmatrix_special, q_zero
from .state import make_state
from .witnesses import BOUNDARY, Witness, evaluate

MAX_GRID_POINTS = 10_000_000

ROW_FIELDS = ("witness", "order", "alpha_re", "alpha_im", "r", "value", "nonclassical", "degenerate")

CRITERIA = ("mandel", "hoa", "hosps", "hos", "agarwal-tara", "klyshko", "psmatrix")
OPTIONAL_CRITERIA = ("husimi-zero",)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def fmt_bool(flag: bool) -> str:
    return "true" if flag else "false"


def parse_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"not a boolean: {text!r}")
    return text == "true"


@dataclass(frozen=True)
class AlphaGrid:
    kind: str
    points: tuple[complex, ...]

    @classmethod
    def from_dict(cls, data: dict) -> "AlphaGrid":
        kind = data.get("kind", "real")
        if kind == "real":
            count = int(data["count"])
            _check_count(count)
            pts = np.linspace(float(data["start"]), float(data["stop"]), count)
            return cls(kind, tuple(complex(x) for x in pts))
        if kind == "complex":
            n_re, n_im = int(data["n_re"]), int(data["n_im"])
            _check_count(n_re)
            _check_count(n_im)
            res = np.linspace(*map(float, data["re"]), n_re)
            ims = np.linspace(*map(float, data["im"]), n_im)
            return cls(kind, tuple(complex(x, y) for x in res for y in ims))
        if kind == "phase":
            count = int(data["count"])
            _check_count(count)
            modulus = float(data["modulus"])
            phases = np.linspace(*map(float, data["phase"]), count)
            return cls(kind, tuple(modulus * complex(math.cos(p), math.sin(p)) for p in phases))
        if kind == "points":
            values = data["values"]
            if not values:
                raise DomainError("points grid needs at least one value")
            return cls(kind, tuple(_as_complex(v) for v in values))
        raise DomainError(f"unknown alpha grid kind {kind!r}")


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(float(value))


def _check_count(count: int) -> None:
    if count < 2:
        raise DomainError("grid counts must be at least 2")


@dataclass(frozen=True)
class SweepSpec:
    witnesses: tuple[Witness, ...]
    orders: tuple[int, ...]
    r_values: tuple[float, ...]
    alpha: AlphaGrid

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        try:
            witnesses = tuple(Witness(w) for w in data["witnesses"])
            orders = tuple(int(o) for o in data.get("orders", [2]))
            r_values = tuple(float(r) for r in data["r_values"])
            alpha = AlphaGrid.from_dict(data["alpha"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed sweep spec: {exc}") from None
        if any(not 0.0 <= r <= 1.0 for r in r_values):
            raise DomainError("r values must lie in [0, 1]")
        if not witnesses or not r_values:
            raise DomainError("sweep needs at least one witness and one r value")
        return cls(witnesses, orders, r_values, alpha)

    @classmethod
    def from_json(cls, text: str) -> "SweepSpec":
        return cls.from_dict(json.loads(text))

    def cardinality(self) -> int:
        per_point = sum(1 if w is Witness.AGARWAL_TARA else len(self.orders) for w in self.witnesses)
        return per_point * len(self.r_values) * len(self.alpha.points)


@dataclass(frozen=True)
class SweepRow:
    witness: str
    order: int
    alpha_re: float
    alpha_im: float
    r: float
    value: float
    nonclassical: bool
    degenerate: bool

    def csv_fields(self) -> list[str]:
        return [
            self.witness,
            str(self.order),
            fmt(self.alpha_re),
            fmt(self.alpha_im),
            fmt(self.r),
            fmt(self.value),
            fmt_bool(self.nonclassical),
            fmt_bool(self.degenerate),
        ]

    @classmethod
    def from_csv_fields(cls, fields: list[str]) -> "SweepRow":
        w, order, are, aim, r, value, nc, dg = fields
        return cls(w, int(order), float(are), float(aim), float(r), float(value), parse_bool(nc), parse_bool(dg))

    @classmethod
    def from_record(cls, record) -> "SweepRow":
        return cls(
            witness=record.name.value,
            order=record.order,
            alpha_re=record.params.alpha.real,
            alpha_im=record.params.alpha.imag,
            r=record.params.r,
            value=record.value,
            nonclassical=record.nonclassical,
            degenerate=record.degenerate,
        )


def evaluate_point(witness: Witness, order: int, alpha: complex, r: float) -> SweepRow:
    """One witness at one grid point; degenerate points become flagged rows."""
    order_out = 3 if witness is Witness.AGARWAL_TARA else order
    try:
        record = evaluate(witness, make_state(alpha, r), order)
    except DegenerateState:
        return SweepRow(witness.value, order_out, alpha.real, alpha.imag, r, math.nan, False, True)
    return SweepRow.from_record(record)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Rows ordered by witness, order, r, then alpha grid position."""
    if spec.cardinality() > MAX_GRID_POINTS:
        raise SpecTooLarge(f"{spec.cardinality()} evaluations exceed {MAX_GRID_POINTS}")
    for w in spec.witnesses:
        if w is Witness.HOS and any(o % 2 for o in spec.orders):
            raise DomainError("hos needs even orders")
    rows = []
    for w in spec.witnesses:
        orders = (3,) if w is Witness.AGARWAL_TARA else spec.orders
        for order in orders:
            for r in spec.r_values:
                for alpha in spec.alpha.points:
                    rows.append(evaluate_point(w, order, alpha, r))
    return rows


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != ROW_FIELDS:
        raise DomainError(f"unexpected CSV header {header}")
    return [SweepRow.from_csv_fields(fields) for fields in reader]


def rows_to_json(rows: Iterable[SweepRow]) -> str:
    out = []
    for row in rows:
        item = asdict(row)
        if not math.isfinite(item["value"]):
            item["value"] = None
        out.append(item)
    return json.dumps(out, indent=2) + "\n"


def emit_csv(rows: Iterable[SweepRow], destination: TextIO) -> None:
    destination.write(rows_to_csv(rows))


def emit_json(rows: Iterable[SweepRow], destination: TextIO) -> None:
    destination.write(rows_to_json(rows))


@dataclass(frozen=True)
class MaskSpec:
    r_grid: tuple[float, float, int]
    alpha_grid: tuple[float, float, int]
    l: int = 2
    beta: complex = 0.1
    klyshko_m: int = 3
    criteria: tuple[str, ...] = CRITERIA

    @classmethod
    def from_dict(cls, data: dict) -> "MaskSpec":
        try:
            r0, r1, nr = data["r"]
            a0, a1, na = data["alpha"]
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"malformed mask spec: {exc}") from None
        _check_count(int(nr))
        _check_count(int(na))
        if not (0.0 <= float(r0) <= 1.0 and 0.0 <= float(r1) <= 1.0):
            raise DomainError("r range must lie in [0, 1]")
        criteria = tuple(data.get("criteria", CRITERIA))
        unknown = set(criteria) - set(CRITERIA) - set(OPTIONAL_CRITERIA)
        if unknown:
            raise DomainError(f"unknown criteria {sorted(unknown)}")
        beta = data.get("beta", 0.1)
        if isinstance(beta, dict):
            beta = complex(beta.get("re", 0.0), beta.get("im", 0.0))
        return cls(
            r_grid=(float(r0), float(r1), int(nr)),
            alpha_grid=(float(a0), float(a1), int(na)),
            l=int(data.get("l", 2)),
            beta=complex(beta),
            klyshko_m=int(data.get("klyshko_m", 3)),
            criteria=criteria,
        )

    @classmethod
    def from_json(cls, text: str) -> "MaskSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MaskCell:
    r: float
    alpha: complex
    flags: dict[str, bool] = field(hash=False)


def criterion_value(name: str, params, spec: MaskSpec) -> float:
    """Signed witness value for one mask layer (negative means nonclassical)."""
    if name == "psmatrix":
        if params.r <= 1e-12:
            return 0.0
        return psmatrix_special(params, spec.beta)
    if name == "husimi-zero":
        zero = q_zero(params)
        return -1.0 if zero is not None and abs(zero - spec.beta) <= 3.0 else 0.0
    witness = Witness(name)
    order = spec.klyshko_m if witness is Witness.KLYSHKO else spec.l
    record = evaluate(witness, params, order)
    return math.nan if record.degenerate else record.value


def domain_mask(spec: MaskSpec) -> list[MaskCell]:
    """Boolean nonclassicality layers over the r-alpha plane (real alpha)."""
    nr, na = spec.r_grid[2], spec.alpha_grid[2]
    if nr * na * len(spec.criteria) > MAX_GRID_POINTS:
        raise SpecTooLarge("mask grid too large")
    if "hos" in spec.criteria and spec.l % 2:
        raise DomainError("hos layer needs an even l")
    cells = []
    for r in np.linspace(*spec.r_grid):
        for a in np.linspace(*spec.alpha_grid):
            flags = {}
            try:
                params = make_state(complex(a), float(r))
            except DegenerateState:
                params = None
            for name in spec.criteria:
                if params is None:
                    flags[name] = False
                    continue
                try:
                    value = criterion_value(name, params, spec)
                except DegenerateState:
                    value = math.nan
                flags[name] = bool(value < -BOUNDARY)
            cells.append(MaskCell(float(r), complex(a), flags))
    return cells


def mask_to_csv(cells: Iterable[MaskCell], criteria: Iterable[str]) -> str:
    criteria = list(criteria)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "alpha_re", "alpha_im", *criteria])
    for cell in cells:
        writer.writerow(
            [fmt(cell.r), fmt(cell.alpha.real), fmt(cell.alpha.imag)]
            + [fmt_bool(cell.flags[c]) for c in criteria]
        )
    return buf.getvalue()


def mask_to_json(cells: Iterable[MaskCell], criteria: Iterable[str]) -> str:
    criteria = list(criteria)
    out = [
        {"r": c.r, "alpha_re": c.alpha.real, "alpha_im": c.alpha.imag, **{k: c.flags[k] for k in criteria}}
        for c in cells
    ]
    return json.dumps(out, indent=2) + "\n"
