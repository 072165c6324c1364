"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 numeric or domain error. Output is
fully rendered in memory before anything is written, so a failing command
never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .errors import NonclassicalError
from .herald import PD1, PD2, SchemeConfig, scheme_fidelity
from .moments import general_moment
from .phasespace import husimi_grid, husimi_q, psmatrix_det, psmatrix_special, q_zero
from .state import make_state
from .sweep import (
    MaskSpec,
    SweepRow,
    SweepSpec,
    domain_mask,
    evaluate_point,
    fmt,
    mask_to_csv,
    mask_to_json,
    rows_to_csv,
    rows_to_json,
    run_sweep,
)
from .verify import verify_all
from .witnesses import Witness

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _table(header: list[str], rows: list[list], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _state(args):
    return make_state(complex(args.alpha_re, args.alpha_im), args.r)


def _alpha(args) -> complex:
    return complex(args.alpha_re, args.alpha_im)


def _rows(rows: list[SweepRow], fmt_name: str) -> str:
    return rows_to_json(rows) if fmt_name == "json" else rows_to_csv(rows)


def cmd_moments(args) -> str:
    params = _state(args)
    m, n = args.m, args.n
    value = general_moment(params, m, n)
    return _table(["m", "n", "re", "im"], [[m, n, value.real, value.imag]], args.format)


def cmd_witness(args) -> str:
    witness = Witness(args.command)
    default = 0 if witness is Witness.KLYSHKO else 2
    order = default if args.order is None else args.order
    if witness is Witness.HOS and args.phase is not None:
        from .witnesses import hos

        record = hos(_state(args), order, phase=args.phase)
        row = SweepRow.from_record(record)
    else:
        row = evaluate_point(witness, order, _alpha(args), args.r)
    return _rows([row], args.format)


def cmd_qfunc(args) -> str:
    params = _state(args)
    if args.n_re is None:
        beta = complex(args.beta_re, args.beta_im)
        rows = [[beta.real, beta.imag, husimi_q(params, beta)]]
    else:
        grid = husimi_grid(
            params, (args.re_min, args.re_max), (args.im_min, args.im_max), args.n_re, args.n_im or args.n_re
        )
        rows = [list(r) for r in grid.rows()]
    return _table(["re", "im", "q"], rows, args.format)


def cmd_psmatrix(args) -> str:
    params = _state(args)
    header = ["beta1_re", "beta1_im", "beta2_re", "beta2_im", "det"]
    if args.beta1_re is None:
        b1 = q_zero(params)
        if b1 is None:
            raise NonclassicalError("Q has no zero at r = 0; pass --beta1-re/--beta1-im")
        special = True
    else:
        b1 = complex(args.beta1_re, args.beta1_im)
        special = False

    def det(b2):
        return psmatrix_special(params, b2) if special else psmatrix_det(params, b1, b2)

    if args.scan:
        rows = []
        for k in range(args.scan):
            rho = args.radius * math.sqrt((k + 1) / args.scan)
            theta = k * math.pi * (3 - math.sqrt(5))
            b2 = b1 + rho * complex(math.cos(theta), math.sin(theta))
            rows.append([b1.real, b1.imag, b2.real, b2.imag, det(b2)])
    else:
        b2 = complex(args.beta2_re, args.beta2_im)
        rows = [[b1.real, b1.imag, b2.real, b2.imag, det(b2)]]
    return _table(header, rows, args.format)


def cmd_sweep(args) -> str:
    spec = SweepSpec.from_json(_read_spec(args.spec))
    return _rows(run_sweep(spec), args.format)


def cmd_domain_mask(args) -> str:
    spec = MaskSpec.from_json(_read_spec(args.spec))
    cells = domain_mask(spec)
    if args.format == "json":
        return mask_to_json(cells, spec.criteria)
    return mask_to_csv(cells, spec.criteria)


def cmd_herald(args) -> str:
    config = SchemeConfig.from_transmissions(
        args.t1, args.t2, args.eta, pdc_order=args.pdc_order, mirror_phase=args.mirror_phase
    )
    result = scheme_fidelity(_alpha(args), config, args.pattern)
    return json.dumps(result.as_dict(), indent=2) + "\n"


def cmd_verify(args) -> str:
    report = verify_all(_state(args), tol=args.tol, tail_tol=args.tail_tol)
    args.verify_failed = not report.passed
    return report.to_json() + "\n"


def _read_spec(path: str | None) -> str:
    if path is None:
        raise UsageError("--spec is required")
    try:
        text = Path(path).read_text()
        json.loads(text)
    except OSError as exc:
        raise UsageError(f"cannot read spec: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec is not valid JSON: {exc}") from None
    return text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha-re", type=float, default=0.0)
    common.add_argument("--alpha-im", type=float, default=0.0)
    common.add_argument("--r", type=float, default=0.0)
    common.add_argument("--order", type=int, default=None)
    common.add_argument("--tail-tol", type=float, default=1e-12)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None)
    common.add_argument("--spec", default=None)

    parser = _Parser(prog="nonclassical", description="Nonclassicality witnesses for (t a + r a^dagger)|alpha>.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moments", parents=[common], help="<a^dagger^m a^n>")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_moments)

    for name in ("mandel", "hoa", "hosps", "hos", "agarwal-tara", "klyshko"):
        p = sub.add_parser(name, parents=[common], help=f"{name} witness")
        if name == "hos":
            p.add_argument("--phase", type=float, default=None)
        p.set_defaults(func=cmd_witness, phase=None)

    p = sub.add_parser("qfunc", parents=[common], help="Husimi Q at a point or on a grid")
    p.add_argument("--beta-re", type=float, default=0.0)
    p.add_argument("--beta-im", type=float, default=0.0)
    p.add_argument("--re-min", type=float, default=-6.0)
    p.add_argument("--re-max", type=float, default=6.0)
    p.add_argument("--im-min", type=float, default=-6.0)
    p.add_argument("--im-max", type=float, default=6.0)
    p.add_argument("--n-re", type=int, default=None)
    p.add_argument("--n-im", type=int, default=None)
    p.set_defaults(func=cmd_qfunc)

    p = sub.add_parser("psmatrix", parents=[common], help="two-point Q determinant")
    p.add_argument("--beta1-re", type=float, default=None, help="omit to pin beta1 at the Q zero")
    p.add_argument("--beta1-im", type=float, default=0.0)
    p.add_argument("--beta2-re", type=float, default=0.1)
    p.add_argument("--beta2-im", type=float, default=0.0)
    p.add_argument("--scan", type=int, default=0, help="number of beta2 points on a disk around beta1")
    p.add_argument("--radius", type=float, default=3.0)
    p.set_defaults(func=cmd_psmatrix)

    p = sub.add_parser("sweep", parents=[common], help="evaluate witnesses over a grid")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("domain-mask", parents=[common], help="boolean nonclassicality layers")
    p.set_defaults(func=cmd_domain_mask)

    p = sub.add_parser("herald-sim", parents=[common], help="simulate the heralding scheme")
    p.add_argument("--t1", type=float, default=0.995)
    p.add_argument("--t2", type=float, default=math.sqrt(0.5))
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--pdc-order", choices=("first", "exact"), default="first")
    p.add_argument("--pattern", choices=(PD1, PD2, "PD1", "PD2"), default=PD1)
    p.add_argument("--mirror-phase", type=float, default=math.pi)
    p.set_defaults(func=cmd_herald)

    p = sub.add_parser("verify", parents=[common], help="closed forms against the Fock oracle")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.verify_failed = False
        text = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonclassicalError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_NUMERIC if args.verify_failed else EXIT_OK


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
