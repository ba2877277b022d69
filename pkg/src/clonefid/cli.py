"""Command-line front end.

    clonefid fidelity --n 1 --kappa 2
    clonefid info-fidelity --n 1000 --kappa 8 --err 6
    clonefid rho --n 2 --kappa 2 --block 2 --format json
    clonefid sweep fig3 --out fig3.csv --svg fig3.svg
    clonefid oracle-check
    clonefid ensemble-demo --n 4 --flips 1 --beta2 0.5 --omega sz

Exit codes: 0 success, 1 oracle failure, 2 invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import cloner, ensemble, oracle, sweep
from .cloner import CloneParams
from .errors import DomainError, ResourceError
from .numerics import EXACT_MAX_M, resolve_backend
from .sweep import SweepTable, format_number


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_shared(p: argparse.ArgumentParser, *, err=False, block=False, svg=False):
    p.add_argument("--n", type=int, required=True, help="input copies N")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int, help="output copies M (integral multiple of N)")
    g.add_argument("--kappa", type=int, help="classical copies; M = kappa * N")
    if err:
        p.add_argument("--err", type=int, required=True, help="tolerated errors")
    if block:
        p.add_argument("--block", type=int, help="block size n (default N)")
    _add_output(p, svg=svg)
    p.add_argument("--backend", choices=("exact", "log", "auto"), default="auto")


def _add_output(p: argparse.ArgumentParser, *, svg=False):
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write output here instead of stdout")
    if svg:
        p.add_argument("--svg", help="also write a line plot to this SVG file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clonefid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_shared(sub.add_parser("fidelity", help="block fidelity F"))
    _add_shared(sub.add_parser("info-fidelity", help="information fidelity with Err tolerated errors"), err=True)
    _add_shared(sub.add_parser("rho", help="reduced-state diagonal of an n-qubit block"), block=True)
    _add_shared(sub.add_parser("spectrum", help="weights alpha_j^2"))

    sw = sub.add_parser("sweep", help="regenerate figure data")
    sw.add_argument("which", choices=("fig2", "fig3", "limit"))
    sw.add_argument("--kappa", type=int, action="append", help="repeatable; default 2,3,4,8 (limit: 2)")
    sw.add_argument("--n", type=int, help="fig3: N (default 1000)")
    sw.add_argument("--n-min", type=int, default=1, help="fig2: smallest N")
    sw.add_argument("--n-max", type=int, default=100, help="fig2: largest N")
    sw.add_argument("--n-grid", type=int, nargs="+", help="limit: N values (default 1e3 1e4 1e5)")
    sw.add_argument("--err-min", type=int, default=1)
    sw.add_argument("--err-max", type=int, default=10)
    sw.add_argument("--backend", choices=("exact", "log"), default="log")
    _add_output(sw, svg=True)
    sw.set_defaults(format="csv")

    oc = sub.add_parser("oracle-check", help="brute-force certification of the closed forms")
    oc.add_argument("--max-n", type=int, default=3)
    oc.add_argument("--max-kappa", type=int, default=3)
    oc.add_argument("--max-m", type=int, default=9)
    _add_output(oc)

    ed = sub.add_parser("ensemble-demo", help="expectation shift of a corrupted N-particle ensemble")
    ed.add_argument("--n", type=int, required=True, help="ensemble size (members all |0>)")
    ed.add_argument("--flips", type=int, default=0, help="number of corrupted members")
    ed.add_argument("--beta2", type=float, help="|beta|^2 of each corruption")
    ed.add_argument("--omega", choices=sorted(ensemble.PAULI), default="sz")
    _add_output(ed)
    return parser


def _params(args) -> CloneParams:
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    if args.kappa is not None:
        if args.kappa < 1:
            raise UsageError("--kappa must be >= 1")
        p = CloneParams.from_kappa(args.n, args.kappa)
    else:
        if args.m < args.n:
            raise UsageError("--m must be >= --n")
        if args.m % args.n:
            raise UsageError("--m must be an integral multiple of --n")
        p = CloneParams(args.n, args.m)
    if args.backend == "exact" and p.M > EXACT_MAX_M:
        raise UsageError(f"exact backend refused for M={p.M} > {EXACT_MAX_M}; use --backend log")
    return p


def _scalar_payload(command, p, backend, value, **extra):
    payload = {"command": command, "N": p.N, "M": p.M, "kappa": p.kappa, "backend": backend, **extra,
               "value": float(value)}
    if isinstance(value, Fraction):
        payload["exact"] = str(value)
    return payload


def _render_scalar(args, payload, columns) -> str:
    if args.format == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    if args.format == "csv":
        return ",".join(columns) + "\n" + ",".join(format_number(payload[c]) for c in columns) + "\n"
    return format_number(payload["value"]) + "\n"


def _render_table(args, table: SweepTable) -> str:
    if args.format == "json":
        return table.to_json() + "\n"
    if args.format == "csv":
        return table.to_csv()
    return "".join(",".join(format_number(x) for x in r) + "\n" for r in table.rows)


def _cmd_fidelity(args):
    p = _params(args)
    b = resolve_backend(args.backend, p.M)
    v = cloner.fidelity(p, b)
    return _render_scalar(args, _scalar_payload("fidelity", p, b, v), ("N", "M", "value")), 0


def _cmd_info_fidelity(args):
    p = _params(args)
    if not 0 <= args.err <= p.N:
        raise UsageError(f"--err must lie in 0..{p.N}")
    b = resolve_backend(args.backend, p.M)
    v = cloner.info_fidelity(p, args.err, b)
    payload = _scalar_payload("info-fidelity", p, b, v, Err=args.err)
    return _render_scalar(args, payload, ("N", "M", "Err", "value")), 0


def _cmd_rho(args):
    p = _params(args)
    n = p.N if args.block is None else args.block
    if not 1 <= n <= p.M:
        raise UsageError(f"--block must lie in 1..{p.M}")
    b = resolve_backend(args.backend, p.M)
    diag = cloner.reduced_diagonal(p, n, b)
    table = SweepTable(("k", "coeff"), [(k, c) for k, c in enumerate(diag.coeffs)],
                       {"command": "rho", "N": p.N, "M": p.M, "block": n, "backend": b})
    if args.format == "json":
        payload = dict(table.metadata, coeffs=[float(c) for c in diag.coeffs])
        if b == "exact":
            payload["exact"] = [str(c) for c in diag.coeffs]
        return json.dumps(payload, sort_keys=True) + "\n", 0
    return _render_table(args, table), 0


def _cmd_spectrum(args):
    p = _params(args)
    b = resolve_backend(args.backend, p.M)
    spec = cloner.spectrum(p, b)
    table = SweepTable(("j", "alpha_sq"), [(j, w) for j, w in enumerate(spec.weights)],
                       {"command": "spectrum", "N": p.N, "M": p.M, "backend": b})
    if args.format == "json":
        payload = dict(table.metadata, weights=[float(w) for w in spec.weights])
        if b == "exact":
            payload["exact"] = [str(w) for w in spec.weights]
        return json.dumps(payload, sort_keys=True) + "\n", 0
    return _render_table(args, table), 0


def _cmd_sweep(args):
    if args.which == "fig2":
        if args.n_min < 1 or args.n_max < args.n_min:
            raise UsageError("need 1 <= --n-min <= --n-max")
        kappas = args.kappa or list(sweep.FIG2_KAPPAS)
        if args.backend == "exact" and max(kappas) * args.n_max > EXACT_MAX_M:
            raise UsageError(f"exact backend refused for M > {EXACT_MAX_M}")
        table = sweep.sweep_fig2(kappas, range(args.n_min, args.n_max + 1), args.backend)
        axes = ("N", "F", "kappa")
    elif args.which == "fig3":
        N = 1000 if args.n is None else args.n
        kappas = args.kappa or list(sweep.FIG2_KAPPAS)
        if not 0 <= args.err_min <= args.err_max <= N:
            raise UsageError(f"need 0 <= --err-min <= --err-max <= {N}")
        if args.backend == "exact" and max(kappas) * N > EXACT_MAX_M:
            raise UsageError(f"exact backend refused for M > {EXACT_MAX_M}")
        table = sweep.sweep_fig3(N, kappas, range(args.err_min, args.err_max + 1), args.backend)
        axes = ("Err", "infoF", "kappa")
    else:
        kappas = args.kappa or [2]
        if len(kappas) != 1:
            raise UsageError("limit sweep takes a single --kappa")
        grid = args.n_grid or list(sweep.DEFAULT_LIMIT_GRID)
        table = sweep.limit_study(kappas[0], grid)
        axes = ("N", "F", None)
    if args.svg:
        Path(args.svg).write_text(table.to_svg(*axes), encoding="utf-8")
    return _render_table(args, table), 0


def _cmd_oracle_check(args):
    if args.max_m > oracle.MAX_OUTPUT_QUBITS:
        raise UsageError(f"--max-m capped at {oracle.MAX_OUTPUT_QUBITS}")
    reports = oracle.certify_grid(args.max_n, args.max_kappa, args.max_m)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        text = json.dumps({"passed": ok, "reports": [r.to_dict() for r in reports]}, sort_keys=True) + "\n"
    elif args.format == "csv":
        table = SweepTable(("N", "M", "n", "max_diag_deviation", "max_offdiag_deviation", "passed"),
                           [(r.N, r.M, r.n, r.max_diag_deviation, r.max_offdiag_deviation, int(r.passed))
                            for r in reports])
        text = table.to_csv()
    else:
        text = "\n".join(r.line() for r in reports) + f"\n{'ALL PASS' if ok else 'FAILURES'} ({len(reports)} checks)\n"
    return text, 0 if ok else 1


def _cmd_ensemble_demo(args):
    if args.n < 1 or not 0 <= args.flips <= args.n:
        raise UsageError("need --n >= 1 and 0 <= --flips <= --n")
    if args.flips and args.beta2 is None:
        raise UsageError("--beta2 is required when --flips > 0")
    beta2 = 0.0 if args.beta2 is None else args.beta2
    if not 0.0 <= beta2 <= 1.0:
        raise UsageError("--beta2 must lie in [0, 1]")
    members = [ensemble.PureState.basis(0)] * args.n
    beta = float(np.sqrt(beta2))
    spec = ensemble.EnsembleSpec(members, [ensemble.Corruption(i, beta) for i in range(args.flips)])
    delta, bound = ensemble.expectation_shift(spec, ensemble.PAULI[args.omega])
    payload = {"command": "ensemble-demo", "N": args.n, "flips": args.flips, "beta2": beta2,
               "omega": args.omega, "delta": delta, "bound": bound}
    if args.format == "json":
        return json.dumps(payload, sort_keys=True) + "\n", 0
    if args.format == "csv":
        return f"delta,bound\n{format_number(delta)},{format_number(bound)}\n", 0
    return f"delta {format_number(delta)}\nbound {format_number(bound)}\n", 0


_COMMANDS = {
    "fidelity": _cmd_fidelity,
    "info-fidelity": _cmd_info_fidelity,
    "rho": _cmd_rho,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
    "ensemble-demo": _cmd_ensemble_demo,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = _COMMANDS[args.command](args)
    except (UsageError, DomainError, ResourceError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"clonefid: error: {msg}", file=sys.stderr)
        return 2
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
