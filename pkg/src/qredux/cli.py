"""Command-line front end.

Every subcommand prints a human-readable summary by default, canonical JSON
with ``--json`` and (for ``sweep``) CSV.  Exit status: 0 on success, 2 when
an argument fails validation (the message names the flag), 1 when a
computation does not converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import asymptotics as asym
from .compress import plan, retained_weight
from .entropy import relative_entropy_exact, von_neumann_entropy_zeta
from .oracle import NonConvergenceError
from .optim import ConvergenceError, minimax_constant_at, solve_maximin, solve_minimax
from .priors import MONOTONE_FUNCTIONS, PriorSpec
from .qstate import DENSE_CAP
from .spectrum import MAX_BLOCK, spectrum, spectrum_from_radial_prior
from .verify import SUITES
from .zeta import zeta_matrix

__all__ = ["main", "run", "dumps_canonical", "parse_grid"]

MAX_SWEEP_ROWS = 1_000_000


# --- serialization -----------------------------------------------------------

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, complex):
        return [_plain(obj.real), _plain(obj.imag)]
    return obj


def dumps_canonical(doc) -> str:
    """Sorted keys, no insignificant whitespace, shortest round-trip floats."""
    return json.dumps(_plain(doc), sort_keys=True, separators=(",", ":"), allow_nan=False)


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


# --- argument types ----------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    if v > MAX_BLOCK:
        raise argparse.ArgumentTypeError(f"must be <= {MAX_BLOCK}, got {v}")
    return v


def _float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def _prior_u(text: str) -> float:
    v = _float(text)
    if not v < 1:
        raise argparse.ArgumentTypeError(f"must be < 1, got {v}")
    return v


def _radius(text: str) -> float:
    v = _float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def _epsilon(text: str) -> float:
    v = _float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {v}")
    return v


def _tolerance(text: str) -> float:
    v = _float(text)
    if v < 1e-10:
        raise argparse.ArgumentTypeError(f"must be >= 1e-10, got {v}")
    return v


def parse_grid(text: str, item: Callable[[str], float]) -> list:
    """'a,b,c' lists values; 'start:stop:step' is an inclusive arithmetic grid.

    An empty string, or a range with start > stop, is an empty grid.
    """
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (_float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        count = math.floor((stop - start) / step + 1e-9) + 1
        if count > MAX_SWEEP_ROWS:
            raise argparse.ArgumentTypeError(f"range has {count} points, limit is {MAX_SWEEP_ROWS}")
        values = (round(start + i * step, 12) for i in range(max(count, 0)))
        # integral points are passed as "3", not "3.0", so integer-valued flags accept ranges
        return [item(str(int(v)) if v.is_integer() else repr(v)) for v in values]
    return [item(p) for p in text.split(",") if p.strip()]


def _grid_of(item):
    def convert(text):
        return parse_grid(text, item)

    convert.__name__ = getattr(item, "__name__", "grid")
    return convert


# --- parser --------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, json_flag: bool = True) -> None:
    if json_flag:
        p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument("--out", metavar="PATH", help="write the document to PATH instead of standard output")
    p.add_argument("--seed", type=int, help="accepted for interface compatibility; nothing is random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qredux", description="Bayesian density matrices and quantum coding redundancy")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("zeta", help="spectral summary of zeta_n(u), optionally with entries")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--u", type=_prior_u, required=True)
    p.add_argument("--entries", action="store_true", help=f"include the dense matrix (n <= {DENSE_CAP})")
    _common(p)

    p = sub.add_parser("spectrum", help="distinct eigenvalues and multiplicities")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--u", type=_prior_u)
    p.add_argument("--prior", choices=["qu", "kubo", "monotone"], default="qu")
    p.add_argument("--f", choices=sorted(MONOTONE_FUNCTIONS), help="monotone function for --prior monotone")
    _common(p)

    p = sub.add_parser("redundancy", help="exact relative entropy to zeta_n(u)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--u", type=_prior_u, required=True)
    p.add_argument("--r", type=_radius, required=True)
    _common(p)

    p = sub.add_parser("vn-entropy", help="von Neumann entropy of zeta_n(u)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--u", type=_prior_u, required=True)
    _common(p)

    p = sub.add_parser("asymptotics", help="closed-form large-n expansions")
    p.add_argument("--which", choices=["a3", "a4", "a5", "B2", "cb12", "cb11", "cb-boundary"], required=True)
    p.add_argument("--u", type=_float)
    p.add_argument("--r", type=_radius)
    p.add_argument("--n", type=_positive_int)
    _common(p)

    p = sub.add_parser("minimax", help="asymptotic minimax over the q_u family")
    p.add_argument("--tol", type=_tolerance, default=1e-10)
    _common(p)

    p = sub.add_parser("maximin", help="asymptotic maximin over the q_u family")
    p.add_argument("--tol", type=_tolerance, default=1e-10)
    _common(p)

    p = sub.add_parser("compress", help="dominant-eigenspace compression plan")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--u", type=_prior_u, required=True)
    p.add_argument("--epsilon", type=_epsilon, required=True)
    p.add_argument("--r", type=_radius)
    _common(p)

    p = sub.add_parser("sweep", help="CSV grids (values: 'a,b,c' or inclusive 'start:stop:step')")
    p.add_argument(
        "--kind",
        choices=["redundancy", "vn-entropy", "quantum-term", "bayes-constant", "compress"],
        required=True,
    )
    p.add_argument("--n", type=_grid_of(_positive_int), default=[])
    p.add_argument("--u", type=_grid_of(_prior_u), default=[])
    p.add_argument("--r", type=_grid_of(_radius), default=[])
    p.add_argument("--epsilon", type=_grid_of(_epsilon), default=[])
    _common(p, json_flag=False)

    p = sub.add_parser("verify", help="self-consistency checks against the dense and quadrature oracles")
    p.add_argument("--suite", choices=list(SUITES), default="quick")
    _common(p)
    return parser


# --- commands --------------------------------------------------------------------

class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"argument {flag}: {message}")
        self.flag = flag


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name}", "is required here")
    return value


def _cmd_zeta(args):
    if args.entries and args.n > DENSE_CAP:
        raise UsageError("--entries", f"dense output is limited to n <= {DENSE_CAP}")
    z = zeta_matrix(args.n, args.u, materialize=args.entries)
    return z.to_dict(include_entries=args.entries)


def _prior_from_args(args) -> PriorSpec:
    if args.prior == "monotone":
        if args.f is None:
            raise UsageError("--f", "is required with --prior monotone")
        return PriorSpec.monotone(args.f)
    u = _require(args, "u")
    return PriorSpec.qu(u) if args.prior == "qu" else PriorSpec.kubo(u)


def _cmd_spectrum(args):
    p = _prior_from_args(args)
    spec = spectrum(args.n, args.u) if args.prior == "qu" else spectrum_from_radial_prior(args.n, p)
    return {
        "n": args.n,
        "prior": p.label,
        "levels": [{"h": lv.h, "lambda": lv.lam, "multiplicity": lv.multiplicity} for lv in spec.levels],
        "trace_error": spec.trace_error,
    }


def _cmd_redundancy(args):
    return relative_entropy_exact(args.n, args.u, args.r).to_dict()


def _cmd_vn_entropy(args):
    exact = von_neumann_entropy_zeta(args.n, args.u)
    a = asym.vn_entropy_asymptotic(args.u).value_at(args.n)
    return {"n": args.n, "u": args.u, "entropy": exact, "asymptotic": a, "residual": exact - a}


def _cmd_asymptotics(args):
    w = args.which
    if w in ("a3", "a4", "a5", "B2", "cb12"):
        u = _require(args, "u")
        if u > 1 or (u == 1 and w != "a5"):
            raise UsageError("--u", f"out of range for {w}: {u}")
    if w == "a3":
        value = asym.redundancy_asymptotic(args.u, _require(args, "r"))
    elif w == "a4":
        value = asym.redundancy_asymptotic(args.u, 0.0)
    elif w == "a5":
        value = asym.boundary_asymptotic(args.u)
    elif w == "B2":
        value = asym.vn_entropy_asymptotic(args.u)
    elif w == "cb12":
        r = _require(args, "r")
        if r >= 1:
            raise UsageError("--r", "cb12 needs r < 1")
        value = asym.cb_redundancy_classical(args.u, r)
    elif w == "cb11":
        value = asym.cb_minimax_classical()
    else:
        value = asym.cb_boundary_classical()
    doc = {"which": w, **value.to_dict()}
    if args.n is not None:
        doc["n"] = args.n
        doc["value"] = value.value_at(args.n)
    return doc


def _cmd_minimax(args):
    res = solve_minimax(args.tol)
    doc = res.to_dict()
    # worst-case constant of the u = 1/2 prior, for comparison with the optimum
    doc["jeffreys_constant"] = minimax_constant_at(0.5)
    return doc


def _cmd_maximin(args):
    return solve_maximin(args.tol).to_dict()


def _cmd_compress(args):
    pl = plan(args.n, args.u, args.epsilon)
    doc = pl.to_dict()
    if args.r is not None:
        doc["r"] = args.r
        doc["retained_weight"] = retained_weight(pl, args.r)
    return doc


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QREDUX_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_rows(args) -> tuple[list[str], list[tuple], Callable]:
    def grid_size(*names):
        size = 1
        for name in names:
            size *= len(getattr(args, name))
        if size > MAX_SWEEP_ROWS:
            raise UsageError("--" + "/--".join(names), f"grid of {size} rows exceeds {MAX_SWEEP_ROWS}")
        return size

    kind = args.kind
    if kind == "redundancy":
        grid_size("n", "u", "r")
        points = [(n, u, r) for n in sorted(args.n) for u in sorted(args.u) for r in sorted(args.r)]

        def row(pt):
            rep = relative_entropy_exact(*pt)
            return (*pt, rep.relative_entropy, rep.asymptotic_value, rep.residual)

        return ["n", "u", "r", "exact", "asymptotic", "residual"], points, row
    if kind == "vn-entropy":
        grid_size("n", "u")
        points = [(n, u) for n in sorted(args.n) for u in sorted(args.u)]

        def row(pt):
            exact = von_neumann_entropy_zeta(*pt)
            a = asym.vn_entropy_asymptotic(pt[1]).value_at(pt[0])
            return (*pt, exact, a, exact - a)

        return ["n", "u", "exact", "asymptotic", "residual"], points, row
    if kind == "quantum-term":
        grid_size("r")
        return ["r", "quantum_term"], [(r,) for r in sorted(args.r)], lambda pt: (pt[0], asym.quantum_term(pt[0]))
    if kind == "bayes-constant":
        grid_size("u")
        return (
            ["u", "bayes_constant"],
            [(u,) for u in sorted(args.u)],
            lambda pt: (pt[0], asym.bayes_redundancy_constant(pt[0])),
        )
    # compress: one (n, u, r) triple, many epsilons
    for name in ("n", "u", "r"):
        if len(getattr(args, name)) != 1:
            raise UsageError(f"--{name}", "compress sweeps take exactly one value")
    grid_size("epsilon")
    n, u, r = args.n[0], args.u[0], args.r[0]

    def row(pt):
        pl = plan(n, u, pt[0])
        return (pt[0], pl.subspace_dim, pl.rate_qubits_per_signal, pl.prior_mass, retained_weight(pl, r))

    return (
        ["epsilon", "dim", "rate_qubits_per_signal", "prior_mass", "retained_weight"],
        [(e,) for e in sorted(args.epsilon)],
        row,
    )


def _cmd_sweep(args) -> str:
    header, points, row = _sweep_rows(args)
    threads = _threads()
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, points))  # map keeps input order
    else:
        rows = [row(pt) for pt in points]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for values in rows:
        writer.writerow(["" if v is None else _fmt(v) for v in values])
    return buf.getvalue()


def _cmd_verify(args):
    from .verify import run_suite

    return run_suite(args.suite)


COMMANDS = {
    "zeta": _cmd_zeta,
    "spectrum": _cmd_spectrum,
    "redundancy": _cmd_redundancy,
    "vn-entropy": _cmd_vn_entropy,
    "asymptotics": _cmd_asymptotics,
    "minimax": _cmd_minimax,
    "maximin": _cmd_maximin,
    "compress": _cmd_compress,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def _human(doc, indent: str = "") -> str:
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(indent + "  - " + ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(item.items())))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: [" + ", ".join(_fmt(v) for v in value) + "]")
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_human(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {_fmt(value)}")
    return "\n".join(lines)


def _emit(text: str, out_path: str | None, stdout) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports validation problems with status 2
        return int(exc.code) if exc.code is not None else 0
    try:
        doc = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"qredux: error: {exc}\n")
        return 2
    except (NonConvergenceError, ConvergenceError) as exc:
        diag = {"error": "non-convergence", "command": args.command, "message": str(exc)}
        if isinstance(exc, NonConvergenceError):
            diag["error_estimate"] = exc.error
        stdout.write(dumps_canonical(diag) + "\n")
        return 1
    if isinstance(doc, str):
        text = doc
    elif getattr(args, "json", False):
        text = dumps_canonical(doc)
    else:
        text = _human(_plain(doc))
    _emit(text, args.out, stdout)
    if args.command == "verify" and not doc.get("passed", False):
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
