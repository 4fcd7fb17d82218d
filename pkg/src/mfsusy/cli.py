"""Command-line front end.

Each subcommand builds an :class:`OutputTable` and writes it as CSV or JSON
to stdout or ``--out``. For CSV written to a file, the table metadata goes
to a ``<out>.meta.json`` companion. Exit codes: 0 success, 2 usage,
3 domain, 4 accuracy, 5 search/not found, 6 verification failure,
7 output error.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings

import numpy as np

from . import __version__
from .errors import MFError, NonNormalizableError, OutputError, UsageError, VerificationError
from .fisheye import (
    LensModel,
    QuantumNumbers,
    classical_potential,
    coupling_constant,
    degeneracy,
    ground_factor,
    mf_potential,
    radial_R,
    radial_u,
)
from .grid import RadialGrid
from .numeric.critical import find_critical_l, pocket_analysis
from .numeric.integrate import solve_continuum
from .numeric.shooting import solve_coupling
from .susy import (
    f_from_Q,
    ground_annihilation_residual,
    natanzon_residuals,
    riccati_residual,
    superpotential,
    superpotential_deriv,
    superpotential_from_f,
    u_minus,
    u_plus,
)
from .tables import FORMATS, OutputTable, make_metadata, parse_int_range, parse_range

DEFAULT_TOL = 1e-8
SUSY_THRESHOLD = 1e-9
PAIR_THRESHOLD = 1e-11


def default_tol() -> float:
    env = os.environ.get("MF_DEFAULT_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        tol = float(env)
    except ValueError:
        raise UsageError(f"MF_DEFAULT_TOL is not a number: {env!r}") from None
    if not tol > 0:
        raise UsageError("MF_DEFAULT_TOL must be positive")
    return tol


def _sample_points(spec, log):
    lo, hi, n = parse_range(spec)
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


def _tol(args):
    tol = args.tol if args.tol is not None else default_tol()
    if not tol > 0:
        raise UsageError("--tol must be positive")
    return tol


def _info(args, message):
    if not args.quiet:
        print(message, file=sys.stderr)


# -- subcommands ------------------------------------------------------------


def cmd_potential(args):
    rho = _sample_points(args.rho, args.log)
    params = {"kind": args.kind, "rho": args.rho, "log": args.log}
    if args.kind in ("minus", "plus"):
        if args.l is None:
            raise UsageError(f"--l is required for kind={args.kind}")
        params["l"] = args.l
        if args.kind == "minus":
            l = args.l
            table = OutputTable(["rho", "u_minus", "coupling"])
            coupling = (2 * l + 1) * (2 * l + 3)
            for r, u in zip(rho, u_minus(l, rho)):
                table.append([float(r), float(u), float(coupling)])
        else:
            table = OutputTable(["rho", "u_plus"])
            for r, u in zip(rho, u_plus(args.l, rho)):
                table.append([float(r), float(u)])
    elif args.kind == "mf":
        if args.w is None:
            raise UsageError("--w is required for kind=mf")
        params["w"] = args.w
        table = OutputTable(["rho", "u_mf"])
        for r, u in zip(rho, mf_potential(rho, args.w)):
            table.append([float(r), float(u)])
    else:
        if args.w is None:
            raise UsageError("--w is required for kind=classical")
        model = LensModel(R=args.R, w=args.w)
        params.update(w=args.w, R=args.R)
        table = OutputTable(["r", "u_classical"])
        for r, u in zip(rho, classical_potential(rho, model)):
            table.append([float(r), float(u)])
    table.metadata = make_metadata("potential", params)
    return table


def cmd_wavefunction(args):
    qn = QuantumNumbers(args.n, args.l)
    rho = _sample_points(args.rho, args.log)
    if args.normalized and qn.l == 0:
        raise NonNormalizableError(
            f"state n={qn.n}, l=0 is not normalizable (u tends to a constant as rho -> inf); "
            "drop --normalized"
        )
    R = np.atleast_1d(radial_R(qn, rho, normalized=args.normalized))
    u = np.atleast_1d(radial_u(qn, rho, normalized=args.normalized))
    table = OutputTable(
        ["rho", "R_nl", "u_nl"],
        metadata=make_metadata(
            "wavefunction",
            {"n": qn.n, "l": qn.l, "n_r": qn.n_r, "rho": args.rho, "log": args.log, "normalized": args.normalized},
            coupling=coupling_constant(qn.n),
        ),
    )
    for row in zip(rho, R, u):
        table.append([float(x) for x in row])
    return table


def cmd_spectrum(args):
    tol = _tol(args)
    ls = parse_int_range(args.l)
    nrs = parse_int_range(args.nr)
    table = OutputTable(["l", "n_r", "n", "w_solved", "w_closed_form", "abs_delta", "nodes", "ok"])
    failures = []
    for l in ls:
        for n_r in nrs:
            n = n_r + l + 1
            exact = coupling_constant(n)
            try:
                w, res = solve_coupling(l, n_r, tol=tol, full_output=True)
                nodes = res.nodes
            except MFError as exc:
                w, nodes = float("nan"), -1
                _info(args, f"solver failed for l={l}, n_r={n_r}: {exc}")
            delta = abs(w - exact)
            ok = bool(delta <= tol and nodes == n_r)
            if not ok:
                failures.append((l, n_r))
            table.append([l, n_r, n, w, exact, delta, nodes, ok])
    ns = sorted({n_r + l + 1 for l in ls for n_r in nrs})
    enumeration = {n: sum(1 for l in range(n) for _m in range(-l, l + 1)) for n in ns}
    table.metadata = make_metadata(
        "spectrum",
        {"l": args.l, "nr": args.nr, "tol": tol},
        degeneracy={str(n): {"n_squared": degeneracy(n), "enumerated": enumeration[n]} for n in ns},
        failures=[list(f) for f in failures],
    )
    if failures:
        raise VerificationError(f"spectrum check failed for (l, n_r) = {failures}", table)
    return table


def _susy_rows(ls, rho):
    rows = []
    for l in ls:
        ric_m = np.max(np.abs(riccati_residual("minus", l, rho, relative=True)))
        ric_p = np.max(np.abs(riccati_residual("plus", l, rho, relative=True)))
        diff = np.asarray(u_plus(l, rho)) - np.asarray(u_minus(l, rho))
        two_dw = 2.0 * np.asarray(superpotential_deriv(l, rho))
        pair = np.max(np.abs(diff - two_dw) / np.maximum(np.abs(two_dw), 1.0))
        ann = np.max(ground_annihilation_residual(l, rho))
        nat1, nat2 = natanzon_residuals(l, rho, relative=True)
        ratio = np.asarray(f_from_Q(l, rho)) / np.asarray(ground_factor(l, rho))
        prop = float(np.std(ratio) / np.mean(ratio))
        W = np.asarray(superpotential(l, rho))
        agree = np.max(np.abs(W - np.asarray(superpotential_from_f(l, rho))) / np.maximum(np.abs(W), 1.0))
        rows.append(
            [l, float(ric_m), float(ric_p), float(pair), float(ann),
             float(np.max(np.abs(nat1))), float(np.max(np.abs(nat2))), prop, float(agree)]
        )
    return rows


SUSY_COLUMNS = [
    "l",
    "riccati_minus_rel",
    "riccati_plus_rel",
    "pair_identity_rel",
    "annihilation_rel",
    "natanzon_q_rel",
    "natanzon_r_rel",
    "f_from_q_deviation",
    "superpotential_agreement_rel",
]


def cmd_susy_verify(args):
    ls = parse_int_range(args.l)
    rho = _sample_points(args.rho, args.log)
    table = OutputTable(list(SUSY_COLUMNS), _susy_rows(ls, rho))
    table.metadata = make_metadata(
        "susy-verify",
        {"l": args.l, "rho": args.rho, "log": args.log},
        thresholds={"default": SUSY_THRESHOLD, "pair_identity_rel": PAIR_THRESHOLD},
    )
    bad = []
    for row in table.rows:
        for name, value in zip(table.columns[1:], row[1:]):
            limit = PAIR_THRESHOLD if name == "pair_identity_rel" else SUSY_THRESHOLD
            if not value < limit:
                bad.append((row[0], name, value))
    table.metadata["failures"] = [list(b) for b in bad]
    if bad:
        raise VerificationError("residuals above threshold: " + "; ".join(f"l={l} {c}={v:.3g}" for l, c, v in bad), table)
    return table


def cmd_critical(args):
    tol = _tol(args)
    cp = find_critical_l(tol=tol, method=args.method)
    checks = {}
    for dl in (-0.5, 0.5):
        rep = pocket_analysis(cp.l_cr + dl)
        checks[f"{cp.l_cr + dl:.6f}"] = len(rep.stationary)
    table = OutputTable(
        ["l_cr", "rho_cr", "residual_d1", "residual_d2", "u_plus_cr"],
        [[cp.l_cr, cp.rho_cr, cp.grad_residuals[0], cp.grad_residuals[1], float(u_plus(cp.l_cr, cp.rho_cr))]],
        make_metadata("critical", {"tol": tol, "method": args.method}, method_used=cp.method,
                      iterations=cp.iterations, stationary_point_counts=checks),
    )
    return table


def cmd_pocket(args):
    rep = pocket_analysis(args.l)
    nan = float("nan")
    rmin, umin = rep.minimum if rep.minimum else (nan, nan)
    rmax, umax = rep.maximum if rep.maximum else (nan, nan)
    depth = rep.depth if rep.depth is not None else nan
    status = "pocket" if rep.has_pocket else "no pocket"
    _info(args, f"l={args.l:g}: {status}")
    return OutputTable(
        ["l", "rho_min", "u_min", "rho_max", "u_max", "depth", "n_stationary"],
        [[float(args.l), rmin, umin, rmax, umax, depth, len(rep.stationary)]],
        make_metadata("pocket", {"l": args.l}, status=status),
    )


def cmd_continuum(args):
    if not args.k > 0:
        raise UsageError("--k must be positive")
    if not args.step > 0 or args.step > 0.01:
        raise UsageError("--step must be in (0, 0.01]")
    rho_max = args.rho_max if args.rho_max is not None else max(30.0 / args.k, 60.0)
    num = int(round(rho_max / args.step))
    grid = RadialGrid.from_step(args.step, args.step, num)
    sol = solve_continuum(args.l, args.k, grid, control=args.control)
    d = sol.diagnostics
    table = OutputTable(
        ["rho", "u1", "residual"],
        metadata=make_metadata(
            "continuum",
            {"l": args.l, "k": args.k, "rho_max": rho_max, "step": args.step, "control": args.control},
            phase=d["phase"],
            amplitude=d["amplitude"],
            fit_misfit=d["fit_misfit"],
            max_residual=d["max_residual"],
            origin_exponent=sol.boundary_report["origin_exponent"],
            log_scale=sol.log_scale,
        ),
    )
    for r, u, e in zip(sol.points, sol.values, d["residual"]):
        table.append([float(r), float(u), float(e)])
    return table


def cmd_plot_fig1(args):
    from .plotting import plot_fig1

    if not args.out:
        raise UsageError("plot-fig1 needs --out PATH for the SVG file")
    spec, table, csv_path = plot_fig1(args.panel, args.out, samples=args.samples)
    _info(args, f"wrote {spec.output} and {csv_path}")
    return None


# -- parser -----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="mfsusy", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", parents=[common], help="tabulate a potential")
    p.add_argument("--kind", choices=("minus", "plus", "mf", "classical"), required=True)
    p.add_argument("--l", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--rho", default="0.1:10:100", help="min:max:count")
    p.add_argument("--log", action="store_true")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("wavefunction", parents=[common], help="tabulate an exact zero-energy state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--rho", default="0.05:20:200")
    p.add_argument("--log", action="store_true")
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("spectrum", parents=[common], help="solve for the coupling eigenvalues")
    p.add_argument("--l", default="0:2", help="inclusive range a:b")
    p.add_argument("--nr", default="0:2", help="inclusive range a:b")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("susy-verify", parents=[common], help="check the supersymmetric identities")
    p.add_argument("--l", default="0:10")
    p.add_argument("--rho", default="0.05:20:200")
    p.add_argument("--log", action="store_true")
    p.set_defaults(func=cmd_susy_verify, log=True)

    p = sub.add_parser("critical", parents=[common], help="locate the critical angular number")
    p.add_argument("--method", choices=("newton", "bisection"), default="newton")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("pocket", parents=[common], help="pocket report for U+ at given l")
    p.add_argument("--l", type=float, required=True)
    p.set_defaults(func=cmd_pocket)

    p = sub.add_parser("continuum", parents=[common], help="integrate the partner continuum equation")
    p.add_argument("--l", type=float, default=0.0)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--rho-max", dest="rho_max", type=float)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--control", action="store_true", help="free-particle control (U+ replaced by 0)")
    p.set_defaults(func=cmd_continuum)

    p = sub.add_parser("plot-fig1", parents=[common], help="render a partner-potential panel to SVG")
    p.add_argument("--panel", choices=("a", "b"), required=True)
    p.add_argument("--samples", type=int, default=400)
    p.set_defaults(func=cmd_plot_fig1)
    return parser


def _write(table, args):
    fmt = getattr(args, "format", "csv")
    text = table.render(fmt)
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
        if fmt == "csv":
            with open(out + ".meta.json", "w", newline="\n") as fh:
                fh.write(table.metadata_json())
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc}") from exc


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("format", "csv"), ("out", None), ("tol", None), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        with warnings.catch_warnings():
            if args.quiet:
                warnings.simplefilter("ignore")
            table = args.func(args)
        if table is not None:
            _write(table, args)
    except VerificationError as exc:
        if exc.args[1:] and isinstance(exc.args[1], OutputTable):
            _write(exc.args[1], args)
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return exc.exit_code
    except MFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
