"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails or output cannot be
written, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import collision, quadrature, regions, stressmodels
from .geometry import profile_from_config
from .testfield import CUSP, EXTENDED, TestField

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in x]
    return x


def to_json(obj) -> str:
    return json.dumps(_fmt(obj), sort_keys=True) + "\n"


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([f"{v + 0.0:.12g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def emit(text: str, out: str | None):
    """Write to ``out`` (a path) or standard output."""
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# -- subcommands ---------------------------------------------------------------

def _profile(args, h=None):
    return profile_from_config(args.config, alpha=args.alpha, h=h if h is not None else args.h,
                               r0=args.r0, d0=args.d0)


def cmd_verify_lemma(args):
    hs = np.geomspace(args.h_max, args.h_min, args.points)
    fit = quadrature.h_sweep(args.alpha, args.q, hs, args.component, r0=args.r0, d0=args.d0,
                             rtol=args.rtol, workers=args.workers)
    q_grad, q_val = quadrature.critical_exponents(args.alpha)
    q_crit = q_val if args.component == "value" else q_grad
    verdict = quadrature.scaling_verdict(fit, q_crit)
    summary = {
        "alpha": args.alpha, "q": args.q, "component": args.component, "q_critical": q_crit,
        "slope": fit.slope, "residual": fit.fit_residual,
        "predicted_exponent": fit.predicted_exponent,
        "verdict": verdict["expected"], "passed": verdict["passed"],
        "formula": "||.||_{L^q(cusp)} ~ h^slope; bounded below q_critical",
    }
    table = to_csv(("h", "norm"), [(r["h"], r["norm"]) for r in fit.rows()])
    emit(table, args.out)
    summary_path = args.summary or (args.out + ".json" if args.out else None)
    emit(to_json(summary), summary_path)
    return EXIT_OK if verdict["passed"] else EXIT_FAIL


def cmd_norms(args):
    prof = _profile(args)
    field = TestField(prof)
    value = quadrature.lq_norm(field, args.component, args.q, rtol=args.rtol)
    q_grad, q_val = quadrature.critical_exponents(prof.alpha)
    emit(to_json({
        "alpha": prof.alpha, "h": prof.h, "r0": prof.r0, "q": args.q, "component": args.component,
        "norm": value, "q_grad": q_grad, "q_val": q_val,
        "cutoff_consistent": prof.cutoff_consistent(),
        "formula": "(integral over the cusp of |.|^q dV)^(1/q)",
    }), args.out)
    return EXIT_OK


def cmd_region(args):
    if args.mode == "heat":
        if args.beta is None or args.gamma is None:
            raise UsageError("--mode heat needs --gamma and --beta")
        v = regions.admissible_heat(args.gamma, args.beta, args.alpha)
        ref = "gamma > 3, beta > 2, alpha < min{3(gamma-3)/(4gamma+3), 3(beta-2)/(9beta+2)}"
    else:
        if args.p is None or args.gamma is None:
            raise UsageError(f"--mode {args.mode} needs --p and --gamma")
        pt = regions.ParameterPoint(args.p, args.gamma, args.alpha, args.beta)
        if args.mode == "full":
            v = regions.admissible_full(pt)
            ref = "alpha < min{(3-p)/(2p-1), 3(4p*gamma-3p-6gamma)/(p*gamma+3p+6gamma)}"
        else:
            v = regions.admissible_noconv(pt)
            ref = "alpha < min{(3-p)/(2p-1), 9(p*gamma-p-gamma)/(2p*gamma+3p+3gamma)}"
    out = {"admissible": v.admissible, "alpha_bound": v.alpha_bound, "binding": v.binding,
           "constraints": v.constraints, "window": v.window, "boundary": v.boundary,
           "tie": v.tie, "mode": v.mode, "formula": ref}
    if args.mode != "heat":
        out["auxiliary"] = regions.auxiliary_thresholds(pt)
    emit(to_json(out), args.out)
    return EXIT_OK


def cmd_sweep(args):
    table = regions.sweep(args.mode, (args.x_min, args.x_max), (args.y_min, args.y_max),
                          (args.nx, args.ny), alpha=args.alpha)
    emit(to_csv(table.columns, table.rows), args.out)
    return EXIT_OK


def cmd_stress_check(args):
    model = stressmodels.make_model(args.model, p=args.p, delta0=args.delta0)
    mono = stressmodels.check_monotone(model, args.samples, args.seed)
    if args.model.startswith("power"):
        env = stressmodels.GrowthEnvelope(args.p, 1.0, 1.0, 0.0)
    else:
        env = stressmodels.GrowthEnvelope(2.0, 0.5, 1.0, 0.5 * args.delta0**2)
    growth = stressmodels.check_growth(model, env, args.samples, args.seed)
    emit(to_json({
        "model": args.model, "p": args.p, "delta0": args.delta0,
        "monotonicity": mono.as_dict(), "growth": growth.as_dict(),
        "envelope": {"p": env.p, "c0": env.c0, "c1": env.c1, "delta": env.delta},
        "formula": "(S(M)-S(N)):(M-N) >= 0; c0|M|^p - delta <= S(M):M <= c1|M|^p",
    }), args.out)
    return EXIT_OK if (mono.passed and growth.passed) else EXIT_FAIL


_COLLISION = "C0 max{m^-1/2, m^-3/2}(1 + E0^(1/2+1/gamma+1/p)) < 1"


def cmd_min_mass(args):
    try:
        res = collision.min_mass(args.c0, args.fluid_energy, args.v0_coeff, args.omega0_coeff,
                                 args.j0, args.gamma, args.p)
    except collision.NoSolutionError as exc:
        emit(to_json({"error": str(exc), "formula": _COLLISION}), args.out)
        return EXIT_FAIL
    out = res.as_dict()
    out["formula"] = _COLLISION
    emit(to_json(out), args.out)
    return EXIT_OK


def cmd_fall(args):
    sigma = args.sigma
    if sigma is None:
        sigma = collision.drag_exponent(args.sigma_from_alpha)
    res = collision.fall_demo(args.m, args.g, args.c, sigma, args.h0)
    emit(to_csv(("t", "h"), zip(res.t, res.h)), args.out)
    summary = {"sigma": sigma, "touchdown_time": res.touchdown_time, "closed_form": res.closed_form}
    sys.stderr.write(to_json(summary))
    return EXIT_OK


def cmd_field_dump(args):
    prof = _profile(args)
    field = TestField(prof, mode=args.mode)
    if args.mode == CUSP:
        r = np.linspace(0.0, prof.r0, args.nr)
        t = np.linspace(0.0, 1.0, args.nz)
        R, T = np.meshgrid(r, t, indexing="ij")
        X = T * (prof.h + R ** (1.0 + prof.alpha))
    else:
        r = np.linspace(0.0, 2.5 * prof.r0, args.nr)
        x = np.linspace(0.0, 2.5 * prof.r0, args.nz)
        R, X = np.meshgrid(r, x, indexing="ij")
    R, X = R.ravel(), X.ravel()
    wr, w3 = field.velocity(R, X)
    grad = field.gradient(R, X)
    rows = zip(R, X, wr, w3, grad.frobenius, grad.divergence)
    emit(to_csv(("r", "x3", "w_r", "w_3", "frobenius_grad", "div"), rows), args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _positive(x):
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {x}")
    return v


def _profile_args(sp, alpha_required=False):
    sp.add_argument("--config", help="flat key=value file with alpha, h, r0, d0")
    sp.add_argument("--alpha", type=_positive, required=alpha_required)
    sp.add_argument("--h", type=float)
    sp.add_argument("--r0", type=_positive)
    sp.add_argument("--d0", type=_positive)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cusp-collision", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("verify-lemma", help="h-sweep of a cusp L^q norm with a log-log fit")
    sp.add_argument("--alpha", type=_positive, required=True)
    sp.add_argument("--q", type=_positive, required=True)
    sp.add_argument("--h-min", type=_positive, default=1e-4)
    sp.add_argument("--h-max", type=_positive, default=1e-1)
    sp.add_argument("--points", type=int, default=7)
    sp.add_argument("--component", choices=("value", "grad", "dh"), default="grad")
    sp.add_argument("--r0", type=_positive, default=0.5)
    sp.add_argument("--d0", type=_positive, default=0.25)
    sp.add_argument("--rtol", type=_positive, default=1e-8)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--summary", help="write the JSON summary here")
    sp.set_defaults(func=cmd_verify_lemma)

    sp = sub.add_parser("norms", help="one L^q norm on the cusp region")
    _profile_args(sp)
    sp.add_argument("--q", type=_positive, required=True)
    sp.add_argument("--component", choices=("value", "grad", "dh"), default="grad")
    sp.add_argument("--rtol", type=_positive, default=1e-8)
    sp.set_defaults(func=cmd_norms)

    sp = sub.add_parser("region", help="admissibility verdict at one parameter point")
    sp.add_argument("--mode", choices=regions.MODES, required=True)
    sp.add_argument("--p", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--alpha", type=_positive, required=True)
    sp.add_argument("--beta", type=float)
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("sweep", help="grid of alpha bounds as CSV")
    sp.add_argument("--mode", choices=regions.MODES, required=True)
    sp.add_argument("--x-min", type=float, required=True, help="p (or gamma for heat)")
    sp.add_argument("--x-max", type=float, required=True)
    sp.add_argument("--y-min", type=float, required=True, help="gamma (or beta for heat)")
    sp.add_argument("--y-max", type=float, required=True)
    sp.add_argument("--nx", type=int, default=20)
    sp.add_argument("--ny", type=int, default=20)
    sp.add_argument("--alpha", type=_positive)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("stress-check", help="sampled monotonicity and growth checks")
    sp.add_argument("--model", choices=("power", "activated"), required=True)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--delta0", type=_positive, default=0.5)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=stressmodels.DEFAULT_SEED)
    sp.set_defaults(func=cmd_stress_check)

    sp = sub.add_parser("min-mass", help="smallest mass satisfying the collision inequality")
    sp.add_argument("--c0", type=_positive, required=True)
    sp.add_argument("--fluid-energy", type=float, required=True)
    sp.add_argument("--v0-coeff", type=float, default=0.0)
    sp.add_argument("--omega0-coeff", type=float, default=0.0)
    sp.add_argument("--j0", type=float, default=0.0, help="moment of inertia per unit mass")
    sp.add_argument("--gamma", type=_positive, required=True)
    sp.add_argument("--p", type=_positive, required=True)
    sp.set_defaults(func=cmd_min_mass)

    sp = sub.add_parser("fall", help="quasi-static touchdown trajectory as CSV")
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--g", type=_positive, required=True)
    sp.add_argument("--c", type=_positive, required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--sigma", type=float)
    grp.add_argument("--sigma-from-alpha", type=_positive,
                     help="use the Newtonian (q=2) cusp drag exponent for this alpha")
    sp.add_argument("--h0", type=_positive, required=True)
    sp.set_defaults(func=cmd_fall)

    sp = sub.add_parser("field-dump", help="sampled test field as CSV")
    _profile_args(sp)
    sp.add_argument("--mode", choices=(CUSP, EXTENDED), default=CUSP)
    sp.add_argument("--nr", type=int, default=21)
    sp.add_argument("--nz", type=int, default=11)
    sp.set_defaults(func=cmd_field_dump)

    for p in sub.choices.values():
        p.add_argument("--out", help="write results to this path instead of stdout")
    return parser


_COMPONENT_ALIASES = {"grad": "gradient", "value": "value", "dh": "dh"}


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "component"):
        args.component = _COMPONENT_ALIASES[args.component]
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (OSError, quadrature.QuadratureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


def main(argv=None):
    try:
        code = dispatch(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
