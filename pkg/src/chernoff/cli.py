"""Command-line front end.

    chernoff pdf --c 1 --at 0
    chernoff quantile --p 0.975
    chernoff diagnose --from -2.5 --to 2.5 --step 0.01 --format json
    chernoff sample --dist gtilde --n 1e4 --seed 3 --binary -o draws.bin
    chernoff figures --outdir figs --svg
    chernoff verify

Exit status: 0 on success, 1 on a precision or validation failure, 2 on a
usage error.  CHERNOFF_THREADS caps the sampling threads.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import airy, gaussfact, gfunc, hypoexp
from .distribution import ChernoffDist, strong_lc_profile
from .errors import ChernoffError
from .report import fmt, write_csv, write_json, write_svg

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    pass


def _count(text):
    """Positive integer that may be written as 1e5."""
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if val != int(val) or val < 0:
        raise argparse.ArgumentTypeError(f"not a nonnegative integer: {text!r}")
    return int(val)


def _positive(text):
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return val


def _rates(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"rates must be comma-separated numbers: {text!r}")


def _grid_args(p):
    p.add_argument("--at", type=float, nargs="+", help="evaluation points")
    p.add_argument("--from", dest="lo", type=float)
    p.add_argument("--to", dest="hi", type=float)
    p.add_argument("--step", type=_positive)


def _quad_args(p):
    p.add_argument("--c", type=_positive, default=1.0, help="drift coefficient c > 0")
    p.add_argument("--u-max", type=_positive, default=None, help="frequency cut-off")
    p.add_argument("--abs-tol", type=_positive, default=1e-12)
    p.add_argument("--nodes", type=_count, default=40000)


def _out_args(p, formats=("csv", "json")):
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser():
    ap = argparse.ArgumentParser(prog="chernoff", description="Chernoff's distribution toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("airy", help="Ai and Ai' at real or complex points; Airy zeros")
    p.add_argument("--at", nargs="+", help="points, complex allowed (e.g. 1+2j)")
    p.add_argument("--from", dest="lo", type=float)
    p.add_argument("--to", dest="hi", type=float)
    p.add_argument("--step", type=_positive)
    p.add_argument("--zeros", type=_count, help="print the first K zeros a_k")
    _out_args(p)

    p = sub.add_parser("gfun", help="g_c and its derivatives")
    _grid_args(p)
    _quad_args(p)
    p.add_argument("--order", type=int, default=0, choices=range(5))
    _out_args(p)

    for name, helptext in (("pdf", "density f_{Z_c}"), ("cdf", "distribution function")):
        p = sub.add_parser(name, help=helptext)
        _grid_args(p)
        _quad_args(p)
        _out_args(p)

    p = sub.add_parser("quantile", help="quantile function")
    p.add_argument("--p", type=float, nargs="+", required=True)
    _quad_args(p)
    _out_args(p)

    p = sub.add_parser("moment", help="raw moment E Z_c^k")
    p.add_argument("--k", type=int, default=2)
    _quad_args(p)

    p = sub.add_parser("sample", help="random draws")
    p.add_argument("--dist", choices=("chernoff", "gtilde", "hypoexp"), default="chernoff")
    p.add_argument("--n", type=_count, default=1000)
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--stream", type=_count, default=0)
    p.add_argument("--m", type=_count, default=400, help="truncation order for gtilde")
    p.add_argument("--rates", type=_rates, help="comma-separated rates for hypoexp")
    p.add_argument("--binary", action="store_true", help="raw float64 output")
    p.add_argument("-o", "--output", default="-")
    _quad_args(p)

    p = sub.add_parser("argmax-sim", help="Brownian argmax Monte Carlo")
    p.add_argument("--c", type=_positive, default=1.0)
    p.add_argument("--half-width", type=_positive, default=None)
    p.add_argument("--step", type=_positive, default=1e-3)
    p.add_argument("--n", type=_count, default=1000)
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--stream", type=_count, default=0)
    p.add_argument("--binary", action="store_true")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("diagnose", help="log-concavity diagnostics on a grid")
    _grid_args(p)
    _quad_args(p)
    p.add_argument("--pf2-draws", type=_count, default=10000)
    p.add_argument("--corr-step", type=_positive, default=0.25)
    p.add_argument("--seed", type=_count, default=0)
    _out_args(p, ("json", "csv", "svg"))

    p = sub.add_parser("gaussfact", help="factor of the normal density")
    p.add_argument("--from", dest="lo", type=float, default=-6.0)
    p.add_argument("--to", dest="hi", type=float, default=6.0)
    p.add_argument("--step", type=_positive, default=0.05)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("figures", help="write figure data")
    p.add_argument("--outdir", default="figures")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--c", type=_positive, default=1.0)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None)
    p.add_argument("--json", dest="json_out", default=None, help="also write results as JSON")
    return ap


def _points(args, default=None):
    ranged = (args.lo, args.hi, args.step)
    if args.at is not None:
        if any(v is not None for v in ranged):
            raise UsageError("give either --at or --from/--to/--step, not both")
        return np.asarray(args.at, dtype=float)
    if all(v is None for v in ranged) and default is not None:
        ranged = default
    lo, hi, step = ranged
    if lo is None or hi is None or step is None:
        raise UsageError("need --at or all of --from, --to, --step")
    if hi < lo:
        raise UsageError("--to must not be below --from")
    n = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(n + 1), 12)


def _quad(args):
    return gfunc.QuadratureConfig(u_max=args.u_max, nodes=args.nodes, abs_tol=args.abs_tol)


def _params(args):
    return gfunc.GParams(args.c, _quad(args))


def _emit_table(args, columns, out):
    if getattr(args, "format", "csv") == "json":
        write_json(None if args.output == "-" else args.output, columns, stream=out)
    else:
        write_csv(None if args.output == "-" else args.output, columns, stream=out)


def _emit_samples(args, x, out):
    x = np.asarray(x, dtype="<f8")
    if args.binary:
        data = x.tobytes()
        if args.output == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            with open(args.output, "wb") as fh:
                fh.write(data)
        return
    text = "\n".join(fmt(v) for v in x) + "\n"
    if args.output == "-":
        out.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _cmd_airy(args, out):
    if args.zeros is not None:
        k = np.arange(1, args.zeros + 1)
        _emit_table(args, {"k": k, "a_k": airy.airy_zeros(args.zeros)}, out)
        return 0
    if args.at is not None:
        try:
            z = np.array([complex(s.replace(" ", "")) for s in args.at])
        except ValueError:
            raise UsageError("--at values must be real or complex numbers")
    else:
        z = _points(args).astype(complex)
    a, ap = airy.airy_pair(z)
    _emit_table(args, {"re_z": z.real, "im_z": z.imag, "re_ai": a.real, "im_ai": a.imag,
                       "re_aip": ap.real, "im_aip": ap.imag}, out)
    return 0


def _cmd_gfun(args, out):
    x = _points(args)
    _emit_table(args, {"x": x, f"g{args.order}": np.atleast_1d(gfunc.g_deriv(_params(args), x, args.order))}, out)
    return 0


def _dist(args):
    return ChernoffDist(args.c, _quad(args))


def _cmd_pdf(args, out):
    t = _points(args)
    d = _dist(args)
    _emit_table(args, {"t": t, "pdf": np.atleast_1d(d.pdf(t))}, out)
    return 0


def _cmd_cdf(args, out):
    t = _points(args)
    d = _dist(args)
    _emit_table(args, {"t": t, "cdf": np.atleast_1d(d.cdf(t))}, out)
    return 0


def _cmd_quantile(args, out):
    p = np.asarray(args.p, dtype=float)
    d = _dist(args)
    _emit_table(args, {"p": p, "quantile": np.atleast_1d(d.quantile(p))}, out)
    return 0


def _cmd_moment(args, out):
    out.write(fmt(_dist(args).moment(args.k)) + "\n")
    return 0


def _cmd_sample(args, out):
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.dist == "hypoexp":
        if not args.rates:
            raise UsageError("--dist hypoexp needs --rates")
        x = hypoexp.sample_hypoexp(args.rates, args.n, seed=args.seed, stream=args.stream)
    elif args.rates:
        raise UsageError("--rates only applies to --dist hypoexp")
    elif args.dist == "gtilde":
        rep = hypoexp.GTildeRep.from_c(args.c, args.m)
        x = hypoexp.sample_gtilde(rep, args.n, seed=args.seed, stream=args.stream)
    else:
        x, info = hypoexp.sample_chernoff(_dist(args), args.n, seed=args.seed, stream=args.stream,
                                          full_output=True)
        print(f"acceptance rate {info.acceptance_rate:.4f}", file=sys.stderr)
    _emit_samples(args, x, out)
    return 0


def _cmd_argmax(args, out):
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    x = hypoexp.simulate_argmax(args.c, args.half_width, args.step, args.n,
                                seed=args.seed, stream=args.stream)
    _emit_samples(args, x, out)
    return 0


def _cmd_diagnose(args, out):
    grid = _points(args, (-2.5, 2.5, 0.01))
    d = _dist(args)
    rep = strong_lc_profile(d, grid, pf2_draws=args.pf2_draws, corr_step=args.corr_step, seed=args.seed)
    target = None if args.output == "-" else args.output
    if args.format == "json":
        write_json(target, rep.summary(), stream=out)
    elif args.format == "csv":
        write_csv(target, {"t": rep.grid, "f": rep.f, "neg_log_f": rep.neg_log_f, "w": rep.w}, stream=out)
    else:
        if target is None:
            raise UsageError("--format svg needs --output")
        write_svg(target, rep.grid, {"(-log f)''": rep.w}, title=f"(-log f)'' at c={args.c:g}")
    if not rep.logconcave_ok:
        print("log-concavity check failed on the grid", file=sys.stderr)
        return 1
    if not rep.strong_lc_ok:
        print(f"flag: strong log-concavity margin {rep.strong_lc_margin:.3e}", file=sys.stderr)
    return 0


def _cmd_gaussfact(args, out):
    if args.hi < args.lo:
        raise UsageError("--to must not be below --from")
    n = int(round((args.hi - args.lo) / args.step))
    z = np.round(args.lo + args.step * np.arange(n + 1), 12)
    vals = [gaussfact.g_normal_value(x) for x in z]
    write_csv(None if args.output == "-" else args.output,
              {"z": z, "g": [v.g for v in vals], "residual": [v.residual for v in vals]}, stream=out)
    return 0


def _cmd_figures(args, out):
    from .figures import check_figures, emit_figures
    paths = emit_figures(args.outdir, c=args.c, svg=args.svg)
    for name, path in paths.items():
        out.write(f"{name}\t{path}\n")
    ok = True
    if args.c == 1.0:
        for chk in check_figures(args.outdir):
            out.write(f"[{'PASS' if chk.passed else 'FAIL'}] {chk.name}: {chk.detail}\n")
            ok &= chk.passed
    return 0 if ok else 1


def _cmd_verify(args, out):
    from . import verify
    if args.only and any(k not in verify.CHECKS for k in args.only):
        raise UsageError(f"--only takes criterion numbers in {sorted(verify.CHECKS)}")

    def progress(r):
        out.write(verify.format_row(r) + "\n")
        out.flush()

    results = verify.run_all(args.only, progress=progress)
    out.write(verify.format_table(results).splitlines()[-1] + "\n")
    if args.json_out:
        write_json(args.json_out, {"schema_version": 1, "results": [r.__dict__ for r in results]})
    return 0 if all(r.passed or r.soft for r in results) else 1


_COMMANDS = {
    "airy": _cmd_airy, "gfun": _cmd_gfun, "pdf": _cmd_pdf, "cdf": _cmd_cdf,
    "quantile": _cmd_quantile, "moment": _cmd_moment, "sample": _cmd_sample,
    "argmax-sim": _cmd_argmax, "diagnose": _cmd_diagnose, "gaussfact": _cmd_gaussfact,
    "figures": _cmd_figures, "verify": _cmd_verify,
}


def run(argv=None, out=None):
    """Parse argv, dispatch, and return the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chernoff: error: {exc}", file=sys.stderr)
        return 2
    except (ChernoffError, ValueError, ArithmeticError) as exc:
        print(f"chernoff: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
