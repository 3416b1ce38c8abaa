"""Command-line front end: ``trighermite gen|build|eval|verify|converge``.

Exit status is 0 on success, 2 for invalid input and 3 for numerical
failure (singular system, residual above threshold).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import PreconditionError, SingularSystemError
from .formats import dump_samples, dump_spline, load_samples, load_spline
from .functions import FUNCTIONS, get_function, sample
from .hermite_spline import build, eval_uniform, evaluate, node_residuals
from .trig_interp import UniformGrid

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class NumericalFailure(Exception):
    pass


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(format(float(x), ".17g") if not isinstance(x, (int, np.integer)) else str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_gen(function, N, variant=0, order=1):
    fn = get_function(function)
    grid = UniformGrid(N, variant)
    return dump_samples(sample(fn, grid, order), function=function)


def cmd_build(sample_text, tol=1e-15, log=None):
    samples = load_samples(sample_text)
    try:
        spline = build(samples, tol=tol)
    except SingularSystemError as exc:
        raise NumericalFailure(str(exc)) from exc
    if log is not None:
        table = spline.table
        health = np.abs(table.det) / table.scale
        print(f"harmonics: {len(health)}  min |det|/scale: {health.min():.3e}  max: {health.max():.3e}", file=log)
        rep = node_residuals(spline, *samples)
        for q, r in enumerate(rep.max):
            print(f"max node residual (deriv {q}): {r:.3e}", file=log)
    return dump_spline(spline)


def cmd_eval(spline_text, ts=None, resolution=None, deriv=0, tol=None):
    spline = load_spline(spline_text)
    if ts is not None:
        t = np.asarray(ts, dtype=float)
        vals = evaluate(spline, t, deriv, tol)
    elif resolution is not None:
        t, vals = eval_uniform(spline, resolution, deriv, tol)
    else:
        raise PreconditionError("give either evaluation points or a resolution")
    return _csv(("t", "value"), zip(np.atleast_1d(t), np.atleast_1d(vals)))


def cmd_verify(spline_text, sample_text, threshold=1e-8):
    """Return the residual report text; raise NumericalFailure if over threshold."""
    spline = load_spline(spline_text)
    samples = load_samples(sample_text)
    if samples[0].grid != spline.grid:
        raise PreconditionError(f"sample grid {samples[0].grid} does not match spline grid {spline.grid}")
    rep = node_residuals(spline, *samples[: spline.order + 1])
    lines = [f"deriv {q}: max residual {r:.3e}" for q, r in enumerate(rep.max)]
    ok = rep.passes(threshold)
    lines.append(f"scale {rep.scale:.3e}  threshold {threshold:.1e}  {'PASS' if ok else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    if not ok:
        raise NumericalFailure(text)
    return text


def converge_errors(function, Ns, order=1, variant=0, resolution=1024, tol=1e-15, eval_tol=1e-12):
    fn = get_function(function)
    errors = []
    for N in Ns:
        grid = UniformGrid(N, variant)
        try:
            spline = build(sample(fn, grid, order), tol=tol)
        except SingularSystemError as exc:
            raise NumericalFailure(str(exc)) from exc
        t, vals = eval_uniform(spline, resolution, 0, eval_tol)
        errors.append(float(np.max(np.abs(vals - fn(t)))))
    return errors


def cmd_converge(function, Ns, order=1, variant=0, resolution=1024, tol=1e-15, eval_tol=1e-12):
    errors = converge_errors(function, Ns, order, variant, resolution, tol, eval_tol)
    return _csv(("N", "max_error"), zip(Ns, errors))


def _parser():
    p = argparse.ArgumentParser(prog="trighermite", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a built-in test function on a grid")
    g.add_argument("function", help="one of: " + ", ".join(FUNCTIONS))
    g.add_argument("--n", type=int, required=True, help="odd number of nodes")
    g.add_argument("--variant", type=int, default=0, choices=(0, 1))
    g.add_argument("--order", type=int, default=1, choices=(1, 2))
    g.add_argument("--out")

    b = sub.add_parser("build", help="build a spline from a sample file")
    b.add_argument("samples")
    b.add_argument("--tol", type=float, default=1e-15)
    b.add_argument("--out")

    e = sub.add_parser("eval", help="evaluate a spline, CSV output")
    e.add_argument("spline")
    grp = e.add_mutually_exclusive_group(required=True)
    grp.add_argument("--t", type=float, nargs="+", help="evaluation points (radians)")
    grp.add_argument("--resolution", type=int, help="uniform dense grid size")
    e.add_argument("--deriv", type=int, default=0)
    e.add_argument("--eval-tol", type=float, default=None)
    e.add_argument("--out")

    v = sub.add_parser("verify", help="check node conditions against a sample file")
    v.add_argument("spline")
    v.add_argument("samples")
    v.add_argument("--threshold", type=float, default=1e-8, help="relative to max(1, max|samples|)")

    c = sub.add_parser("converge", help="dense-grid max error for a list of grid sizes")
    c.add_argument("function")
    c.add_argument("--n", type=int, nargs="+", required=True)
    c.add_argument("--order", type=int, default=1, choices=(1, 2))
    c.add_argument("--variant", type=int, default=0, choices=(0, 1))
    c.add_argument("--resolution", type=int, default=1024)
    c.add_argument("--tol", type=float, default=1e-15)
    c.add_argument("--eval-tol", type=float, default=1e-12)
    c.add_argument("--out")
    return p


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "gen":
            _emit(cmd_gen(args.function, args.n, args.variant, args.order), args.out)
        elif args.command == "build":
            _emit(cmd_build(Path(args.samples).read_text(), args.tol, log=sys.stderr), args.out)
        elif args.command == "eval":
            text = cmd_eval(Path(args.spline).read_text(), args.t, args.resolution, args.deriv, args.eval_tol)
            _emit(text, args.out)
        elif args.command == "verify":
            sys.stdout.write(cmd_verify(Path(args.spline).read_text(), Path(args.samples).read_text(), args.threshold))
        elif args.command == "converge":
            text = cmd_converge(
                args.function, args.n, args.order, args.variant, args.resolution, args.tol, args.eval_tol
            )
            _emit(text, args.out)
    except NumericalFailure as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (PreconditionError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
