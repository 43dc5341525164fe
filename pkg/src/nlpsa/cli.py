"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 numerical error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, io
from .analysis import harmonic_rejection_report, linear_lspsa, sample_spectrum, snr_gain
from .demod import demodulate, mc_snr_gain, phase_error
from .design import default_zero_set, DesignSpec, PhaseSteps, solve_coefficients, uniform_steps
from .errors import NlpsaError, NumericalError, UsageError
from .pca import aligned_phase, pca_demodulate
from .sim import FringeProfile, SCENES, add_awgn, simulate_stack, synth_phase_map

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

#: PCA/NL error ratio the comparison must reach
SEPARATION = 1e3

# options whose values may start with a minus sign
_LIST_OPTS = ("--steps", "--zeros", "--params", "--range", "--harmonics")


class IOFailure(Exception):
    pass


def float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def harmonic_list(text):
    """``"1:1.0,2:0.3"`` -> ``[(1, 1.0), (2, 0.3)]``."""
    try:
        out = []
        for item in text.split(","):
            k, b = item.split(":")
            out.append((int(k), float(b)))
        return out
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k:amplitude pairs, got {text!r}")


def _load(fn, path):
    try:
        return fn(path)
    except FileNotFoundError as e:
        raise IOFailure(f"FileNotFound: {e.filename or path}")
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        if isinstance(e, NlpsaError):
            raise
        raise IOFailure(f"cannot read {path}: {e}")


def _write_metadata(directory, args, **extra):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "threads")}
    meta = {"tool": "nlpsa", "version": __version__, "command": args.command,
            "config": config, "seed": getattr(args, "seed", None)}
    meta.update(extra)
    Path(directory).mkdir(parents=True, exist_ok=True)
    io.write_json(Path(directory) / "run-metadata.json", meta)


def _steps_from(args):
    if getattr(args, "uniform", None) is not None:
        return uniform_steps(args.uniform)
    return PhaseSteps(args.steps)


def cmd_design(args):
    if args.uniform is not None and args.zeros is None:
        coeffs = linear_lspsa(args.uniform)
    else:
        steps = _steps_from(args)
        if args.zeros is None:
            spec = default_zero_set(len(steps))
        else:
            spec = DesignSpec.from_zeros(args.zeros, args.pass_omega)
        coeffs = solve_coefficients(steps, spec)
    print(f"{'n':>3} {'theta':>10} {'re':>12} {'im':>12} {'|c|':>10}")
    for n, (t, c) in enumerate(zip(coeffs.steps.values, coeffs.values)):
        print(f"{n:>3} {t:>10.4f} {c.real:>12.6f} {c.imag:>12.6f} {abs(c):>10.6f}")
    print(f"zeros: {coeffs.spec.zeros}  pass: {coeffs.spec.pass_omega}")
    print(f"condition: {coeffs.condition_estimate:.6g}")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        io.save_design(out, coeffs)
        _write_metadata(out.parent, args)


def cmd_spectrum(args):
    coeffs = _load(io.load_design, args.design)
    lo, hi = args.range
    samples = sample_spectrum(coeffs, lo, hi, args.count, workers=args.threads)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.save_spectrum(out, samples)
    _write_metadata(out.parent, args)
    zeros = samples.local_minima()
    print(f"{len(samples.omegas)} samples; minima below 1e-8 at: "
          + ", ".join(f"{w:g}" for w in zeros))


def cmd_snr(args):
    if args.uniform is not None:
        coeffs = linear_lspsa(args.uniform)
    elif args.design:
        coeffs = _load(io.load_design, args.design)
    else:
        raise UsageError("give a design file or --uniform N")
    print(f"{snr_gain(coeffs, coeffs.spec.pass_omega):.3f}")
    if args.mc:
        trials, sigma, seed = args.mc
        g = mc_snr_gain(coeffs, float(sigma), int(float(trials)), int(float(seed)))
        print(f"{g:.3f} (monte-carlo, {int(float(trials))} trials)")


def cmd_simulate(args):
    truth = synth_phase_map(args.scene, args.params, args.width, args.height)
    steps = _steps_from(args)
    if args.background is None:
        profile = FringeProfile.with_default_background(args.harmonics)
    else:
        profile = FringeProfile(args.background, tuple(args.harmonics))
    stack = simulate_stack(truth, steps, profile)
    stack = add_awgn(stack, args.sigma, args.seed, workers=args.threads)
    io.save_stack(args.out, stack)
    _write_metadata(args.out, args)
    print(f"wrote {len(stack)} frames of {args.width}x{args.height} to {args.out}")


def _nl_outputs(stack, coeffs, directory, remove_piston, threads):
    res = demodulate(stack, coeffs, workers=threads)
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    io.save_grid(d / "phase.csv", res.phase.values)
    io.save_grid(d / "amplitude.csv", res.amplitude)
    stats = None
    if stack.truth is not None:
        stats = phase_error(res.phase, stack.truth, remove_piston)
        io.write_json(d / "stats.json", stats.to_dict())
    return res, stats


def cmd_demodulate(args):
    stack = _load(io.load_stack, args.stack)
    coeffs = _load(io.load_design, args.design)
    _, stats = _nl_outputs(stack, coeffs, args.out, args.remove_piston, args.threads)
    _write_metadata(args.out, args)
    if stats is None:
        print("no ground truth in stack; wrote phase and amplitude only")
    else:
        print(f"rms {stats.rms:.3e} rad, max {stats.max_abs:.3e} rad")


def cmd_compare(args):
    stack = _load(io.load_stack, args.stack)
    coeffs = _load(io.load_design, args.design)
    if stack.truth is None:
        raise UsageError("compare needs a stack with ground truth")
    out = Path(args.out)
    _, nl = _nl_outputs(stack, coeffs, out / "nlpsa", False, args.threads)
    report = {"nlpsa": nl.to_dict(), "pca": None, "pca_error": None,
              "ratio": None, "separation": SEPARATION, "separated": False}
    try:
        result = pca_demodulate(stack)
    except NumericalError as e:
        report["pca_error"] = f"{type(e).__name__}: {e}"
    else:
        phase, stats = aligned_phase(result, stack.truth)
        (out / "pca").mkdir(parents=True, exist_ok=True)
        io.save_grid(out / "pca" / "phase.csv", phase.values)
        pca_stats = dict(stats.to_dict(), sign_aligned=True,
                         eigenvalues=[io._g(w) for w in result.eigenvalues])
        io.write_json(out / "pca" / "stats.json", pca_stats)
        report["pca"] = pca_stats
        ratio = stats.rms / nl.rms if nl.rms > 0 else float("inf")
        report["ratio"] = ratio if np.isfinite(ratio) else "inf"
        report["separated"] = bool(ratio >= SEPARATION)
    io.write_json(out / "comparison.json", report)
    _write_metadata(out, args)
    print(f"NL-PSA rms {nl.rms:.3e} rad")
    if report["pca"] is None:
        print(f"PCA     {report['pca_error']}")
    else:
        print(f"PCA     rms {report['pca']['rms']:.3e} rad (sign/piston aligned)")
        print(f"ratio   {report['ratio']}  separated(>= {SEPARATION:g}x): {report['separated']}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="nlpsa",
        description="Design, analyse and apply phase-shifting algorithms for nonuniform steps.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_steps(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--steps", type=float_list, help="comma-separated phase steps (rad)")
        g.add_argument("--uniform", type=int, metavar="N", help="evenly spaced steps 2*pi*k/N")

    sp = sub.add_parser("design", help="solve FTF coefficients")
    add_steps(sp)
    sp.add_argument("--zeros", type=float_list, help="zero frequencies (default: clustered around 1)")
    sp.add_argument("--pass-omega", type=float, default=1.0)
    sp.add_argument("--out", help="design JSON path")
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("spectrum", help="sample |H(omega)| to CSV")
    sp.add_argument("design")
    sp.add_argument("--range", type=float_list, default=[-10.0, 10.0], metavar="LO,HI")
    sp.add_argument("--count", type=int, default=2001)
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("snr", help="analytic (and Monte-Carlo) SNR gain")
    sp.add_argument("design", nargs="?")
    sp.add_argument("--uniform", type=int, metavar="N")
    sp.add_argument("--mc", nargs=3, metavar=("TRIALS", "SIGMA", "SEED"))
    sp.set_defaults(func=cmd_snr)

    sp = sub.add_parser("simulate", help="write a synthetic fringe stack")
    sp.add_argument("--scene", choices=SCENES, default="quadratic")
    sp.add_argument("--params", type=float_list, default=[3 * np.pi])
    sp.add_argument("--width", type=int, default=128)
    sp.add_argument("--height", type=int, default=128)
    add_steps(sp)
    sp.add_argument("--harmonics", type=harmonic_list, default=[(1, 1.0)], metavar="K:B,...")
    sp.add_argument("--background", type=float)
    sp.add_argument("--sigma", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("demodulate", help="apply a design to a stack")
    sp.add_argument("stack")
    sp.add_argument("design")
    sp.add_argument("--out", required=True)
    sp.add_argument("--remove-piston", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_demodulate)

    sp = sub.add_parser("compare", help="NL-PSA versus PCA on a stack with ground truth")
    sp.add_argument("stack")
    sp.add_argument("design")
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_compare)
    return p


def _join_list_values(argv):
    # "--zeros -2,-1" would otherwise be parsed as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_list_values(argv))
    try:
        args.func(args)
    except UsageError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except IOFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
