"""Command-line interface: ``eedpaint inpaint | sparsify | diagnose``.

Exit codes: 0 success/converged, 1 error (bad input, unsolvable mask, I/O),
2 fixed-point non-convergence within the outer-iteration budget.
"""

import argparse
import sys
import time

import numpy as np

from . import __version__
from .diagnostics import (
    audit_iteration,
    boundedness_threshold,
    check_energy_chain,
    check_smoothed_gradient_bound,
    estimate_domain_constants,
    one_step_constants,
)
from .fixed_point import FixedPointConfig, iterate
from .pgm import read_image, read_known_mask, write_image, write_known_mask
from .report import build_report, dump_report, file_sha256
from .solver import SolverConfig
from .sparsify import SparsifyConfig, probabilistic_sparsify
from .tensor import EedParams
from .validation import as_data_image, as_mask


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_model_flags(parser):
    parser.add_argument("--sigma", type=float, default=0.8, help="pre-smoothing scale")
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0,
                        help="contrast parameter")
    parser.add_argument("--jtol", type=float, default=1e-8,
                        help="fixed-point defect stopping threshold")
    parser.add_argument("--max-outer", type=int, default=100,
                        help="outer iteration budget")
    parser.add_argument("--cg-tol", type=float, default=1e-10,
                        help="relative residual target of the linear solver")


def build_parser():
    parser = _Parser(prog="eedpaint",
                     description="Edge-enhancing diffusion image inpainting")
    parser.add_argument("--version", action="version", version=f"eedpaint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_in = sub.add_parser("inpaint", help="fill the unknown pixels of an image")
    p_in.add_argument("--image", required=True, help="input PGM (P5/P2)")
    p_in.add_argument("--mask", required=True, help="mask PGM; >= 128 means known")
    p_in.add_argument("--out", required=True, help="output PGM path")
    _add_model_flags(p_in)
    p_in.add_argument("--report", help="write a JSON run report here")
    p_in.add_argument("--diagnostics", action="store_true",
                      help="include bound audits in the report")
    p_in.add_argument("--seed", type=int, default=0,
                      help="seed for the diagnostics constant estimation")

    p_sp = sub.add_parser("sparsify", help="select a sparse known-pixel mask")
    p_sp.add_argument("--image", required=True)
    p_sp.add_argument("--density", type=float, default=0.10,
                      help="target fraction of known pixels")
    p_sp.add_argument("--out-mask", required=True, help="output mask PGM path")
    p_sp.add_argument("--seed", type=int, default=0)
    p_sp.add_argument("--candidate-fraction", type=float, default=0.02,
                      help="fraction of the mask removed per round")
    p_sp.add_argument("--return-fraction", type=float, default=0.01,
                      help="fraction of the mask re-added per round")
    _add_model_flags(p_sp)
    p_sp.add_argument("--report", help="write a JSON run report here")

    p_dg = sub.add_parser("diagnose", help="estimate constants and audit the bounds")
    p_dg.add_argument("--image", required=True)
    p_dg.add_argument("--mask", required=True)
    p_dg.add_argument("--sigma-sweep", metavar="A:B:N",
                      help="geometric sweep over N smoothing scales from A to B")
    _add_model_flags(p_dg)
    p_dg.add_argument("--samples", type=int, default=200,
                      help="sample count for constant estimation")
    p_dg.add_argument("--seed", type=int, default=0)
    p_dg.add_argument("--report", help="write the JSON report here (default: stdout)")
    return parser


def _load_problem(image_path, mask_path):
    f = as_data_image(read_image(image_path), name="image")
    known = read_known_mask(mask_path)
    return f, as_mask(known, shape=f.shape)


def _configs(args):
    return (
        EedParams(sigma=args.sigma, lam=args.lam),
        FixedPointConfig(j_tol=args.jtol, max_outer=args.max_outer),
        SolverConfig(cg_tol=args.cg_tol),
    )


def _params_echo(args, command):
    echo = {"command": command}
    for key, value in sorted(vars(args).items()):
        if key not in ("command", "func"):
            echo[key] = value
    return echo


def cmd_inpaint(args):
    timings = {}
    t0 = time.perf_counter()
    f, known = _load_problem(args.image, args.mask)
    timings["read_ms"] = 1000.0 * (time.perf_counter() - t0)

    params, fp_cfg, solver_cfg = _configs(args)
    t1 = time.perf_counter()
    u, it_report = iterate(f, known, params=params, cfg=fp_cfg, solver_cfg=solver_cfg)
    timings["solve_ms"] = 1000.0 * (time.perf_counter() - t1)

    t2 = time.perf_counter()
    write_image(args.out, u)
    timings["write_ms"] = 1000.0 * (time.perf_counter() - t2)

    bounds = []
    if args.diagnostics:
        t3 = time.perf_counter()
        constants = estimate_domain_constants(known, seed=args.seed)
        bounds = audit_iteration(it_report, f, known, params, constants)
        bounds.append(check_energy_chain(u, f, known, params, solver_cfg))
        bounds.append(check_smoothed_gradient_bound(u, known, params.sigma))
        timings["diagnostics_ms"] = 1000.0 * (time.perf_counter() - t3)
    timings["total_ms"] = 1000.0 * (time.perf_counter() - t0)

    if args.report:
        report = build_report(
            __version__,
            _params_echo(args, "inpaint"),
            iterations=[r.to_dict() for r in it_report.records],
            bounds=bounds,
            timings=timings,
            checksums={
                "image": file_sha256(args.image),
                "mask": file_sha256(args.mask),
                "output": file_sha256(args.out),
            },
            outcome={
                "status": it_report.status,
                "converged_index": it_report.converged_index,
                "final_defect": it_report.records[-1].defect,
            },
        )
        dump_report(report, args.report)
    return 0 if it_report.status == "converged" else 2


def cmd_sparsify(args):
    timings = {}
    t0 = time.perf_counter()
    f = as_data_image(read_image(args.image), name="image")
    timings["read_ms"] = 1000.0 * (time.perf_counter() - t0)

    cfg = SparsifyConfig(
        target_density=args.density,
        candidate_fraction=args.candidate_fraction,
        return_fraction=args.return_fraction,
        seed=args.seed,
    )
    params, fp_cfg, solver_cfg = _configs(args)
    t1 = time.perf_counter()
    known = probabilistic_sparsify(f, cfg=cfg, params=params, fp_cfg=fp_cfg,
                                   solver_cfg=solver_cfg)
    timings["sparsify_ms"] = 1000.0 * (time.perf_counter() - t1)

    t2 = time.perf_counter()
    write_known_mask(args.out_mask, known)
    timings["write_ms"] = 1000.0 * (time.perf_counter() - t2)
    timings["total_ms"] = 1000.0 * (time.perf_counter() - t0)

    if args.report:
        report = build_report(
            __version__,
            _params_echo(args, "sparsify"),
            timings=timings,
            checksums={
                "image": file_sha256(args.image),
                "mask": file_sha256(args.out_mask),
            },
            outcome={"density": float(known.mean()), "known_pixels": int(known.sum())},
        )
        dump_report(report, args.report)
    return 0


def _sweep_values(args):
    if args.sigma_sweep is None:
        return [args.sigma]
    try:
        a, b, n = args.sigma_sweep.split(":")
        a, b, n = float(a), float(b), int(n)
        if a <= 0 or b <= 0 or n < 1:
            raise ValueError
    except ValueError:
        raise ValueError(f"bad --sigma-sweep {args.sigma_sweep!r}, expected A:B:N") from None
    return [float(s) for s in np.geomspace(a, b, n)]


def cmd_diagnose(args):
    timings = {}
    t0 = time.perf_counter()
    f, known = _load_problem(args.image, args.mask)
    constants = estimate_domain_constants(known, n_samples=args.samples, seed=args.seed)
    timings["constants_ms"] = 1000.0 * (time.perf_counter() - t0)

    _, fp_cfg, solver_cfg = _configs(args)
    bounds = []
    regimes = {}
    t1 = time.perf_counter()
    for sigma in _sweep_values(args):
        params = EedParams(sigma=sigma, lam=args.lam)
        threshold, regime = boundedness_threshold(f, known, params, constants.poincare)
        offset, gain = one_step_constants(f, known, params, constants)
        regimes[f"{sigma:g}"] = {
            "threshold": threshold,
            "regime": regime,
            "one_step_offset": offset,
            "one_step_gain": gain,
        }
        u, it_report = iterate(f, known, params=params, cfg=fp_cfg,
                               solver_cfg=solver_cfg)
        for bound in audit_iteration(it_report, f, known, params, constants):
            bound.context["status"] = it_report.status
            bounds.append(bound)
        bounds.append(check_energy_chain(u, f, known, params, solver_cfg))
        bounds.append(check_smoothed_gradient_bound(u, known, sigma))
    timings["audit_ms"] = 1000.0 * (time.perf_counter() - t1)
    timings["total_ms"] = 1000.0 * (time.perf_counter() - t0)

    report = build_report(
        __version__,
        _params_echo(args, "diagnose"),
        bounds=bounds,
        timings=timings,
        checksums={"image": file_sha256(args.image), "mask": file_sha256(args.mask)},
        outcome={
            "poincare_constant": constants.poincare,
            "trace_constant": constants.trace,
            "regimes": regimes,
        },
    )
    text = dump_report(report, args.report)
    if text is not None:
        print(text)
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    handlers = {"inpaint": cmd_inpaint, "sparsify": cmd_sparsify, "diagnose": cmd_diagnose}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"eedpaint: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
