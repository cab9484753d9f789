"""Command-line interface: ``qpercept {train,eval,verify,info,decompose,demo}``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats
from .dirac import format_state, parse_state
from .errors import DimensionError, NotFoundError, NumericalError, QPerceptError
from .gatezoo import (
    GATE_NAMES,
    REFERENCE_ITERATIVE,
    REFERENCE_W_NEW,
    REFERENCE_WEIGHTS,
    builtin_dataset,
    verify_truth_table,
)
from .linalg import UNITARY_TOL, identity, unitarity_residual
from .perceptron import (
    DEFAULT_ETA,
    DEFAULT_ITERATIONS,
    DEFAULT_W0,
    IterativeConfig,
    Mode,
    build_model,
    forward_raw,
    iterative_train,
    predict,
    synthesize_weights,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

DISPLAY_TOL = 1e-10


class InputError(QPerceptError):
    pass


def fmt_scalar(z):
    z = complex(z)
    re_s = f"{z.real:.8g}" if abs(z.real) > 1e-15 else "0"
    if abs(z.imag) <= 1e-15:
        return re_s
    return f"{re_s}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.8g}i"


def fmt_matrix(m):
    m = np.atleast_2d(m)
    return "[" + ", ".join("[" + ", ".join(fmt_scalar(z) for z in row) + "]" for row in m) + "]"


def fmt_matrix_block(m, indent="  "):
    cells = [[fmt_scalar(z) for z in row] for row in np.atleast_2d(m)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + "  ".join(c.rjust(width) for c in row) for row in cells)


def fmt_sci(x):
    """Compact scientific notation: 0.0e0, 2.2e-16."""
    mant, exp = f"{x:.1e}".split("e")
    return f"{mant}e{int(exp)}"


def fmt_sigma(sv):
    return ", ".join(f"{s:.8g}" for s in sv)


def _unitary_label(residual, tol):
    return "UNITARY" if residual <= tol else "NOT UNITARY"


def _default_w0(rows, cols):
    if (rows, cols) == (2, 2):
        return np.array(DEFAULT_W0, dtype=complex)
    return identity(rows, cols)


def _load_dataset(path):
    try:
        return formats.load_dataset(path)
    except OSError as exc:
        raise InputError(f"cannot read dataset {path}: {exc.strerror}") from None


def _load_model(path):
    try:
        return formats.load_model(path)
    except OSError as exc:
        raise InputError(f"cannot read model {path}: {exc.strerror}") from None


def _print_model_summary(model, tol, out):
    res = unitarity_residual(model.raw_w)
    print(f"mode: {model.mode.value}", file=out)
    print(f"shape: {model.raw_w.shape[0]}x{model.raw_w.shape[1]}", file=out)
    print(f"unitarity residual: {fmt_sci(res)} ({_unitary_label(res, tol)})", file=out)
    print(f"singular values: {fmt_sigma(model.singular_values)}", file=out)


def cmd_train(args, out):
    ts = _load_dataset(args.dataset)
    out_path = Path(args.out) if args.out else Path(args.dataset).with_suffix(".qpm")
    if args.mode == "analytic":
        w = synthesize_weights(ts, scale=args.scale)
        print(f"W = {fmt_matrix(w)}", file=out)
    else:
        pair = ts.pairs[args.pair]
        cfg = IterativeConfig(
            eta=args.eta,
            iterations=args.iters,
            initial_weights=_default_w0(ts.target_dim, ts.input_dim),
        )
        w, _ = iterative_train(cfg, pair.input, pair.target)
        res = unitarity_residual(w)
        print(f"iterative rule, pair {args.pair}, eta={args.eta}, {args.iters} iterations", file=out)
        print(f"W = {fmt_matrix(w)}", file=out)
        print(_unitary_label(res, args.tol), file=out)
    model = build_model(w, tol=args.tol)
    _print_model_summary(model, args.tol, out)
    formats.save_model(model, out_path)
    print(f"model written to {out_path}", file=out)
    return EXIT_OK


def cmd_eval(args, out):
    model = _load_model(args.model)
    v = parse_state(args.state)
    if v.size != model.input_dim:
        raise DimensionError(f"state has dim {v.size}, model expects {model.input_dim}")
    result = forward_raw(model, v) if args.raw else predict(model, v, force_measure=args.force_measure)
    print(format_state(result, DISPLAY_TOL), file=out)
    return EXIT_OK


def _print_report(report, out):
    rows = [("input", "expected", "predicted", "fidelity", "")]
    for r in report.records:
        rows.append(
            (
                r.input_label,
                format_state(r.expected, DISPLAY_TOL),
                format_state(r.predicted, DISPLAY_TOL) or "0",
                f"{r.fidelity:.10f}",
                "ok" if r.passed else "FAIL <--",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)) + "  " + row[4], file=out)
    print(
        f"residuals: raw {fmt_sci(report.raw_residual)}, F {fmt_sci(report.f_hat_residual)}, "
        f"W_new {fmt_sci(report.w_new_residual)}",
        file=out,
    )
    print(report.summary(), file=out)


def cmd_verify(args, out):
    model = _load_model(args.model)
    ts = _load_dataset(args.dataset)
    if ts.input_dim != model.input_dim or ts.target_dim != model.output_dim:
        raise DimensionError(
            f"dataset maps {ts.input_dim}->{ts.target_dim}, model maps "
            f"{model.input_dim}->{model.output_dim}"
        )
    report = verify_truth_table(model, ts, force_measure=args.force_measure)
    _print_report(report, out)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_info(args, out):
    model = _load_model(args.model)
    res = unitarity_residual(model.raw_w)
    print(
        f"mode: {model.mode.value}, residual {fmt_sci(res)}, σ = {fmt_sigma(model.singular_values)}",
        file=out,
    )
    print(f"input dim {model.input_dim}, output dim {model.output_dim}", file=out)
    for label, m in (("F", model.f_hat), ("Sigma_new", model.sigma_new), ("W_new", model.w_new)):
        print(f"{label}: {m.shape[0]}x{m.shape[1]}, unitarity residual {fmt_sci(unitarity_residual(m))}", file=out)
    print(f"threshold: {model.measurement_threshold:g}", file=out)
    return EXIT_OK


def _print_decomposition(model, out):
    print(f"singular values: {fmt_sigma(model.singular_values)}", file=out)
    for label, m in (("F", model.f_hat), ("Sigma_new", model.sigma_new), ("W_new", model.w_new)):
        print(f"{label} =", file=out)
        print(fmt_matrix_block(m), file=out)


def cmd_decompose(args, out):
    model = _load_model(args.model)
    forced = build_model(model.raw_w, force_decompose=True, threshold=model.measurement_threshold)
    _print_decomposition(forced, out)
    return EXIT_OK


def _compare(label, got, ref, out):
    if got.shape != ref.shape:
        print(f"  {label}: shape {got.shape} vs reference {ref.shape}", file=out)
        return
    diff = np.abs(got - ref)
    bad = [tuple(int(i) for i in idx) for idx in np.argwhere(diff > 1e-6)]
    status = "match" if not bad else f"DIFFER at {bad}"
    print(f"  {label}: max |diff| {fmt_sci(float(diff.max()))} -> {status}", file=out)


def _compare_w_new(got, ref, rank, out):
    # rows past the rank span the null space, where any orthonormal basis is valid
    _compare(f"W_new rows 0..{rank - 1} vs reference", got[:rank], ref[:rank], out)
    tail_got, tail_ref = got[rank:], ref[rank:]
    if tail_got.shape[0]:
        proj = lambda m: m.conj().T @ m  # noqa: E731
        gap = float(np.linalg.norm(proj(tail_got) - proj(tail_ref)))
        same = "same subspace" if gap < 1e-9 else "DIFFERENT subspace"
        print(f"  W_new remaining rows: projector gap {fmt_sci(gap)} -> {same}", file=out)


def cmd_demo(args, out):
    spec = builtin_dataset(args.gate)
    ts = spec.training_set
    print(f"== {spec.name}: {spec.description} ({len(ts)} pairs)", file=out)

    pair = ts.pairs[spec.demo_pair]
    cfg = IterativeConfig(
        eta=args.eta, iterations=args.iters, initial_weights=_default_w0(ts.target_dim, ts.input_dim)
    )
    w_it, _ = iterative_train(cfg, pair.input, pair.target)
    res_it = unitarity_residual(w_it)
    print(
        f"\n-- iterative rule on pair {format_state(pair.input)} -> {format_state(pair.target)}, "
        f"eta={cfg.eta}, {cfg.iterations} iterations",
        file=out,
    )
    print(fmt_matrix_block(w_it), file=out)
    print(f"  residual {fmt_sci(res_it)}: {_unitary_label(res_it, args.tol)}", file=out)
    if spec.name in REFERENCE_ITERATIVE and (cfg.eta, cfg.iterations) == (DEFAULT_ETA, DEFAULT_ITERATIONS):
        _compare("vs reference", w_it, REFERENCE_ITERATIVE[spec.name], out)

    w = synthesize_weights(ts, scale=spec.scale)
    res = unitarity_residual(w)
    print(f"\n-- analytic weight{' (scaled by 1/sqrt(N))' if spec.scale else ''}", file=out)
    print(fmt_matrix_block(w), file=out)
    print(f"  residual {fmt_sci(res)}: {_unitary_label(res, args.tol)}", file=out)
    _compare("vs reference", w, REFERENCE_WEIGHTS[spec.name], out)

    model = build_model(w, tol=args.tol)
    print(f"\n-- model: {model.mode.value} (expected {spec.expected_mode.value})", file=out)
    if model.mode is Mode.DECOMPOSED:
        _print_decomposition(model, out)
        if spec.name in REFERENCE_W_NEW:
            rank = int(np.sum(model.singular_values > 1e-12 * model.singular_values[0]))
            _compare_w_new(model.w_new, REFERENCE_W_NEW[spec.name], rank, out)

    print("\n-- truth table", file=out)
    report = verify_truth_table(model, ts)
    _print_report(report, out)
    return EXIT_OK if report.all_passed and model.mode is spec.expected_mode else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="qpercept", description="Quantum perceptron toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def tol_flag(sp):
        sp.add_argument("--tol", type=float, default=UNITARY_TOL, help="unitarity tolerance")

    t = sub.add_parser("train", help="synthesize or iterate weights from a .qds dataset")
    t.add_argument("dataset")
    t.add_argument("--mode", choices=("analytic", "iterative"), default="analytic")
    t.add_argument("--eta", type=float, default=DEFAULT_ETA)
    t.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    t.add_argument("--pair", type=int, default=-1, help="pair index for --mode iterative")
    t.add_argument("--scale", action="store_true", help="scale the weight by 1/sqrt(N)")
    t.add_argument("--out", help="model path (default: dataset with .qpm suffix)")
    tol_flag(t)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="run a model on one state")
    e.add_argument("model")
    e.add_argument("state")
    e.add_argument("--raw", action="store_true", help="skip the measurement threshold")
    e.add_argument("--force-measure", action="store_true", help="threshold even unitary models")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="check a model against a dataset's truth table")
    v.add_argument("model")
    v.add_argument("dataset")
    v.add_argument("--force-measure", action="store_true")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("info", help="summarize a model file")
    i.add_argument("model")
    i.set_defaults(func=cmd_info)

    d = sub.add_parser("decompose", help="print the SVD factors of a model's weight")
    d.add_argument("model")
    d.set_defaults(func=cmd_decompose)

    m = sub.add_parser("demo", help="run a built-in gate end to end")
    m.add_argument("gate", help=f"one of: {', '.join(GATE_NAMES)}")
    m.add_argument("--eta", type=float, default=DEFAULT_ETA)
    m.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    tol_flag(m)
    m.set_defaults(func=cmd_demo)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=err)
        return EXIT_NUMERIC
    except NotFoundError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (QPerceptError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
