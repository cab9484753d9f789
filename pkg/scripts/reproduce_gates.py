"""Run every built-in gate through both training routes and print a summary table.

    python scripts/reproduce_gates.py [--verbose]
"""

import argparse
import io

import numpy as np

from qpercept.cli import main
from qpercept.gatezoo import GATE_NAMES, builtin_dataset, verify_truth_table
from qpercept.linalg import unitarity_residual
from qpercept.perceptron import IterativeConfig, build_model, iterative_train, synthesize_weights


def summarize(name):
    spec = builtin_dataset(name)
    ts = spec.training_set
    pair = ts.pairs[spec.demo_pair]
    w0 = np.array([[1, 0], [0, -1]]) if (ts.target_dim, ts.input_dim) == (2, 2) else np.eye(ts.target_dim, ts.input_dim)
    w_it, _ = iterative_train(IterativeConfig(0.1, 25, w0), pair.input, pair.target)
    w = synthesize_weights(ts, scale=spec.scale)
    model = build_model(w)
    rep = verify_truth_table(model, ts)
    return {
        "gate": name,
        "iterative residual": f"{unitarity_residual(w_it):.3g}",
        "analytic residual": f"{unitarity_residual(w):.3g}",
        "mode": model.mode.value,
        "sigma": ", ".join(f"{s:.6g}" for s in model.singular_values),
        "truth table": rep.summary(),
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--verbose", action="store_true", help="also print each full demo report")
    args = ap.parse_args()

    rows = [summarize(n) for n in GATE_NAMES]
    cols = list(rows[0])
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in cols}
    print("  ".join(c.ljust(widths[c]) for c in cols))
    for r in rows:
        print("  ".join(r[c].ljust(widths[c]) for c in cols))

    if args.verbose:
        for n in GATE_NAMES:
            buf = io.StringIO()
            main(["demo", n], out=buf)
            print("\n" + buf.getvalue())
