"""How far does thresholded readout stretch for many-to-one basis maps?

Each output ket collects exactly ``k`` distinct training inputs. The summed
weight then has orthogonal rows of norm sqrt(k), and after the
rectangular-identity substitution the readout amplitude on the correct output
is 1/sqrt(k). A 0.5 threshold accepts k <= 3; at k = 4 the amplitude lands
exactly on the threshold and the strict comparison rejects it.

    python scripts/fan_in_study.py --trials 100 --seed 0
"""

import argparse
from dataclasses import dataclass

import numpy as np

from qpercept.dirac import basis_ket
from qpercept.gatezoo import verify_truth_table
from qpercept.perceptron import TrainingPair, TrainingSet, build_model, forward_raw, synthesize_weights


@dataclass
class StudyConfig:
    n_in: int = 5
    n_out: int = 2
    trials: int = 100
    seed: int = 0
    threshold: float = 0.5


def random_map(rng, cfg, k):
    dim_in, dim_out = 2**cfg.n_in, 2**cfg.n_out
    inputs = rng.permutation(dim_in)[: k * dim_out]
    outs = np.repeat(np.arange(dim_out), k)
    return TrainingSet(
        tuple(
            TrainingPair(basis_ket(format(i, f"0{cfg.n_in}b")), basis_ket(format(o, f"0{cfg.n_out}b")))
            for i, o in zip(inputs, outs)
        )
    )


def run(cfg):
    rng = np.random.default_rng(cfg.seed)
    dim_in, dim_out = 2**cfg.n_in, 2**cfg.n_out
    print(f"{cfg.n_in} -> {cfg.n_out} qubits, threshold {cfg.threshold}, {cfg.trials} random maps per row")
    print("fan-in  1/sqrt(k)  readout amplitude (min..max)  pair pass rate")
    for k in range(1, dim_in // dim_out + 1):
        amps, passed, total = [], 0, 0
        for _ in range(cfg.trials):
            ts = random_map(rng, cfg, k)
            model = build_model(synthesize_weights(ts), threshold=cfg.threshold)
            rep = verify_truth_table(model, ts)
            passed += rep.pass_count
            total += rep.total
            amps += [float(np.max(forward_raw(model, p.input).real)) for p in ts]
        print(
            f"{k:6d}  {1 / np.sqrt(k):9.6f}  {min(amps):.15f}..{max(amps):.15f}  {passed / total:14.3f}"
        )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description="fan-in limit of thresholded readout")
    ap.add_argument("--n-in", type=int, default=StudyConfig.n_in)
    ap.add_argument("--n-out", type=int, default=StudyConfig.n_out)
    ap.add_argument("--trials", type=int, default=StudyConfig.trials)
    ap.add_argument("--seed", type=int, default=StudyConfig.seed)
    ap.add_argument("--threshold", type=float, default=StudyConfig.threshold)
    a = ap.parse_args()
    run(StudyConfig(a.n_in, a.n_out, a.trials, a.seed, a.threshold))
