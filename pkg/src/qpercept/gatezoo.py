"""Built-in training sets for the five reference gates and a truth-table checker."""

from dataclasses import dataclass

import numpy as np

from .dirac import basis_ket, format_state, n_qubits_of
from .errors import DimensionError, NotFoundError
from .linalg import as_state, inner, norm, unitarity_residual
from .perceptron import Mode, TrainingPair, TrainingSet, predict

PASS_FIDELITY = 1.0 - 1e-9

_S = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class GateSpec:
    name: str
    training_set: TrainingSet
    expected_mode: Mode
    # multiply the synthesized weight by 1/sqrt(N) as in the superposed-input display
    scale: bool = False
    description: str = ""
    # pair driven by the single-pair iterative rule in demos
    demo_pair: int = -1


def _basis_pairs(table):
    return TrainingSet(tuple(TrainingPair(basis_ket(a), basis_ket(b)) for a, b in table))


def _not():
    return _basis_pairs([("0", "1"), ("1", "0")])


def _hadamard():
    plus = np.array([_S, _S], dtype=complex)
    minus = np.array([_S, -_S], dtype=complex)
    return TrainingSet((TrainingPair(basis_ket("0"), plus), TrainingPair(basis_ket("1"), minus)))


def _cnot():
    return _basis_pairs([("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")])


def _cswap():
    # first qubit high -> swap the other two; output drops the control
    return _basis_pairs(
        [
            ("000", "00"),
            ("001", "01"),
            ("010", "10"),
            ("011", "11"),
            ("100", "00"),
            ("101", "10"),
            ("110", "01"),
            ("111", "11"),
        ]
    )


def _xor():
    return _basis_pairs([("00", "0"), ("01", "1"), ("10", "1"), ("11", "0")])


_BUILDERS = {
    "not": (_not, Mode.UNITARY, False, "quantum NOT, 1 qubit -> 1 qubit", 1),
    "hadamard": (_hadamard, Mode.UNITARY, False, "Hadamard, 1 qubit -> 1 qubit", 0),
    "cnot": (_cnot, Mode.UNITARY, False, "controlled NOT, 2 qubits -> 2 qubits", -1),
    "cswap": (_cswap, Mode.DECOMPOSED, False, "dissipative controlled swap, 3 qubits -> 2 qubits", -1),
    "xor": (_xor, Mode.DECOMPOSED, True, "XOR, 2 qubits -> 1 qubit", -1),
}

# Reference values the demos compare against. The controlled-swap entry is
# the matrix as printed, which puts row 1's second one in column 5 instead of 6
# and so disagrees with its own dataset; it is kept verbatim so the discrepancy
# shows up in reports instead of being silently patched.
REFERENCE_ITERATIVE = {
    "not": np.array([[1.0, 0.9282102], [0.0, -0.0717898]]),
    "hadamard": np.array([[0.72813353, 0.0], [0.65634373, -1.0]]),
}

_CSWAP_PRINTED = np.zeros((4, 8))
for _r, _c in [(0, 0), (0, 4), (1, 1), (1, 5), (2, 2), (2, 5), (3, 3), (3, 7)]:
    _CSWAP_PRINTED[_r, _c] = 1.0

REFERENCE_WEIGHTS = {
    "not": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "hadamard": _S * np.array([[1.0, 1.0], [1.0, -1.0]]),
    "cnot": np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 0, 1.0], [0, 0, 1.0, 0]]),
    "cswap": _CSWAP_PRINTED,
    "xor": 0.5 * np.array([[1.0, 0, 0, 1.0], [0, 1.0, 1.0, 0]]),
}

REFERENCE_W_NEW = {
    "xor": _S * np.array([[1.0, 0, 0, 1], [0, 1, 1, 0], [0, -1, 1, 0], [-1, 0, 0, 1]]),
    "cswap": _S
    * np.array(
        [
            [1.0, 0, 0, 0, 1, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 1],
            [-1, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, -1, 0, 0, 1, 0, 0],
            [0, -1, 0, 0, 0, 0, 1, 0],
            [0, 0, 0, -1, 0, 0, 0, 1],
        ]
    ),
}

GATE_NAMES = tuple(_BUILDERS)


def builtin_dataset(name):
    try:
        build, mode, scale, desc, demo_pair = _BUILDERS[name.lower()]
    except KeyError:
        raise NotFoundError(f"unknown gate {name!r}; valid names: {', '.join(GATE_NAMES)}") from None
    return GateSpec(name.lower(), build(), mode, scale, desc, demo_pair)


def fidelity(a, b):
    """``|<a|b>|^2``."""
    a, b = as_state(a), as_state(b)
    if a.size != b.size:
        raise DimensionError(f"fidelity of dims {a.size} and {b.size}")
    return abs(inner(a, b)) ** 2


@dataclass(frozen=True)
class PairRecord:
    input_label: str
    expected: np.ndarray
    predicted: np.ndarray
    fidelity: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    records: tuple
    raw_residual: float
    f_hat_residual: float
    w_new_residual: float

    @property
    def pass_count(self):
        return sum(r.passed for r in self.records)

    @property
    def total(self):
        return len(self.records)

    @property
    def all_passed(self):
        return self.pass_count == self.total

    def summary(self):
        return f"{self.pass_count}/{self.total} {'PASS' if self.all_passed else 'FAIL'}"


def _label(v):
    try:
        n_qubits_of(v.size)
        return format_state(v, 1e-9)
    except DimensionError:
        return np.array2string(v)


def verify_truth_table(model, ts, force_measure=False):
    """Predict every training input and score it against its target by fidelity.

    Outputs are renormalised before scoring; a zero prediction always fails.
    """
    records = []
    for pair in ts:
        out = predict(model, pair.input, force_measure=force_measure)
        if out.size != pair.target.size:
            raise DimensionError(f"model output dim {out.size} vs target dim {pair.target.size}")
        n = norm(out)
        fid = fidelity(out / n, pair.target) if n > 0 else 0.0
        records.append(
            PairRecord(_label(pair.input), pair.target, out, fid, n > 0 and fid >= PASS_FIDELITY)
        )
    return VerificationReport(
        records=tuple(records),
        raw_residual=unitarity_residual(model.raw_w),
        f_hat_residual=unitarity_residual(model.f_hat),
        w_new_residual=unitarity_residual(model.w_new),
    )
