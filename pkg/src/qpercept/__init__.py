"""Quantum perceptron with analytic (pseudoinverse) weights and SVD unitarisation."""

from .decomp import SvdResult, orthonormal_complete, pinv_matrix, pinv_vector, rect_identity, svd_full
from .dirac import KetLabel, basis_ket, format_state, parse_state, uniform_superposition
from .errors import (
    DegenerateInputError,
    DimensionError,
    NotFoundError,
    NumericalError,
    ParseError,
    PreconditionError,
    QPerceptError,
)
from .gatezoo import GATE_NAMES, GateSpec, builtin_dataset, fidelity, verify_truth_table
from .linalg import (
    apply,
    conj_transpose,
    frobenius_distance,
    is_unitary,
    kronecker,
    mat_mul,
    normalize,
    outer_product,
    unitarity_residual,
)
from .perceptron import (
    ClassicalPerceptron,
    IterativeConfig,
    Mode,
    PerceptronModel,
    TrainingPair,
    TrainingSet,
    build_model,
    classical_forward,
    classical_train,
    forward_raw,
    iterative_step,
    iterative_train,
    measure,
    predict,
    synthesize_weights,
)

__version__ = "0.1.0"
