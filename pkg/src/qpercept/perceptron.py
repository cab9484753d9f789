"""Quantum perceptron: analytic weight synthesis, iterative rule, unitarisation, measurement.

The analytic route sums ``|y_j><x_j^+|`` over the training pairs, where
``x_j^+`` is the pseudoinverse of the input ket. When the summed weight is
not unitary it is split by SVD into ``F Sigma W_new``; the singular values
are then replaced by a rectangular identity and predictions are read out
through a componentwise threshold.

A classical +/-1 perceptron is included as the reference point for the
linearly separable vs. XOR contrast.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .decomp import pinv_vector, rect_identity, svd_full
from .errors import DimensionError, PreconditionError
from .linalg import (
    UNITARY_TOL,
    apply,
    as_matrix,
    as_state,
    conj_transpose,
    identity,
    is_normalized,
    normalize,
    outer_product,
    unitarity_residual,
)

DEFAULT_THRESHOLD = 0.5
DEFAULT_ETA = 0.1
DEFAULT_ITERATIONS = 25
DEFAULT_W0 = ((1.0, 0.0), (0.0, -1.0))


class Mode(enum.Enum):
    UNITARY = "Unitary"
    DECOMPOSED = "Decomposed"


@dataclass(frozen=True)
class TrainingPair:
    input: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        x, y = as_state(self.input), as_state(self.target)
        for name, v in (("input", x), ("target", y)):
            if not is_normalized(v):
                raise PreconditionError(f"training {name} is not normalized: {v}")
        object.__setattr__(self, "input", x)
        object.__setattr__(self, "target", y)

    @classmethod
    def from_states(cls, x, y):
        """Normalise both sides first; used for hand-written datasets with rounded amplitudes."""
        return cls(normalize(x), normalize(y))


@dataclass(frozen=True)
class TrainingSet:
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not pairs:
            raise PreconditionError("training set is empty")
        in_dim, out_dim = pairs[0].input.size, pairs[0].target.size
        for k, p in enumerate(pairs):
            if p.input.size != in_dim or p.target.size != out_dim:
                raise DimensionError(
                    f"pair {k} has dims {p.input.size}->{p.target.size}, "
                    f"expected {in_dim}->{out_dim}"
                )
        object.__setattr__(self, "pairs", pairs)
        self._warn_conflicts()

    def _warn_conflicts(self):
        for i, a in enumerate(self.pairs):
            for b in self.pairs[i + 1 :]:
                if np.allclose(a.input, b.input) and not np.allclose(a.target, b.target):
                    warnings.warn(
                        "duplicate training input with conflicting targets; "
                        "the synthesized weight cannot interpolate both",
                        stacklevel=3,
                    )
                    return

    @classmethod
    def from_states(cls, pairs):
        return cls(tuple(TrainingPair.from_states(x, y) for x, y in pairs))

    @property
    def input_dim(self):
        return self.pairs[0].input.size

    @property
    def target_dim(self):
        return self.pairs[0].target.size

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class IterativeConfig:
    eta: float = DEFAULT_ETA
    iterations: int = DEFAULT_ITERATIONS
    initial_weights: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_W0, dtype=complex))

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise PreconditionError(f"learning rate must lie in (0, 1], got {self.eta}")
        if self.iterations < 0:
            raise PreconditionError("iterations must be non-negative")
        object.__setattr__(self, "initial_weights", as_matrix(self.initial_weights))


@dataclass(frozen=True)
class PerceptronModel:
    """Either a single unitary weight or the triple ``f_hat @ sigma_new @ w_new``.

    ``raw_w`` always holds the synthesized weight the model was built from
    and ``singular_values`` its spectrum (empty for models loaded without one).
    """

    mode: Mode
    f_hat: np.ndarray
    sigma_new: np.ndarray
    w_new: np.ndarray
    raw_w: np.ndarray
    measurement_threshold: float = DEFAULT_THRESHOLD
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        for name in ("f_hat", "sigma_new", "w_new", "raw_w"):
            object.__setattr__(self, name, as_matrix(getattr(self, name)))
        rows = self.f_hat.shape[0]
        cols = self.w_new.shape[1]
        if (
            self.f_hat.shape[1] != self.sigma_new.shape[0]
            or self.sigma_new.shape[1] != self.w_new.shape[0]
            or (rows, cols) != self.raw_w.shape
        ):
            raise DimensionError(
                f"factor shapes {self.f_hat.shape}, {self.sigma_new.shape}, {self.w_new.shape} "
                f"do not compose to {self.raw_w.shape}"
            )

    @property
    def operator(self):
        """The effective linear map ``F Sigma_new W_new``."""
        return self.f_hat @ self.sigma_new @ self.w_new

    @property
    def input_dim(self):
        return self.w_new.shape[1]

    @property
    def output_dim(self):
        return self.f_hat.shape[0]


def synthesize_weights(ts, scale=False):
    """Sum of ``target_j (x) pinv(input_j)`` over the training pairs.

    With ``scale=True`` the sum is multiplied by ``1/sqrt(N)``, the amplitude
    each input carries in a uniform superposition of the N inputs.
    """
    w = np.zeros((ts.target_dim, ts.input_dim), dtype=np.complex128)
    for pair in ts:
        w += outer_product(pair.target, pinv_vector(pair.input))
    if scale:
        w /= np.sqrt(len(ts))
    return w


def iterative_step(w, x, d, eta):
    """One update ``w + eta (d - w x) x^H``."""
    w, x, d = as_matrix(w), as_state(x), as_state(d)
    if w.shape != (d.size, x.size):
        raise DimensionError(f"weight {w.shape} does not map dim {x.size} to dim {d.size}")
    err = d - apply(w, x)
    return w + eta * outer_product(err, conj_transpose(x))


def iterative_train(cfg, x, d):
    """Repeat :func:`iterative_step` on one pair; return the final weight and per-step trace."""
    w = cfg.initial_weights
    trace = []
    for _ in range(cfg.iterations):
        w = iterative_step(w, x, d, cfg.eta)
        trace.append(w)
    return w, trace


def build_model(w, tol=UNITARY_TOL, threshold=DEFAULT_THRESHOLD, force_decompose=False):
    w = as_matrix(w)
    rows, cols = w.shape
    if not force_decompose and unitarity_residual(w) <= tol:
        sv = svd_full(w).sigma
        return PerceptronModel(
            mode=Mode.UNITARY,
            f_hat=identity(rows),
            sigma_new=identity(rows),
            w_new=w.copy(),
            raw_w=w,
            measurement_threshold=threshold,
            singular_values=sv,
        )
    res = svd_full(w)
    return PerceptronModel(
        mode=Mode.DECOMPOSED,
        f_hat=res.u,
        sigma_new=rect_identity(rows, cols),
        w_new=res.v_dagger,
        raw_w=w,
        measurement_threshold=threshold,
        singular_values=res.sigma,
    )


def forward_raw(model, x):
    x = as_state(x)
    if x.size != model.input_dim:
        raise DimensionError(f"model expects dim {model.input_dim}, got {x.size}")
    return apply(model.f_hat, apply(model.sigma_new, apply(model.w_new, x)))


def measure(v, threshold=DEFAULT_THRESHOLD):
    """1 where the real part strictly exceeds ``threshold``, else 0."""
    v = as_state(v)
    return (v.real > threshold).astype(np.complex128)


def predict(model, x, force_measure=False):
    out = forward_raw(model, x)
    if model.mode is Mode.DECOMPOSED or force_measure:
        return measure(out, model.measurement_threshold)
    return out


@dataclass
class ClassicalPerceptron:
    weights: np.ndarray
    threshold: float = 0.0
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).copy()


def classical_forward(p, inputs):
    x = np.asarray(inputs, dtype=float)
    if x.shape != p.weights.shape:
        raise DimensionError(f"{x.size} inputs for {p.weights.size} weights")
    return 1 if float(p.weights @ x) >= p.threshold else -1


def classical_train(p, dataset, epochs):
    """Perceptron rule ``w_k += eta (d - y) x_k`` with a fixed threshold.

    Returns a new perceptron and whether some epoch finished without updates.
    """
    q = ClassicalPerceptron(p.weights, p.threshold, p.eta)
    for _ in range(epochs):
        updates = 0
        for inputs, target in dataset:
            y = classical_forward(q, inputs)
            if y != target:
                q.weights += q.eta * (target - y) * np.asarray(inputs, dtype=float)
                updates += 1
        if updates == 0:
            return q, True
    return q, False
