import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import H, X, normalized_states, random_complex
from qpercept.decomp import svd_full
from qpercept.dirac import basis_ket, parse_state
from qpercept.errors import DegenerateInputError, DimensionError, PreconditionError
from qpercept.gatezoo import builtin_dataset
from qpercept.linalg import apply, frobenius_distance, unitarity_residual
from qpercept.perceptron import (
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

S = 1 / np.sqrt(2)
W0 = np.array([[1, 0], [0, -1]], dtype=complex)


def closed_form_column(w0, x, d, eta, t):
    """Unrolled single-pair recurrence: w_t x = d + (w0 x - d)(1 - eta)^t for unit x."""
    return d + (w0 @ x - d) * (1 - eta) ** t


def basis_set(table):
    return TrainingSet(tuple(TrainingPair(basis_ket(a), basis_ket(b)) for a, b in table))


# --- iterative rule -------------------------------------------------------


def test_iterative_step_not_example():
    w1 = iterative_step(W0, basis_ket("1"), basis_ket("0"), 0.1)
    np.testing.assert_allclose(w1, [[1, 0.1], [0, -0.9]], atol=1e-12)


def test_iterative_step_trivial_cases():
    x, d = basis_ket("1"), basis_ket("0")
    np.testing.assert_array_equal(iterative_step(W0, x, d, 0.0), W0)
    np.testing.assert_array_equal(iterative_step(X, x, d, 0.5), X)


def test_iterative_step_dimension_error():
    with pytest.raises(DimensionError):
        iterative_step(W0, basis_ket("01"), basis_ket("0"), 0.1)


def test_iterative_train_not():
    cfg = IterativeConfig(0.1, 25, W0)
    w, trace = iterative_train(cfg, basis_ket("1"), basis_ket("0"))
    assert len(trace) == 25
    np.testing.assert_allclose(w.real, [[1, 0.9282102], [0, -0.0717898]], atol=1e-6)
    # the oracle reproduces the published digits on its own
    col = closed_form_column(W0, basis_ket("1"), basis_ket("0"), 0.1, 25)
    np.testing.assert_allclose(col.real, [0.9282102, -0.0717898], atol=1e-7)


def test_iterative_train_hadamard():
    d = np.array([S, S], dtype=complex)
    w, _ = iterative_train(IterativeConfig(0.1, 25, W0), basis_ket("0"), d)
    np.testing.assert_allclose(w.real, [[0.72813353, 0], [0.65634373, -1]], atol=1e-6)


@pytest.mark.parametrize(
    "x, d", [(basis_ket("1"), basis_ket("0")), (basis_ket("0"), np.array([S, S], dtype=complex))]
)
def test_iterative_matches_closed_form_every_step(x, d):
    _, trace = iterative_train(IterativeConfig(0.1, 25, W0), x, d)
    for t, w in enumerate(trace, start=1):
        np.testing.assert_allclose(w @ x, closed_form_column(W0, x, d, 0.1, t), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(normalized_states(1, 2), st.floats(0.01, 1.0), st.integers(0, 40), st.integers(0, 2**31))
def test_iterative_error_decays_geometrically(x, eta, t, seed):
    rng = np.random.default_rng(seed)
    d = random_complex(rng, 2, 1)[:, 0]
    d /= np.linalg.norm(d)
    w0 = random_complex(rng, 2, x.size)
    w, _ = iterative_train(IterativeConfig(eta, t, w0), x, d)
    lhs = np.linalg.norm(apply(w, x) - d)
    rhs = (1 - eta) ** t * np.linalg.norm(apply(w0, x) - d)
    assert abs(lhs - rhs) <= 1e-9


def test_iterative_config_validation():
    with pytest.raises(PreconditionError):
        IterativeConfig(eta=0.0)
    with pytest.raises(PreconditionError):
        IterativeConfig(eta=1.5)
    with pytest.raises(PreconditionError):
        IterativeConfig(iterations=-1)
    assert IterativeConfig().iterations == 25


# --- analytic synthesis ---------------------------------------------------


def test_synthesize_not():
    np.testing.assert_array_equal(synthesize_weights(builtin_dataset("not").training_set), X)


def test_synthesize_hadamard():
    w = synthesize_weights(builtin_dataset("hadamard").training_set)
    np.testing.assert_allclose(w, H, atol=1e-12)


def test_synthesize_cnot():
    w = synthesize_weights(builtin_dataset("cnot").training_set)
    np.testing.assert_array_equal(w, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def test_synthesize_cswap():
    w = synthesize_weights(builtin_dataset("cswap").training_set)
    expected = np.zeros((4, 8))
    for r, c in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 4), (2, 5), (1, 6), (3, 7)]:
        expected[r, c] = 1
    np.testing.assert_array_equal(w, expected)


def test_synthesize_scale():
    ts = builtin_dataset("xor").training_set
    np.testing.assert_allclose(
        synthesize_weights(ts, scale=True), [[0.5, 0, 0, 0.5], [0, 0.5, 0.5, 0]], atol=1e-16
    )


def test_training_pair_requires_normalized():
    with pytest.raises(PreconditionError):
        TrainingPair(np.array([2.0, 0]), basis_ket("0"))
    p = TrainingPair.from_states(parse_state("0.70710678*|0> + 0.70710678*|1>"), basis_ket("1"))
    np.testing.assert_allclose(p.input, [S, S], atol=1e-15)


def test_zero_input_is_degenerate():
    # TrainingPair rejects zero kets, so go through a hand-built container
    class Raw:
        pairs = (TrainingPair(basis_ket("0"), basis_ket("1")),)
        input_dim = target_dim = 2

        def __iter__(self):
            yield from self.pairs
            yield type("P", (), {"input": np.zeros(2), "target": basis_ket("0")})()

        def __len__(self):
            return 2

    with pytest.raises(DegenerateInputError):
        synthesize_weights(Raw())


def test_training_set_dims():
    with pytest.raises(DimensionError):
        TrainingSet((TrainingPair(basis_ket("0"), basis_ket("0")), TrainingPair(basis_ket("00"), basis_ket("0"))))
    with pytest.raises(PreconditionError):
        TrainingSet(())


def test_conflicting_duplicates_warn():
    with pytest.warns(UserWarning, match="conflicting"):
        basis_set([("0", "0"), ("0", "1")])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        basis_set([("0", "0"), ("0", "0")])


@st.composite
def orthonormal_sets(draw):
    n_in = draw(st.integers(1, 3))
    n_out = draw(st.integers(1, 3))
    dim_in, dim_out = 2**n_in, 2**n_out
    k = draw(st.integers(1, dim_in))
    rng = np.random.default_rng(draw(st.integers(0, 2**31)))
    q, _ = np.linalg.qr(random_complex(rng, dim_in, dim_in))
    targets = random_complex(rng, dim_out, k)
    targets /= np.linalg.norm(targets, axis=0)
    return TrainingSet(tuple(TrainingPair(q[:, j], targets[:, j]) for j in range(k)))


@settings(max_examples=200, deadline=None)
@given(orthonormal_sets())
def test_interpolation_orthonormal_inputs(ts):
    w = synthesize_weights(ts)
    for p in ts:
        np.testing.assert_allclose(apply(w, p.input), p.target, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.data())
def test_interpolation_exact_for_basis_inputs(n, data):
    dim = 2**n
    m = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, dim))
    idx = data.draw(st.permutations(range(dim)))[:k]
    outs = [data.draw(st.integers(0, 2**m - 1)) for _ in range(k)]
    ts = basis_set([(format(i, f"0{n}b"), format(o, f"0{m}b")) for i, o in zip(idx, outs)])
    w = synthesize_weights(ts)
    for p in ts:
        np.testing.assert_array_equal(apply(w, p.input), p.target)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.permutations(range(2**n)))))
def test_basis_permutation_is_unitary(arg):
    n, perm = arg
    ts = basis_set([(format(i, f"0{n}b"), format(j, f"0{n}b")) for i, j in enumerate(perm)])
    w = synthesize_weights(ts)
    assert set(np.unique(w)) <= {0, 1}
    assert unitarity_residual(w) <= 1e-12
    assert build_model(w).mode is Mode.UNITARY


# --- model building and evaluation ----------------------------------------


def test_build_model_not_is_unitary():
    m = build_model(X)
    assert m.mode is Mode.UNITARY
    np.testing.assert_array_equal(m.raw_w, X)
    np.testing.assert_array_equal(m.f_hat, np.eye(2))
    np.testing.assert_array_equal(m.sigma_new, np.eye(2))
    np.testing.assert_array_equal(m.w_new, X)


def test_build_model_xor():
    w = synthesize_weights(builtin_dataset("xor").training_set, scale=True)
    m = build_model(w)
    assert m.mode is Mode.DECOMPOSED
    np.testing.assert_array_equal(m.sigma_new, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert unitarity_residual(m.w_new) <= 1e-10
    assert unitarity_residual(m.f_hat) <= 1e-10
    np.testing.assert_allclose(m.w_new[:2], S * np.array([[1, 0, 0, 1], [0, 1, 1, 0]]), atol=1e-12)


def test_build_model_cswap():
    w = synthesize_weights(builtin_dataset("cswap").training_set)
    m = build_model(w)
    assert m.mode is Mode.DECOMPOSED
    assert m.w_new.shape == (8, 8)
    assert set(np.round(np.abs(m.w_new[m.w_new != 0]), 12)) == {round(S, 12)}
    recon = m.f_hat @ svd_full(w).sigma_matrix() @ m.w_new
    assert frobenius_distance(recon, w) <= 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_decomposition_soundness_random(seed):
    rng = np.random.default_rng(seed)
    w = random_complex(rng, int(rng.integers(1, 5)), int(rng.integers(1, 9)))
    m = build_model(w)
    assert m.mode is Mode.DECOMPOSED
    recon = m.f_hat @ svd_full(w).sigma_matrix() @ m.w_new
    assert frobenius_distance(recon, w) <= 1e-10 * max(1, np.linalg.norm(w))
    assert m.operator.shape == w.shape


def test_forward_raw_examples():
    had = build_model(synthesize_weights(builtin_dataset("hadamard").training_set))
    np.testing.assert_allclose(forward_raw(had, basis_ket("0")), [S, S], atol=1e-15)
    xor = build_model(synthesize_weights(builtin_dataset("xor").training_set, scale=True))
    np.testing.assert_allclose(forward_raw(xor, basis_ket("01")), [0, S], atol=1e-12)
    ident = build_model(np.eye(4))
    v = np.array([0.5, 0.5j, -0.5, 0.5])
    np.testing.assert_array_equal(forward_raw(ident, v), v)
    with pytest.raises(DimensionError):
        forward_raw(ident, basis_ket("0"))


def test_measure_examples():
    np.testing.assert_array_equal(measure(np.array([0.70710678, 0])), [1, 0])
    np.testing.assert_array_equal(measure(np.array([0.5, 0.5])), [0, 0])
    np.testing.assert_array_equal(measure(np.array([-0.70710678, 0.9])), [0, 1])
    np.testing.assert_array_equal(measure(np.array([0.2 + 0.9j, 0.6 - 0.9j])), [0, 1])


@given(
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=16),
    st.floats(0.001, 0.999),
)
def test_measure_idempotent(values, threshold):
    v = np.array(values, dtype=complex)
    once = measure(v, threshold)
    np.testing.assert_array_equal(measure(once, threshold), once)


def test_predict_examples():
    xor = build_model(synthesize_weights(builtin_dataset("xor").training_set, scale=True))
    np.testing.assert_array_equal(predict(xor, basis_ket("01")), basis_ket("1"))
    cswap = build_model(synthesize_weights(builtin_dataset("cswap").training_set))
    np.testing.assert_array_equal(predict(cswap, basis_ket("101")), basis_ket("10"))
    had = build_model(synthesize_weights(builtin_dataset("hadamard").training_set))
    np.testing.assert_allclose(predict(had, basis_ket("0")), [S, S], atol=1e-15)
    np.testing.assert_array_equal(predict(had, basis_ket("0"), force_measure=True), [1, 1])


@st.composite
def fan_in_datasets(draw):
    """Surjective many-to-one basis maps where no output collects more than three inputs.

    Every output needs a preimage: an unreached output is a zero row of the
    weight, and the rectangular identity then promotes a null-space pair to
    weight one.
    """
    n_in = draw(st.integers(2, 4))
    n_out = draw(st.integers(1, n_in - 1))
    dim_in, dim_out = 2**n_in, 2**n_out
    if dim_in > 3 * dim_out:
        n_in = n_out + 1
        dim_in = 2**n_in
    extra = draw(st.permutations(list(range(dim_out)) * 2))[: dim_in - dim_out]
    outs = draw(st.permutations(list(range(dim_out)) + extra))
    return basis_set([(format(i, f"0{n_in}b"), format(o, f"0{n_out}b")) for i, o in enumerate(outs)])


@settings(max_examples=100, deadline=None)
@given(fan_in_datasets(), st.floats(1e-3, 1e3))
def test_decomposed_predict_scale_invariant(ts, c):
    w = synthesize_weights(ts)
    base = build_model(w)
    scaled = build_model(c * w)
    assert base.mode is scaled.mode is Mode.DECOMPOSED
    for p in ts:
        a, b = predict(base, p.input), predict(scaled, p.input)
        assert a.tobytes() == b.tobytes()
        np.testing.assert_array_equal(a, p.target)


def test_model_shape_validation():
    with pytest.raises(DimensionError):
        PerceptronModel(Mode.DECOMPOSED, np.eye(2), np.eye(2, 3), np.eye(4), np.ones((2, 4)))


# --- classical reference --------------------------------------------------

AND = [((-1, -1), -1), ((-1, 1), -1), ((1, -1), -1), ((1, 1), 1)]
XOR = [((-1, -1), -1), ((-1, 1), 1), ((1, -1), 1), ((1, 1), -1)]


def test_classical_forward():
    assert classical_forward(ClassicalPerceptron([1, 1], 1.5), [1, 1]) == 1
    assert classical_forward(ClassicalPerceptron([1, 1], 1.5), [1, -1]) == -1
    for x in ([1, 1], [-1, 1], [-1, -1]):
        assert classical_forward(ClassicalPerceptron([0, 0], 0.0), x) == 1
    with pytest.raises(DimensionError):
        classical_forward(ClassicalPerceptron([0, 0]), [1])


def test_classical_and_converges():
    p, ok = classical_train(ClassicalPerceptron([0, 0], 0.5, 0.1), AND, 100)
    assert ok
    assert all(classical_forward(p, x) == d for x, d in AND)


@pytest.mark.parametrize("theta", [-0.5, 0.0, 0.5, 1.0])
def test_classical_xor_never_converges(theta):
    _, ok = classical_train(ClassicalPerceptron([0, 0], theta, 0.1), XOR, 1000)
    assert not ok


def test_classical_zero_epochs():
    p0 = ClassicalPerceptron([0.3, -0.2], 0.1, 0.1)
    p, ok = classical_train(p0, AND, 0)
    np.testing.assert_array_equal(p.weights, [0.3, -0.2])
    assert not ok
